#include <sstream>

#include <gtest/gtest.h>

#include "groupoidal/cli.hpp"

using namespace groupoidal;

namespace {

std::string data(const std::string& name) { return std::string(GROUPOIDAL_TEST_DATA) + "/" + name; }

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST(Input, ParsesModels) {
  auto z2 = io::parse_input(data("z2.json"));
  ASSERT_TRUE(z2.groupoid.has_value());
  EXPECT_EQ(z2.groupoid->size(), 2u);
  auto p2 = io::parse_input(data("pair2_explicit.json"));
  ASSERT_TRUE(p2.groupoid.has_value());
  EXPECT_EQ(p2.groupoid->size(), 4u);
  EXPECT_EQ(p2.groupoid->units().size(), 2u);
  auto uhf = io::parse_input(data("uhf2.json"));
  ASSERT_TRUE(uhf.bratteli.has_value());
  EXPECT_TRUE(uhf.bratteli->stationary);
  auto fib = io::parse_input(data("fib.json"));
  ASSERT_TRUE(fib.bratteli.has_value());
  EXPECT_EQ(fib.bratteli->edges.size(), 2u);
}

TEST(Input, MalformedTripleIsParseErrorNamingTheTriple) {
  try {
    io::parse_input(data("bad_triple.json"));
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("compose"), std::string::npos) << e.what();
  }
  EXPECT_THROW(io::parse_input(data("does_not_exist.json")), Error);
}

TEST(Input, AxiomViolationIsValidationError) {
  // Z/2 with a non-associative, non-invertible product table
  io::json j = {{"kind", "explicit"},
                {"units", {0}},
                {"arrows", {{0, 0}, {0, 0}}},
                {"compose", {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 1}}}};
  try {
    io::parse_model(j);
    FAIL() << "expected ValidationError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ValidationError) << e.what();
  }
}

TEST(Input, ModulesAndCocycles) {
  auto z2 = *io::parse_input(data("z2.json")).groupoid;
  auto m = io::parse_module(io::read_json(data("z2_sign.json")), z2);
  EXPECT_EQ(m.action[1], IntMatrix::from_rows({{-1}}));
  EXPECT_EQ(io::parse_module(io::json{{"constant", 2}}, z2).fiber_rank, (std::vector<std::size_t>{2}));
  auto p3 = *io::parse_input(data("pair3.json")).groupoid;
  auto c = io::parse_cocycle(io::read_json(data("pair3_potential.json")), p3);
  EXPECT_FALSE(validate_cocycle(p3, c).has_value());
  EXPECT_THROW(io::parse_module(io::json{{"fibers", {{"0", 1}}}, {"action", {{"1", {{2}}}}}}, z2), Error);
}

TEST(Run, ExitCodes) {
  EXPECT_EQ(run({}).code, 1);
  auto unknown = run({"frobnicate"});
  EXPECT_EQ(unknown.code, 1);
  EXPECT_NE(unknown.err.find("UnknownCommand"), std::string::npos);
  auto flag = run({"homology", data("z2.json"), "--no-such-flag"});
  EXPECT_EQ(flag.code, 1);
  EXPECT_NE(flag.err.find("BadFlag"), std::string::npos);
  EXPECT_EQ(run({"homology", data("z2.json"), "--coefficients", "Q"}).code, 1);
  auto bad = run({"homology", data("bad_triple.json")});
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.err.find("ParseError"), std::string::npos);
  auto guard = run({"skew-les", data("pair3.json"), "--cocycle", data("pair3_potential.json"), "--guard", "1"});
  EXPECT_EQ(guard.code, 2);
  EXPECT_NE(guard.err.find("GuardTooSmall"), std::string::npos);
  EXPECT_EQ(run({"homology", data("z2.json")}).code, 0);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Run, HomologyTableAndJson) {
  auto t = run({"homology", data("z2.json")});
  ASSERT_EQ(t.code, 0) << t.err;
  EXPECT_NE(t.out.find("Z/2"), std::string::npos);
  auto j = run({"homology", data("z2.json"), "--format", "json"});
  ASSERT_EQ(j.code, 0) << j.err;
  auto parsed = io::json::parse(j.out);
  ASSERT_EQ(parsed["groups"].size(), 4u);
  EXPECT_EQ(parsed["groups"][1]["name"], "Z/2");
  EXPECT_EQ(parsed["groups"][1]["torsion"][0], 2);
  EXPECT_EQ(io::render(parsed), j.out);
}

TEST(Run, EveryCommandIsDeterministicAndThreadIndependent) {
  const std::vector<std::vector<std::string>> cmds = {
      {"homology", data("z3.json"), "--max-degree", "3"},
      {"cohomology", data("z2.json"), "--module", data("z2_sign.json")},
      {"cohomology", data("space4.json"), "--side", "hom"},
      {"verify-theta", "--seed", "7"},
      {"skew-les", data("pair3.json"), "--cocycle", data("pair3_potential.json"), "--window", "5"},
      {"dimension-group", data("uhf2.json"), "--queries", data("uhf2_queries.json")},
      {"af-cohomology", "--p", "2", "--levels", "3", "--depth", "3"},
      {"odometer", "--p", "2", "--max-depth", "4"},
      {"z-action", "--perm", "1,2,0,4,3"},
  };
  for (auto args : cmds) {
    args.push_back("--format");
    args.push_back("json");
    auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0) << args[0] << ": " << a.err;
    EXPECT_EQ(a.out, b.out) << args[0];
    EXPECT_EQ(io::render(io::json::parse(a.out)), a.out) << args[0];
    auto threaded = args;
    threaded.push_back("--threads");
    threaded.push_back("4");
    EXPECT_EQ(run(threaded).out, a.out) << args[0];
  }
}

TEST(Run, ZActionReportsCycleCounts) {
  auto r = run({"z-action", "--perm", "1,2,0,4,3", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  auto j = io::json::parse(r.out);
  EXPECT_EQ(j["h0"]["free_rank"], 2);
  EXPECT_EQ(j["h1"]["free_rank"], 2);
  EXPECT_EQ(run({"z-action", "--perm", "0,0"}).code, 2);
}
