#pragma once

#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohomology.hpp"
#include "homology.hpp"
#include "io.hpp"
#include "limits.hpp"
#include "models.hpp"
#include "skew.hpp"

namespace groupoidal::cli {

using io::json;

enum ExitCode : int { ok = 0, usage = 1, invalid = 2, unverified = 3 };

/// Flags shared by all commands; each command reads the ones it documents.
struct Options {
  std::string input, module, cocycle, queries, perm;
  std::string format = "table", coefficients = "Z", mode = "homology", side = "cocycle";
  std::size_t threads = 1;
  std::optional<std::size_t> max_degree, levels, depth, p, max_depth;
  std::optional<std::uint64_t> seed;
  std::int64_t window = 8, guard = 3;
};

struct Outcome {
  json report;
  std::string table;
  bool verified = true;
};

namespace detail {

inline std::string yes(bool b) { return b ? "yes" : "no"; }

/// Bratteli inputs are truncated at --levels, by default 3 or the last materialized level.
inline FiniteGroupoid load_groupoid(const Options& o) {
  if (o.input.empty()) throw Error(ErrorCode::BadFlag, "an input file is required");
  io::ModelInput m = io::parse_input(o.input);
  if (m.groupoid) return *m.groupoid;
  if (m.bratteli) {
    const auto& b = *m.bratteli;
    std::size_t level = o.levels.value_or(b.stationary ? 3 : std::min<std::size_t>(3, b.edges.size()));
    return io::detail::validated([&] { return bratteli_truncation(b, level); });
  }
  throw Error(ErrorCode::ValidationError, "input kind '" + m.kind + "' does not describe a finite groupoid");
}

inline GModule load_module(const Options& o, const FiniteGroupoid& G) {
  if (o.module.empty()) return constant_module(G, 1);
  return io::parse_module(io::read_json(o.module), G);
}

inline Coefficients parse_coefficients(const std::string& s) {
  if (s == "Z") return Coefficients::integers();
  if (s.size() > 2 && s.rfind("Z/", 0) == 0) {
    std::string m = s.substr(2);
    if (m.find_first_not_of("0123456789") == std::string::npos) return Coefficients::mod(Integer(m));
  }
  throw Error(ErrorCode::BadFlag, "--coefficients must be Z or Z/m, got '" + s + "'");
}

inline Permutation parse_perm(const std::string& s) {
  Permutation p;
  std::string tok;
  std::istringstream is(s);
  while (std::getline(is, tok, ',')) {
    auto b = tok.find_first_not_of(" []"), e = tok.find_last_not_of(" []");
    if (b == std::string::npos) continue;
    tok = tok.substr(b, e - b + 1);
    if (tok.find_first_not_of("0123456789") != std::string::npos)
      throw Error(ErrorCode::BadFlag, "--perm entries must be non-negative integers, got '" + tok + "'");
    p.push_back(std::stoul(tok));
  }
  return p;
}

inline json groupoid_json(const FiniteGroupoid& G) { return {{"arrows", G.size()}, {"units", G.units().size()}}; }

inline std::string groups_table(const std::vector<FgAbGroup>& gs, const std::string& label) {
  io::Table t({"degree", label});
  for (std::size_t n = 0; n < gs.size(); ++n) t.add({std::to_string(n), gs[n].str()});
  return t.str();
}

inline json lim1_json(const Lim1Report& r) {
  json chains = json::array();
  for (const auto& c : r.chains) {
    json row = json::array();
    for (const auto& s : c) row.push_back({{"rank", s.rank}, {"index", io::integer_json(s.index)}});
    chains.push_back(std::move(row));
  }
  return {{"truncation", r.truncation},
          {"certificate", to_string(r.certificate)},
          {"exact", r.exact},
          {"chains", std::move(chains)},
          {"chains_decreasing", r.chains_decreasing},
          {"stabilization", r.stabilization},
          {"nonml_stage", r.nonml_stage ? json(*r.nonml_stage) : json(nullptr)},
          {"lim_rank_bound", r.lim_rank_bound},
          {"lim_zero_within_truncation", r.lim_zero_within_truncation}};
}

inline ColimitElement parse_element(const json& j, const std::string& where) {
  ColimitElement e;
  e.stage = io::detail::as_size(io::detail::field(j, "stage", where), where + ".stage");
  const auto& v = io::detail::as_array(io::detail::field(j, "value", where), where + ".value");
  for (std::size_t i = 0; i < v.size(); ++i) e.value.push_back(io::detail::as_integer(v[i], where + ".value"));
  return e;
}

// ---- commands ----

inline Outcome homology_cmd(const Options& o) {
  std::size_t n_max = o.max_degree.value_or(3);
  FiniteGroupoid G = load_groupoid(o);
  Coefficients coeff = parse_coefficients(o.coefficients);
  auto h = homology_groups(G, n_max, coeff, o.threads);
  Outcome out;
  out.report = {{"command", "homology"}, {"coefficients", coeff.str()}, {"groupoid", groupoid_json(G)},
                {"groups", io::groups_json(h)}};
  out.table = groups_table(h, "H_n(G; " + coeff.str() + ")");
  return out;
}

inline Outcome cohomology_cmd(const Options& o) {
  std::size_t n_max = o.max_degree.value_or(3);
  FiniteGroupoid G = load_groupoid(o);
  GModule M = load_module(o, G);
  if (o.side != "cocycle" && o.side != "hom") throw Error(ErrorCode::BadFlag, "--side must be cocycle or hom");
  auto h = o.side == "cocycle" ? cocycle_cohomology(G, M, n_max, o.threads) : hom_side_cohomology(G, M, n_max, o.threads);
  Outcome out;
  out.report = {{"command", "cohomology"}, {"side", o.side}, {"groupoid", groupoid_json(G)}, {"groups", io::groups_json(h)}};
  out.table = groups_table(h, "H^n(G; M)");
  return out;
}

inline Outcome verify_theta_cmd(const Options& o) {
  std::size_t n_max = o.max_degree.value_or(2);
  FiniteGroupoid G;
  GModule M;
  std::string description;
  if (o.seed) {
    if (!o.input.empty()) throw Error(ErrorCode::BadFlag, "give either an input file or --seed");
    RandomInstance r = random_instance(*o.seed);
    G = r.groupoid;
    M = o.module.empty() ? r.module : load_module(o, G);
    description = r.description;
  } else {
    G = load_groupoid(o);
    M = load_module(o, G);
    description = o.input;
  }
  ThetaRhoReport r = theta_rho_check(G, M, n_max, o.threads);
  Outcome out;
  json degrees = json::array();
  io::Table t({"degree", "rho_theta", "theta_rho", "chain_map", "equivariant", "cocycle", "hom"});
  for (const auto& d : r.degrees) {
    degrees.push_back({{"degree", d.degree},
                       {"rho_theta", d.rho_theta},
                       {"theta_rho", d.theta_rho},
                       {"chain_map", d.chain_map},
                       {"equivariant", d.equivariant},
                       {"witness", d.witness}});
    t.add({std::to_string(d.degree), yes(d.rho_theta), yes(d.theta_rho), yes(d.chain_map), yes(d.equivariant),
           r.cocycle[d.degree].str(), r.hom[d.degree].str()});
  }
  out.report = {{"command", "verify-theta"}, {"instance", description}, {"groupoid", groupoid_json(G)},
                {"degrees", std::move(degrees)}, {"cocycle", io::groups_json(r.cocycle)},
                {"hom", io::groups_json(r.hom)}, {"groups_agree", r.groups_agree}, {"ok", r.ok()}};
  out.table = "instance: " + description + "\n" + t.str() + "groups agree: " + yes(r.groups_agree) + "\n";
  out.verified = r.ok();
  return out;
}

inline json les_window_json(const LesWindowCheck& w, LesMode mode) {
  json degrees = json::array();
  for (const auto& d : w.degrees)
    degrees.push_back({{"degree", d.degree},
                       {"groups", {{"a", io::group_json(d.h_a)}, {"b", io::group_json(d.h_b)}, {"c", io::group_json(d.h_c)}}},
                       {"exact", {{"a", d.exact_a}, {"b", d.exact_b}, {"c", d.exact_c}}},
                       {"composite_zero", {{"a", d.composite_zero_a}, {"b", d.composite_zero_b}, {"c", d.composite_zero_c}}},
                       {"shift_kernel", io::group_json(w.shift_kernel(mode, d.degree))},
                       {"shift_cokernel", io::group_json(w.shift_cokernel(mode, d.degree))},
                       {"connecting_image", io::group_json(d.connecting_image)},
                       {"failure", d.failure}});
  return {{"radius", w.radius}, {"degrees", std::move(degrees)}, {"ok", w.ok()}};
}

inline Outcome skew_les_cmd(const Options& o) {
  std::size_t n_max = o.max_degree.value_or(2);
  if (o.mode != "homology" && o.mode != "cohomology") throw Error(ErrorCode::BadFlag, "--mode must be homology or cohomology");
  if (o.cocycle.empty()) throw Error(ErrorCode::BadFlag, "--cocycle is required");
  LesMode mode = o.mode == "homology" ? LesMode::homology : LesMode::cohomology;
  FiniteGroupoid G = load_groupoid(o);
  ZCocycle c = io::parse_cocycle(io::read_json(o.cocycle), G);
  std::optional<GModule> M;
  if (!o.module.empty()) M = load_module(o, G);
  LesReport r = les_verify(G, c, o.window, o.guard, n_max, mode, M, o.threads);
  Outcome out;
  out.report = {{"command", "skew-les"},
                {"mode", to_string(mode)},
                {"window", r.window},
                {"guard", r.guard},
                {"max_degree", r.n_max},
                {"max_abs_c", r.max_abs_c},
                {"guard_heuristic", r.guard_heuristic},
                {"heuristic_satisfied", r.heuristic_satisfied},
                {"potential", r.potential},
                {"base", io::groups_json(r.base)},
                {"full", les_window_json(r.full, mode)},
                {"band", les_window_json(r.band, mode)},
                {"stable", r.stable},
                {"h0_bookkeeping", r.h0_bookkeeping},
                {"notes", r.notes},
                {"ok", r.ok()}};
  io::Table t({"radius", "degree", "base", "exact(A,B,C)", "ker(id-shift)", "coker(id-shift)", "connecting image"});
  for (const auto* w : {&r.full, &r.band})
    for (const auto& d : w->degrees)
      t.add({std::to_string(w->radius), std::to_string(d.degree), r.base[d.degree].str(),
             yes(d.exact_a) + "," + yes(d.exact_b) + "," + yes(d.exact_c), w->shift_kernel(mode, d.degree).str(),
             w->shift_cokernel(mode, d.degree).str(), d.connecting_image.str()});
  out.table = t.str() + "stable: " + yes(r.stable) + "  H0 bookkeeping: " + yes(r.h0_bookkeeping) + "\n";
  for (const auto& n : r.notes) out.table += "note: " + n + "\n";
  out.verified = r.ok();
  return out;
}

inline Outcome dimension_group_cmd(const Options& o) {
  if (o.input.empty()) throw Error(ErrorCode::BadFlag, "an input file is required");
  io::ModelInput m = io::parse_input(o.input);
  if (!m.bratteli) throw Error(ErrorCode::ValidationError, "dimension-group needs a bratteli input");
  const BratteliDiagram& B = *m.bratteli;
  std::size_t levels = o.levels.value_or(B.stationary ? 4 : B.edges.size());
  ColimitGroup c = io::detail::validated([&] { return dimension_group(B, levels); });
  AfHomology h0 = af_homology(B, 0, levels);
  json ranks = json::array(), maps = json::array();
  for (std::size_t n = 0; n <= levels; ++n) ranks.push_back(c.tower.rank(n));
  for (std::size_t n = 0; n < levels; ++n) maps.push_back(io::matrix_json(c.tower.map(n)));
  json queries = json::array();
  io::Table t({"query", "result", "stage", "exact", "witness"});
  if (!o.queries.empty()) {
    json q = io::read_json(o.queries);
    const json& list = q.is_object() ? io::detail::field(q, "queries", "queries") : q;
    const auto& arr = io::detail::as_array(list, "queries");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      std::string w = "queries[" + std::to_string(i) + "]";
      const auto& op = io::detail::field(arr[i], "op", w);
      std::size_t bound = io::detail::as_size(io::detail::field(arr[i], "bound", w), w + ".bound");
      if (op == "equal") {
        auto a = parse_element(io::detail::field(arr[i], "a", w), w + ".a");
        auto b = parse_element(io::detail::field(arr[i], "b", w), w + ".b");
        auto r = io::detail::validated([&] { return colimit_equal(c, a, b, bound); });
        queries.push_back({{"op", "equal"}, {"result", to_string(r.kind)}, {"stage", r.stage}, {"exact", r.exact}});
        t.add({"equal", to_string(r.kind), std::to_string(r.stage), yes(r.exact), ""});
      } else if (op == "divisible") {
        auto a = parse_element(io::detail::field(arr[i], "element", w), w + ".element");
        Integer qv = io::detail::as_integer(io::detail::field(arr[i], "q", w), w + ".q");
        auto r = io::detail::validated([&] { return colimit_divisible(c, a, qv, bound); });
        queries.push_back({{"op", "divisible"}, {"q", io::integer_json(qv)}, {"result", to_string(r.kind)},
                           {"stage", r.stage}, {"exact", r.exact}, {"witness", io::vector_json(r.witness)}});
        std::string wit;
        for (const auto& x : r.witness) wit += (wit.empty() ? "" : " ") + x.str();
        t.add({"divisible by " + qv.str(), to_string(r.kind), std::to_string(r.stage), yes(r.exact), wit});
      } else {
        io::detail::parse_fail(w + ".op", "expected equal or divisible");
      }
    }
  }
  Outcome out;
  out.report = {{"command", "dimension-group"}, {"levels", levels}, {"stationary", B.stationary},
                {"ranks", std::move(ranks)}, {"maps", std::move(maps)}, {"h0", h0.description},
                {"higher", "0 in every degree >= 1"}, {"queries", std::move(queries)}};
  out.table = "H_0 = " + h0.description + "\nH_n = 0 for n >= 1\n" + (o.queries.empty() ? "" : t.str());
  return out;
}

inline Outcome af_cohomology_cmd(const Options& o) {
  std::size_t p = 0;
  if (!o.input.empty()) {
    io::ModelInput m = io::parse_input(o.input);
    if (!m.bratteli || !m.bratteli->stationary || m.bratteli->edges[0].rows() != 1 || m.bratteli->edges[0].cols() != 1)
      throw Error(ErrorCode::ValidationError, "af-cohomology needs a stationary 1x1 bratteli diagram [[p]]");
    Integer v = m.bratteli->edges[0].at(0, 0);
    if (v < 2 || v > 1'000'000) throw Error(ErrorCode::ValidationError, "multiplicity must be in [2, 10^6]");
    p = static_cast<std::size_t>(v);
  } else {
    p = o.p.value_or(2);
  }
  std::size_t n = o.levels.value_or(3), d = o.depth.value_or(4);
  AfCohomologyReport r = io::detail::validated([&] { return af_cohomology_tower(p, n, d); });
  Outcome out;
  out.report = {{"command", "af-cohomology"},
                {"p", r.p},
                {"stages", r.stages},
                {"depth", r.depth},
                {"stationary_thread_rank", r.stationary_thread_rank},
                {"constants_only", r.constants_only},
                {"h0_certificate", r.constants_only ? "ConstantsOnly" : "Inconclusive"},
                {"thread_rank", r.thread_rank},
                {"thread_rank_expected", r.thread_rank_expected},
                {"faithful", r.faithful},
                {"h1", lim1_json(r.h1)}};
  out.table = "p = " + std::to_string(p) + ", stages N = " + std::to_string(n) + ", depth D = " + std::to_string(d) +
              "\nH^0 certificate: " + (r.constants_only ? "ConstantsOnly" : "Inconclusive") +
              " (stationary threads rank " + std::to_string(r.stationary_thread_rank) + ")\nthread rank " +
              std::to_string(r.thread_rank) + " (expected " + std::to_string(r.thread_rank_expected) + ", faithful " +
              yes(r.faithful) + ")\nH^1 evidence: " + to_string(r.h1.certificate) + "\n";
  out.verified = r.constants_only && r.thread_rank == r.thread_rank_expected;
  return out;
}

inline Outcome odometer_cmd(const Options& o) {
  std::size_t p = o.p.value_or(2), depth = o.max_depth.value_or(6);
  if (!o.input.empty()) {
    io::ModelInput m = io::parse_input(o.input);
    if (m.kind != "odometer") throw Error(ErrorCode::ValidationError, "odometer needs an odometer input");
    p = m.odometer_p;
    if (!o.max_depth) depth = m.odometer_depth;
  }
  OdometerHomology r = io::detail::validated([&] { return odometer_homology(p, depth); });
  json h0 = json::array(), h1 = json::array(), m0 = json::array(), m1 = json::array();
  io::Table t({"depth", "H_0", "H_1", "H_0 map", "H_1 map"});
  for (std::size_t d = 0; d < r.h0.size(); ++d) {
    h0.push_back(io::group_json(d + 1, r.h0[d]));
    h1.push_back(io::group_json(d + 1, r.h1[d]));
    bool has = d < r.h0_maps.size();
    t.add({std::to_string(d + 1), r.h0[d].str(), r.h1[d].str(), has ? to_string(r.h0_maps[d]) : "",
           has ? to_string(r.h1_maps[d]) : ""});
  }
  for (const auto& m : r.h0_maps) m0.push_back(io::matrix_json(m));
  for (const auto& m : r.h1_maps) m1.push_back(io::matrix_json(m));
  Outcome out;
  out.report = {{"command", "odometer"}, {"p", p}, {"depth_max", depth}, {"h0", std::move(h0)}, {"h1", std::move(h1)},
                {"h0_maps", std::move(m0)}, {"h1_maps", std::move(m1)}, {"chain_maps_commute", r.chain_maps_commute},
                {"h0_maps_stationary", r.h0_maps_stationary}, {"h1_stable", io::group_json(r.h1_stable)},
                {"h1_stabilized", r.h1_stabilized}};
  out.table = t.str() + "H_0 maps stationary: " + yes(r.h0_maps_stationary) + "  H_1 stabilized at " +
              r.h1_stable.str() + ": " + yes(r.h1_stabilized) + "\n";
  out.verified = r.chain_maps_commute;
  return out;
}

inline Outcome z_action_cmd(const Options& o) {
  if (o.perm.empty()) throw Error(ErrorCode::BadFlag, "--perm is required");
  Permutation perm = parse_perm(o.perm);
  ZActionHomology r = io::detail::validated([&] { return z_action_homology(perm); });
  Outcome out;
  out.report = {{"command", "z-action"}, {"perm", perm}, {"h0", io::group_json(r.h0)}, {"h1", io::group_json(r.h1)},
                {"coh0", io::group_json(r.coh0)}, {"coh1", io::group_json(r.coh1)}};
  io::Table t({"invariant", "group"});
  t.add({"H_0", r.h0.str()});
  t.add({"H_1", r.h1.str()});
  t.add({"H^0", r.coh0.str()});
  t.add({"H^1", r.coh1.str()});
  out.table = t.str();
  return out;
}

}  // namespace detail

inline const std::map<std::string, std::function<Outcome(const Options&)>>& commands() {
  static const std::map<std::string, std::function<Outcome(const Options&)>> table{
      {"homology", detail::homology_cmd},         {"cohomology", detail::cohomology_cmd},
      {"verify-theta", detail::verify_theta_cmd}, {"skew-les", detail::skew_les_cmd},
      {"dimension-group", detail::dimension_group_cmd}, {"af-cohomology", detail::af_cohomology_cmd},
      {"odometer", detail::odometer_cmd},         {"z-action", detail::z_action_cmd},
  };
  return table;
}

inline int exit_code(ErrorCode c) {
  return c == ErrorCode::UnknownCommand || c == ErrorCode::BadFlag ? usage : invalid;
}

/// Runs one command; args exclude the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homology and cohomology of finite groupoid models", "groupoidal"};
  app.require_subcommand(1);
  Options o;
  static const std::map<std::string, std::string> about{
      {"homology", "homology groups H_n(G; A)"},
      {"cohomology", "cohomology groups H^n(G; M), cocycle or Hom side"},
      {"verify-theta", "check the theta/rho comparison of the two cochain models"},
      {"skew-les", "verify the skew-product long exact sequences on a window"},
      {"dimension-group", "dimension group of a Bratteli diagram, with equality/divisibility queries"},
      {"af-cohomology", "truncated cohomology tower of a UHF groupoid"},
      {"odometer", "homology tower of the p-odometer"},
      {"z-action", "homology and cohomology of Z acting by a permutation"},
  };
  for (const auto& [name, fn] : commands()) {
    CLI::App* sub = app.add_subcommand(name, about.at(name));
    sub->add_option("input", o.input, "model file (JSON)");
    sub->add_option("--format", o.format, "table or json")->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    if (name == "homology" || name == "cohomology" || name == "verify-theta" || name == "skew-les")
      sub->add_option("--max-degree", o.max_degree, "top degree");
    if (name == "homology") sub->add_option("--coefficients", o.coefficients, "Z or Z/m");
    if (name == "cohomology" || name == "verify-theta" || name == "skew-les")
      sub->add_option("--module", o.module, "module file (JSON)");
    if (name == "cohomology") sub->add_option("--side", o.side, "cocycle or hom");
    if (name == "verify-theta") sub->add_option("--seed", o.seed, "random instance seed");
    if (name == "skew-les") {
      sub->add_option("--cocycle", o.cocycle, "cocycle file (JSON)");
      sub->add_option("--window", o.window, "window radius K");
      sub->add_option("--guard", o.guard, "guard band radius");
      sub->add_option("--mode", o.mode, "homology or cohomology");
    }
    if (name != "z-action" && name != "odometer") sub->add_option("--levels", o.levels, "levels or stages");
    if (name == "dimension-group") sub->add_option("--queries", o.queries, "query file (JSON)");
    if (name == "af-cohomology") {
      sub->add_option("--depth", o.depth, "cylinder depth D");
      sub->add_option("--p", o.p, "multiplicity p");
    }
    if (name == "odometer") {
      sub->add_option("--p", o.p, "odometer base p");
      sub->add_option("--max-depth", o.max_depth, "deepest cylinder level");
    }
    if (name == "z-action") sub->add_option("--perm", o.perm, "permutation as comma list, e.g. 1,2,0");
  }
  if (args.empty()) {
    err << app.help();
    return usage;
  }
  if (args[0] != "--help" && args[0] != "-h" && !commands().count(args[0])) {
    err << "error: " << Error(ErrorCode::UnknownCommand, "'" + args[0] + "'").what() << "\n";
    return usage;
  }
  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help(args[0] == "--help" || args[0] == "-h" ? "" : args[0]);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << Error(ErrorCode::BadFlag, e.what()).what() << "\n";
    return usage;
  }
  const auto& fn = commands().at(app.get_subcommands().front()->get_name());
  try {
    Outcome r = fn(o);
    if (o.format == "json") out << io::render(r.report);
    else out << r.table;
    if (!r.verified) {
      err << "verification failed\n";
      return unverified;
    }
    return ok;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const json::exception& e) {
    err << "error: " << Error(ErrorCode::ParseError, e.what()).what() << "\n";
    return invalid;
  }
}

}  // namespace groupoidal::cli
