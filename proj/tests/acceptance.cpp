// Acceptance criteria: one [PASS]/[FAIL] line per criterion, nonzero exit on any failure.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "generators.hpp"
#include "groupoidal/cli.hpp"
#include "groupoidal/groupoidal.hpp"
#include "oracles.hpp"

using namespace groupoidal;

namespace {

/// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

bool same_groups(const std::vector<oracle::Group>& want, const std::vector<FgAbGroup>& got) {
  if (want.size() != got.size()) return false;
  for (std::size_t n = 0; n < want.size(); ++n)
    if (!oracle::same(want[n], got[n])) return false;
  return true;
}

std::string str(const std::vector<FgAbGroup>& gs) {
  std::string s = "[";
  for (std::size_t n = 0; n < gs.size(); ++n) s += (n ? ", " : "") + gs[n].str();
  return s + "]";
}

FgAbGroup cyc(long long m) { return FgAbGroup::from_orders(0, {Integer(m)}); }

bool equal_mod_orders(const IntMatrix& a, const IntMatrix& b, const std::vector<Integer>& orders) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Integer x = a.at(i, j), y = b.at(i, j), o = orders[i];
      if (o != 0 ? ((x - y) % o) != 0 : x != y) return false;
    }
  return true;
}

void ac1(Check& c) {
  auto S = space_groupoid(4);
  std::vector<FgAbGroup> want{FgAbGroup::free(4), {}, {}, {}};
  auto h = homology_groups(S, 3);
  auto co = cocycle_cohomology(S, constant_module(S, 1), 3);
  c.expect(h == want, "homology " + str(h));
  c.expect(co == want, "cohomology " + str(co));
}

void ac2(Check& c) {
  for (long long m : {2, 3}) {
    auto t = cyclic_table(static_cast<std::size_t>(m));
    auto G = group_groupoid(t);
    auto h = homology_groups(G, 3);
    auto co = cocycle_cohomology(G, constant_module(G, 1), 3);
    std::string name = "Z/" + std::to_string(m);
    c.expect(h == std::vector<FgAbGroup>{FgAbGroup::free(1), cyc(m), {}, cyc(m)}, name + " homology " + str(h));
    c.expect(co == std::vector<FgAbGroup>{FgAbGroup::free(1), {}, cyc(m), {}}, name + " cohomology " + str(co));
    c.expect(same_groups(oracle::group_homology(t, 3), h), name + " homology vs bar oracle");
    c.expect(same_groups(oracle::group_cohomology(t, oracle::trivial_rep(t), 3), co), name + " cohomology vs bar oracle");
  }
}

void ac3(Check& c) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 12; ++trial) {
    auto inst = gen::random_instance(rng, 20);
    auto r = theta_rho_check(inst.G, inst.M, 2);
    for (const auto& d : r.degrees) {
      std::string at = inst.name + " degree " + std::to_string(d.degree);
      c.expect(d.rho_theta, at + " rho theta != id");
      c.expect(d.theta_rho, at + " theta rho != id");
      c.expect(d.chain_map, at + " delta_c theta != theta delta");
    }
    c.expect(r.groups_agree, inst.name + " cocycle and Hom-side groups differ");
    c.expect(same_groups(inst.cohomology_oracle(2), r.cocycle), inst.name + " cohomology vs Morita oracle");
  }
}

void ac4(Check& c) {
  std::mt19937_64 rng(4048);
  for (int trial = 0; trial < 12; ++trial) {
    auto inst = gen::random_instance(rng, 20);
    const auto& G = inst.G;
    for (std::size_t n = 1; n <= 3; ++n) {
      c.expect((boundary_matrix_d(G, n) * boundary_matrix_d(G, n + 1)).is_zero(), inst.name + " d d != 0");
      c.expect((coinvariants_collapse(G, n - 1) * bar_boundary_matrix_b(G, n)) ==
                   (boundary_matrix_d(G, n) * coinvariants_collapse(G, n)),
               inst.name + " bridging identity");
    }
    for (std::size_t n = 0; n <= 2; ++n) {
      IntMatrix bn = bar_boundary_matrix_b(G, n), bn1 = bar_boundary_matrix_b(G, n + 1);
      c.expect((bn * bn1).is_zero(), inst.name + " b b != 0");
      // b b = 0 bounds the rational ranks by cols; ranks mod p bound them from below
      auto r = oracle::rank_mod_p(oracle::to_dense64(bn), 1000003) + oracle::rank_mod_p(oracle::to_dense64(bn1), 1000003);
      c.expect(r == bn.cols(), inst.name + " bar not exact at degree " + std::to_string(n));
    }
    c.expect(rank(bar_boundary_matrix_b(G, 0)) == G.units().size(), inst.name + " augmentation not onto");
  }
}

void ac5(Check& c) {
  auto P = pair_groupoid(3);
  auto pot = potential_cocycle(P, {0, 1, 2});
  for (auto mode : {LesMode::homology, LesMode::cohomology}) {
    auto r = les_verify(P, pot, 8, 3, 2, mode);
    std::string m = to_string(mode);
    for (const auto* w : {&r.full, &r.band})
      for (const auto& d : w->degrees)
        c.expect(d.exact_a && d.exact_b && d.exact_c,
                 m + " radius " + std::to_string(w->radius) + " degree " + std::to_string(d.degree) + " " + d.failure);
    c.expect(r.stable, m + " shift groups differ between windows");
    c.expect(r.h0_bookkeeping && r.base[0] == FgAbGroup::free(1), m + " H_0 bookkeeping");
    FgAbGroup h0 = mode == LesMode::homology ? r.full.shift_cokernel(mode, 0) : r.full.shift_kernel(mode, 0);
    c.expect(h0 == FgAbGroup::free(1), m + " stable degree-0 group " + h0.str());
  }
  auto Z2 = group_groupoid(cyclic_table(2));
  ZCocycle zero{std::vector<std::int64_t>(Z2.size(), 0)};
  for (auto mode : {LesMode::homology, LesMode::cohomology})
    c.expect(les_verify(Z2, zero, 8, 3, 2, mode).ok(), "c = 0 on Z/2, " + to_string(mode));
}

void ac6(Check& c) {
  for (long long p : {2, 3}) {
    std::string at = "p=" + std::to_string(p);
    auto B = bratteli_stationary(Integer(p));
    auto h0 = af_homology(B, 0, 4);
    c.expect(h0.colimit.has_value(), at + " no colimit");
    if (!h0.colimit) continue;
    for (std::size_t k = 0; k <= 6; ++k) {
      Integer q = 1;
      for (std::size_t i = 0; i < k; ++i) q *= p;
      for (long long v : {1, -5, 7}) {
        auto r = colimit_divisible(*h0.colimit, {1, {v}}, q, 4);
        bool ok = r.kind == DivisibilityResult::Kind::Witness && r.exact &&
                  r.witness.size() == 1 && r.witness[0] * q == h0.colimit->push({1, {v}}, r.stage).value[0];
        c.expect(ok, at + " " + std::to_string(v) + " not divisible by p^" + std::to_string(k));
      }
    }
    for (long long q : std::vector<long long>{p + 1, 35, p == 2 ? 3 : 2}) {
      auto r = colimit_divisible(*h0.colimit, {0, {1}}, Integer(q), 4);
      c.expect(r.kind == DivisibilityResult::Kind::No && r.exact, at + " coprime q=" + std::to_string(q));
    }
    for (std::size_t n = 1; n <= 3; ++n) c.expect(af_homology(B, n).trivial, at + " H_n != 0");
    auto t = af_cohomology_tower(static_cast<std::size_t>(p), 3, 4);
    c.expect(t.constants_only, at + " H^0 certificate not ConstantsOnly");
    c.expect(t.thread_rank == t.thread_rank_expected, at + " thread rank");
    c.expect(t.h1.certificate == Lim1Report::Certificate::NonML, at + " H^1 evidence " + to_string(t.h1.certificate));
  }
}

void ac7(Check& c) {
  auto z = z_action_homology({1, 2, 3, 4, 0});
  for (const auto* g : {&z.h0, &z.h1, &z.coh0, &z.coh1})
    c.expect(*g == FgAbGroup::free(1), "5-cycle invariant " + g->str());
  auto o = odometer_homology(2, 6);
  c.expect(o.chain_maps_commute, "odometer chain maps");
  c.expect(o.h0_maps.size() == 5, "odometer map count");
  for (const auto& m : o.h0_maps) c.expect(m == IntMatrix::from_rows({{2}}), "H_0 map " + to_string(m));
  c.expect(o.h1_stabilized && o.h1_stable == FgAbGroup::free(1), "stable H_1 " + o.h1_stable.str());
}

void ac8(Check& c) {
  auto Z4 = group_groupoid(cyclic_table(4)), Z2 = group_groupoid(cyclic_table(2)), pt = space_groupoid(1);
  GroupoidFunctor q{{0, 1, 0, 1}}, e{{0, 0}};
  GroupoidFunctor eq = compose_functors(e, q);
  for (std::size_t n = 0; n <= 3; ++n) {
    auto a = induced_homology_map(Z4, Z2, q, n), b = induced_homology_map(Z2, pt, e, n);
    auto ab = induced_homology_map(Z4, pt, eq, n);
    c.expect(equal_mod_orders(b.induced * a.induced, ab.induced, ab.target.orders()),
             "homology (e q)_* != e_* q_* in degree " + std::to_string(n));
    auto Mpt = constant_module(pt, 1);
    auto M2 = pullback_module(Z2, pt, e, Mpt);
    auto ca = induced_cohomology_map(Z2, pt, e, Mpt, n), cb = induced_cohomology_map(Z4, Z2, q, M2, n);
    auto cab = induced_cohomology_map(Z4, pt, eq, Mpt, n);
    c.expect(cb.chain * ca.chain == cab.chain, "cochain (e q)^* != q^* e^*");
    c.expect(equal_mod_orders(cb.induced * ca.induced, cab.induced, cab.target.orders()),
             "cohomology (e q)^* != q^* e^* in degree " + std::to_string(n));
    IntMatrix pb = cochain_pullback_matrix(Z4, Z2, q, sign_module(Z2), n);
    c.expect(oracle::rank64(oracle::to_dense64(pb)) == pb.cols(), "Z/4 -> Z/2 pullback not injective");
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    auto P = pair_groupoid(k);
    GroupoidFunctor f{std::vector<Arrow>(P.size(), 0)};
    for (std::size_t n = 0; n <= 2; ++n) {
      IntMatrix pb = cochain_pullback_matrix(P, pt, f, constant_module(pt, 1), n);
      c.expect(oracle::rank64(oracle::to_dense64(pb)) == pb.cols(), "pair -> point pullback not injective");
    }
  }
}

std::string data(const std::string& name) { return std::string(GROUPOIDAL_TEST_DATA) + "/" + name; }

void ac9(Check& c) {
  const std::vector<std::vector<std::string>> cmds = {
      {"homology", data("z2.json")},
      {"homology", data("fib.json"), "--coefficients", "Z/2"},
      {"cohomology", data("z2.json"), "--module", data("z2_sign.json")},
      {"cohomology", data("z2_on_3.json"), "--side", "hom"},
      {"verify-theta", "--seed", "42"},
      {"skew-les", data("pair3.json"), "--cocycle", data("pair3_potential.json")},
      {"dimension-group", data("uhf2.json"), "--queries", data("uhf2_queries.json")},
      {"af-cohomology", data("uhf2.json")},
      {"odometer", data("odometer2.json")},
      {"z-action", "--perm", "1,2,3,4,0"},
  };
  for (auto args : cmds) {
    args.insert(args.end(), {"--format", "json"});
    std::string first;
    for (const char* threads : {"1", "1", "2", "4"}) {
      auto a = args;
      a.insert(a.end(), {"--threads", threads});
      std::ostringstream out, err;
      int code = cli::run(a, out, err);
      c.expect(code == 0, args[0] + " exit " + std::to_string(code) + " " + err.str());
      if (first.empty()) first = out.str();
      else c.expect(out.str() == first, args[0] + " output differs with --threads " + threads);
    }
  }
}

}  // namespace

int main() {
  struct Criterion {
    std::string id, title;
    double limit_s;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> criteria = {
      {"AC1", "space groupoid on 4 points: H_* = H^* = [Z^4, 0, 0, 0]", 1, ac1},
      {"AC2", "Z/2 and Z/3 homology and cohomology against the bar-complex oracle", 5, ac2},
      {"AC3", "theta/rho isomorphism on 12 random groupoids with modules", 60, ac3},
      {"AC4", "boundary, bar and bridging identities on 12 random groupoids", 60, ac4},
      {"AC5", "skew-product long exact sequences, pair(3) and Z/2 with c = 0", 30, ac5},
      {"AC6", "UHF(p^inf) dimension group, AF homology and cohomology tower", 30, ac6},
      {"AC7", "Z-action on a 5-cycle and the 2-odometer to depth 6", 10, ac7},
      {"AC8", "functoriality of induced maps and injective pullbacks", 10, ac8},
      {"AC9", "CLI output byte-identical across runs and thread counts", 120, ac9},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.failures.push_back(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > cr.limit_s) c.failures.push_back("took " + std::to_string(s) + " s, limit " + std::to_string(cr.limit_s) + " s");
    bool ok = c.failures.empty();
    failed += !ok;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (ok ? "[PASS] " : "[FAIL] ") << cr.id << " " << cr.title << " (" << s << " s)";
    std::cout << line.str() << "\n";
    for (const auto& f : c.failures) std::cout << "       " << f << "\n";
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << "\n";
  return failed ? 1 : 0;
}
