#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "groupoidal/cohomology.hpp"
#include "groupoidal/models.hpp"
#include "oracles.hpp"

using namespace groupoidal;

namespace {

void expect_groups(const std::vector<oracle::Group>& want, const std::vector<FgAbGroup>& got, const std::string& what) {
  ASSERT_EQ(want.size(), got.size()) << what;
  for (std::size_t n = 0; n < want.size(); ++n)
    EXPECT_TRUE(oracle::same(want[n], got[n])) << what << " degree " << n << ": want " << oracle::str(want[n])
                                                << " got " << got[n].str();
}

oracle::Rep rep_of(const GModule& M) {
  oracle::Rep r;
  for (const auto& a : M.action) r.push_back(oracle::to_dense64(a));
  return r;
}

/// Equality of induced maps, entries compared modulo the orders of the target generators.
bool equal_mod_orders(const IntMatrix& a, const IntMatrix& b, const std::vector<Integer>& orders) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      Integer x = a.at(i, j), y = b.at(i, j), o = orders[i];
      if (o != 0 ? ((x - y) % o) != 0 : x != y) return false;
    }
  return true;
}

}  // namespace

TEST(Cohomology, SpaceAndPair) {
  auto S = space_groupoid(4);
  EXPECT_EQ(cocycle_cohomology(S, constant_module(S, 1), 3),
            (std::vector<FgAbGroup>{FgAbGroup::free(4), {}, {}, {}}));
  auto P = pair_groupoid(3);
  EXPECT_EQ(cocycle_cohomology(P, constant_module(P, 1), 2), (std::vector<FgAbGroup>{FgAbGroup::free(1), {}, {}}));
}

TEST(Cohomology, CyclicGroupsBothSidesAgainstOracle) {
  for (std::size_t m : {2, 3, 4}) {
    auto t = cyclic_table(m);
    auto G = group_groupoid(t);
    auto M = constant_module(G, 1);
    auto want = oracle::group_cohomology(t, oracle::trivial_rep(t), 3);
    expect_groups(want, cocycle_cohomology(G, M, 3), "cocycle Z/" + std::to_string(m));
    expect_groups(want, hom_side_cohomology(G, M, 3), "hom Z/" + std::to_string(m));
  }
  auto Z2 = group_groupoid(cyclic_table(2));
  EXPECT_EQ(cocycle_cohomology(Z2, constant_module(Z2, 1), 3),
            (std::vector<FgAbGroup>{FgAbGroup::free(1), {}, FgAbGroup::from_orders(0, {2}), {}}));
}

TEST(Cohomology, TwistedGroupModulesAgainstOracle) {
  auto Z2 = group_groupoid(cyclic_table(2));
  auto sign = sign_module(Z2);
  EXPECT_EQ(cocycle_cohomology(Z2, sign, 3),
            (std::vector<FgAbGroup>{{}, FgAbGroup::from_orders(0, {2}), {}, FgAbGroup::from_orders(0, {2})}));
  EXPECT_EQ(cocycle_coboundary_matrix(Z2, sign, 0), IntMatrix::from_rows({{0}, {-2}}));
  for (const auto& g : gen::groups()) {
    auto G = group_groupoid(g.table);
    for (std::size_t r : {1, 2})
      for (int kind : {0, 1}) {
        auto rho = gen::make_rep(g, r, kind);
        GModule M;
        M.fiber_rank = {r};
        for (const auto& a : rho) M.action.push_back(gen::to_matrix(a));
        std::size_t top = g.table.size() >= 6 ? 2 : 3;
        expect_groups(oracle::group_cohomology(g.table, rho, top), cocycle_cohomology(G, M, top), g.name);
      }
  }
  // permutation module of Z/3 on three points: H^0 = Z (constant vectors)
  auto Z3 = group_groupoid(cyclic_table(3));
  auto perm = permutation_module(Z3, {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}});
  expect_groups(oracle::group_cohomology(cyclic_table(3), rep_of(perm), 2), cocycle_cohomology(Z3, perm, 2), "Z/3 perm");
}

TEST(Cohomology, RandomInstancesMoritaOracle) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 12; ++trial) {
    auto inst = gen::random_instance(rng, 20);
    ASSERT_FALSE(validate_module(inst.G, inst.M).has_value()) << inst.name;
    expect_groups(inst.cohomology_oracle(2), cocycle_cohomology(inst.G, inst.M, 2), inst.name);
  }
}

TEST(ThetaRho, IdentitiesOnRandomInstances) {
  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 12; ++trial) {
    auto inst = gen::random_instance(rng, 20);
    auto r = theta_rho_check(inst.G, inst.M, 2);
    for (const auto& d : r.degrees) {
      EXPECT_TRUE(d.rho_theta) << inst.name << " " << d.witness;
      EXPECT_TRUE(d.theta_rho) << inst.name << " " << d.witness;
      EXPECT_TRUE(d.chain_map) << inst.name << " " << d.witness;
      EXPECT_TRUE(d.equivariant) << inst.name << " " << d.witness;
    }
    EXPECT_TRUE(r.groups_agree) << inst.name;
  }
}

TEST(ThetaRho, HomSideComplexSquaresToZero) {
  std::mt19937_64 rng(47);
  auto inst = gen::random_instance(rng, 16);
  auto m = cochain_models(inst.G, inst.M, 2);
  for (std::size_t n = 0; n + 1 < m.delta_hom.size(); ++n) {
    EXPECT_TRUE((m.delta_hom[n + 1] * m.delta_hom[n]).is_zero());
    EXPECT_TRUE((m.delta_c[n + 1] * m.delta_c[n]).is_zero());
  }
}

TEST(Pullback, ContravariantAndChainMap) {
  auto Z4 = group_groupoid(cyclic_table(4)), Z2 = group_groupoid(cyclic_table(2)), pt = space_groupoid(1);
  GroupoidFunctor q{{0, 1, 0, 1}}, c{{0, 0}};
  auto Mpt = constant_module(pt, 1);
  auto M2 = pullback_module(Z2, pt, c, Mpt);
  for (std::size_t n = 0; n <= 2; ++n) {
    auto a = induced_cohomology_map(Z2, pt, c, Mpt, n);
    auto b = induced_cohomology_map(Z4, Z2, q, M2, n);
    auto ab = induced_cohomology_map(Z4, pt, compose_functors(c, q), Mpt, n);
    EXPECT_TRUE(a.commutes && b.commutes && ab.commutes);
    // (c q)^* = q^* c^*
    EXPECT_EQ(b.chain * a.chain, ab.chain) << n;
    EXPECT_TRUE(equal_mod_orders(b.induced * a.induced, ab.induced, ab.target.orders())) << n;
  }
  auto sign = pullback_module(Z4, Z2, q, sign_module(Z2));
  EXPECT_EQ(sign.action[1], IntMatrix::from_rows({{-1}}));
  EXPECT_EQ(sign.action[2], IntMatrix::from_rows({{1}}));
}

TEST(Pullback, SurjectiveFunctorsAreInjectiveOnCochains) {
  // pair(k) -> point and Z/4 -> Z/2 are surjective on arrows
  auto Z4 = group_groupoid(cyclic_table(4)), Z2 = group_groupoid(cyclic_table(2));
  GroupoidFunctor q{{0, 1, 0, 1}};
  for (std::size_t n = 0; n <= 3; ++n) {
    IntMatrix m = cochain_pullback_matrix(Z4, Z2, q, sign_module(Z2), n);
    EXPECT_EQ(rank(m), m.cols()) << n;
  }
  for (std::size_t k = 2; k <= 4; ++k) {
    auto P = pair_groupoid(k), pt = space_groupoid(1);
    GroupoidFunctor c{std::vector<Arrow>(P.size(), 0)};
    for (std::size_t n = 0; n <= 2; ++n) {
      IntMatrix m = cochain_pullback_matrix(P, pt, c, constant_module(pt, 2), n);
      EXPECT_EQ(rank(m), m.cols());
    }
  }
}
