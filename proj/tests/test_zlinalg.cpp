#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "groupoidal/lattice.hpp"
#include "groupoidal/snf.hpp"
#include "groupoidal/zlinalg.hpp"
#include "oracles.hpp"

using namespace groupoidal;

namespace {

std::vector<std::int64_t> as64(const std::vector<Integer>& v) {
  std::vector<std::int64_t> out;
  for (const auto& x : v) out.push_back(static_cast<std::int64_t>(x));
  return out;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int bound) {
  return oracle::to_int_matrix(gen::random_dense(rng, r, c, bound), c);
}

}  // namespace

TEST(Smith, KnownDiagonals) {
  EXPECT_EQ(as64(smith_diagonal(IntMatrix::from_rows({{2, 4, 4}, {-6, 6, 12}, {10, -4, -16}}))),
            (std::vector<std::int64_t>{2, 6, 12}));
  EXPECT_EQ(as64(smith_diagonal(IntMatrix::from_rows({{2, 0}, {0, 3}}))), (std::vector<std::int64_t>{1, 6}));
  EXPECT_TRUE(smith_diagonal(IntMatrix(3, 2)).empty());
  EXPECT_EQ(rank(IntMatrix::identity(4)), 4u);
}

TEST(Smith, DiagonalMatchesDeterminantalDivisors) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t r = 1 + rng() % 4, c = 1 + rng() % 4;
    auto d = gen::random_dense(rng, r, c, 6);
    auto lib = as64(smith_diagonal(oracle::to_int_matrix(d, c)));
    EXPECT_EQ(lib, oracle::invariant_factors_by_minors(d)) << "trial " << trial;
  }
}

TEST(Smith, DecompositionIdentities) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    IntMatrix a = random_matrix(rng, r, c, 5);
    auto s = snf(a);
    EXPECT_EQ(s.U * s.S * s.V, a);
    EXPECT_EQ(s.P * a * s.Q, s.S);
    EXPECT_EQ(s.U * s.P, IntMatrix::identity(r));
    EXPECT_EQ(s.V * s.Q, IntMatrix::identity(c));
    for (std::size_t i = 0; i + 1 < s.diagonal.size(); ++i) EXPECT_EQ(s.diagonal[i + 1] % s.diagonal[i], 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) {
          EXPECT_EQ(s.S.at(i, j), 0);
        }
    EXPECT_EQ(as64(s.diagonal), as64(smith_diagonal(a)));
  }
}

TEST(Smith, SparsePathAgreesWithIndependentElimination) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t r = 5 + rng() % 20, c = 5 + rng() % 20;
    auto d = gen::random_dense(rng, r, c, 3, 4);
    EXPECT_EQ(as64(smith_diagonal(oracle::to_int_matrix(d, c))), oracle::elementary_divisors(d));
  }
}

TEST(Groups, NormalFormAndPrinting) {
  auto g = FgAbGroup::from_orders(1, {4, 6, 1, 0});
  EXPECT_EQ(g.free_rank, 2u);
  EXPECT_EQ(as64(g.torsion), (std::vector<std::int64_t>{2, 12}));
  EXPECT_EQ(g.str(), "Z^2 + Z/2 + Z/12");
  EXPECT_EQ(FgAbGroup{}.str(), "0");
  EXPECT_EQ(FgAbGroup::free(1).str(), "Z");
  EXPECT_EQ(cokernel_group(IntMatrix::from_rows({{2, 0}, {0, 3}})), FgAbGroup::from_orders(0, {6}));
  EXPECT_EQ(kernel_group(IntMatrix::from_rows({{1, 1}})), FgAbGroup::free(1));
}

TEST(Groups, HomologyAtChecksShapesAndComposition) {
  IntMatrix d1 = IntMatrix::from_rows({{1, -1}});
  EXPECT_THROW(homology_at(d1, IntMatrix(3, 1)), Error);
  EXPECT_THROW(homology_at(IntMatrix::from_rows({{1}}), IntMatrix::from_rows({{1}})), Error);
  // circle: Z^1 <- Z^1 with d = 0 twice
  EXPECT_EQ(homology_at(IntMatrix(0, 1), IntMatrix::from_rows({{2}})), FgAbGroup::from_orders(0, {2}));
}

TEST(Groups, UniversalCoefficientsMatchRanksModP) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    // random complex C_2 -> C_1 -> C_0 with d1 d2 = 0: d2 = K X for a kernel basis K of d1
    std::size_t c0 = 1 + rng() % 4, c1 = 2 + rng() % 5, c2 = 1 + rng() % 4;
    IntMatrix d1 = random_matrix(rng, c0, c1, 4);
    IntMatrix k = kernel_basis(d1);
    IntMatrix d2 = k * random_matrix(rng, k.cols(), c2, 3);
    IntMatrix d0(0, c0);
    FgAbGroup h0 = homology_at(d0, d1), h1 = homology_at(d1, d2);
    for (std::int64_t p : {2, 3, 5}) {
      auto g = coefficients_via_uct(h1, h0, p);
      std::size_t dim = c1 - oracle::rank_mod_p(oracle::to_dense64(d1), p) - oracle::rank_mod_p(oracle::to_dense64(d2), p);
      EXPECT_EQ(g.free_rank, 0u);
      EXPECT_EQ(g.torsion.size(), dim) << "trial " << trial << " p " << p;
      for (const auto& t : g.torsion) EXPECT_EQ(t, p);
    }
  }
  EXPECT_THROW(coefficients_via_uct({}, {}, 1), Error);
}

TEST(Lattice, KernelImageSolve) {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 6;
    IntMatrix a = random_matrix(rng, r, c, 4);
    IntMatrix k = kernel_basis(a);
    EXPECT_TRUE((a * k).is_zero());
    EXPECT_EQ(k.cols(), c - rank(a));
    // kernel is saturated: its cokernel is free
    EXPECT_TRUE(cokernel_group(k).torsion.empty());
    IntMatrix im = image_basis(a);
    EXPECT_EQ(im.cols(), rank(a));
    EXPECT_TRUE(lattice_equal(im, a));
    Vector x(c);
    for (auto& v : x) v = static_cast<int>(rng() % 7) - 3;
    auto s = solve_in_image(a, a.apply(x));
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(a.apply(*s), a.apply(x));
  }
  EXPECT_FALSE(solve_in_image(IntMatrix::from_rows({{2}}), Vector{1}).has_value());
  EXPECT_THROW(solve_columns(ColumnReduction(IntMatrix::from_rows({{2}})), IntMatrix::from_rows({{1}})), Error);
}

TEST(Lattice, Preimage) {
  // basis e1, e2 of Z^2; map (x, y) -> x + y; target 2Z: preimage = {x + y even}
  IntMatrix pre = preimage_basis(IntMatrix::identity(2), IntMatrix::from_rows({{1, 1}}), IntMatrix::from_rows({{2}}));
  EXPECT_TRUE(lattice_equal(pre, IntMatrix::from_rows({{1, 1}, {-1, 1}})));
}

TEST(Presentation, CoordinatesAndInducedMaps) {
  // H = Z/4 presented as Z / 4Z; multiplication by 2 induces [[2]]
  Presentation src(IntMatrix::identity(1), IntMatrix::from_rows({{4}}));
  EXPECT_EQ(src.group(), FgAbGroup::from_orders(0, {4}));
  EXPECT_EQ(src.coordinates(Vector{5}).at(0) % 4, 1);
  IntMatrix m = src.induced(IntMatrix::from_rows({{2}}), src);
  EXPECT_EQ(m.at(0, 0) % 4, src.coordinates(Vector{2}).at(0));
  EXPECT_THROW(Presentation(IntMatrix::from_rows({{2}}), IntMatrix(1, 0)).coordinates(Vector{1}), Error);
  // Z^2 / <(1, 1)> = Z, where e1 = -e2
  auto p = homology_presentation(IntMatrix(0, 2), IntMatrix::from_rows({{1}, {1}}));
  EXPECT_EQ(p.group(), FgAbGroup::free(1));
  auto a = p.coordinates(Vector{1, 0}), b = p.coordinates(Vector{0, 1});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], -b[0]);
  EXPECT_EQ(abs_value(a[0]), 1);
}

TEST(Quotient, SubLattice) {
  EXPECT_EQ(quotient_group(IntMatrix::identity(2), IntMatrix::from_rows({{2, 0}, {0, 0}})),
            FgAbGroup::from_orders(1, {2}));
  EXPECT_EQ(quotient_group(IntMatrix::from_rows({{2}}), IntMatrix::from_rows({{6}})), FgAbGroup::from_orders(0, {3}));
}
