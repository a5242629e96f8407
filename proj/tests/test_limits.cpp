#include <random>

#include <gtest/gtest.h>

#include "generators.hpp"
#include "groupoidal/limits.hpp"
#include "oracles.hpp"

using namespace groupoidal;

namespace {

IntMatrix scalar(std::int64_t p) { return IntMatrix::from_rows({{static_cast<long long>(p)}}); }

/// Dimension of the thread space, built directly from f_n(x_0..x_{D-1}) = f_{n+1}(x_1..x_D).
std::size_t brute_thread_rank(std::size_t p, std::size_t n_stages, std::size_t depth) {
  std::size_t lo = 1;
  for (std::size_t i = 0; i < depth; ++i) lo *= p;
  std::size_t hi = lo * p, vars = (n_stages + 1) * lo;
  oracle::Dense64 sys;
  for (std::size_t n = 0; n < n_stages; ++n)
    for (std::size_t x = 0; x < hi; ++x) {
      std::vector<std::int64_t> row(vars, 0);
      row[n * lo + x % lo] += 1;
      row[(n + 1) * lo + x / p] -= 1;
      sys.push_back(row);
    }
  return vars - oracle::rank_mod_p(sys, 1000003);
}

}  // namespace

TEST(Colimit, EqualityDecisions) {
  ColimitGroup uhf{Tower::direct_stationary(scalar(2))};
  auto e = colimit_equal(uhf, {0, {1}}, {1, {2}}, 4);
  EXPECT_EQ(e.kind, EqualityResult::Kind::Equal);
  EXPECT_EQ(e.stage, 1u);
  auto ne = colimit_equal(uhf, {0, {1}}, {0, {3}}, 4);
  EXPECT_EQ(ne.kind, EqualityResult::Kind::NotEqual);
  EXPECT_TRUE(ne.exact);
  // Z^2 -> Z by (1, 1), then identity: e1 ~ e2
  ColimitGroup fold{Tower::direct({IntMatrix::from_rows({{1, 1}})}, IntMatrix::identity(1))};
  EXPECT_EQ(colimit_equal(fold, {0, {1, 0}}, {0, {0, 1}}, 3).kind, EqualityResult::Kind::Equal);
  // finite tower without a tail: inequality only up to the bound
  ColimitGroup finite{Tower::direct({scalar(2)})};
  auto up = colimit_equal(finite, {0, {1}}, {0, {2}}, 5);
  EXPECT_EQ(up.kind, EqualityResult::Kind::NotEqualUpTo);
  EXPECT_FALSE(up.exact);
  ColimitGroup killing{Tower::direct({scalar(0)})};
  EXPECT_EQ(colimit_equal(killing, {0, {1}}, {0, {2}}, 5).kind, EqualityResult::Kind::Equal);
  EXPECT_THROW(colimit_equal(uhf, {6, {1}}, {0, {1}}, 5), Error);
  EXPECT_THROW(colimit_equal(uhf, {0, {1, 1}}, {0, {1}}, 5), Error);
}

TEST(Colimit, DivisibilityDecisions) {
  ColimitGroup uhf{Tower::direct_stationary(scalar(2))};
  auto w = colimit_divisible(uhf, {0, {1}}, Integer(4), 5);
  EXPECT_EQ(w.kind, DivisibilityResult::Kind::Witness);
  EXPECT_EQ(w.stage, 2u);
  EXPECT_EQ(w.witness, (Vector{1}));
  auto no = colimit_divisible(uhf, {0, {1}}, Integer(3), 5);
  EXPECT_EQ(no.kind, DivisibilityResult::Kind::No);
  EXPECT_TRUE(no.exact);
  EXPECT_EQ(colimit_divisible(uhf, {0, {3}}, Integer(6), 5).kind, DivisibilityResult::Kind::Witness);
  // beyond the stage bound the stationary tail still decides: 2^10 divides at stage 10
  auto far = colimit_divisible(uhf, {0, {1}}, Integer(1024), 2);
  EXPECT_EQ(far.kind, DivisibilityResult::Kind::Witness);
  EXPECT_EQ(far.stage, 10u);
  try {
    colimit_divisible(uhf, {0, {1}}, Integer(0), 5);
    FAIL() << "expected BadModulus";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::BadModulus);
  }
  // Fibonacci tail is unimodular but not scalar: parity never becomes even, no exact decision
  ColimitGroup fib{Tower::direct_stationary(IntMatrix::from_rows({{1, 1}, {1, 0}}))};
  auto f = colimit_divisible(fib, {0, {1, 0}}, Integer(2), 8);
  EXPECT_EQ(f.kind, DivisibilityResult::Kind::NoWitnessUpTo);
  EXPECT_FALSE(f.exact);
}

TEST(Colimit, RandomScalarTailsAgainstBruteForce) {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 200; ++trial) {
    long long p = 2 + static_cast<long long>(rng() % 5);
    ColimitGroup c{Tower::direct_stationary(IntMatrix::from_rows({{p, 0}, {0, p}}))};
    Vector a{static_cast<long long>(rng() % 40) - 20, static_cast<long long>(rng() % 40) - 20};
    Integer q = 1 + rng() % 30;
    auto r = colimit_divisible(c, {0, a}, q, 3);
    // p^k a divisible by q for some k <= 6 (q < 32 so exponents stay below 5)
    bool brute = false;
    Vector v = a;
    for (int k = 0; k <= 6 && !brute; ++k) {
      brute = v[0] % q == 0 && v[1] % q == 0;
      for (auto& x : v) x *= p;
    }
    EXPECT_EQ(r.kind == DivisibilityResult::Kind::Witness, brute) << "p=" << p << " q=" << q;
    EXPECT_TRUE(r.exact);
    if (r.kind == DivisibilityResult::Kind::Witness) {
      auto pushed = c.push({0, a}, r.stage).value;
      for (std::size_t i = 0; i < 2; ++i) EXPECT_EQ(r.witness[i] * q, pushed[i]);
    }
  }
}

TEST(Colimit, RandomTowersEqualityMatchesPushing) {
  std::mt19937_64 rng(73);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<IntMatrix> maps;
    for (int n = 0; n < 4; ++n) maps.push_back(oracle::to_int_matrix(gen::random_dense(rng, 2, 2, 2, 2), 2));
    ColimitGroup c{Tower::direct(maps)};
    Vector a{static_cast<long long>(rng() % 5) - 2, static_cast<long long>(rng() % 5) - 2};
    Vector b{static_cast<long long>(rng() % 5) - 2, static_cast<long long>(rng() % 5) - 2};
    auto r = colimit_equal(c, {0, a}, {0, b}, 4);
    bool equal_somewhere = false;
    for (std::size_t s = 0; s <= 4; ++s) equal_somewhere = equal_somewhere || c.push({0, a}, s).value == c.push({0, b}, s).value;
    EXPECT_EQ(r.kind == EqualityResult::Kind::Equal, equal_somewhere);
    EXPECT_NE(r.kind, EqualityResult::Kind::NotEqual);  // no tail, so never exact inequality
  }
}

TEST(Bratteli, Validation) {
  auto expect_malformed = [](const BratteliDiagram& b) {
    try {
      validate_bratteli(b);
      ADD_FAILURE() << "expected MalformedDiagram";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::MalformedDiagram);
    }
  };
  expect_malformed({{}, false});
  expect_malformed({{IntMatrix::from_rows({{-1}})}, false});
  expect_malformed({{IntMatrix::from_rows({{1, 1}})}, true});
  expect_malformed({{IntMatrix::from_rows({{1}, {1}}), IntMatrix::from_rows({{1}})}, false});
  expect_malformed({{IntMatrix::from_rows({{1, 0}, {0, 0}})}, false});
  EXPECT_NO_THROW(validate_bratteli({{IntMatrix::from_rows({{1, 1}, {1, 0}}), IntMatrix::from_rows({{2, 1}})}, false}));
  EXPECT_THROW(bratteli_stationary(Integer(0)), Error);
  EXPECT_THROW(dimension_group(bratteli_stationary(Integer(2)), 0), Error);
}

TEST(Bratteli, DimensionGroupAndAfHomology) {
  auto uhf = bratteli_stationary(Integer(3));
  auto c = dimension_group(uhf, 4);
  EXPECT_EQ(c.tower.materialized().size(), 4u);
  EXPECT_EQ(c.push({0, {1}}, 4).value, (Vector{81}));
  auto h0 = af_homology(uhf, 0, 2);
  EXPECT_FALSE(h0.trivial);
  ASSERT_TRUE(h0.colimit.has_value());
  EXPECT_EQ(colimit_divisible(*h0.colimit, {0, {1}}, Integer(27), 2).kind, DivisibilityResult::Kind::Witness);
  for (std::size_t n = 1; n <= 3; ++n) EXPECT_TRUE(af_homology(uhf, n).trivial);
  BratteliDiagram two{{IntMatrix::from_rows({{1, 1}, {1, 0}}), IntMatrix::from_rows({{1, 1}, {1, 0}})}, false};
  auto h = af_homology(two, 0);
  ASSERT_TRUE(h.colimit.has_value());
  EXPECT_EQ(h.colimit->push({0, {1, 0}}, 2).value, (Vector{2, 1}));
  EXPECT_THROW(dimension_group(two, 3), Error);
}

TEST(Lim1, MittagLefflerCertificates) {
  auto ml = limit_and_lim1(Tower::inverse_stationary(IntMatrix::identity(2)), 4);
  EXPECT_EQ(ml.certificate, Lim1Report::Certificate::ML);
  EXPECT_TRUE(ml.exact);
  EXPECT_EQ(ml.lim_rank_bound, 2u);
  auto proj = limit_and_lim1(Tower::inverse_stationary(IntMatrix::from_rows({{1, 0}, {0, 0}})), 4);
  EXPECT_EQ(proj.certificate, Lim1Report::Certificate::ML);
  EXPECT_EQ(proj.lim_rank_bound, 1u);
  // Z <-2- Z <-2- ...: images 2^k Z shrink forever, lim = 0 and lim^1 = Z_2 / Z
  auto dbl = limit_and_lim1(Tower::inverse_stationary(scalar(2)), 5);
  EXPECT_EQ(dbl.certificate, Lim1Report::Certificate::NonML);
  EXPECT_TRUE(dbl.chains_decreasing);
  EXPECT_TRUE(dbl.lim_zero_within_truncation);
  ASSERT_EQ(dbl.chains[0].size(), 6u);
  for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(dbl.chains[0][k].index, Integer(1) << k);
  EXPECT_THROW(limit_and_lim1(Tower::direct_stationary(scalar(2)), 4), Error);
  EXPECT_THROW(limit_and_lim1(Tower::inverse_stationary(scalar(2)), 1), Error);
}

TEST(AfTower, ThreadRankMatchesClosedFormAndBruteForce) {
  for (std::size_t p : {2, 3})
    for (std::size_t N = 2; N <= 4; ++N)
      for (std::size_t D = 1; D <= 4; ++D) {
        if (p == 3 && N + D > 6) continue;
        auto r = af_cohomology_tower(p, N, D);
        std::size_t expected = 1;
        for (std::size_t i = N; i < D; ++i) expected *= p;
        EXPECT_EQ(r.thread_rank, expected) << p << " " << N << " " << D;
        EXPECT_EQ(r.thread_rank_expected, expected);
        EXPECT_EQ(r.thread_rank, brute_thread_rank(p, N, D)) << p << " " << N << " " << D;
        EXPECT_TRUE(r.constants_only);
        EXPECT_EQ(r.stationary_thread_rank, 1u);
        EXPECT_EQ(r.faithful, N >= D);
      }
  auto r = af_cohomology_tower(2, 3, 4);
  EXPECT_EQ(r.h1.certificate, Lim1Report::Certificate::NonML);
  EXPECT_THROW(af_cohomology_tower(1, 3, 3), Error);
  EXPECT_THROW(af_cohomology_tower(2, 30, 30, 1 << 20), Error);
}
