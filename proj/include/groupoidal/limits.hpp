#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cap.hpp"
#include "error.hpp"
#include "lattice.hpp"
#include "matrix.hpp"
#include "snf.hpp"
#include "zlinalg.hpp"

namespace groupoidal {

/// Sequence of free abelian groups Z^{k_n}. A materialized prefix of maps, optionally
/// continued forever by a stationary square matrix.
/// Direct: maps[n] : Z^{k_n} -> Z^{k_{n+1}}. Inverse: maps[n] : Z^{k_{n+1}} -> Z^{k_n}.
class Tower {
 public:
  enum class Direction { direct, inverse };

  static Tower direct(std::vector<IntMatrix> maps, std::optional<IntMatrix> stationary = std::nullopt) {
    return Tower(Direction::direct, std::move(maps), std::move(stationary));
  }
  static Tower inverse(std::vector<IntMatrix> maps, std::optional<IntMatrix> stationary = std::nullopt) {
    return Tower(Direction::inverse, std::move(maps), std::move(stationary));
  }
  static Tower direct_stationary(IntMatrix a) { return direct({}, std::move(a)); }
  static Tower inverse_stationary(IntMatrix a) { return inverse({}, std::move(a)); }

  Direction direction() const { return direction_; }
  const std::vector<IntMatrix>& materialized() const { return maps_; }
  const std::optional<IntMatrix>& stationary() const { return stationary_; }
  bool is_stationary() const { return maps_.empty() && stationary_.has_value(); }

  /// Number of maps available; unbounded when a stationary continuation exists.
  bool has_map(std::size_t n) const { return n < maps_.size() || stationary_.has_value(); }

  const IntMatrix& map(std::size_t n) const {
    if (n < maps_.size()) return maps_[n];
    if (stationary_) return *stationary_;
    throw Error(ErrorCode::StageBoundExceeded, "tower has only " + std::to_string(maps_.size()) + " maps");
  }

  std::size_t rank(std::size_t n) const {
    if (n < maps_.size()) return direction_ == Direction::direct ? maps_[n].cols() : maps_[n].rows();
    if (n == maps_.size() && n > 0)
      return direction_ == Direction::direct ? maps_[n - 1].rows() : maps_[n - 1].cols();
    if (stationary_) return stationary_->rows();
    throw Error(ErrorCode::StageBoundExceeded, "stage " + std::to_string(n) + " beyond tower");
  }

 private:
  Tower(Direction d, std::vector<IntMatrix> maps, std::optional<IntMatrix> stationary)
      : direction_(d), maps_(std::move(maps)), stationary_(std::move(stationary)) {
    if (stationary_ && stationary_->rows() != stationary_->cols())
      throw Error(ErrorCode::DimensionMismatch, "stationary map must be square");
    for (std::size_t n = 0; n + 1 < maps_.size(); ++n) {
      bool ok = d == Direction::direct ? maps_[n + 1].cols() == maps_[n].rows() : maps_[n + 1].rows() == maps_[n].cols();
      if (!ok) throw Error(ErrorCode::DimensionMismatch, "tower maps " + std::to_string(n) + " and " +
                                                             std::to_string(n + 1) + " do not compose");
    }
    if (stationary_ && !maps_.empty()) {
      std::size_t last = d == Direction::direct ? maps_.back().rows() : maps_.back().cols();
      if (last != stationary_->rows()) throw Error(ErrorCode::DimensionMismatch, "stationary tail rank mismatch");
    }
  }

  Direction direction_;
  std::vector<IntMatrix> maps_;
  std::optional<IntMatrix> stationary_;
};

/// Element (n, v) of a colimit; (n, v) ~ (n+1, A_n v).
struct ColimitElement {
  std::size_t stage = 0;
  Vector value;
};

struct ColimitGroup {
  Tower tower;

  ColimitElement push(const ColimitElement& a, std::size_t to) const {
    if (to < a.stage) throw Error(ErrorCode::DimensionMismatch, "cannot push to an earlier stage");
    if (a.value.size() != tower.rank(a.stage))
      throw Error(ErrorCode::DimensionMismatch, "element length != rank of its stage");
    ColimitElement out = a;
    for (std::size_t n = a.stage; n < to; ++n) out.value = tower.map(n).apply(out.value);
    out.stage = to;
    return out;
  }
};

namespace detail {

inline bool injective(const IntMatrix& a) { return rank(a) == a.cols(); }

/// True if every map from stage s on is injective (decidable only with a stationary tail).
inline bool injective_from(const Tower& t, std::size_t s) {
  if (!t.stationary() || !injective(*t.stationary())) return false;
  for (std::size_t n = s; n < t.materialized().size(); ++n)
    if (!injective(t.materialized()[n])) return false;
  return true;
}

}  // namespace detail

struct EqualityResult {
  enum class Kind { Equal, NotEqual, NotEqualUpTo };
  Kind kind;
  /// Stage where equality was observed, or the stage where inequality was proved / the bound.
  std::size_t stage;
  bool exact;
};

inline std::string to_string(EqualityResult::Kind k) {
  switch (k) {
    case EqualityResult::Kind::Equal: return "Equal";
    case EqualityResult::Kind::NotEqual: return "NotEqual";
    case EqualityResult::Kind::NotEqualUpTo: return "NotEqualUpTo";
  }
  return "?";
}

inline EqualityResult colimit_equal(const ColimitGroup& c, const ColimitElement& a, const ColimitElement& b,
                                    std::size_t stage_bound) {
  if (a.stage > stage_bound || b.stage > stage_bound)
    throw Error(ErrorCode::StageBoundExceeded, "element stage beyond bound " + std::to_string(stage_bound));
  std::size_t s = std::max(a.stage, b.stage);
  ColimitElement x = c.push(a, s), y = c.push(b, s);
  for (;;) {
    if (x.value == y.value) return {EqualityResult::Kind::Equal, s, true};
    if (detail::injective_from(c.tower, s)) return {EqualityResult::Kind::NotEqual, s, true};
    if (s == stage_bound || !c.tower.has_map(s)) return {EqualityResult::Kind::NotEqualUpTo, s, false};
    x = c.push(x, s + 1);
    y = c.push(y, s + 1);
    ++s;
  }
}

struct DivisibilityResult {
  enum class Kind { Witness, No, NoWitnessUpTo };
  Kind kind;
  std::size_t stage;
  /// x with q x ~ a, living at `stage`.
  Vector witness;
  bool exact;
};

inline std::string to_string(DivisibilityResult::Kind k) {
  switch (k) {
    case DivisibilityResult::Kind::Witness: return "Witness";
    case DivisibilityResult::Kind::No: return "No";
    case DivisibilityResult::Kind::NoWitnessUpTo: return "NoWitnessUpTo";
  }
  return "?";
}

namespace detail {

inline std::optional<Vector> divide_exact(const Vector& v, const Integer& q) {
  Vector out;
  for (const auto& x : v) {
    if (x % q != 0) return std::nullopt;
    out.push_back(x / q);
  }
  return out;
}

/// p if the matrix is p times the identity.
inline std::optional<Integer> scalar_of(const IntMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) return std::nullopt;
  Integer p = a.at(0, 0);
  for (std::size_t j = 0; j < a.cols(); ++j) {
    const auto& col = a.column(j);
    if (col.size() != 1 || col[0].row != j || col[0].value != p) return std::nullopt;
  }
  return p;
}

}  // namespace detail

/// Is a divisible by q in the colimit? Complete search up to the bound; exact decision for
/// a stationary scalar tail p I: a is divisible iff q stripped of the primes of p divides a.
inline DivisibilityResult colimit_divisible(const ColimitGroup& c, const ColimitElement& a, const Integer& q,
                                           std::size_t stage_bound) {
  if (q < 1) throw Error(ErrorCode::BadModulus, "divisor must be positive");
  if (a.stage > stage_bound) throw Error(ErrorCode::StageBoundExceeded, "element stage beyond bound");
  if (q == 1) return {DivisibilityResult::Kind::Witness, a.stage, a.value, true};
  ColimitElement x = c.push(a, a.stage);
  for (std::size_t s = a.stage;; ++s) {
    if (auto w = detail::divide_exact(x.value, q)) return {DivisibilityResult::Kind::Witness, s, *w, true};
    if (s == stage_bound || !c.tower.has_map(s)) break;
    x = c.push(x, s + 1);
  }
  const auto& st = c.tower.stationary();
  auto p = st ? detail::scalar_of(*st) : std::nullopt;
  if (!p || *p == 0) return {DivisibilityResult::Kind::NoWitnessUpTo, x.stage, {}, false};
  // From stage s0 on every map is p I, so push(a, s0 + j) = p^j v.
  std::size_t s0 = std::max(a.stage, c.tower.materialized().size());
  Vector v = c.push(a, s0).value;
  Integer qq = abs_value(q), pp = abs_value(*p), g;
  while ((g = gcd(qq, pp)) > 1) qq /= g;
  if (!detail::divide_exact(v, qq)) return {DivisibilityResult::Kind::No, s0, {}, true};
  for (std::size_t j = 0;; ++j) {
    if (auto w = detail::divide_exact(v, q)) return {DivisibilityResult::Kind::Witness, s0 + j, *w, true};
    for (auto& e : v) e *= *p;
  }
}

/// Edges between consecutive levels; edges[n](v, w) = number of edges from vertex w at level n
/// to vertex v at level n+1. A stationary diagram repeats edges[0] forever.
struct BratteliDiagram {
  std::vector<IntMatrix> edges;
  bool stationary = false;

  const IntMatrix& edges_at(std::size_t n) const {
    if (stationary) return edges.at(0);
    if (n >= edges.size()) throw Error(ErrorCode::MalformedDiagram, "diagram has only " + std::to_string(edges.size()) + " levels");
    return edges[n];
  }
  std::size_t vertices_at(std::size_t n) const {
    if (stationary) return edges.at(0).cols();
    if (n == 0) return edges.at(0).cols();
    return edges_at(n - 1).rows();
  }
};

inline void validate_bratteli(const BratteliDiagram& b) {
  if (b.edges.empty()) throw Error(ErrorCode::MalformedDiagram, "no edge matrices");
  if (b.stationary && (b.edges.size() != 1 || b.edges[0].rows() != b.edges[0].cols()))
    throw Error(ErrorCode::MalformedDiagram, "stationary diagram needs one square matrix");
  for (std::size_t n = 0; n < b.edges.size(); ++n) {
    const auto& e = b.edges[n];
    if (e.rows() == 0 || e.cols() == 0) throw Error(ErrorCode::MalformedDiagram, "empty level");
    if (n + 1 < b.edges.size() && b.edges[n + 1].cols() != e.rows())
      throw Error(ErrorCode::MalformedDiagram, "levels " + std::to_string(n) + " and " + std::to_string(n + 1) +
                                                   " disagree on vertex count");
    auto d = e.to_dense();
    std::vector<char> col_hit(e.cols(), 0);
    for (std::size_t r = 0; r < e.rows(); ++r) {
      bool row_hit = false;
      for (std::size_t c = 0; c < e.cols(); ++c) {
        if (d[r][c] < 0) throw Error(ErrorCode::MalformedDiagram, "negative multiplicity");
        if (d[r][c] > 0) row_hit = true, col_hit[c] = 1;
      }
      if (!row_hit) throw Error(ErrorCode::MalformedDiagram, "vertex with no incoming edge at level " + std::to_string(n + 1));
    }
    for (auto h : col_hit)
      if (!h) throw Error(ErrorCode::MalformedDiagram, "vertex with no outgoing edge at level " + std::to_string(n));
  }
}

/// One vertex with p edges per level (UHF(p^infinity)).
inline BratteliDiagram bratteli_stationary(const Integer& p) {
  BratteliDiagram b{{IntMatrix::from_dense({{p}})}, true};
  validate_bratteli(b);
  return b;
}

inline BratteliDiagram bratteli_stationary(const IntMatrix& a) {
  BratteliDiagram b{{a}, true};
  validate_bratteli(b);
  return b;
}

/// Direct tower of multiplicity matrices for the first `levels` levels, continued by the
/// stationary matrix when there is one.
inline ColimitGroup dimension_group(const BratteliDiagram& b, std::size_t levels) {
  validate_bratteli(b);
  if (levels == 0) throw Error(ErrorCode::MalformedDiagram, "levels must be at least 1");
  if (b.stationary) return {Tower::direct(std::vector<IntMatrix>(levels, b.edges[0]), b.edges[0])};
  if (levels > b.edges.size())
    throw Error(ErrorCode::MalformedDiagram, "diagram has only " + std::to_string(b.edges.size()) + " levels");
  return {Tower::direct(std::vector<IntMatrix>(b.edges.begin(), b.edges.begin() + levels))};
}

struct AfHomology {
  std::size_t degree;
  bool trivial;
  std::optional<ColimitGroup> colimit;
  std::string description;
};

inline AfHomology af_homology(const BratteliDiagram& b, std::size_t n, std::size_t levels = 1) {
  validate_bratteli(b);
  if (n >= 1) return {n, true, std::nullopt, "0"};
  auto c = dimension_group(b, b.stationary ? levels : b.edges.size());
  std::string desc = "colim(Z^" + std::to_string(b.vertices_at(0)) + ", ";
  desc += b.stationary ? to_string(b.edges[0]) + " stationary)" : std::to_string(b.edges.size()) + " levels)";
  return {0, false, std::move(c), desc};
}

/// Lattice invariant used to compare nested lattices of equal rank: rank plus the product of
/// the invariant factors of a basis (its index in its saturation).
struct LatticeSize {
  std::size_t rank = 0;
  Integer index = 1;
  friend bool operator==(const LatticeSize&, const LatticeSize&) = default;
};

inline LatticeSize lattice_size(const IntMatrix& basis) {
  LatticeSize s;
  auto d = smith_diagonal(basis);
  s.rank = d.size();
  for (const auto& v : d) s.index *= v;
  return s;
}

struct Lim1Report {
  enum class Certificate { ML, NonML, Inconclusive };
  std::size_t truncation = 0;
  /// chains[n][m - n] = size of I_{n,m} = im(A_n ... A_{m-1}) for n <= m <= N.
  std::vector<std::vector<LatticeSize>> chains;
  /// Every I_{n,m+1} is contained in I_{n,m} (checked by lattice solve).
  bool chains_decreasing = true;
  /// Smallest m with I_{n,m} = I_{n,N}, per stage.
  std::vector<std::size_t> stabilization;
  Certificate certificate = Certificate::Inconclusive;
  /// ML decided exactly (stationary tower: one stable step implies stability forever).
  bool exact = false;
  /// Stage whose chain strictly decreases at every step (NonML evidence).
  std::optional<std::size_t> nonml_stage;
  /// Basis of I_{0,N}; lim maps onto it for ML towers.
  IntMatrix stable_image;
  std::size_t lim_rank_bound = 0;
  /// Threads have 0-component in I_{0,N}; true when I_{0,N} = 0 or has index growing at every step.
  bool lim_zero_within_truncation = false;
};

inline std::string to_string(Lim1Report::Certificate c) {
  switch (c) {
    case Lim1Report::Certificate::ML: return "ML";
    case Lim1Report::Certificate::NonML: return "NonML";
    case Lim1Report::Certificate::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline Lim1Report limit_and_lim1(const Tower& t, std::size_t n_stages) {
  if (t.direction() != Tower::Direction::inverse) throw Error(ErrorCode::DimensionMismatch, "inverse tower required");
  if (n_stages < 2) throw Error(ErrorCode::StageBoundExceeded, "truncation depth must be at least 2");
  Lim1Report rep;
  rep.truncation = n_stages;
  const std::size_t N = n_stages;
  for (std::size_t n = 0; n < N; ++n) {
    std::vector<LatticeSize> chain;
    IntMatrix comp = IntMatrix::identity(t.rank(n));
    IntMatrix prev_basis = comp;
    chain.push_back(lattice_size(comp));
    for (std::size_t m = n; m < N; ++m) {
      comp = comp * t.map(m);
      IntMatrix basis = image_basis(comp);
      if (!lattice_contains(ColumnReduction(prev_basis), basis)) rep.chains_decreasing = false;
      chain.push_back(lattice_size(basis));
      prev_basis = basis;
      if (n == 0 && m + 1 == N) rep.stable_image = basis;
    }
    std::size_t stab = N;
    while (stab > n && chain[stab - 1 - n] == chain[N - n]) --stab;
    rep.stabilization.push_back(stab);
    bool strict = true;
    for (std::size_t k = 0; k + 1 < chain.size(); ++k) strict = strict && !(chain[k] == chain[k + 1]);
    if (strict && !rep.nonml_stage && chain.size() > 2) rep.nonml_stage = n;
    rep.chains.push_back(std::move(chain));
  }
  bool ml = true;
  for (std::size_t n = 0; n + 1 < N; ++n) ml = ml && rep.stabilization[n] < N;
  if (ml) {
    rep.certificate = Lim1Report::Certificate::ML;
    rep.exact = t.is_stationary();
  } else if (rep.nonml_stage) {
    rep.certificate = Lim1Report::Certificate::NonML;
  }
  rep.lim_rank_bound = rep.chains[0].back().rank;
  bool index_growing = true;
  for (std::size_t k = 0; k + 1 < rep.chains[0].size(); ++k)
    index_growing = index_growing && rep.chains[0][k + 1].index > rep.chains[0][k].index;
  rep.lim_zero_within_truncation = rep.lim_rank_bound == 0 || index_growing;
  return rep;
}

/// Functions on depth-D cylinders of {0..p-1}^N, cylinder index sum_i x_i p^i.
namespace detail {

inline std::size_t checked_power(std::size_t p, std::size_t e, std::size_t cap) {
  std::size_t v = 1;
  for (std::size_t i = 0; i < e; ++i) {
    if (v > cap / p) throw Error(ErrorCode::DepthTooLarge, std::to_string(p) + "^" + std::to_string(e) + " exceeds cap");
    v *= p;
  }
  return v;
}

/// sigma^* : C_D -> C_{D+1}, (f o sigma)(x) = f(x_1, x_2, ...).
inline IntMatrix shift_pullback(std::size_t p, std::size_t depth) {
  std::size_t lo = checked_power(p, depth, static_cast<std::size_t>(-1)), hi = lo * p;
  IntMatrix m(hi, lo);
  for (std::size_t j = 0; j < hi; ++j) m.add(j, j / p, 1);
  return m;
}

/// iota : C_D -> C_{D+1}, a depth-D function viewed at depth D+1.
inline IntMatrix refine_functions(std::size_t p, std::size_t depth) {
  std::size_t lo = checked_power(p, depth, static_cast<std::size_t>(-1)), hi = lo * p;
  IntMatrix m(hi, lo);
  for (std::size_t j = 0; j < hi; ++j) m.add(j, j % lo, 1);
  return m;
}

}  // namespace detail

struct AfCohomologyReport {
  std::size_t p = 0, stages = 0, depth = 0;
  /// Solutions of f = f o sigma in C_D (compared at depth D+1).
  IntMatrix stationary_threads;
  std::size_t stationary_thread_rank = 0;
  bool constants_only = false;
  /// Rank of threads (f_0, ..., f_N) in C_D with f_n = f_{n+1} o sigma, and its closed form.
  std::size_t thread_rank = 0;
  std::size_t thread_rank_expected = 0;
  /// Fixed-depth threads are forced constant only when N >= D.
  bool faithful = false;
  /// Inverse tower C_{D+N-n} <- C_{D+N-n-1} by sigma^*, evidence for H^1.
  Lim1Report h1;
};

inline AfCohomologyReport af_cohomology_tower(std::size_t p, std::size_t n_stages, std::size_t depth,
                                              std::size_t cap = default_cap()) {
  if (p < 2) throw Error(ErrorCode::DepthTooLarge, "p must be at least 2");
  detail::checked_power(p, depth + n_stages, cap);
  AfCohomologyReport rep;
  rep.p = p;
  rep.stages = n_stages;
  rep.depth = depth;
  IntMatrix iota = detail::refine_functions(p, depth), sigma = detail::shift_pullback(p, depth);
  rep.stationary_threads = kernel_basis(iota - sigma);
  rep.stationary_thread_rank = rep.stationary_threads.cols();
  if (rep.stationary_thread_rank == 1) {
    Vector f = rep.stationary_threads.column_dense(0);
    rep.constants_only = !f.empty() && abs_value(f[0]) == 1;
    for (const auto& v : f) rep.constants_only = rep.constants_only && v == f[0];
  }
  // threads (f_0..f_N): iota f_n - sigma f_{n+1} = 0 for n < N
  std::size_t lo = iota.cols(), hi = iota.rows();
  IntMatrix big(n_stages * hi, (n_stages + 1) * lo);
  for (std::size_t n = 0; n < n_stages; ++n)
    for (std::size_t j = 0; j < lo; ++j) {
      for (const auto& e : iota.column(j)) big.add(n * hi + e.row, n * lo + j, e.value);
      for (const auto& e : sigma.column(j)) big.add(n * hi + e.row, (n + 1) * lo + j, -e.value);
    }
  rep.thread_rank = kernel_basis(big).cols();
  rep.thread_rank_expected = detail::checked_power(p, depth > n_stages ? depth - n_stages : 0, cap);
  rep.faithful = n_stages >= depth;
  std::vector<IntMatrix> maps;
  for (std::size_t n = 0; n < n_stages; ++n) maps.push_back(detail::shift_pullback(p, depth + n_stages - n - 1));
  rep.h1 = limit_and_lim1(Tower::inverse(std::move(maps)), n_stages);
  return rep;
}

}  // namespace groupoidal
