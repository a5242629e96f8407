#pragma once

#include <optional>
#include <string>
#include <vector>

#include "groupoid.hpp"
#include "nerve.hpp"
#include "parallel.hpp"
#include "zlinalg.hpp"

namespace groupoidal {

/// Free module over a list of tuples with one fiber M_{r(t_0)} per tuple; blocks are laid
/// out in tuple order. Degree-n cochains use G^(n) (units for n = 0); equivariant tables
/// for degree n use G^(n+1).
struct FiberedBasis {
  Nerve tuples;
  std::vector<std::size_t> offset;

  std::size_t rank() const { return offset.back(); }
  std::size_t fiber(std::size_t j) const { return offset[j + 1] - offset[j]; }
};

inline FiberedBasis fibered_basis(const FiniteGroupoid& G, const GModule& M, Nerve tuples) {
  FiberedBasis b{std::move(tuples), {0}};
  for (std::size_t j = 0; j < b.tuples.size(); ++j) b.offset.push_back(b.offset.back() + M.fiber(G, G.rng(b.tuples[j][0])));
  return b;
}

/// C^n(G, M): one fiber M_{r(g_1)} per (g_1..g_n), one fiber per unit for n = 0.
inline FiberedBasis cochain_space(const FiniteGroupoid& G, const GModule& M, std::size_t n,
                                  std::size_t cap = default_cap()) {
  return fibered_basis(G, M, nerve(G, n, cap));
}

/// Equivariant functions on G^(n+1) stored as full tables, t -> M_{r(t_0)}.
inline FiberedBasis table_space(const FiniteGroupoid& G, const GModule& M, std::size_t n,
                                std::size_t cap = default_cap()) {
  return fibered_basis(G, M, nerve(G, n + 1, cap));
}

namespace detail {

/// Accumulates (row, col, value) entries into a column-sparse matrix.
class BlockBuilder {
 public:
  BlockBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

  void add(std::size_t r, std::size_t c, const Integer& v) { cols_[c].push_back({r, v}); }

  void add_identity(std::size_t ro, std::size_t co, std::size_t k, const Integer& v) {
    for (std::size_t i = 0; i < k; ++i) add(ro + i, co + i, v);
  }

  void add_block(std::size_t ro, std::size_t co, const IntMatrix& a, const Integer& sign = 1) {
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (const auto& e : a.column(j)) add(ro + e.row, co + j, sign * e.value);
  }

  IntMatrix build() {
    std::vector<SparseColumn> cols;
    cols.reserve(cols_.size());
    for (auto& c : cols_) cols.push_back(make_column(std::move(c)));
    return IntMatrix::from_columns(rows_, std::move(cols));
  }

 private:
  std::size_t rows_;
  std::vector<std::vector<std::pair<std::size_t, Integer>>> cols_;
};

inline void check_fiber(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::InvalidModule, "fiber ranks disagree along an identification");
}

}  // namespace detail

/// delta_c^n : C^n -> C^{n+1},
/// (delta f)(g_0..g_n) = g_0 f(g_1..g_n) + sum_{i=1}^n (-1)^i f(.., g_{i-1} g_i, ..) + (-1)^{n+1} f(g_0..g_{n-1});
/// (delta f)(g_0) = g_0 f(s g_0) - f(r g_0) for n = 0.
inline IntMatrix cocycle_coboundary_matrix(const FiniteGroupoid& G, const GModule& M, const FiberedBasis& src,
                                           const FiberedBasis& dst) {
  std::size_t n = src.tuples.degree();
  if (dst.tuples.degree() != n + 1) throw Error(ErrorCode::DimensionMismatch, "cochain degrees must be n, n+1");
  detail::BlockBuilder out(dst.rank(), src.rank());
  std::vector<Arrow> face(std::max<std::size_t>(n, 1));
  for (std::size_t j = 0; j < dst.tuples.size(); ++j) {
    auto t = dst.tuples[j];  // (g_0, ..., g_n)
    std::size_t ro = dst.offset[j], k = dst.fiber(j);
    const IntMatrix& a = M.action[t[0]];
    if (n == 0) {
      Arrow s = G.src(t[0]), r = G.rng(t[0]);
      std::size_t cs = src.tuples.require_index(std::span<const Arrow>(&s, 1));
      std::size_t cr = src.tuples.require_index(std::span<const Arrow>(&r, 1));
      out.add_block(ro, src.offset[cs], a);
      detail::check_fiber(k, src.fiber(cr));
      out.add_identity(ro, src.offset[cr], k, -1);
      continue;
    }
    // first term: alpha_{g_0} at (g_1..g_n)
    std::size_t c0 = src.tuples.require_index(t.subspan(1));
    out.add_block(ro, src.offset[c0], a);
    for (std::size_t i = 1; i <= n; ++i) {
      std::size_t w = 0;
      for (std::size_t q = 0; q <= n; ++q) {
        if (q == i) continue;
        face[w++] = q == i - 1 ? G.mul(t[i - 1], t[i]) : t[q];
      }
      std::size_t c = src.tuples.require_index(std::span<const Arrow>(face.data(), n));
      detail::check_fiber(k, src.fiber(c));
      out.add_identity(ro, src.offset[c], k, i % 2 == 0 ? 1 : -1);
    }
    std::size_t cl = src.tuples.require_index(t.subspan(0, n));
    detail::check_fiber(k, src.fiber(cl));
    out.add_identity(ro, src.offset[cl], k, (n + 1) % 2 == 0 ? 1 : -1);
  }
  return out.build();
}

inline IntMatrix cocycle_coboundary_matrix(const FiniteGroupoid& G, const GModule& M, std::size_t n,
                                           std::size_t cap = default_cap()) {
  require_module(G, M);
  return cocycle_coboundary_matrix(G, M, cochain_space(G, M, n, cap), cochain_space(G, M, n + 1, cap));
}

/// Degree n = ker delta^n / im delta^{n-1}, with delta^{-1} = 0.
inline std::vector<FgAbGroup> cohomology_from_coboundaries(const std::vector<IntMatrix>& delta, std::size_t n_max,
                                                           std::size_t threads) {
  return detail::parallel_map(n_max + 1, threads, [&](std::size_t n) {
    return homology_at(delta[n], n == 0 ? IntMatrix(delta[0].cols(), 0) : delta[n - 1]);
  });
}

inline std::vector<FgAbGroup> cocycle_cohomology(const FiniteGroupoid& G, const GModule& M, std::size_t n_max,
                                                 std::size_t threads = 1, std::size_t cap = default_cap()) {
  require_module(G, M);
  auto spaces = detail::parallel_map(n_max + 2, threads, [&](std::size_t n) { return cochain_space(G, M, n, cap); });
  auto delta = detail::parallel_map(n_max + 1, threads, [&](std::size_t n) {
    return cocycle_coboundary_matrix(G, M, spaces[n], spaces[n + 1]);
  });
  return cohomology_from_coboundaries(delta, n_max, threads);
}

/// Hom_G(Z[G^(n+1)], M) in representative coordinates: the representative of (g_1..g_n) is
/// (r(g_1), g_1, ..., g_n), of a unit x it is [x]; one fiber M_{r(g_1)} (resp. M_x) each, so
/// HomSpace^n shares the layout of C^n.

/// E^n : HomSpace^n -> tables. Extends by equivariance: t = g_0 . (g_0^{-1} g_0, g_1, ..., g_n)
/// and the latter is a representative, so phi(t) = alpha_{g_0} phi(rep).
inline IntMatrix hom_extension(const FiniteGroupoid& G, const GModule& M, const FiberedBasis& reps,
                               const FiberedBasis& table) {
  std::size_t n = reps.tuples.degree();
  detail::BlockBuilder out(table.rank(), reps.rank());
  for (std::size_t j = 0; j < table.tuples.size(); ++j) {
    auto t = table.tuples[j];
    Arrow u = G.mul(G.inv(t[0]), t[0]);
    if (n > 0 && G.rng(t[1]) != u) throw Error(ErrorCode::InvalidGroupoid, "translate is not a representative");
    std::size_t c = n == 0 ? reps.tuples.require_index(std::span<const Arrow>(&u, 1))
                           : reps.tuples.require_index(t.subspan(1));
    out.add_block(table.offset[j], reps.offset[c], M.action[t[0]]);
  }
  return out.build();
}

/// Sel^n : tables -> HomSpace^n, reads the value at each representative. This is theta^n.
inline IntMatrix hom_selection(const FiniteGroupoid& G, const FiberedBasis& reps, const FiberedBasis& table) {
  std::size_t n = reps.tuples.degree();
  detail::BlockBuilder out(reps.rank(), table.rank());
  std::vector<Arrow> rep(n + 1);
  for (std::size_t j = 0; j < reps.tuples.size(); ++j) {
    auto t = reps.tuples[j];
    if (n == 0) {
      rep[0] = t[0];
    } else {
      rep[0] = G.rng(t[0]);
      std::copy(t.begin(), t.end(), rep.begin() + 1);
    }
    std::size_t c = table.tuples.require_index(rep);
    detail::check_fiber(reps.fiber(j), table.fiber(c));
    out.add_identity(reps.offset[j], table.offset[c], reps.fiber(j), 1);
  }
  return out.build();
}

/// F^n (rho^n) : C^n -> tables, (rho f)(g_0, g_1..g_n) = alpha_{g_0} f(g_1..g_n), and
/// (rho f)(g_0) = alpha_{g_0} f(s g_0) for n = 0.
inline IntMatrix cocycle_to_table(const FiniteGroupoid& G, const GModule& M, const FiberedBasis& cochains,
                                  const FiberedBasis& table) {
  std::size_t n = cochains.tuples.degree();
  detail::BlockBuilder out(table.rank(), cochains.rank());
  for (std::size_t j = 0; j < table.tuples.size(); ++j) {
    auto t = table.tuples[j];
    std::size_t c;
    if (n == 0) {
      Arrow s = G.src(t[0]);
      c = cochains.tuples.require_index(std::span<const Arrow>(&s, 1));
    } else {
      c = cochains.tuples.require_index(t.subspan(1));
    }
    const IntMatrix& a = M.action[t[0]];
    if (a.rows() != table.fiber(j) || a.cols() != cochains.fiber(c))
      throw Error(ErrorCode::InvalidModule, "action shape does not match cochain fibers");
    out.add_block(table.offset[j], cochains.offset[c], a);
  }
  return out.build();
}

/// Bt^n : tables of degree n -> tables of degree n+1, phi -> phi o b_{n+1}.
inline IntMatrix bar_pullback(const FiniteGroupoid& G, const FiberedBasis& table, const FiberedBasis& next) {
  IntMatrix b = bar_boundary_matrix_b(G, next.tuples, table.tuples);
  detail::BlockBuilder out(next.rank(), table.rank());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (const auto& e : b.column(j)) {
      detail::check_fiber(next.fiber(j), table.fiber(e.row));
      out.add_identity(next.offset[j], table.offset[e.row], next.fiber(j), e.value);
    }
  return out.build();
}

/// All spaces and maps of both cochain models up to degree top.
struct CochainModels {
  std::vector<FiberedBasis> cochains;  // C^0 .. C^{top+1}
  std::vector<FiberedBasis> tables;    // degree 0 .. top+1 (tuples G^(1) .. G^(top+2))
  std::vector<IntMatrix> delta_c;      // delta_c^0 .. delta_c^top
  std::vector<IntMatrix> extension, selection, to_table;  // degree 0 .. top+1
  std::vector<IntMatrix> pullback;     // Bt^0 .. Bt^top
  std::vector<IntMatrix> delta_hom;    // delta_0 .. delta_top
};

inline CochainModels cochain_models(const FiniteGroupoid& G, const GModule& M, std::size_t top,
                                    std::size_t threads = 1, std::size_t cap = default_cap()) {
  require_module(G, M);
  CochainModels m;
  auto ns = detail::parallel_map(top + 3, threads, [&](std::size_t n) { return nerve(G, n, cap); });
  for (std::size_t n = 0; n <= top + 1; ++n) {
    m.cochains.push_back(fibered_basis(G, M, ns[n]));
    m.tables.push_back(fibered_basis(G, M, ns[n + 1]));
  }
  m.delta_c = detail::parallel_map(top + 1, threads, [&](std::size_t n) {
    return cocycle_coboundary_matrix(G, M, m.cochains[n], m.cochains[n + 1]);
  });
  m.extension = detail::parallel_map(top + 2, threads, [&](std::size_t n) {
    return hom_extension(G, M, m.cochains[n], m.tables[n]);
  });
  m.selection = detail::parallel_map(top + 2, threads, [&](std::size_t n) {
    return hom_selection(G, m.cochains[n], m.tables[n]);
  });
  m.to_table = detail::parallel_map(top + 2, threads, [&](std::size_t n) {
    return cocycle_to_table(G, M, m.cochains[n], m.tables[n]);
  });
  m.pullback = detail::parallel_map(top + 1, threads, [&](std::size_t n) {
    return bar_pullback(G, m.tables[n], m.tables[n + 1]);
  });
  m.delta_hom = detail::parallel_map(top + 1, threads, [&](std::size_t n) {
    return m.selection[n + 1] * (m.pullback[n] * m.extension[n]);
  });
  return m;
}

/// delta_n = Sel^{n+1} Bt^n E^n on HomSpace^n.
inline IntMatrix hom_coboundary_matrix(const FiniteGroupoid& G, const GModule& M, std::size_t n,
                                       std::size_t cap = default_cap()) {
  require_module(G, M);
  FiberedBasis r0 = cochain_space(G, M, n, cap), r1 = cochain_space(G, M, n + 1, cap);
  FiberedBasis t0 = table_space(G, M, n, cap), t1 = table_space(G, M, n + 1, cap);
  return hom_selection(G, r1, t1) * (bar_pullback(G, t0, t1) * hom_extension(G, M, r0, t0));
}

inline std::vector<FgAbGroup> hom_side_cohomology(const FiniteGroupoid& G, const GModule& M, std::size_t n_max,
                                                  std::size_t threads = 1, std::size_t cap = default_cap()) {
  require_module(G, M);
  auto delta = detail::parallel_map(n_max + 1, threads, [&](std::size_t n) {
    return hom_coboundary_matrix(G, M, n, cap);
  });
  return cohomology_from_coboundaries(delta, n_max, threads);
}

/// First entry where two matrices differ, as "(row, col): a != b".
inline std::optional<std::string> first_difference(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    return "shape " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
           std::to_string(b.rows()) + "x" + std::to_string(b.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (a.column(j) == b.column(j)) continue;
    for (std::size_t i = 0; i < a.rows(); ++i)
      if (a.at(i, j) != b.at(i, j))
        return "(" + std::to_string(i) + ", " + std::to_string(j) + "): " + a.at(i, j).str() + " != " + b.at(i, j).str();
  }
  return std::nullopt;
}

struct ThetaRhoDegree {
  std::size_t degree = 0;
  /// rho theta = id on HomSpace^n (compared as full tables: F Sel E = E).
  bool rho_theta = false;
  /// theta rho = id on C^n (Sel F = I).
  bool theta_rho = false;
  /// delta_c^n theta^n = theta^{n+1} delta_n.
  bool chain_map = false;
  /// phi o b_{n+1} is again equivariant.
  bool equivariant = false;
  std::string witness;

  bool ok() const { return rho_theta && theta_rho && chain_map && equivariant; }
};

struct ThetaRhoReport {
  std::vector<ThetaRhoDegree> degrees;
  std::vector<FgAbGroup> cocycle, hom;
  bool groups_agree = false;

  bool ok() const {
    for (const auto& d : degrees)
      if (!d.ok()) return false;
    return groups_agree;
  }
};

inline ThetaRhoReport theta_rho_check(const FiniteGroupoid& G, const GModule& M, std::size_t n_max,
                                      std::size_t threads = 1, std::size_t cap = default_cap()) {
  CochainModels m = cochain_models(G, M, n_max, threads, cap);
  ThetaRhoReport rep;
  rep.degrees = detail::parallel_map(n_max + 1, threads, [&](std::size_t n) {
    ThetaRhoDegree d;
    d.degree = n;
    const IntMatrix &E = m.extension[n], &S = m.selection[n], &F = m.to_table[n];
    IntMatrix theta = S * E;
    auto note = [&](const char* what, const std::optional<std::string>& diff) {
      if (diff && d.witness.empty()) d.witness = std::string(what) + " " + *diff;
      return !diff;
    };
    d.rho_theta = note("rho_theta", first_difference(F * theta, E));
    d.theta_rho = note("theta_rho", first_difference(S * F, IntMatrix::identity(m.cochains[n].rank())));
    IntMatrix bt_e = m.pullback[n] * E;
    IntMatrix theta_next = m.selection[n + 1] * m.extension[n + 1];
    d.chain_map = note("chain_map", first_difference(m.delta_c[n] * theta, theta_next * m.delta_hom[n]));
    d.equivariant = note("equivariant", first_difference(bt_e, m.extension[n + 1] * (m.selection[n + 1] * bt_e)));
    return d;
  });
  rep.cocycle = cohomology_from_coboundaries(m.delta_c, n_max, threads);
  rep.hom = cohomology_from_coboundaries(m.delta_hom, n_max, threads);
  rep.groups_agree = rep.cocycle == rep.hom;
  return rep;
}

/// phi^* M over G1: fiber M_{phi(x)}, action alpha_{phi(g)}.
inline GModule pullback_module(const FiniteGroupoid& G1, const FiniteGroupoid& G2, const GroupoidFunctor& phi,
                               const GModule& M) {
  require_functor(G1, G2, phi);
  require_module(G2, M);
  GModule out;
  for (Arrow u : G1.units()) out.fiber_rank.push_back(M.fiber(G2, phi(u)));
  for (Arrow g = 0; g < G1.size(); ++g) out.action.push_back(M.action[phi(g)]);
  require_module(G1, out);
  return out;
}

/// phi^* : C^n(G2, M) -> C^n(G1, phi^* M), f -> f o phi^(n).
inline IntMatrix cochain_pullback_matrix(const FiniteGroupoid& G1, const FiniteGroupoid& G2,
                                         const GroupoidFunctor& phi, const GModule& M, std::size_t n,
                                         std::size_t cap = default_cap()) {
  GModule pm = pullback_module(G1, G2, phi, M);
  FiberedBasis src = cochain_space(G2, M, n, cap), dst = cochain_space(G1, pm, n, cap);
  detail::BlockBuilder out(dst.rank(), src.rank());
  std::vector<Arrow> img(dst.tuples.width());
  for (std::size_t j = 0; j < dst.tuples.size(); ++j) {
    auto t = dst.tuples[j];
    for (std::size_t k = 0; k < t.size(); ++k) img[k] = phi(t[k]);
    std::size_t c = src.tuples.require_index(img);
    detail::check_fiber(dst.fiber(j), src.fiber(c));
    out.add_identity(dst.offset[j], src.offset[c], dst.fiber(j), 1);
  }
  return out.build();
}

struct InducedCohomologyMap {
  IntMatrix chain;
  /// delta_c phi^* = phi^* delta_c in degree n.
  bool commutes = false;
  Presentation source;  // H^n(G2, M)
  Presentation target;  // H^n(G1, phi^* M)
  IntMatrix induced;
};

inline Presentation cohomology_presentation(const FiniteGroupoid& G, const GModule& M, std::size_t n,
                                            std::size_t cap = default_cap()) {
  IntMatrix out = cocycle_coboundary_matrix(G, M, n, cap);
  IntMatrix in = n == 0 ? IntMatrix(out.cols(), 0) : cocycle_coboundary_matrix(G, M, n - 1, cap);
  return homology_presentation(out, in);
}

inline InducedCohomologyMap induced_cohomology_map(const FiniteGroupoid& G1, const FiniteGroupoid& G2,
                                                   const GroupoidFunctor& phi, const GModule& M, std::size_t n,
                                                   std::size_t cap = default_cap()) {
  GModule pm = pullback_module(G1, G2, phi, M);
  IntMatrix chain = cochain_pullback_matrix(G1, G2, phi, M, n, cap);
  IntMatrix next = cochain_pullback_matrix(G1, G2, phi, M, n + 1, cap);
  bool commutes = cocycle_coboundary_matrix(G1, pm, n, cap) * chain == next * cocycle_coboundary_matrix(G2, M, n, cap);
  Presentation src = cohomology_presentation(G2, M, n, cap), dst = cohomology_presentation(G1, pm, n, cap);
  IntMatrix m = src.induced(chain, dst);
  return {std::move(chain), commutes, std::move(src), std::move(dst), std::move(m)};
}

}  // namespace groupoidal
