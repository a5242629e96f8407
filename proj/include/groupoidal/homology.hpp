#pragma once

#include <string>
#include <vector>

#include "groupoid.hpp"
#include "limits.hpp"
#include "models.hpp"
#include "nerve.hpp"
#include "parallel.hpp"
#include "zlinalg.hpp"

namespace groupoidal {

/// Z (modulus 0) or Z/m.
struct Coefficients {
  Integer modulus = 0;

  static Coefficients integers() { return {}; }
  static Coefficients mod(const Integer& m) {
    if (m < 2) throw Error(ErrorCode::BadModulus, "modulus " + m.str() + " < 2");
    return {m};
  }
  bool integral() const { return modulus == 0; }
  std::string str() const { return integral() ? "Z" : "Z/" + modulus.str(); }
};

/// Nerves G^(0) .. G^(top).
inline std::vector<Nerve> nerves(const FiniteGroupoid& G, std::size_t top, std::size_t threads = 1,
                                 std::size_t cap = default_cap()) {
  return detail::parallel_map(top + 1, threads, [&](std::size_t n) { return nerve(G, n, cap); });
}

/// d_0 .. d_top with d_0 the zero map out of Z[G^(0)].
inline std::vector<IntMatrix> boundary_matrices(const FiniteGroupoid& G, const std::vector<Nerve>& ns,
                                                std::size_t threads = 1) {
  return detail::parallel_map(ns.size(), threads, [&](std::size_t n) {
    return n == 0 ? IntMatrix(0, ns[0].size()) : boundary_matrix_d(G, ns[n], ns[n - 1]);
  });
}

/// H_0 .. H_{n_max}; Z/m coefficients through the universal coefficient theorem.
inline std::vector<FgAbGroup> homology_groups(const FiniteGroupoid& G, std::size_t n_max,
                                              const Coefficients& coeff = {}, std::size_t threads = 1,
                                              std::size_t cap = default_cap()) {
  auto ns = nerves(G, n_max + 1, threads, cap);
  auto d = boundary_matrices(G, ns, threads);
  auto h = detail::parallel_map(n_max + 1, threads, [&](std::size_t n) { return homology_at(d[n], d[n + 1]); });
  if (coeff.integral()) return h;
  std::vector<FgAbGroup> out;
  for (std::size_t n = 0; n <= n_max; ++n)
    out.push_back(coefficients_via_uct(h[n], n == 0 ? FgAbGroup{} : h[n - 1], coeff.modulus));
  return out;
}

/// phi_* : Z[G1^(n)] -> Z[G2^(n)], [g_1..g_n] -> [phi g_1 .. phi g_n].
inline IntMatrix pushforward_matrix(const FiniteGroupoid& G1, const FiniteGroupoid& G2, const GroupoidFunctor& phi,
                                    std::size_t n, std::size_t cap = default_cap()) {
  require_functor(G1, G2, phi);
  Nerve src = nerve(G1, n, cap), dst = nerve(G2, n, cap);
  std::vector<SparseColumn> cols(src.size());
  std::vector<Arrow> img(src.width());
  for (std::size_t j = 0; j < src.size(); ++j) {
    auto t = src[j];
    for (std::size_t k = 0; k < t.size(); ++k) img[k] = phi(t[k]);
    cols[j].push_back({dst.require_index(img), 1});
  }
  return IntMatrix::from_columns(dst.size(), std::move(cols));
}

struct InducedHomologyMap {
  IntMatrix chain;
  Presentation source;
  Presentation target;
  /// Columns: images of source generators in target generator coordinates.
  IntMatrix induced;
};

inline Presentation homology_presentation(const FiniteGroupoid& G, std::size_t n, std::size_t cap = default_cap()) {
  IntMatrix d_out = n == 0 ? IntMatrix(0, nerve_size(G, 0, cap)) : boundary_matrix_d(G, n, cap);
  return homology_presentation(d_out, boundary_matrix_d(G, n + 1, cap));
}

inline InducedHomologyMap induced_homology_map(const FiniteGroupoid& G1, const FiniteGroupoid& G2,
                                               const GroupoidFunctor& phi, std::size_t n,
                                               std::size_t cap = default_cap()) {
  IntMatrix chain = pushforward_matrix(G1, G2, phi, n, cap);
  Presentation src = homology_presentation(G1, n, cap), dst = homology_presentation(G2, n, cap);
  IntMatrix m = src.induced(chain, dst);
  return {std::move(chain), std::move(src), std::move(dst), std::move(m)};
}

struct ZActionHomology {
  FgAbGroup h0, h1, coh0, coh1;
};

/// e_x -> e_{P(x)}.
inline IntMatrix permutation_matrix(const Permutation& perm) {
  if (!detail::is_permutation(perm)) throw Error(ErrorCode::NotAPermutation, "not a bijection of {0..n-1}");
  IntMatrix m(perm.size(), perm.size());
  for (std::size_t x = 0; x < perm.size(); ++x) m.add(perm[x], x, 1);
  return m;
}

/// Two-term complex Z[X] --(id - P_*)--> Z[X] and its dual.
inline ZActionHomology z_action_homology(const Permutation& perm) {
  IntMatrix d = IntMatrix::identity(perm.size()) - permutation_matrix(perm);
  IntMatrix dt = d.transpose();
  return {cokernel_group(d), kernel_group(d), kernel_group(dt), cokernel_group(dt)};
}

struct OdometerHomology {
  std::size_t p = 0, depth_max = 0;
  /// Index d-1 holds depth d.
  std::vector<FgAbGroup> h0, h1;
  /// Index d-1 holds the map depth d -> d+1 in normalized generators: [chi_0] for H_0, the
  /// all-ones class for H_1.
  std::vector<IntMatrix> h0_maps, h1_maps;
  /// Refinement commutes with id - P at every depth.
  bool chain_maps_commute = true;
  /// Tower of H_0 with the last computed map as stationary tail (valid when all maps agree).
  std::optional<ColimitGroup> h0_colimit;
  bool h0_maps_stationary = false;
  FgAbGroup h1_stable;
  bool h1_stabilized = false;
};

/// Refinement Z[p^d cylinders] -> Z[p^{d+1} cylinders], chi_i -> sum_{j = i mod p^d} chi_j.
inline IntMatrix cylinder_refinement(std::size_t p, std::size_t d) {
  std::size_t lo = 1;
  for (std::size_t i = 0; i < d; ++i) lo *= p;
  IntMatrix m(lo * p, lo);
  for (std::size_t j = 0; j < lo * p; ++j) m.add(j, j % lo, 1);
  return m;
}

inline OdometerHomology odometer_homology(std::size_t p, std::size_t depth_max, std::size_t cap = default_cap()) {
  if (depth_max < 1) throw Error(ErrorCode::DepthTooLarge, "depth_max must be at least 1");
  OdometerSystem sys = odometer_system(p, depth_max, cap);
  OdometerHomology rep;
  rep.p = p;
  rep.depth_max = depth_max;
  std::vector<IntMatrix> diff;
  std::vector<Presentation> coker, ker;
  std::vector<Integer> s0, s1;
  for (std::size_t d = 1; d <= depth_max; ++d) {
    std::size_t k = sys.cylinders(d);
    IntMatrix dd = IntMatrix::identity(k) - permutation_matrix(sys.perms[d - 1]);
    coker.emplace_back(IntMatrix::identity(k), dd);
    ker.emplace_back(kernel_basis(dd), IntMatrix(k, 0));
    rep.h0.push_back(coker.back().group());
    rep.h1.push_back(ker.back().group());
    Vector chi0(k, 0), ones(k, 1);
    chi0[0] = 1;
    auto c0 = coker.back().coordinates(chi0);
    auto c1 = ker.back().coordinates(ones);
    s0.push_back(c0.size() == 1 ? c0[0] : Integer(0));
    s1.push_back(c1.size() == 1 ? c1[0] : Integer(0));
    diff.push_back(std::move(dd));
  }
  for (std::size_t d = 1; d < depth_max; ++d) {
    IntMatrix r = cylinder_refinement(p, d);
    if (r * diff[d - 1] != diff[d] * r) rep.chain_maps_commute = false;
    IntMatrix m0 = coker[d - 1].induced(r, coker[d]);
    IntMatrix m1 = ker[d - 1].induced(r, ker[d]);
    // [chi_0] and the all-ones class generate when their coordinate is a unit
    if (m0.rows() == 1 && m0.cols() == 1 && abs_value(s0[d - 1]) == 1 && abs_value(s0[d]) == 1)
      m0 = IntMatrix::from_dense({{s0[d] * m0.at(0, 0) * s0[d - 1]}});
    if (m1.rows() == 1 && m1.cols() == 1 && abs_value(s1[d - 1]) == 1 && abs_value(s1[d]) == 1)
      m1 = IntMatrix::from_dense({{s1[d] * m1.at(0, 0) * s1[d - 1]}});
    rep.h0_maps.push_back(std::move(m0));
    rep.h1_maps.push_back(std::move(m1));
  }
  rep.h0_maps_stationary = !rep.h0_maps.empty();
  for (const auto& m : rep.h0_maps) rep.h0_maps_stationary = rep.h0_maps_stationary && m == rep.h0_maps.front();
  if (rep.h0_maps_stationary) rep.h0_colimit = ColimitGroup{Tower::direct(rep.h0_maps, rep.h0_maps.front())};
  else if (!rep.h0_maps.empty()) rep.h0_colimit = ColimitGroup{Tower::direct(rep.h0_maps)};
  rep.h1_stable = rep.h1.back();
  rep.h1_stabilized = true;
  for (const auto& m : rep.h1_maps) rep.h1_stabilized = rep.h1_stabilized && m == IntMatrix::identity(m.rows());
  for (const auto& h : rep.h1) rep.h1_stabilized = rep.h1_stabilized && h == rep.h1_stable;
  return rep;
}

}  // namespace groupoidal
