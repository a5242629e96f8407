#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cohomology.hpp"
#include "groupoid.hpp"
#include "homology.hpp"
#include "lattice.hpp"
#include "nerve.hpp"
#include "zlinalg.hpp"

namespace groupoidal {

/// Homomorphism c : G -> Z given by its value on each arrow.
struct ZCocycle {
  std::vector<std::int64_t> value;
  std::int64_t operator()(Arrow g) const { return value[g]; }
};

inline ValidationResult validate_cocycle(const FiniteGroupoid& G, const ZCocycle& c) {
  if (c.value.size() != G.size()) return Violation{"shape", {}, "one value per arrow required"};
  for (Arrow u : G.units())
    if (c(u) != 0) return Violation{"unit", {u}, "c(unit) must be 0"};
  for (Arrow g = 0; g < G.size(); ++g)
    for (Arrow h : G.arrows_with_range(G.src(g)))
      if (c(G.mul(g, h)) != c(g) + c(h)) return Violation{"additivity", {g, h}, "c(gh) != c(g) + c(h)"};
  return std::nullopt;
}

inline void require_cocycle(const FiniteGroupoid& G, const ZCocycle& c) {
  if (auto v = validate_cocycle(G, c)) throw Error(ErrorCode::InvalidCocycle, v->axiom + ": " + v->detail);
}

/// c(g) = f(r g) - f(s g) for the potential f on units.
inline ZCocycle potential_cocycle(const FiniteGroupoid& G, const std::vector<std::int64_t>& f) {
  if (f.size() != G.units().size()) throw Error(ErrorCode::InvalidCocycle, "one potential value per unit required");
  ZCocycle c;
  for (Arrow g = 0; g < G.size(); ++g)
    c.value.push_back(f[G.unit_index(G.rng(g))] - f[G.unit_index(G.src(g))]);
  return c;
}

/// f with c(g) = f(r g) - f(s g), zero at the least unit of each orbit. Exists for every
/// cocycle on a finite groupoid (isotropy is finite, so c vanishes on it).
inline std::vector<std::int64_t> cocycle_potential(const FiniteGroupoid& G, const ZCocycle& c) {
  require_cocycle(G, c);
  std::size_t nu = G.units().size();
  std::vector<std::optional<std::int64_t>> f(nu);
  for (std::size_t i = 0; i < nu; ++i) {
    if (f[i]) continue;
    f[i] = 0;
    std::vector<Arrow> stack{G.units()[i]};
    while (!stack.empty()) {
      Arrow u = stack.back();
      stack.pop_back();
      for (Arrow g : G.arrows_with_range(u)) {
        // f(s g) = f(r g) - c(g)
        std::size_t s = G.unit_index(G.src(g));
        if (!f[s]) {
          f[s] = *f[G.unit_index(u)] - c(g);
          stack.push_back(G.src(g));
        }
      }
    }
  }
  std::vector<std::int64_t> out;
  for (auto& v : f) out.push_back(*v);
  for (Arrow g = 0; g < G.size(); ++g)
    if (c(g) != out[G.unit_index(G.rng(g))] - out[G.unit_index(G.src(g))])
      throw Error(ErrorCode::InvalidCocycle, "cocycle is not a coboundary");
  return out;
}

/// Levels lo..hi of G x_c Z: arrows (g, k) with k and k + c(g) in [lo, hi],
/// r(g, k) = (r g, k), s(g, k) = (s g, k + c(g)), (g, k)(h, k + c(g)) = (gh, k).
/// Ids are level-major, then by base arrow.
struct SkewWindow {
  std::int64_t lo = 0, hi = -1;
  FiniteGroupoid groupoid;
  /// (base arrow, level) of each window arrow.
  std::vector<std::pair<Arrow, std::int64_t>> labels;
  /// (g, k) -> (g, k+1), or -1 when that leaves the window.
  std::vector<std::int64_t> shift;
  /// (g, k) -> g.
  GroupoidFunctor projection;
};

inline SkewWindow skew_window(const FiniteGroupoid& G, const ZCocycle& c, std::int64_t lo, std::int64_t hi,
                              std::size_t cap = default_cap()) {
  require_cocycle(G, c);
  if (hi < lo) throw Error(ErrorCode::WindowTooLarge, "empty window");
  std::size_t levels = static_cast<std::size_t>(hi - lo + 1);
  if (G.size() != 0 && levels > cap / G.size())
    throw Error(ErrorCode::WindowTooLarge, "window has more than " + std::to_string(cap) + " arrows");
  SkewWindow w;
  w.lo = lo;
  w.hi = hi;
  std::vector<std::int64_t> id(levels * G.size(), -1);
  auto slot = [&](Arrow g, std::int64_t k) { return static_cast<std::size_t>(k - lo) * G.size() + g; };
  auto inside = [&](std::int64_t k) { return lo <= k && k <= hi; };
  for (std::int64_t k = lo; k <= hi; ++k)
    for (Arrow g = 0; g < G.size(); ++g)
      if (inside(k + c(g))) {
        id[slot(g, k)] = static_cast<std::int64_t>(w.labels.size());
        w.labels.push_back({g, k});
      }
  auto at = [&](Arrow g, std::int64_t k) { return static_cast<Arrow>(id[slot(g, k)]); };
  std::size_t n = w.labels.size();
  std::vector<Arrow> units, src(n), rng(n), inv(n);
  std::vector<std::string> names;
  for (std::size_t a = 0; a < n; ++a) {
    auto [g, k] = w.labels[a];
    if (G.is_unit(g)) units.push_back(static_cast<Arrow>(a));
    rng[a] = at(G.rng(g), k);
    src[a] = at(G.src(g), k + c(g));
    inv[a] = at(G.inv(g), k + c(g));
    w.shift.push_back(inside(k + 1) && inside(k + 1 + c(g)) ? static_cast<std::int64_t>(at(g, k + 1)) : -1);
    w.projection.map.push_back(g);
    names.push_back((G.labels().empty() ? std::to_string(g) : G.labels()[g]) + "@" + std::to_string(k));
  }
  w.groupoid = detail::build_groupoid(units, src, rng, inv, [&](Arrow a, Arrow b) {
    return at(G.mul(w.labels[a].first, w.labels[b].first), w.labels[a].second);
  }, names);
  return w;
}

/// Symmetric window [-K, K].
inline SkewWindow skew_window(const FiniteGroupoid& G, const ZCocycle& c, std::int64_t radius,
                              std::size_t cap = default_cap()) {
  return skew_window(G, c, -radius, radius, cap);
}

/// Functor from `small` into `big` sending (g, k) to (g, k + offset).
inline GroupoidFunctor level_functor(const SkewWindow& small, const SkewWindow& big, std::int64_t offset) {
  std::size_t levels = static_cast<std::size_t>(big.hi - big.lo + 1), base = 0;
  for (const auto& [g, k] : big.labels) base = std::max<std::size_t>(base, g + 1);
  for (const auto& [g, k] : small.labels) base = std::max<std::size_t>(base, g + 1);
  std::vector<std::int64_t> id(levels * base, -1);
  for (std::size_t a = 0; a < big.labels.size(); ++a)
    id[static_cast<std::size_t>(big.labels[a].second - big.lo) * base + big.labels[a].first] = static_cast<std::int64_t>(a);
  GroupoidFunctor f;
  for (const auto& [g, k] : small.labels) {
    std::int64_t kk = k + offset;
    std::int64_t target = kk < big.lo || kk > big.hi ? -1 : id[static_cast<std::size_t>(kk - big.lo) * base + g];
    if (target < 0) throw Error(ErrorCode::InvalidFunctor, "level map leaves the target window");
    f.map.push_back(static_cast<Arrow>(target));
  }
  return f;
}

/// Short exact sequence 0 -> A -f-> B -g-> C -> 0 of (co)chain complexes. out[n] leaves degree n:
/// d_n (with d_0 = 0) for chains, delta^n for cochains.
struct ShortExactSequence {
  int direction = -1;  // -1 chains, +1 cochains
  std::vector<IntMatrix> a, b, c;
  std::vector<IntMatrix> f, g;
};

struct LesDegree {
  std::size_t degree = 0;
  FgAbGroup h_a, h_b, h_c;
  /// Image contained in kernel at H(A), H(B), H(C) of this degree.
  bool composite_zero_a = false, composite_zero_b = false, composite_zero_c = false;
  /// Image equals kernel.
  bool exact_a = false, exact_b = false, exact_c = false;
  FgAbGroup ker_f, coker_f, ker_g, coker_g;
  /// Image of the connecting map out of H_n(C), inside H_{n+direction}(A).
  FgAbGroup connecting_image;
  std::string failure;

  bool ok() const { return exact_a && exact_b && exact_c && composite_zero_a && composite_zero_b && composite_zero_c; }
};

namespace detail {

inline IntMatrix incoming(const std::vector<IntMatrix>& out, int direction, std::size_t n) {
  if (direction < 0) return out.at(n + 1);
  return n == 0 ? IntMatrix(out.at(0).cols(), 0) : out.at(n - 1);
}

/// Basis of {Z y : Y y in span(T)} where Y holds the images of the columns of Z.
inline IntMatrix preimage_of_images(const IntMatrix& z, const IntMatrix& y, const IntMatrix& t) {
  IntMatrix ker = kernel_basis(hstack(y, image_basis(t)));
  return z * ker.select_rows(0, z.cols());
}

inline IntMatrix span_basis(const IntMatrix& a, const IntMatrix& b) { return image_basis(hstack(a, b)); }

inline bool contains(const IntMatrix& big, const IntMatrix& small) {
  return lattice_contains(ColumnReduction(big), small);
}

/// Connecting map on a basis of cycles of C in degree n, landing in degree n + direction of A.
inline IntMatrix connecting(const ShortExactSequence& s, std::size_t n, const IntMatrix& cycles_c) {
  std::size_t m = static_cast<std::size_t>(static_cast<std::int64_t>(n) + s.direction);
  ColumnReduction lift_g(s.g.at(n)), lift_f(s.f.at(m));
  IntMatrix out(s.f.at(m).cols(), 0);
  for (std::size_t j = 0; j < cycles_c.cols(); ++j) {
    auto y = lift_g.solve(cycles_c.column(j));
    if (!y) throw Error(ErrorCode::NoSolution, "cycle of C does not lift through g in degree " + std::to_string(n));
    IntMatrix yb = IntMatrix::from_columns(s.g.at(n).cols(), {*y});
    IntMatrix w = s.b.at(n) * yb;
    auto x = lift_f.solve(w.column(0));
    if (!x) throw Error(ErrorCode::NoSolution, "boundary of the lift is not in the image of f");
    out.append_column(std::move(*x));
  }
  return out;
}

}  // namespace detail

/// Checks the long exact sequence of `s` in degrees 0..n_max exactly. Needs out and chain
/// maps through degree n_max + 1.
inline std::vector<LesDegree> verify_les(const ShortExactSequence& s, std::size_t n_max) {
  std::vector<LesDegree> out;
  auto dir = s.direction;
  auto cycles = [&](const std::vector<IntMatrix>& x, std::size_t n) { return kernel_basis(x.at(n)); };
  auto bounds = [&](const std::vector<IntMatrix>& x, std::size_t n) { return detail::incoming(x, dir, n); };
  for (std::size_t n = 0; n <= n_max; ++n) {
    LesDegree d;
    d.degree = n;
    try {
      IntMatrix za = cycles(s.a, n), zb = cycles(s.b, n), zc = cycles(s.c, n);
      IntMatrix ba = image_basis(bounds(s.a, n)), bb = image_basis(bounds(s.b, n)), bc = image_basis(bounds(s.c, n));
      d.h_a = homology_at(s.a.at(n), bounds(s.a, n));
      d.h_b = homology_at(s.b.at(n), bounds(s.b, n));
      d.h_c = homology_at(s.c.at(n), bounds(s.c, n));
      // at H(B): ker g_* vs im f_*
      IntMatrix k1 = detail::preimage_of_images(zb, s.g.at(n) * zb, bc);
      IntMatrix i1 = detail::span_basis(s.f.at(n) * za, bb);
      d.composite_zero_b = detail::contains(k1, i1);
      d.exact_b = d.composite_zero_b && detail::contains(i1, k1);
      d.ker_g = quotient_group(k1, bb);
      d.coker_f = quotient_group(zb, i1);
      // at H(C): ker connecting vs im g_*
      IntMatrix i2 = detail::span_basis(s.g.at(n) * zb, bc);
      IntMatrix k2 = zc;
      bool has_target = dir > 0 || n > 0;
      if (has_target) {
        std::size_t m = static_cast<std::size_t>(static_cast<std::int64_t>(n) + dir);
        IntMatrix delta = detail::connecting(s, n, zc);
        IntMatrix bam = image_basis(bounds(s.a, m));
        k2 = detail::preimage_of_images(zc, delta, bam);
        d.connecting_image = quotient_group(detail::span_basis(delta, bam), bam);
      }
      d.composite_zero_c = detail::contains(k2, i2);
      d.exact_c = d.composite_zero_c && detail::contains(i2, k2);
      d.coker_g = quotient_group(zc, i2);
      // at H(A): ker f_* vs im of the connecting map arriving in degree n
      IntMatrix k3 = detail::preimage_of_images(za, s.f.at(n) * za, bb);
      IntMatrix i3 = ba;
      if (dir < 0 || n > 0) {
        std::size_t p = static_cast<std::size_t>(static_cast<std::int64_t>(n) - dir);
        i3 = detail::span_basis(detail::connecting(s, p, cycles(s.c, p)), ba);
      }
      d.composite_zero_a = detail::contains(k3, i3);
      d.exact_a = d.composite_zero_a && detail::contains(i3, k3);
      d.ker_f = quotient_group(k3, ba);
    } catch (const Error& e) {
      d.failure = e.what();
    }
    out.push_back(std::move(d));
  }
  return out;
}

enum class LesMode { homology, cohomology };

inline std::string to_string(LesMode m) { return m == LesMode::homology ? "homology" : "cohomology"; }

/// Sequences of the windowed skew product: with W = [-R, R] and W' = [-R, R-1],
/// homology 0 -> C(W') -(iota - shift)_*-> C(W) -pi_*-> C(G) -> 0 and
/// cohomology 0 -> C(G, M) -pi^*-> C(W, pi^*M) -(iota - shift)^*-> C(W', pi^*M) -> 0.
inline ShortExactSequence skew_sequence(const FiniteGroupoid& G, const ZCocycle& c, std::int64_t radius,
                                        std::size_t n_max, LesMode mode, const GModule& M,
                                        std::size_t threads = 1, std::size_t cap = default_cap()) {
  SkewWindow w = skew_window(G, c, -radius, radius, cap);
  SkewWindow wp = skew_window(G, c, -radius, radius - 1, cap);
  GroupoidFunctor iota = level_functor(wp, w, 0), shift = level_functor(wp, w, 1);
  GroupoidFunctor pi = w.projection;
  std::size_t top = n_max + 1;
  ShortExactSequence s;
  if (mode == LesMode::homology) {
    s.direction = -1;
    s.a = boundary_matrices(wp.groupoid, nerves(wp.groupoid, top, threads, cap), threads);
    s.b = boundary_matrices(w.groupoid, nerves(w.groupoid, top, threads, cap), threads);
    s.c = boundary_matrices(G, nerves(G, top, threads, cap), threads);
    s.f = detail::parallel_map(top + 1, threads, [&](std::size_t n) {
      return pushforward_matrix(wp.groupoid, w.groupoid, iota, n, cap) -
             pushforward_matrix(wp.groupoid, w.groupoid, shift, n, cap);
    });
    s.g = detail::parallel_map(top + 1, threads, [&](std::size_t n) {
      return pushforward_matrix(w.groupoid, G, pi, n, cap);
    });
  } else {
    s.direction = 1;
    GModule mw = pullback_module(w.groupoid, G, pi, M);
    GModule mwp = pullback_module(wp.groupoid, w.groupoid, iota, mw);
    auto coboundaries = [&](const FiniteGroupoid& X, const GModule& MX) {
      auto sp = detail::parallel_map(top + 2, threads, [&](std::size_t n) { return cochain_space(X, MX, n, cap); });
      return detail::parallel_map(top + 1, threads, [&](std::size_t n) {
        return cocycle_coboundary_matrix(X, MX, sp[n], sp[n + 1]);
      });
    };
    s.a = coboundaries(G, M);
    s.b = coboundaries(w.groupoid, mw);
    s.c = coboundaries(wp.groupoid, mwp);
    s.f = detail::parallel_map(top + 1, threads, [&](std::size_t n) {
      return cochain_pullback_matrix(w.groupoid, G, pi, M, n, cap);
    });
    s.g = detail::parallel_map(top + 1, threads, [&](std::size_t n) {
      return cochain_pullback_matrix(wp.groupoid, w.groupoid, iota, mw, n, cap) -
             cochain_pullback_matrix(wp.groupoid, w.groupoid, shift, mw, n, cap);
    });
  }
  return s;
}

struct LesWindowCheck {
  std::int64_t radius = 0;
  std::vector<LesDegree> degrees;

  bool ok() const {
    for (const auto& d : degrees)
      if (!d.ok()) return false;
    return true;
  }
  /// ker / coker of id - shift on (co)homology: f in homology mode, g in cohomology mode.
  FgAbGroup shift_kernel(LesMode m, std::size_t n) const { return m == LesMode::homology ? degrees[n].ker_f : degrees[n].ker_g; }
  FgAbGroup shift_cokernel(LesMode m, std::size_t n) const {
    return m == LesMode::homology ? degrees[n].coker_f : degrees[n].coker_g;
  }
};

struct LesReport {
  LesMode mode = LesMode::homology;
  std::size_t n_max = 0;
  std::int64_t window = 0, guard = 0;
  std::int64_t max_abs_c = 0;
  /// n_max (1 + max|c|): the conservative radius heuristic, reported next to the exact lift test.
  std::int64_t guard_heuristic = 0;
  bool heuristic_satisfied = false;
  std::vector<std::int64_t> potential;
  std::vector<FgAbGroup> base;
  LesWindowCheck full, band;
  /// Shift kernel/cokernel agree between the guard band and the full window.
  bool stable = false;
  /// H_0 (resp. H^0) of G recovered from the windows: coker (resp. ker) of id - shift.
  bool h0_bookkeeping = false;
  std::vector<std::string> notes;

  bool ok() const { return full.ok() && band.ok() && stable && h0_bookkeeping; }
};

/// Largest level spread of a composable string of degree <= n over G.
inline std::int64_t max_level_spread(const FiniteGroupoid& G, const ZCocycle& c, std::size_t n,
                                     std::size_t cap = default_cap()) {
  std::int64_t spread = 0;
  for (std::size_t d = 1; d <= n; ++d) {
    Nerve ns = nerve(G, d, cap);
    for (std::size_t j = 0; j < ns.size(); ++j) {
      std::int64_t level = 0, lo = 0, hi = 0;
      for (Arrow g : ns[j]) {
        level += c(g);
        lo = std::min(lo, level);
        hi = std::max(hi, level);
      }
      spread = std::max(spread, hi - lo);
    }
  }
  return spread;
}

inline LesReport les_verify(const FiniteGroupoid& G, const ZCocycle& c, std::int64_t window, std::int64_t guard,
                            std::size_t n_max, LesMode mode, std::optional<GModule> module = std::nullopt,
                            std::size_t threads = 1, std::size_t cap = default_cap()) {
  require_cocycle(G, c);
  GModule M = module ? *module : constant_module(G, 1);
  require_module(G, M);
  LesReport rep;
  rep.mode = mode;
  rep.n_max = n_max;
  rep.window = window;
  rep.guard = guard;
  for (auto v : c.value) rep.max_abs_c = std::max(rep.max_abs_c, v < 0 ? -v : v);
  rep.guard_heuristic = static_cast<std::int64_t>(n_max) * (1 + rep.max_abs_c);
  rep.heuristic_satisfied = guard >= rep.guard_heuristic;
  if (guard < 1 || window <= guard)
    throw Error(ErrorCode::GuardTooSmall, "need 1 <= guard < window, got guard " + std::to_string(guard) +
                                              " window " + std::to_string(window));
  // every base string of degree <= n_max + 1 must lift into the sub-window [-guard, guard - 1]
  std::int64_t spread = max_level_spread(G, c, n_max + 1, cap);
  if (spread > 2 * guard - 1)
    throw Error(ErrorCode::GuardTooSmall, "strings of degree <= " + std::to_string(n_max + 1) + " span " +
                                              std::to_string(spread) + " levels; guard " + std::to_string(guard) +
                                              " leaves room for " + std::to_string(2 * guard - 1));
  rep.potential = cocycle_potential(G, c);
  rep.base = mode == LesMode::homology ? homology_groups(G, n_max, {}, threads, cap)
                                       : cocycle_cohomology(G, M, n_max, threads, cap);
  auto check = [&](std::int64_t radius) {
    LesWindowCheck w;
    w.radius = radius;
    w.degrees = verify_les(skew_sequence(G, c, radius, n_max, mode, M, threads, cap), n_max);
    return w;
  };
  rep.full = check(window);
  rep.band = check(guard);
  rep.stable = true;
  for (std::size_t n = 0; n <= n_max; ++n)
    rep.stable = rep.stable && rep.full.shift_kernel(mode, n) == rep.band.shift_kernel(mode, n) &&
                 rep.full.shift_cokernel(mode, n) == rep.band.shift_cokernel(mode, n);
  rep.h0_bookkeeping = mode == LesMode::homology ? rep.full.degrees[0].coker_f == rep.base[0]
                                                 : rep.full.degrees[0].ker_g == rep.base[0];
  rep.notes.push_back(
      "every Z-valued cocycle on a finite groupoid is a coboundary c = f o r - f o s; these checks do not "
      "cover cocycles of minimal Cantor systems");
  rep.notes.push_back("guard radius heuristic n_max*(1+max|c|) = " + std::to_string(rep.guard_heuristic) +
                      (rep.heuristic_satisfied ? " (met)" : " (not met)") +
                      "; windows are refused only when a base string of degree <= n_max+1 fails to lift");
  return rep;
}

}  // namespace groupoidal
