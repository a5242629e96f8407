#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matrix.hpp"

namespace groupoidal {

using Arrow = std::uint32_t;

/// First violated axiom with witnessing arrow ids.
struct Violation {
  std::string axiom;
  std::vector<std::size_t> witness;
  std::string detail;
};

using ValidationResult = std::optional<Violation>;

/// Finite groupoid on arrow ids 0..n-1. The product gh is defined iff src(g) == rng(h).
class FiniteGroupoid {
 public:
  static constexpr std::int32_t undefined = -1;

  FiniteGroupoid() = default;

  FiniteGroupoid(std::vector<Arrow> units, std::vector<Arrow> src, std::vector<Arrow> rng,
                 std::vector<Arrow> inv)
      : units_(std::move(units)), src_(std::move(src)), rng_(std::move(rng)), inv_(std::move(inv)) {
    std::size_t n = src_.size();
    if (rng_.size() != n || inv_.size() != n)
      throw Error(ErrorCode::InvalidGroupoid, "src/rng/inv tables differ in length");
    for (std::size_t g = 0; g < n; ++g)
      if (src_[g] >= n || rng_[g] >= n || inv_[g] >= n)
        throw Error(ErrorCode::InvalidGroupoid, "arrow id out of range at " + std::to_string(g));
    std::sort(units_.begin(), units_.end());
    unit_index_.assign(n, -1);
    for (std::size_t i = 0; i < units_.size(); ++i) {
      if (units_[i] >= n) throw Error(ErrorCode::InvalidGroupoid, "unit id out of range");
      if (i > 0 && units_[i] == units_[i - 1]) throw Error(ErrorCode::InvalidGroupoid, "duplicate unit");
      unit_index_[units_[i]] = static_cast<std::int32_t>(i);
    }
    by_range_.assign(n, {});
    range_pos_.assign(n, 0);
    for (Arrow g = 0; g < n; ++g) {
      range_pos_[g] = static_cast<std::uint32_t>(by_range_[rng_[g]].size());
      by_range_[rng_[g]].push_back(g);
    }
    products_.assign(n, {});
    for (Arrow g = 0; g < n; ++g) products_[g].assign(by_range_[src_[g]].size(), undefined);
  }

  /// Records gh; a product of a non-composable pair is kept for validation to report.
  void set_product(Arrow g, Arrow h, Arrow gh) {
    if (g >= size() || h >= size() || gh >= size())
      throw Error(ErrorCode::InvalidGroupoid, "product id out of range");
    if (src_[g] != rng_[h]) {
      stray_.push_back({g, h, gh});
      return;
    }
    products_[g][range_pos_[h]] = static_cast<std::int32_t>(gh);
  }

  std::size_t size() const { return src_.size(); }
  Arrow src(Arrow g) const { return src_[g]; }
  Arrow rng(Arrow g) const { return rng_[g]; }
  Arrow inv(Arrow g) const { return inv_[g]; }
  bool composable(Arrow g, Arrow h) const { return src_[g] == rng_[h]; }

  /// gh, or `undefined`.
  std::int32_t compose(Arrow g, Arrow h) const {
    if (src_[g] != rng_[h]) return undefined;
    return products_[g][range_pos_[h]];
  }

  /// gh for a composable pair of a validated groupoid.
  Arrow mul(Arrow g, Arrow h) const { return static_cast<Arrow>(products_[g][range_pos_[h]]); }

  const std::vector<Arrow>& units() const { return units_; }
  bool is_unit(Arrow g) const { return unit_index_[g] >= 0; }
  std::size_t unit_index(Arrow u) const {
    if (unit_index_.at(u) < 0) throw Error(ErrorCode::InvalidGroupoid, "arrow is not a unit");
    return static_cast<std::size_t>(unit_index_[u]);
  }

  /// Arrows g with rng(g) == u, increasing.
  const std::vector<Arrow>& arrows_with_range(Arrow u) const { return by_range_[u]; }

  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels) { labels_ = std::move(labels); }

  const std::vector<std::array<Arrow, 3>>& stray_products() const { return stray_; }

 private:
  std::vector<Arrow> units_, src_, rng_, inv_;
  std::vector<std::int32_t> unit_index_;
  std::vector<std::vector<Arrow>> by_range_;
  std::vector<std::uint32_t> range_pos_;
  std::vector<std::vector<std::int32_t>> products_;
  std::vector<std::array<Arrow, 3>> stray_;
  std::vector<std::string> labels_;
};

inline ValidationResult validate_groupoid(const FiniteGroupoid& G) {
  const std::size_t n = G.size();
  auto fail = [](std::string axiom, std::vector<std::size_t> w, std::string detail) {
    return Violation{std::move(axiom), std::move(w), std::move(detail)};
  };
  for (Arrow u : G.units())
    if (G.src(u) != u || G.rng(u) != u) return fail("unit", {u}, "src/rng of a unit must be itself");
  for (Arrow g = 0; g < n; ++g)
    if (!G.is_unit(G.src(g)) || !G.is_unit(G.rng(g)))
      return fail("endpoints", {g}, "src/rng must be units");
  if (!G.stray_products().empty()) {
    const auto& t = G.stray_products().front();
    return fail("composability", {t[0], t[1]}, "product given for a pair with src(g) != rng(h)");
  }
  for (Arrow g = 0; g < n; ++g)
    for (Arrow h : G.arrows_with_range(G.src(g)))
      if (G.compose(g, h) == FiniteGroupoid::undefined)
        return fail("composability", {g, h}, "composable pair without a product");
  for (Arrow g = 0; g < n; ++g)
    for (Arrow h : G.arrows_with_range(G.src(g))) {
      Arrow gh = G.mul(g, h);
      if (G.rng(gh) != G.rng(g) || G.src(gh) != G.src(h))
        return fail("product_endpoints", {g, h}, "rng(gh) = rng(g) and src(gh) = src(h) required");
    }
  for (Arrow g = 0; g < n; ++g)
    if (G.mul(G.rng(g), g) != g || G.mul(g, G.src(g)) != g)
      return fail("identity", {g}, "units must act as identities");
  for (Arrow g = 0; g < n; ++g)
    for (Arrow h : G.arrows_with_range(G.src(g)))
      for (Arrow k : G.arrows_with_range(G.src(h)))
        if (G.mul(G.mul(g, h), k) != G.mul(g, G.mul(h, k)))
          return fail("assoc", {g, h, k}, "(gh)k != g(hk)");
  for (Arrow g = 0; g < n; ++g) {
    Arrow gi = G.inv(g);
    if (G.src(gi) != G.rng(g) || G.rng(gi) != G.src(g) || G.mul(g, gi) != G.rng(g) ||
        G.mul(gi, g) != G.src(g))
      return fail("inverse", {g, gi}, "g g^-1 = rng(g) and g^-1 g = src(g) required");
  }
  return std::nullopt;
}

inline void require_valid(const FiniteGroupoid& G) {
  if (auto v = validate_groupoid(G)) throw Error(ErrorCode::InvalidGroupoid, v->axiom + ": " + v->detail);
}

/// Groupoid homomorphism given by its arrow map.
struct GroupoidFunctor {
  std::vector<Arrow> map;
  Arrow operator()(Arrow g) const { return map[g]; }
};

inline ValidationResult validate_functor(const FiniteGroupoid& G1, const FiniteGroupoid& G2,
                                         const GroupoidFunctor& phi) {
  if (phi.map.size() != G1.size()) return Violation{"domain", {}, "arrow map length != |G1|"};
  for (Arrow g = 0; g < G1.size(); ++g)
    if (phi(g) >= G2.size()) return Violation{"codomain", {g}, "image out of range"};
  for (Arrow u : G1.units())
    if (!G2.is_unit(phi(u))) return Violation{"units", {u}, "unit not sent to a unit"};
  for (Arrow g = 0; g < G1.size(); ++g)
    if (phi(G1.src(g)) != G2.src(phi(g)) || phi(G1.rng(g)) != G2.rng(phi(g)))
      return Violation{"endpoints", {g}, "src/rng not preserved"};
  for (Arrow g = 0; g < G1.size(); ++g)
    for (Arrow h : G1.arrows_with_range(G1.src(g)))
      if (phi(G1.mul(g, h)) != G2.mul(phi(g), phi(h)))
        return Violation{"composition", {g, h}, "phi(gh) != phi(g)phi(h)"};
  return std::nullopt;
}

inline void require_functor(const FiniteGroupoid& G1, const FiniteGroupoid& G2, const GroupoidFunctor& phi) {
  if (auto v = validate_functor(G1, G2, phi))
    throw Error(ErrorCode::InvalidFunctor, v->axiom + ": " + v->detail);
}

inline GroupoidFunctor compose_functors(const GroupoidFunctor& psi, const GroupoidFunctor& phi) {
  GroupoidFunctor out;
  out.map.reserve(phi.map.size());
  for (Arrow g : phi.map) out.map.push_back(psi(g));
  return out;
}

/// Free fibers over the units with arrow actions alpha_g : M_{src g} -> M_{rng g}.
struct GModule {
  /// Indexed by unit position in G.units().
  std::vector<std::size_t> fiber_rank;
  /// Indexed by arrow; shape fiber(rng g) x fiber(src g).
  std::vector<IntMatrix> action;

  std::size_t fiber(const FiniteGroupoid& G, Arrow unit) const { return fiber_rank[G.unit_index(unit)]; }
};

inline ValidationResult validate_module(const FiniteGroupoid& G, const GModule& M) {
  if (M.fiber_rank.size() != G.units().size()) return Violation{"shape", {}, "one fiber rank per unit required"};
  if (M.action.size() != G.size()) return Violation{"shape", {}, "one action matrix per arrow required"};
  for (Arrow g = 0; g < G.size(); ++g) {
    const auto& a = M.action[g];
    if (a.rows() != M.fiber(G, G.rng(g)) || a.cols() != M.fiber(G, G.src(g)))
      return Violation{"shape", {g}, "action must be fiber(rng) x fiber(src)"};
  }
  for (Arrow u : G.units())
    if (M.action[u] != IntMatrix::identity(M.fiber(G, u)))
      return Violation{"unit", {u}, "units must act by the identity"};
  for (Arrow g = 0; g < G.size(); ++g) {
    Integer d = determinant(M.action[g]);
    if (d != 1 && d != -1) return Violation{"unimodular", {g}, "determinant " + d.str()};
  }
  for (Arrow g = 0; g < G.size(); ++g)
    for (Arrow h : G.arrows_with_range(G.src(g)))
      if (M.action[G.mul(g, h)] != M.action[g] * M.action[h])
        return Violation{"functor", {g, h}, "alpha(gh) != alpha(g) alpha(h)"};
  for (Arrow g = 0; g < G.size(); ++g)
    if (M.action[G.inv(g)] * M.action[g] != IntMatrix::identity(M.fiber(G, G.src(g))))
      return Violation{"inverse", {g}, "alpha(g^-1) alpha(g) != id"};
  return std::nullopt;
}

inline void require_module(const FiniteGroupoid& G, const GModule& M) {
  if (auto v = validate_module(G, M)) throw Error(ErrorCode::InvalidModule, v->axiom + ": " + v->detail);
}

}  // namespace groupoidal
