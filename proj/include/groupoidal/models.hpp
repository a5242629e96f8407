#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "groupoid.hpp"
#include "limits.hpp"
#include "nerve.hpp"

namespace groupoidal {

using CayleyTable = std::vector<std::vector<std::size_t>>;
using Permutation = std::vector<std::size_t>;

namespace detail {

/// Builds a groupoid from tables and a product rule, then validates it.
inline FiniteGroupoid build_groupoid(std::vector<Arrow> units, std::vector<Arrow> src, std::vector<Arrow> rng,
                                     std::vector<Arrow> inv, const std::function<Arrow(Arrow, Arrow)>& mul,
                                     std::vector<std::string> labels = {}) {
  FiniteGroupoid G(std::move(units), std::move(src), std::move(rng), std::move(inv));
  for (Arrow g = 0; g < G.size(); ++g)
    for (Arrow h : G.arrows_with_range(G.src(g))) G.set_product(g, h, mul(g, h));
  G.set_labels(std::move(labels));
  require_valid(G);
  return G;
}

inline bool is_permutation(const Permutation& p) {
  std::vector<char> seen(p.size(), 0);
  for (auto v : p) {
    if (v >= p.size() || seen[v]) return false;
    seen[v] = 1;
  }
  return true;
}

struct GroupInfo {
  std::size_t identity;
  std::vector<std::size_t> inverse;
};

/// Checks the group axioms; throws NotAGroup naming the first failure.
inline GroupInfo check_group(const CayleyTable& t) {
  std::size_t k = t.size();
  if (k == 0) throw Error(ErrorCode::NotAGroup, "empty table");
  for (std::size_t a = 0; a < k; ++a) {
    if (t[a].size() != k) throw Error(ErrorCode::NotAGroup, "table is not square");
    for (auto v : t[a])
      if (v >= k) throw Error(ErrorCode::NotAGroup, "entry out of range");
  }
  std::size_t e = k;
  for (std::size_t a = 0; a < k && e == k; ++a) {
    bool ok = true;
    for (std::size_t b = 0; b < k && ok; ++b) ok = t[a][b] == b && t[b][a] == b;
    if (ok) e = a;
  }
  if (e == k) throw Error(ErrorCode::NotAGroup, "no identity element");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t c = 0; c < k; ++c)
        if (t[t[a][b]][c] != t[a][t[b][c]])
          throw Error(ErrorCode::NotAGroup, "associativity fails at (" + std::to_string(a) + "," +
                                                std::to_string(b) + "," + std::to_string(c) + ")");
  GroupInfo info{e, std::vector<std::size_t>(k, k)};
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b)
      if (t[a][b] == e && t[b][a] == e) info.inverse[a] = b;
    if (info.inverse[a] == k) throw Error(ErrorCode::NotAGroup, "element " + std::to_string(a) + " has no inverse");
  }
  return info;
}

}  // namespace detail

/// k units, no other arrows. Arrow i is the point i.
inline FiniteGroupoid space_groupoid(std::size_t k) {
  std::vector<Arrow> ids(k);
  std::iota(ids.begin(), ids.end(), 0);
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < k; ++i) labels.push_back("x" + std::to_string(i));
  return detail::build_groupoid(ids, ids, ids, ids, [](Arrow g, Arrow) { return g; }, labels);
}

/// Group as a one-unit groupoid; arrow ids are the table indices.
inline FiniteGroupoid group_groupoid(const CayleyTable& t) {
  auto info = detail::check_group(t);
  std::size_t k = t.size();
  std::vector<Arrow> e(k, static_cast<Arrow>(info.identity)), inv(k);
  for (std::size_t a = 0; a < k; ++a) inv[a] = static_cast<Arrow>(info.inverse[a]);
  return detail::build_groupoid({static_cast<Arrow>(info.identity)}, e, e, inv,
                                [&](Arrow g, Arrow h) { return static_cast<Arrow>(t[g][h]); });
}

inline CayleyTable cyclic_table(std::size_t m) {
  CayleyTable t(m, std::vector<std::size_t>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) t[a][b] = (a + b) % m;
  return t;
}

/// Permutations of {0,1,2} in lexicographic order; (st)(i) = s(t(i)).
inline std::vector<Permutation> s3_elements() {
  std::vector<Permutation> el;
  Permutation p{0, 1, 2};
  do el.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return el;
}

inline CayleyTable s3_table() {
  auto el = s3_elements();
  CayleyTable t(6, std::vector<std::size_t>(6));
  for (std::size_t a = 0; a < 6; ++a)
    for (std::size_t b = 0; b < 6; ++b) {
      Permutation c(3);
      for (std::size_t i = 0; i < 3; ++i) c[i] = el[a][el[b][i]];
      t[a][b] = static_cast<std::size_t>(std::find(el.begin(), el.end(), c) - el.begin());
    }
  return t;
}

inline CayleyTable klein_table() {
  CayleyTable t(4, std::vector<std::size_t>(4));
  for (std::size_t a = 0; a < 4; ++a)
    for (std::size_t b = 0; b < 4; ++b) t[a][b] = a ^ b;
  return t;
}

/// R(psi) for psi : Y -> X onto {0..x_count-1}. Arrow ids enumerate the pairs (y1, y2) with
/// psi(y1) == psi(y2) lexicographically; rng = (y1,y1), src = (y2,y2).
inline FiniteGroupoid pair_groupoid_from_map(const std::vector<std::size_t>& psi, std::size_t x_count) {
  std::vector<char> hit(x_count, 0);
  for (auto x : psi) {
    if (x >= x_count) throw Error(ErrorCode::NotSurjective, "value outside X");
    hit[x] = 1;
  }
  for (std::size_t x = 0; x < x_count; ++x)
    if (!hit[x]) throw Error(ErrorCode::NotSurjective, "point " + std::to_string(x) + " has empty fiber");
  std::size_t ny = psi.size();
  std::vector<std::vector<std::int64_t>> id(ny, std::vector<std::int64_t>(ny, -1));
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < ny; ++a)
    for (std::size_t b = 0; b < ny; ++b)
      if (psi[a] == psi[b]) {
        id[a][b] = static_cast<std::int64_t>(pairs.size());
        pairs.push_back({a, b});
      }
  std::size_t n = pairs.size();
  std::vector<Arrow> units, src(n), rng(n), inv(n);
  std::vector<std::string> labels;
  for (std::size_t g = 0; g < n; ++g) {
    auto [a, b] = pairs[g];
    if (a == b) units.push_back(static_cast<Arrow>(g));
    rng[g] = static_cast<Arrow>(id[a][a]);
    src[g] = static_cast<Arrow>(id[b][b]);
    inv[g] = static_cast<Arrow>(id[b][a]);
    labels.push_back("(" + std::to_string(a) + "," + std::to_string(b) + ")");
  }
  return detail::build_groupoid(
      units, src, rng, inv,
      [&](Arrow g, Arrow h) { return static_cast<Arrow>(id[pairs[g].first][pairs[h].second]); }, labels);
}

inline FiniteGroupoid pair_groupoid(std::size_t k) { return pair_groupoid_from_map(std::vector<std::size_t>(k, 0), 1); }

/// R(psi) where psi has consecutive fibers of the given sizes.
inline FiniteGroupoid pair_groupoid_from_fibers(const std::vector<std::size_t>& sizes) {
  std::vector<std::size_t> psi;
  for (std::size_t x = 0; x < sizes.size(); ++x) psi.insert(psi.end(), sizes[x], x);
  return pair_groupoid_from_map(psi, sizes.size());
}

/// Gamma x| X with arrows (gamma, x), id = gamma * |X| + x, src = x, rng = gamma x.
/// perms[gamma][x] = gamma . x.
inline FiniteGroupoid action_groupoid(const CayleyTable& t, const std::vector<Permutation>& perms) {
  auto info = detail::check_group(t);
  std::size_t k = t.size();
  if (perms.size() != k) throw Error(ErrorCode::NotAnAction, "one permutation per group element required");
  std::size_t nx = perms.empty() ? 0 : perms[0].size();
  for (const auto& p : perms)
    if (p.size() != nx || !detail::is_permutation(p)) throw Error(ErrorCode::NotAnAction, "not a permutation");
  for (std::size_t x = 0; x < nx; ++x)
    if (perms[info.identity][x] != x) throw Error(ErrorCode::NotAnAction, "identity does not act trivially");
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t x = 0; x < nx; ++x)
        if (perms[t[a][b]][x] != perms[a][perms[b][x]])
          throw Error(ErrorCode::NotAnAction, "(ab).x != a.(b.x) for a=" + std::to_string(a) +
                                                  " b=" + std::to_string(b) + " x=" + std::to_string(x));
  std::size_t n = k * nx;
  auto arrow = [&](std::size_t gamma, std::size_t x) { return static_cast<Arrow>(gamma * nx + x); };
  std::vector<Arrow> units, src(n), rng(n), inv(n);
  std::vector<std::string> labels;
  for (std::size_t gamma = 0; gamma < k; ++gamma)
    for (std::size_t x = 0; x < nx; ++x) {
      Arrow g = arrow(gamma, x);
      if (gamma == info.identity) units.push_back(g);
      src[g] = arrow(info.identity, x);
      rng[g] = arrow(info.identity, perms[gamma][x]);
      inv[g] = arrow(info.inverse[gamma], perms[gamma][x]);
      labels.push_back("(" + std::to_string(gamma) + "," + std::to_string(x) + ")");
    }
  return detail::build_groupoid(
      units, src, rng, inv,
      [&](Arrow g, Arrow h) { return arrow(t[g / nx][h / nx], h % nx); }, labels);
}

/// G1 then G2 with G2's ids shifted by |G1|.
inline FiniteGroupoid disjoint_union(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  Arrow off = static_cast<Arrow>(a.size());
  std::size_t n = a.size() + b.size();
  std::vector<Arrow> units, src(n), rng(n), inv(n);
  for (Arrow u : a.units()) units.push_back(u);
  for (Arrow u : b.units()) units.push_back(u + off);
  for (Arrow g = 0; g < a.size(); ++g) src[g] = a.src(g), rng[g] = a.rng(g), inv[g] = a.inv(g);
  for (Arrow g = 0; g < b.size(); ++g)
    src[g + off] = b.src(g) + off, rng[g + off] = b.rng(g) + off, inv[g + off] = b.inv(g) + off;
  std::vector<std::string> labels;
  if (!a.labels().empty() || !b.labels().empty()) {
    for (Arrow g = 0; g < a.size(); ++g) labels.push_back(a.labels().empty() ? std::to_string(g) : a.labels()[g]);
    for (Arrow g = 0; g < b.size(); ++g)
      labels.push_back("'" + (b.labels().empty() ? std::to_string(g) : b.labels()[g]));
  }
  return detail::build_groupoid(
      units, src, rng, inv,
      [&](Arrow g, Arrow h) { return g < off ? a.mul(g, h) : b.mul(g - off, h - off) + off; }, labels);
}

/// pair(k) x H: arrows (x, h, y), id = (x*k + y)*|H| + h, rng = x, src = y.
inline FiniteGroupoid transitive_groupoid(std::size_t k, const CayleyTable& t) {
  auto info = detail::check_group(t);
  std::size_t m = t.size(), n = k * k * m;
  auto arrow = [&](std::size_t x, std::size_t h, std::size_t y) { return static_cast<Arrow>((x * k + y) * m + h); };
  std::vector<Arrow> units, src(n), rng(n), inv(n);
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      for (std::size_t h = 0; h < m; ++h) {
        Arrow g = arrow(x, h, y);
        if (x == y && h == info.identity) units.push_back(g);
        rng[g] = arrow(x, info.identity, x);
        src[g] = arrow(y, info.identity, y);
        inv[g] = arrow(y, info.inverse[h], x);
      }
  return detail::build_groupoid(units, src, rng, inv, [&](Arrow g, Arrow h) {
    std::size_t x = g / m / k, hg = g % m, hh = h % m, z = (h / m) % k;
    return arrow(x, t[hg][hh], z);
  });
}

/// Relabels arrows: new id of g is perm[g].
inline FiniteGroupoid relabel(const FiniteGroupoid& G, const std::vector<Arrow>& perm) {
  std::size_t n = G.size();
  std::vector<Arrow> back(n), units, src(n), rng(n), inv(n);
  for (Arrow g = 0; g < n; ++g) back[perm[g]] = g;
  for (Arrow u : G.units()) units.push_back(perm[u]);
  for (Arrow g = 0; g < n; ++g) {
    src[perm[g]] = perm[G.src(g)];
    rng[perm[g]] = perm[G.rng(g)];
    inv[perm[g]] = perm[G.inv(g)];
  }
  return detail::build_groupoid(units, src, rng, inv,
                                [&](Arrow g, Arrow h) { return perm[G.mul(back[g], back[h])]; });
}

/// Level-L elementary groupoid R(psi_L): Y = paths from level 0 (one per level-0 vertex) to
/// level L, psi = endpoint. Fibers are consecutive in vertex order.
inline FiniteGroupoid bratteli_truncation(const BratteliDiagram& b, std::size_t level, std::size_t cap = default_cap()) {
  validate_bratteli(b);
  Vector paths(b.vertices_at(0), Integer(1));
  for (std::size_t n = 0; n < level; ++n) paths = b.edges_at(n).apply(paths);
  Integer arrows = 0;
  for (const auto& c : paths) arrows += c * c;
  if (arrows > cap) throw Error(ErrorCode::DepthTooLarge, "R(psi_L) has " + arrows.str() + " arrows, over cap");
  std::vector<std::size_t> sizes;
  for (const auto& c : paths) sizes.push_back(static_cast<std::size_t>(c));
  return pair_groupoid_from_fibers(sizes);
}

inline GModule constant_module(const FiniteGroupoid& G, std::size_t r) {
  GModule M;
  M.fiber_rank.assign(G.units().size(), r);
  M.action.assign(G.size(), IntMatrix::identity(r));
  require_module(G, M);
  return M;
}

/// Rank-1 module with alpha_g = sign[g] in {+1, -1}.
inline GModule sign_module(const FiniteGroupoid& G, const std::vector<int>& sign) {
  if (sign.size() != G.size()) throw Error(ErrorCode::InvalidModule, "one sign per arrow required");
  GModule M;
  M.fiber_rank.assign(G.units().size(), 1);
  for (Arrow g = 0; g < G.size(); ++g) M.action.push_back(IntMatrix::from_rows({{sign[g]}}));
  require_module(G, M);
  return M;
}

/// Non-unit arrows act by -1 (the sign module of Z/2).
inline GModule sign_module(const FiniteGroupoid& G) {
  std::vector<int> sign(G.size());
  for (Arrow g = 0; g < G.size(); ++g) sign[g] = G.is_unit(g) ? 1 : -1;
  return sign_module(G, sign);
}

/// Module over a group groupoid: fiber Z^X, arrow g acts by the permutation matrix of perms[g].
inline GModule permutation_module(const FiniteGroupoid& G, const std::vector<Permutation>& perms) {
  if (G.units().size() != 1 || perms.size() != G.size())
    throw Error(ErrorCode::InvalidModule, "permutation module needs a group groupoid and one permutation per arrow");
  std::size_t nx = perms.empty() ? 0 : perms[0].size();
  GModule M;
  M.fiber_rank = {nx};
  for (const auto& p : perms) {
    if (p.size() != nx || !detail::is_permutation(p)) throw Error(ErrorCode::NotAPermutation, "bad permutation");
    IntMatrix a(nx, nx);
    for (std::size_t x = 0; x < nx; ++x) a.add(p[x], x, 1);
    M.action.push_back(std::move(a));
  }
  require_module(G, M);
  return M;
}

/// Add-one-with-carry on p^d cylinders, least significant digit first.
/// Cylinder index i = sum_j x_j p^j; refinement appends digit x_d, so the parent of a
/// depth-(d+1) cylinder j is j mod p^d.
struct OdometerSystem {
  std::size_t p = 2;
  std::size_t depth = 0;
  /// perms[d-1] acts on p^d cylinders.
  std::vector<Permutation> perms;

  std::size_t cylinders(std::size_t d) const {
    std::size_t c = 1;
    for (std::size_t i = 0; i < d; ++i) c *= p;
    return c;
  }
  std::size_t parent(std::size_t d, std::size_t j) const { return j % cylinders(d); }
};

inline OdometerSystem odometer_system(std::size_t p, std::size_t depth, std::size_t cap = default_cap()) {
  if (p < 2) throw Error(ErrorCode::DepthTooLarge, "p must be at least 2");
  OdometerSystem sys;
  sys.p = p;
  sys.depth = depth;
  std::size_t c = 1;
  for (std::size_t d = 1; d <= depth; ++d) {
    if (c > cap / p) throw Error(ErrorCode::DepthTooLarge, "p^depth exceeds cap");
    c *= p;
    Permutation perm(c);
    for (std::size_t i = 0; i < c; ++i) {
      // add one to the least significant digit and carry
      std::size_t j = i, place = 1, out = 0;
      bool carry = true;
      for (std::size_t k = 0; k < d; ++k) {
        std::size_t digit = j % p;
        j /= p;
        if (carry) {
          digit += 1;
          carry = digit == p;
          if (carry) digit = 0;
        }
        out += digit * place;
        place *= p;
      }
      perm[i] = out;
    }
    sys.perms.push_back(std::move(perm));
  }
  return sys;
}

/// Small random groupoid with a random module, for property tests.
struct RandomInstance {
  FiniteGroupoid groupoid;
  GModule module;
  std::string description;
};

namespace detail {

struct CatalogGroup {
  std::string name;
  CayleyTable table;
  /// rank-1 and rank-2 representations, element -> matrix
  std::vector<std::function<IntMatrix(std::size_t)>> rank1, rank2;
};

inline std::vector<CatalogGroup> group_catalog() {
  auto diag = [](long long a, long long b) { return IntMatrix::from_rows({{a, 0}, {0, b}}); };
  auto power = [](const IntMatrix& r, std::size_t k) {
    IntMatrix out = IntMatrix::identity(r.rows());
    for (std::size_t i = 0; i < k; ++i) out = out * r;
    return out;
  };
  auto one = [](long long v) { return IntMatrix::from_rows({{v}}); };
  std::vector<CatalogGroup> cat;
  cat.push_back({"1", cyclic_table(1), {[=](std::size_t) { return one(1); }},
                 {[=](std::size_t) { return diag(1, 1); }}});
  cat.push_back({"Z/2", cyclic_table(2),
                 {[=](std::size_t) { return one(1); }, [=](std::size_t h) { return one(h ? -1 : 1); }},
                 {[=](std::size_t) { return diag(1, 1); }, [=](std::size_t h) { return h ? diag(-1, -1) : diag(1, 1); },
                  [=](std::size_t h) { return h ? IntMatrix::from_rows({{0, 1}, {1, 0}}) : diag(1, 1); },
                  [=](std::size_t h) { return h ? diag(1, -1) : diag(1, 1); }}});
  IntMatrix r3 = IntMatrix::from_rows({{0, -1}, {1, -1}});
  cat.push_back({"Z/3", cyclic_table(3), {[=](std::size_t) { return one(1); }},
                 {[=](std::size_t) { return diag(1, 1); }, [=](std::size_t h) { return power(r3, h); }}});
  IntMatrix r4 = IntMatrix::from_rows({{0, -1}, {1, 0}});
  cat.push_back({"Z/4", cyclic_table(4),
                 {[=](std::size_t) { return one(1); }, [=](std::size_t h) { return one(h % 2 ? -1 : 1); }},
                 {[=](std::size_t) { return diag(1, 1); }, [=](std::size_t h) { return power(r4, h); },
                  [=](std::size_t h) { return h % 2 ? diag(-1, 1) : diag(1, 1); }}});
  cat.push_back({"Z/2xZ/2", klein_table(),
                 {[=](std::size_t) { return one(1); }, [=](std::size_t h) { return one(h & 1 ? -1 : 1); }},
                 {[=](std::size_t h) { return diag(h & 1 ? -1 : 1, h & 2 ? -1 : 1); },
                  [=](std::size_t h) {
                    IntMatrix s = (h & 1) ? IntMatrix::from_rows({{0, 1}, {1, 0}}) : diag(1, 1);
                    return (h & 2) ? IntMatrix(-s) : s;
                  }}});
  auto el = s3_elements();
  auto s3_sign = [el](std::size_t h) {
    int inv = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) inv += el[h][i] > el[h][j];
    return inv % 2 ? -1 : 1;
  };
  auto s3_standard = [el](std::size_t h) {
    // action on v_i = e_i - e_3 (i = 0, 1), with v_2 = 0
    IntMatrix m(2, 2);
    for (std::size_t j = 0; j < 2; ++j) {
      std::size_t a = el[h][j], b = el[h][2];
      if (a < 2) m.add(a, j, 1);
      if (b < 2) m.add(b, j, -1);
    }
    return m;
  };
  cat.push_back({"S3", s3_table(), {[=](std::size_t) { return one(1); }, [=](std::size_t h) { return one(s3_sign(h)); }},
                 {[=](std::size_t) { return diag(1, 1); }, s3_standard,
                  [=](std::size_t h) { return diag(1, s3_sign(h)); }}});
  return cat;
}

/// Random unimodular matrix and its inverse.
inline std::pair<IntMatrix, IntMatrix> random_unimodular(std::size_t r, std::mt19937_64& rng) {
  IntMatrix t = IntMatrix::identity(r), ti = IntMatrix::identity(r);
  if (r < 2) {
    if (r == 1 && rng() % 2) t = ti = IntMatrix::from_rows({{-1}});
    return {t, ti};
  }
  std::uniform_int_distribution<int> coef(-2, 2);
  for (int step = 0; step < 3; ++step) {
    std::size_t i = rng() % r, j = (i + 1 + rng() % (r - 1)) % r;
    int c = coef(rng);
    IntMatrix e = IntMatrix::identity(r), ei = IntMatrix::identity(r);
    e.add(i, j, c);
    ei.add(i, j, -c);
    t = t * e;
    ti = ei * ti;
  }
  return {t, ti};
}

}  // namespace detail

/// Rejection-sampled disjoint union of transitive components pair(k) x H (every finite
/// connected groupoid has this form), arrow ids shuffled, with a module built from a
/// representation of each isotropy group twisted by random unimodular frames.
inline RandomInstance random_instance(std::uint64_t seed, std::size_t max_arrows = 20, std::size_t max_rank = 2) {
  std::mt19937_64 rng(seed);
  static const auto catalog = detail::group_catalog();
  struct Comp {
    std::size_t k, group;
  };
  std::vector<Comp> comps;
  std::size_t total = 0;
  for (;;) {
    comps.clear();
    total = 0;
    std::size_t nc = 1 + rng() % 3;
    for (std::size_t c = 0; c < nc; ++c) {
      Comp comp{1 + rng() % 4, static_cast<std::size_t>(rng() % catalog.size())};
      total += comp.k * comp.k * catalog[comp.group].table.size();
      comps.push_back(comp);
    }
    if (total >= 2 && total <= max_arrows) break;
  }
  std::size_t rank = 1 + rng() % std::max<std::size_t>(max_rank, 1);
  FiniteGroupoid G;
  GModule M;
  std::string desc;
  bool first = true;
  for (const auto& comp : comps) {
    const auto& grp = catalog[comp.group];
    FiniteGroupoid C = transitive_groupoid(comp.k, grp.table);
    const auto& reps = rank == 1 ? grp.rank1 : grp.rank2;
    const auto& rho = reps[rng() % reps.size()];
    std::vector<IntMatrix> frame, frame_inv;
    for (std::size_t x = 0; x < comp.k; ++x) {
      auto [t, ti] = detail::random_unimodular(rank, rng);
      frame.push_back(t);
      frame_inv.push_back(ti);
    }
    std::size_t m = grp.table.size(), k = comp.k;
    GModule CM;
    CM.fiber_rank.assign(C.units().size(), rank);
    for (Arrow g = 0; g < C.size(); ++g) {
      std::size_t h = g % m, y = (g / m) % k, x = g / m / k;
      CM.action.push_back(frame[x] * rho(h) * frame_inv[y]);
    }
    desc += (first ? "" : " + ") + std::string("pair(") + std::to_string(k) + ")x" + grp.name;
    if (first) {
      G = C;
      M = CM;
      first = false;
    } else {
      G = disjoint_union(G, C);
      M.fiber_rank.insert(M.fiber_rank.end(), CM.fiber_rank.begin(), CM.fiber_rank.end());
      M.action.insert(M.action.end(), CM.action.begin(), CM.action.end());
    }
  }
  std::vector<Arrow> perm(G.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  FiniteGroupoid R = relabel(G, perm);
  GModule RM;
  RM.action.resize(R.size());
  for (Arrow g = 0; g < G.size(); ++g) RM.action[perm[g]] = M.action[g];
  RM.fiber_rank.assign(R.units().size(), 0);
  for (Arrow u : G.units()) RM.fiber_rank[R.unit_index(perm[u])] = M.fiber(G, u);
  require_module(R, RM);
  desc += ", rank " + std::to_string(rank);
  return {std::move(R), std::move(RM), std::move(desc)};
}

}  // namespace groupoidal
