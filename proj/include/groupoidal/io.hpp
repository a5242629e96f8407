#pragma once

#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "groupoid.hpp"
#include "limits.hpp"
#include "models.hpp"
#include "skew.hpp"
#include "zlinalg.hpp"

namespace groupoidal::io {

using json = nlohmann::json;

/// Model described by an input file; exactly one of the members is set.
struct ModelInput {
  std::string kind;
  std::optional<FiniteGroupoid> groupoid;
  std::optional<BratteliDiagram> bratteli;
  std::size_t odometer_p = 0, odometer_depth = 0;
};

namespace detail {

[[noreturn]] inline void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ParseError, where + ": " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) parse_fail(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) parse_fail(where, "missing field '" + key + "'");
  return *it;
}

inline std::string at(const std::string& where, const std::string& key) { return where + "." + key; }
inline std::string at(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

inline Integer as_integer(const json& j, const std::string& where) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    bool ok = !s.empty();
    for (std::size_t i = 0; i < s.size(); ++i) ok = ok && (std::isdigit(static_cast<unsigned char>(s[i])) || (i == 0 && s[i] == '-' && s.size() > 1));
    if (ok) return Integer(s);
  }
  parse_fail(where, "expected an integer");
}

inline std::int64_t as_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || (j.is_number_unsigned() && j.get<std::uint64_t>() > std::numeric_limits<std::int64_t>::max()))
    parse_fail(where, "expected a 64-bit integer");
  return j.get<std::int64_t>();
}

inline std::size_t as_size(const json& j, const std::string& where) {
  auto v = as_int(j, where);
  if (v < 0) parse_fail(where, "expected a non-negative integer");
  return static_cast<std::size_t>(v);
}

inline const json& as_array(const json& j, const std::string& where) {
  if (!j.is_array()) parse_fail(where, "expected an array");
  return j;
}

inline std::vector<std::size_t> as_sizes(const json& j, const std::string& where) {
  std::vector<std::size_t> out;
  const auto& a = as_array(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_size(a[i], at(where, i)));
  return out;
}

inline IntMatrix as_matrix(const json& j, const std::string& where, std::optional<std::size_t> cols = std::nullopt) {
  const auto& a = as_array(j, where);
  std::vector<std::vector<Integer>> rows;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& r = as_array(a[i], at(where, i));
    std::vector<Integer> row;
    for (std::size_t k = 0; k < r.size(); ++k) row.push_back(as_integer(r[k], at(at(where, i), k)));
    if (!rows.empty() && row.size() != rows.front().size()) parse_fail(at(where, i), "ragged matrix row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return IntMatrix(0, cols.value_or(0));
  return IntMatrix::from_dense(rows);
}

inline CayleyTable as_cayley(const json& j, const std::string& where) {
  CayleyTable t;
  const auto& a = as_array(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) t.push_back(as_sizes(a[i], at(where, i)));
  return t;
}

inline std::vector<Permutation> as_perms(const json& j, const std::string& where) {
  std::vector<Permutation> out;
  const auto& a = as_array(j, where);
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(as_sizes(a[i], at(where, i)));
  return out;
}

/// {"units": [u..], "arrows": [[src, rng]..], "compose": [[g, h, gh]..]}; inverses are read off
/// the products landing on units.
inline FiniteGroupoid parse_explicit(const json& j) {
  std::vector<Arrow> units, src, rng;
  for (auto u : as_sizes(field(j, "units", "input"), "input.units")) units.push_back(static_cast<Arrow>(u));
  const auto& arrows = as_array(field(j, "arrows", "input"), "input.arrows");
  std::size_t n = arrows.size();
  auto check_id = [&](std::size_t v, const std::string& where) {
    if (v >= n) parse_fail(where, "arrow id " + std::to_string(v) + " out of range");
    return static_cast<Arrow>(v);
  };
  for (auto u : units) check_id(u, "input.units");
  for (std::size_t g = 0; g < n; ++g) {
    std::string w = at("input.arrows", g);
    auto sr = as_sizes(arrows[g], w);
    if (sr.size() != 2) parse_fail(w, "expected [source, range]");
    src.push_back(check_id(sr[0], w));
    rng.push_back(check_id(sr[1], w));
  }
  std::vector<std::array<Arrow, 3>> triples;
  const auto& compose = as_array(field(j, "compose", "input"), "input.compose");
  for (std::size_t i = 0; i < compose.size(); ++i) {
    std::string w = at("input.compose", i);
    if (!compose[i].is_array() || compose[i].size() != 3) parse_fail(w, "malformed compose triple " + compose[i].dump());
    auto t = as_sizes(compose[i], w);
    triples.push_back({check_id(t[0], w), check_id(t[1], w), check_id(t[2], w)});
  }
  std::vector<Arrow> inv(n, 0);
  std::vector<char> found(n, 0);
  std::vector<std::vector<std::pair<Arrow, Arrow>>> lands(n);
  for (auto [g, h, gh] : triples) lands[g].push_back({h, gh});
  for (auto [g, h, gh] : triples)
    if (gh == rng[g] && src[g] == rng[h])
      for (auto [k, hg] : lands[h])
        if (k == g && hg == src[g] && !found[g]) {
          inv[g] = h;
          found[g] = 1;
        }
  for (std::size_t g = 0; g < n; ++g)
    if (!found[g]) throw Error(ErrorCode::ValidationError, "inverse: arrow " + std::to_string(g) + " has no inverse in compose");
  FiniteGroupoid G(units, src, rng, inv);
  for (auto [g, h, gh] : triples) G.set_product(g, h, gh);
  if (j.contains("labels")) {
    std::vector<std::string> labels;
    for (const auto& l : as_array(j["labels"], "input.labels")) labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    G.set_labels(std::move(labels));
  }
  if (auto v = validate_groupoid(G)) throw Error(ErrorCode::ValidationError, v->axiom + ": " + v->detail);
  return G;
}

inline BratteliDiagram parse_bratteli(const json& j) {
  BratteliDiagram b;
  b.stationary = j.contains("stationary") && j["stationary"].is_boolean() && j["stationary"].get<bool>();
  if (j.contains("p")) {
    b = bratteli_stationary(as_integer(j["p"], "input.p"));
  } else {
    const auto& ms = as_array(field(j, "matrices", "input"), "input.matrices");
    for (std::size_t i = 0; i < ms.size(); ++i) b.edges.push_back(as_matrix(ms[i], at("input.matrices", i)));
  }
  validate_bratteli(b);
  return b;
}

/// Rewraps validation failures of model constructors.
template <class F>
auto validated(F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::ValidationError) throw;
    throw Error(ErrorCode::ValidationError, std::string(error_name(e.code())) + ": " + e.message());
  }
}

}  // namespace detail

inline json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, path + ": cannot open file");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

/// Kinds: explicit, group, pair, action, bratteli, odometer, space.
inline ModelInput parse_model(const json& j) {
  using namespace detail;
  ModelInput m;
  const auto& kind = field(j, "kind", "input");
  if (!kind.is_string()) parse_fail("input.kind", "expected a string");
  m.kind = kind.get<std::string>();
  if (m.kind == "explicit") {
    m.groupoid = parse_explicit(j);
  } else if (m.kind == "group") {
    auto t = as_cayley(field(j, "cayley", "input"), "input.cayley");
    m.groupoid = validated([&] { return group_groupoid(t); });
  } else if (m.kind == "pair") {
    auto f = as_sizes(field(j, "fibers", "input"), "input.fibers");
    m.groupoid = validated([&] { return pair_groupoid_from_fibers(f); });
  } else if (m.kind == "space") {
    auto k = as_size(field(j, "points", "input"), "input.points");
    m.groupoid = space_groupoid(k);
  } else if (m.kind == "action") {
    auto t = as_cayley(field(j, "cayley", "input"), "input.cayley");
    auto p = as_perms(field(j, "perms", "input"), "input.perms");
    m.groupoid = validated([&] { return action_groupoid(t, p); });
  } else if (m.kind == "bratteli") {
    m.bratteli = validated([&] { return parse_bratteli(j); });
  } else if (m.kind == "odometer") {
    m.odometer_p = as_size(field(j, "p", "input"), "input.p");
    m.odometer_depth = j.contains("depth") ? as_size(j["depth"], "input.depth") : 6;
    if (m.odometer_p < 2) throw Error(ErrorCode::ValidationError, "odometer: p must be at least 2");
  } else {
    parse_fail("input.kind", "unknown kind '" + m.kind + "'");
  }
  return m;
}

inline ModelInput parse_input(const std::string& path) { return parse_model(read_json(path)); }

/// {"fibers": {unit: rank}, "action": {arrow: matrix}} with units defaulting to the identity, or
/// {"constant": r}.
inline GModule parse_module(const json& j, const FiniteGroupoid& G) {
  using namespace detail;
  if (j.contains("constant")) return constant_module(G, as_size(j["constant"], "module.constant"));
  const auto& fibers = field(j, "fibers", "module");
  if (!fibers.is_object()) parse_fail("module.fibers", "expected an object keyed by unit id");
  GModule M;
  M.fiber_rank.assign(G.units().size(), 0);
  std::vector<char> seen(G.units().size(), 0);
  auto arrow_key = [&](const std::string& key, const std::string& where) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != key.size() || v >= G.size()) parse_fail(where, "bad arrow id '" + key + "'");
    return static_cast<Arrow>(v);
  };
  for (const auto& [key, val] : fibers.items()) {
    std::string w = at("module.fibers", key);
    Arrow u = arrow_key(key, w);
    if (!G.is_unit(u)) parse_fail(w, "arrow " + key + " is not a unit");
    M.fiber_rank[G.unit_index(u)] = as_size(val, w);
    seen[G.unit_index(u)] = 1;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) parse_fail("module.fibers", "missing rank for unit " + std::to_string(G.units()[i]));
  M.action.assign(G.size(), IntMatrix());
  std::vector<char> set(G.size(), 0);
  if (j.contains("action")) {
    if (!j["action"].is_object()) parse_fail("module.action", "expected an object keyed by arrow id");
    for (const auto& [key, val] : j["action"].items()) {
      std::string w = at("module.action", key);
      Arrow g = arrow_key(key, w);
      M.action[g] = as_matrix(val, w, M.fiber(G, G.src(g)));
      set[g] = 1;
    }
  }
  for (Arrow g = 0; g < G.size(); ++g) {
    if (set[g]) continue;
    if (G.is_unit(g) || (M.fiber(G, G.src(g)) == 0 && M.fiber(G, G.rng(g)) == 0))
      M.action[g] = IntMatrix::identity(M.fiber(G, G.src(g)));
    else
      parse_fail("module.action", "missing matrix for arrow " + std::to_string(g));
  }
  if (auto v = validate_module(G, M)) throw Error(ErrorCode::ValidationError, v->axiom + ": " + v->detail);
  return M;
}

/// {"values": {arrow: int}} or {"potential": [f(u) per unit]}.
inline ZCocycle parse_cocycle(const json& j, const FiniteGroupoid& G) {
  using namespace detail;
  ZCocycle c;
  if (j.contains("potential")) {
    std::vector<std::int64_t> f;
    const auto& a = as_array(j["potential"], "cocycle.potential");
    for (std::size_t i = 0; i < a.size(); ++i) f.push_back(as_int(a[i], at("cocycle.potential", i)));
    if (f.size() != G.units().size()) throw Error(ErrorCode::ValidationError, "potential: one value per unit required");
    return potential_cocycle(G, f);
  }
  const auto& values = field(j, "values", "cocycle");
  if (!values.is_object()) parse_fail("cocycle.values", "expected an object keyed by arrow id");
  std::vector<char> seen(G.size(), 0);
  c.value.assign(G.size(), 0);
  for (const auto& [key, val] : values.items()) {
    std::string w = at("cocycle.values", key);
    std::size_t pos = 0;
    unsigned long g = 0;
    try {
      g = std::stoul(key, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != key.size() || g >= G.size()) parse_fail(w, "bad arrow id '" + key + "'");
    c.value[g] = as_int(val, w);
    seen[g] = 1;
  }
  for (std::size_t g = 0; g < G.size(); ++g)
    if (!seen[g]) parse_fail("cocycle.values", "missing value for arrow " + std::to_string(g));
  if (auto v = validate_cocycle(G, c)) throw Error(ErrorCode::ValidationError, v->axiom + ": " + v->detail);
  return c;
}

// ---- output ----

/// JSON number when it fits in int64, decimal string otherwise.
inline json integer_json(const Integer& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

inline json vector_json(const Vector& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(integer_json(x));
  return a;
}

inline json matrix_json(const IntMatrix& m) {
  json a = json::array();
  for (const auto& row : m.to_dense()) {
    json r = json::array();
    for (const auto& x : row) r.push_back(integer_json(x));
    a.push_back(std::move(r));
  }
  return a;
}

inline json group_json(const FgAbGroup& g) {
  json t = json::array();
  for (const auto& x : g.torsion) t.push_back(integer_json(x));
  return {{"free_rank", g.free_rank}, {"torsion", std::move(t)}, {"name", g.str()}};
}

inline json group_json(std::size_t degree, const FgAbGroup& g) {
  json j = group_json(g);
  j["degree"] = degree;
  return j;
}

inline json groups_json(const std::vector<FgAbGroup>& gs) {
  json a = json::array();
  for (std::size_t n = 0; n < gs.size(); ++n) a.push_back(group_json(n, gs[n]));
  return a;
}

/// Canonical rendering: sorted keys, two-space indent, trailing newline.
inline std::string render(const json& j) { return j.dump(2) + "\n"; }

/// Left-aligned text table with two spaces between columns.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  std::string str() const {
    std::vector<std::size_t> width;
    for (const auto& r : rows_)
      for (std::size_t i = 0; i < r.size(); ++i) {
        if (width.size() <= i) width.push_back(0);
        width[i] = std::max(width[i], r[i].size());
      }
    std::ostringstream os;
    for (const auto& r : rows_) {
      std::string line;
      for (std::size_t i = 0; i < r.size(); ++i) {
        line += r[i];
        if (i + 1 < r.size()) line += std::string(width[i] - r[i].size() + 2, ' ');
      }
      os << line << "\n";
    }
    return os.str();
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace groupoidal::io
