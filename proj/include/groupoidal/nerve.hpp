#pragma once

#include <algorithm>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

#include "cap.hpp"
#include "groupoid.hpp"
#include "matrix.hpp"

namespace groupoidal {

/// Composable strings (g_1, ..., g_n) with src(g_i) == rng(g_{i+1}), in lexicographic order.
/// Degree 0 lists the units as 1-tuples.
class Nerve {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  Nerve() = default;
  Nerve(std::size_t degree, std::vector<Arrow> data)
      : degree_(degree), width_(degree == 0 ? 1 : degree), data_(std::move(data)) {}

  std::size_t degree() const { return degree_; }
  std::size_t width() const { return width_; }
  std::size_t size() const { return data_.size() / width_; }

  std::span<const Arrow> operator[](std::size_t i) const { return {data_.data() + i * width_, width_}; }

  /// Position of a tuple of length width(), or npos.
  std::size_t index_of(std::span<const Arrow> t) const {
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      auto m = (*this)[mid];
      int c = 0;
      for (std::size_t k = 0; k < width_ && c == 0; ++k) c = m[k] < t[k] ? -1 : (m[k] > t[k] ? 1 : 0);
      if (c == 0) return mid;
      if (c < 0) lo = mid + 1;
      else hi = mid;
    }
    return npos;
  }

  std::size_t require_index(std::span<const Arrow> t) const {
    std::size_t i = index_of(t);
    if (i == npos) throw Error(ErrorCode::InvalidGroupoid, "tuple missing from nerve");
    return i;
  }

 private:
  std::size_t degree_ = 0;
  std::size_t width_ = 1;
  std::vector<Arrow> data_;
};

/// |G^(n)|, saturating just above `cap`.
inline std::size_t nerve_size(const FiniteGroupoid& G, std::size_t n, std::size_t cap = default_cap()) {
  if (n == 0) return G.units().size();
  std::vector<std::size_t> cnt(G.size(), 1);
  for (std::size_t k = 1; k < n; ++k) {
    std::vector<std::size_t> next(G.size(), 0);
    for (Arrow h = 0; h < G.size(); ++h) {
      std::size_t s = 0;
      for (Arrow h2 : G.arrows_with_range(G.src(h))) {
        s += cnt[h2];
        if (s > cap) {
          s = cap + 1;
          break;
        }
      }
      next[h] = s;
    }
    cnt = std::move(next);
  }
  std::size_t total = 0;
  for (auto c : cnt) {
    total += c;
    if (total > cap) return cap + 1;
  }
  return total;
}

inline Nerve nerve(const FiniteGroupoid& G, std::size_t n, std::size_t cap = default_cap()) {
  std::size_t count = nerve_size(G, n, cap);
  if (count > cap)
    throw Error(ErrorCode::DegreeTooLarge,
                "|G^(" + std::to_string(n) + ")| exceeds cap " + std::to_string(cap));
  if (n == 0) return Nerve(0, G.units());
  std::vector<Arrow> data;
  data.reserve(count * n);
  std::vector<Arrow> cur(n);
  std::vector<std::size_t> pos(n, 0);
  // Iterative DFS: level 0 runs over all arrows, level i over arrows with range src(cur[i-1]).
  auto options = [&](std::size_t level) -> std::size_t {
    return level == 0 ? G.size() : G.arrows_with_range(G.src(cur[level - 1])).size();
  };
  auto option = [&](std::size_t level, std::size_t k) -> Arrow {
    return level == 0 ? static_cast<Arrow>(k) : G.arrows_with_range(G.src(cur[level - 1]))[k];
  };
  std::size_t level = 0;
  pos[0] = 0;
  for (;;) {
    if (pos[level] == options(level)) {
      if (level == 0) break;
      --level;
      ++pos[level];
      continue;
    }
    cur[level] = option(level, pos[level]);
    if (level + 1 == n) {
      data.insert(data.end(), cur.begin(), cur.end());
      ++pos[level];
    } else {
      ++level;
      pos[level] = 0;
    }
  }
  return Nerve(n, std::move(data));
}

namespace detail {

/// Sorts and merges (row, value) pairs into a sparse column.
inline SparseColumn make_column(std::vector<std::pair<std::size_t, Integer>> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseColumn col;
  for (auto& [r, v] : entries) {
    if (!col.empty() && col.back().row == r) {
      col.back().value += v;
      if (col.back().value == 0) col.pop_back();
    } else if (v != 0) {
      col.push_back({r, v});
    }
  }
  return col;
}

inline std::size_t unit_row(const FiniteGroupoid& G, Arrow u) { return G.unit_index(u); }

}  // namespace detail

/// d_n : Z[G^(n)] -> Z[G^(n-1)], d_1 = s_* - r_*, d_n = sum_i (-1)^i (face_i)_*.
inline IntMatrix boundary_matrix_d(const FiniteGroupoid& G, const Nerve& top, const Nerve& bottom) {
  std::size_t n = top.degree();
  if (n == 0 || bottom.degree() + 1 != n) throw Error(ErrorCode::DimensionMismatch, "boundary needs degrees n, n-1");
  std::vector<SparseColumn> cols(top.size());
  std::vector<Arrow> face(n - 1);
  for (std::size_t j = 0; j < top.size(); ++j) {
    auto t = top[j];
    std::vector<std::pair<std::size_t, Integer>> e;
    if (n == 1) {
      e.push_back({detail::unit_row(G, G.src(t[0])), 1});
      e.push_back({detail::unit_row(G, G.rng(t[0])), -1});
    } else {
      for (std::size_t i = 0; i <= n; ++i) {
        // face 0 drops g_1, face n drops g_n, face i composes g_i g_{i+1}
        std::size_t w = 0;
        for (std::size_t k = 0; k < n; ++k) {
          if (i == 0 && k == 0) continue;
          if (i == n && k == n - 1) continue;
          if (i > 0 && i < n && k == i) continue;
          face[w++] = (i > 0 && i < n && k == i - 1) ? G.mul(t[i - 1], t[i]) : t[k];
        }
        e.push_back({bottom.require_index(face), (i % 2 == 0) ? 1 : -1});
      }
    }
    cols[j] = detail::make_column(std::move(e));
  }
  return IntMatrix::from_columns(bottom.size(), std::move(cols));
}

inline IntMatrix boundary_matrix_d(const FiniteGroupoid& G, std::size_t n, std::size_t cap = default_cap()) {
  if (n == 0) throw Error(ErrorCode::DimensionMismatch, "boundary_matrix_d needs n >= 1");
  return boundary_matrix_d(G, nerve(G, n, cap), nerve(G, n - 1, cap));
}

/// b_n : Z[G^(n+1)] -> Z[G^(n)]; b_0 = r_* (the equivariant augmentation), b_n = sum_{i<n} (-1)^i (compose g_i g_{i+1}) + (-1)^n (drop g_n).
inline IntMatrix bar_boundary_matrix_b(const FiniteGroupoid& G, const Nerve& top, const Nerve& bottom) {
  std::size_t n = bottom.degree();
  if (top.degree() != n + 1) throw Error(ErrorCode::DimensionMismatch, "bar boundary needs degrees n+1, n");
  std::vector<SparseColumn> cols(top.size());
  std::vector<Arrow> face(n);
  for (std::size_t j = 0; j < top.size(); ++j) {
    auto t = top[j];  // (g_0, ..., g_n)
    std::vector<std::pair<std::size_t, Integer>> e;
    if (n == 0) {
      e.push_back({detail::unit_row(G, G.rng(t[0])), 1});
    } else {
      for (std::size_t i = 0; i <= n; ++i) {
        std::size_t w = 0;
        for (std::size_t k = 0; k <= n; ++k) {
          if (i == n && k == n) continue;
          if (i < n && k == i + 1) continue;
          face[w++] = (i < n && k == i) ? G.mul(t[i], t[i + 1]) : t[k];
        }
        e.push_back({bottom.require_index(face), (i % 2 == 0) ? 1 : -1});
      }
    }
    cols[j] = detail::make_column(std::move(e));
  }
  return IntMatrix::from_columns(bottom.size(), std::move(cols));
}

inline IntMatrix bar_boundary_matrix_b(const FiniteGroupoid& G, std::size_t n, std::size_t cap = default_cap()) {
  return bar_boundary_matrix_b(G, nerve(G, n + 1, cap), nerve(G, n, cap));
}

/// q_n : Z[G^(n+1)] -> Z[G^(n)], [g_0, g_1, ..., g_n] -> [g_1, ..., g_n]; q_0[g_0] = [s(g_0)].
/// h_n : Z[G^(n)] -> Z[G^(n+1)], (g_0, ..., g_{n-1}) -> (r(g_0), g_0, ..., g_{n-1}); h_0 includes units.
inline IntMatrix bar_homotopy(const FiniteGroupoid& G, std::size_t n, std::size_t cap = default_cap()) {
  Nerve top = nerve(G, n + 1, cap);
  Nerve bottom = nerve(G, n, cap);
  std::vector<SparseColumn> cols(bottom.size());
  std::vector<Arrow> t(n + 1);
  for (std::size_t j = 0; j < bottom.size(); ++j) {
    auto b = bottom[j];
    if (n == 0) {
      t[0] = b[0];
    } else {
      t[0] = G.rng(b[0]);
      std::copy(b.begin(), b.end(), t.begin() + 1);
    }
    cols[j].push_back({top.require_index(t), 1});
  }
  return IntMatrix::from_columns(top.size(), std::move(cols));
}

inline IntMatrix coinvariants_collapse(const FiniteGroupoid& G, std::size_t n, std::size_t cap = default_cap()) {
  Nerve top = nerve(G, n + 1, cap);
  Nerve bottom = nerve(G, n, cap);
  std::vector<SparseColumn> cols(top.size());
  for (std::size_t j = 0; j < top.size(); ++j) {
    auto t = top[j];
    std::size_t row = (n == 0) ? detail::unit_row(G, G.src(t[0])) : bottom.require_index(t.subspan(1));
    cols[j].push_back({row, 1});
  }
  return IntMatrix::from_columns(bottom.size(), std::move(cols));
}

}  // namespace groupoidal
