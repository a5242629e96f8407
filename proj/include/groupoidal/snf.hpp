#pragma once

#include <cstdint>
#include <vector>

#include "matrix.hpp"

namespace groupoidal {

/// A = U * S * V with U, V unimodular. P = U^-1 and Q = V^-1, so P * A * Q = S.
struct SnfDecomposition {
  IntMatrix U;
  IntMatrix S;
  IntMatrix V;
  IntMatrix P;
  IntMatrix Q;
  /// Nonzero diagonal of S, in divisibility order.
  std::vector<Integer> diagonal;
};

/// Rewrites a list of positive integers into an equivalent divisibility chain.
inline std::vector<Integer> divisibility_chain(std::vector<Integer> d) {
  for (std::size_t i = 0; i < d.size(); ++i) {
    for (std::size_t j = i + 1; j < d.size(); ++j) {
      Integer g = gcd(d[i], d[j]);
      if (g == 0) continue;
      Integer l = d[i] / g * d[j];
      d[i] = g;
      d[j] = l;
    }
  }
  return d;
}

namespace detail {

using Dense = std::vector<std::vector<Integer>>;

inline Dense dense_identity(std::size_t n) {
  Dense d(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

/// Minimal-pivot diagonalization of a dense matrix. Transforms are tracked only if requested.
class DenseSmith {
 public:
  DenseSmith(Dense a, std::size_t rows, std::size_t cols, bool track)
      : a_(std::move(a)), m_(rows), n_(cols), track_(track) {
    if (track_) {
      p_ = dense_identity(m_);
      u_ = dense_identity(m_);
      q_ = dense_identity(n_);
      v_ = dense_identity(n_);
    }
    run();
  }

  Dense a_, p_, u_, q_, v_;
  std::size_t m_, n_;
  std::size_t rank = 0;

 private:
  bool track_;

  // row i += c * row t
  void row_add(std::size_t i, std::size_t t, const Integer& c) {
    for (std::size_t j = 0; j < n_; ++j)
      if (a_[t][j] != 0) a_[i][j] += c * a_[t][j];
    if (!track_) return;
    for (std::size_t j = 0; j < m_; ++j)
      if (p_[t][j] != 0) p_[i][j] += c * p_[t][j];
    for (std::size_t r = 0; r < m_; ++r)
      if (u_[r][i] != 0) u_[r][t] -= c * u_[r][i];
  }

  // col j += c * col t
  void col_add(std::size_t j, std::size_t t, const Integer& c) {
    for (std::size_t i = 0; i < m_; ++i)
      if (a_[i][t] != 0) a_[i][j] += c * a_[i][t];
    if (!track_) return;
    for (std::size_t i = 0; i < n_; ++i)
      if (q_[i][t] != 0) q_[i][j] += c * q_[i][t];
    for (std::size_t k = 0; k < n_; ++k)
      if (v_[j][k] != 0) v_[t][k] -= c * v_[j][k];
  }

  void row_swap(std::size_t i, std::size_t t) {
    if (i == t) return;
    std::swap(a_[i], a_[t]);
    if (!track_) return;
    std::swap(p_[i], p_[t]);
    for (std::size_t r = 0; r < m_; ++r) std::swap(u_[r][i], u_[r][t]);
  }

  void col_swap(std::size_t j, std::size_t t) {
    if (j == t) return;
    for (std::size_t i = 0; i < m_; ++i) std::swap(a_[i][j], a_[i][t]);
    if (!track_) return;
    for (std::size_t i = 0; i < n_; ++i) std::swap(q_[i][j], q_[i][t]);
    std::swap(v_[j], v_[t]);
  }

  void row_negate(std::size_t t) {
    for (auto& x : a_[t]) x = -x;
    if (!track_) return;
    for (auto& x : p_[t]) x = -x;
    for (std::size_t r = 0; r < m_; ++r) u_[r][t] = -u_[r][t];
  }

  bool find_min(std::size_t t, std::size_t& pi, std::size_t& pj) const {
    bool found = false;
    Integer best;
    for (std::size_t i = t; i < m_; ++i)
      for (std::size_t j = t; j < n_; ++j) {
        if (a_[i][j] == 0) continue;
        Integer v = abs_value(a_[i][j]);
        if (!found || v < best) {
          found = true;
          best = v;
          pi = i;
          pj = j;
          if (best == 1) return true;
        }
      }
    return found;
  }

  void run() {
    std::size_t t = 0;
    while (t < m_ && t < n_) {
      std::size_t pi = 0, pj = 0;
      if (!find_min(t, pi, pj)) break;
      row_swap(t, pi);
      col_swap(t, pj);
      for (;;) {
        bool clean = true;
        for (std::size_t i = t + 1; i < m_; ++i) {
          if (a_[i][t] == 0) continue;
          row_add(i, t, -(a_[i][t] / a_[t][t]));
          if (a_[i][t] != 0) clean = false;
        }
        for (std::size_t j = t + 1; j < n_; ++j) {
          if (a_[t][j] == 0) continue;
          col_add(j, t, -(a_[t][j] / a_[t][t]));
          if (a_[t][j] != 0) clean = false;
        }
        if (!clean) {
          // Remainders are smaller than the pivot; move the smallest into place.
          std::size_t bi = t, bj = t;
          Integer best = abs_value(a_[t][t]);
          for (std::size_t i = t + 1; i < m_; ++i)
            if (a_[i][t] != 0 && abs_value(a_[i][t]) < best) best = abs_value(a_[i][t]), bi = i, bj = t;
          for (std::size_t j = t + 1; j < n_; ++j)
            if (a_[t][j] != 0 && abs_value(a_[t][j]) < best) best = abs_value(a_[t][j]), bi = t, bj = j;
          row_swap(t, bi);
          col_swap(t, bj);
          continue;
        }
        std::size_t bad = m_;
        for (std::size_t i = t + 1; i < m_ && bad == m_; ++i)
          for (std::size_t j = t + 1; j < n_; ++j)
            if (a_[i][j] % a_[t][t] != 0) {
              bad = i;
              break;
            }
        if (bad == m_) break;
        row_add(t, bad, 1);
      }
      if (a_[t][t] < 0) row_negate(t);
      ++t;
    }
    rank = t;
  }
};

inline IntMatrix from_dense_square(const Dense& d, std::size_t rows, std::size_t cols) {
  if (rows == 0) return IntMatrix(0, cols);
  return IntMatrix::from_dense(d, cols);
}

}  // namespace detail

/// Smith normal form with transforms (dense; intended for matrices up to a few hundred).
inline SnfDecomposition snf(const IntMatrix& a) {
  detail::DenseSmith ds(a.to_dense(), a.rows(), a.cols(), true);
  SnfDecomposition out;
  std::size_t m = a.rows(), n = a.cols();
  out.S = IntMatrix(m, n);
  for (std::size_t t = 0; t < ds.rank; ++t) {
    out.S.add(t, t, ds.a_[t][t]);
    out.diagonal.push_back(ds.a_[t][t]);
  }
  out.U = detail::from_dense_square(ds.u_, m, m);
  out.P = detail::from_dense_square(ds.p_, m, m);
  out.V = detail::from_dense_square(ds.v_, n, n);
  out.Q = detail::from_dense_square(ds.q_, n, n);
  return out;
}

/// Nonzero invariant factors of A (so rank = size), by sparse elimination.
/// Unit pivots are eliminated first with a Markowitz-style choice; the remaining
/// block is finished densely.
inline std::vector<Integer> smith_diagonal(const IntMatrix& a) {
  std::size_t m = a.rows(), n = a.cols();
  std::vector<SparseColumn> cols = a.columns();
  std::vector<std::vector<std::uint32_t>> row_cols(m);
  for (std::size_t j = 0; j < n; ++j)
    for (const auto& e : cols[j]) row_cols[e.row].push_back(static_cast<std::uint32_t>(j));
  std::vector<char> col_alive(n, 1), row_alive(m, 1);
  std::vector<Integer> diag;
  std::vector<char> existed;

  auto eliminate = [&](std::size_t c, std::size_t r, const Integer& u) {
    const SparseColumn& pc = cols[c];
    std::vector<std::uint32_t> targets = row_cols[r];
    for (auto k : targets) {
      if (k == c || !col_alive[k]) continue;
      const Integer* a_rk = find_entry(cols[k], r);
      if (!a_rk) continue;
      Integer factor = -(*a_rk) * u;
      existed.assign(pc.size(), 0);
      for (std::size_t t = 0; t < pc.size(); ++t) existed[t] = find_entry(cols[k], pc[t].row) != nullptr;
      axpy(cols[k], factor, pc);
      for (std::size_t t = 0; t < pc.size(); ++t)
        if (!existed[t] && find_entry(cols[k], pc[t].row)) row_cols[pc[t].row].push_back(k);
    }
    col_alive[c] = 0;
    row_alive[r] = 0;
    diag.push_back(1);
  };

  for (bool progress = true; progress;) {
    progress = false;
    for (std::size_t c = 0; c < n; ++c) {
      if (!col_alive[c]) continue;
      if (cols[c].empty()) {
        col_alive[c] = 0;
        continue;
      }
      std::size_t best_row = m, best_cost = 0;
      Integer best_val;
      for (const auto& e : cols[c]) {
        if (!row_alive[e.row] || abs_value(e.value) != 1) continue;
        std::size_t cost = row_cols[e.row].size();
        if (best_row == m || cost < best_cost) {
          best_row = e.row;
          best_cost = cost;
          best_val = e.value;
        }
      }
      if (best_row == m) continue;
      eliminate(c, best_row, best_val);
      progress = true;
    }
  }

  std::vector<std::size_t> rest_cols, rest_rows;
  std::vector<std::size_t> row_pos(m, m);
  for (std::size_t c = 0; c < n; ++c)
    if (col_alive[c] && !cols[c].empty()) rest_cols.push_back(c);
  for (auto c : rest_cols)
    for (const auto& e : cols[c])
      if (row_pos[e.row] == m) {
        row_pos[e.row] = 0;
        rest_rows.push_back(e.row);
      }
  std::sort(rest_rows.begin(), rest_rows.end());
  for (std::size_t i = 0; i < rest_rows.size(); ++i) row_pos[rest_rows[i]] = i;
  if (!rest_cols.empty()) {
    detail::Dense d(rest_rows.size(), std::vector<Integer>(rest_cols.size()));
    for (std::size_t j = 0; j < rest_cols.size(); ++j)
      for (const auto& e : cols[rest_cols[j]]) d[row_pos[e.row]][j] = e.value;
    detail::DenseSmith ds(std::move(d), rest_rows.size(), rest_cols.size(), false);
    for (std::size_t t = 0; t < ds.rank; ++t) diag.push_back(abs_value(ds.a_[t][t]));
  }
  return divisibility_chain(std::move(diag));
}

inline std::size_t rank(const IntMatrix& a) { return smith_diagonal(a).size(); }

}  // namespace groupoidal
