#pragma once

#include <optional>
#include <vector>

#include "matrix.hpp"

namespace groupoidal {

/// Unimodular column reduction A * V = R where the nonzero columns of R have distinct
/// lowest nonzero rows. Nonzero columns of R are a basis of im A; the columns of V
/// matching zero columns of R are a basis of ker A.
class ColumnReduction {
 public:
  explicit ColumnReduction(const IntMatrix& a) : rows_(a.rows()), r_(a.columns()), v_(a.cols()) {
    owner_.assign(rows_, npos);
    for (std::size_t j = 0; j < v_.size(); ++j) v_[j].push_back({j, 1});
    for (std::size_t j = 0; j < r_.size(); ++j) reduce(j);
    for (std::size_t j = 0; j < r_.size(); ++j) (r_[j].empty() ? kernel_ : image_).push_back(j);
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return r_.size(); }
  std::size_t rank() const { return image_.size(); }

  IntMatrix kernel_basis() const {
    IntMatrix k(cols(), 0);
    for (auto j : kernel_) k.append_column(v_[j]);
    return k;
  }

  IntMatrix image_basis() const {
    IntMatrix b(rows_, 0);
    for (auto j : image_) b.append_column(r_[j]);
    return b;
  }

  /// x with A x = b, or nullopt if b is not in the integer image.
  std::optional<SparseColumn> solve(SparseColumn b) const {
    SparseColumn x;
    while (!b.empty()) {
      const Entry& low = b.back();
      std::size_t k = owner_[low.row];
      if (k == npos) return std::nullopt;
      const Integer& pivot = r_[k].back().value;
      if (low.value % pivot != 0) return std::nullopt;
      Integer q = low.value / pivot;
      axpy(b, -q, r_[k]);
      axpy(x, q, v_[k]);
    }
    return x;
  }

  std::optional<Vector> solve(const Vector& b) const {
    if (b.size() != rows_) throw Error(ErrorCode::DimensionMismatch, "rhs length != rows");
    SparseColumn s;
    for (std::size_t i = 0; i < b.size(); ++i)
      if (b[i] != 0) s.push_back({i, b[i]});
    auto x = solve(std::move(s));
    if (!x) return std::nullopt;
    Vector out(cols());
    for (auto& e : *x) out[e.row] = e.value;
    return out;
  }

  bool contains(const SparseColumn& b) const { return solve(b).has_value(); }

 private:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  void reduce(std::size_t j) {
    while (!r_[j].empty()) {
      std::size_t p = r_[j].back().row;
      std::size_t k = owner_[p];
      if (k == npos) {
        owner_[p] = j;
        return;
      }
      const Integer a = r_[k].back().value;
      const Integer b = r_[j].back().value;
      if (b % a == 0) {
        Integer q = b / a;
        axpy(r_[j], -q, r_[k]);
        axpy(v_[j], -q, v_[k]);
        continue;
      }
      Integer x, y;
      Integer g = extended_gcd(a, b, x, y);
      Integer ag = a / g, bg = b / g;
      SparseColumn rk = combine(x, r_[k], y, r_[j]);
      SparseColumn rj = combine(ag, r_[j], -bg, r_[k]);
      SparseColumn vk = combine(x, v_[k], y, v_[j]);
      SparseColumn vj = combine(ag, v_[j], -bg, v_[k]);
      r_[k] = std::move(rk);
      r_[j] = std::move(rj);
      v_[k] = std::move(vk);
      v_[j] = std::move(vj);
    }
  }

  std::size_t rows_;
  std::vector<SparseColumn> r_;
  std::vector<SparseColumn> v_;
  std::vector<std::size_t> owner_;
  std::vector<std::size_t> kernel_;
  std::vector<std::size_t> image_;
};

/// Columns of a basis of the integer kernel lattice.
inline IntMatrix kernel_basis(const IntMatrix& a) { return ColumnReduction(a).kernel_basis(); }

/// Columns of a basis of the image lattice.
inline IntMatrix image_basis(const IntMatrix& a) { return ColumnReduction(a).image_basis(); }

/// x with A x = v, or nullopt (NoSolution).
inline std::optional<Vector> solve_in_image(const IntMatrix& a, const Vector& v) {
  if (v.size() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "rhs length != rows");
  return ColumnReduction(a).solve(v);
}

/// Solves A X = B column by column; throws NoSolution if some column is not in im A.
inline IntMatrix solve_columns(const ColumnReduction& a, const IntMatrix& b) {
  if (b.rows() != a.rows()) throw Error(ErrorCode::DimensionMismatch, "rhs rows != rows");
  IntMatrix x(a.cols(), 0);
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto s = a.solve(b.column(j));
    if (!s) throw Error(ErrorCode::NoSolution, "column " + std::to_string(j) + " not in image");
    x.append_column(std::move(*s));
  }
  return x;
}

/// True iff every column of X lies in the lattice spanned by the columns of L.
inline bool lattice_contains(const ColumnReduction& l, const IntMatrix& x) {
  for (const auto& c : x.columns())
    if (!l.contains(c)) return false;
  return true;
}

inline bool lattice_equal(const IntMatrix& a, const IntMatrix& b) {
  return lattice_contains(ColumnReduction(a), b) && lattice_contains(ColumnReduction(b), a);
}

/// Basis of {basis * y : map * basis * y in span(target)}. `basis` must have
/// independent columns.
inline IntMatrix preimage_basis(const IntMatrix& basis, const IntMatrix& map, const IntMatrix& target) {
  IntMatrix tgt = image_basis(target);
  IntMatrix stacked = hstack(map * basis, tgt);
  IntMatrix ker = kernel_basis(stacked);
  return basis * ker.select_rows(0, basis.cols());
}

}  // namespace groupoidal
