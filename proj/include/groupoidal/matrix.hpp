#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace groupoidal {

using Integer = boost::multiprecision::cpp_int;
using Vector = std::vector<Integer>;

inline Integer abs_value(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd(const Integer& a, const Integer& b) {
  return boost::multiprecision::gcd(abs_value(a), abs_value(b));
}

/// Returns g = gcd(a, b) >= 0 with x*a + y*b = g.
inline Integer extended_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer q = old_r / r;
    Integer tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

/// Floor division for arbitrary signs.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

struct Entry {
  std::size_t row;
  Integer value;
  friend bool operator==(const Entry& a, const Entry& b) { return a.row == b.row && a.value == b.value; }
};

/// Sorted by row, no stored zeros.
using SparseColumn = std::vector<Entry>;

/// y += a * x
inline void axpy(SparseColumn& y, const Integer& a, const SparseColumn& x) {
  if (a == 0 || x.empty()) return;
  SparseColumn out;
  out.reserve(y.size() + x.size());
  std::size_t i = 0, j = 0;
  while (i < y.size() || j < x.size()) {
    if (j == x.size() || (i < y.size() && y[i].row < x[j].row)) {
      out.push_back(std::move(y[i++]));
    } else if (i == y.size() || x[j].row < y[i].row) {
      out.push_back({x[j].row, a * x[j].value});
      ++j;
    } else {
      Integer v = y[i].value + a * x[j].value;
      if (v != 0) out.push_back({y[i].row, std::move(v)});
      ++i;
      ++j;
    }
  }
  y = std::move(out);
}

/// Returns a*x + b*y.
inline SparseColumn combine(const Integer& a, const SparseColumn& x, const Integer& b,
                            const SparseColumn& y) {
  SparseColumn out;
  if (a != 0) {
    out.reserve(x.size());
    for (const auto& e : x) out.push_back({e.row, a * e.value});
  }
  axpy(out, b, y);
  return out;
}

inline const Integer* find_entry(const SparseColumn& col, std::size_t row) {
  auto it = std::lower_bound(col.begin(), col.end(), row,
                             [](const Entry& e, std::size_t r) { return e.row < r; });
  if (it != col.end() && it->row == row) return &it->value;
  return nullptr;
}

/// Integer matrix with column-sparse storage.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(cols) {}

  static IntMatrix identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({i, 1});
    return m;
  }

  static IntMatrix from_dense(const std::vector<std::vector<Integer>>& rows, std::size_t cols = 0) {
    std::size_t c = rows.empty() ? cols : rows.front().size();
    IntMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw Error(ErrorCode::DimensionMismatch, "ragged dense matrix");
      for (std::size_t j = 0; j < c; ++j)
        if (rows[i][j] != 0) m.data_[j].push_back({i, rows[i][j]});
    }
    return m;
  }

  static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
    std::vector<std::vector<Integer>> dense;
    for (const auto& r : rows) dense.emplace_back(r.begin(), r.end());
    return from_dense(dense);
  }

  static IntMatrix from_columns(std::size_t rows, std::vector<SparseColumn> cols) {
    IntMatrix m(rows, cols.size());
    m.data_ = std::move(cols);
    return m;
  }

  static IntMatrix column_vector(const Vector& v) {
    IntMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i)
      if (v[i] != 0) m.data_[0].push_back({i, v[i]});
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Integer at(std::size_t r, std::size_t c) const {
    const Integer* v = find_entry(data_.at(c), r);
    return v ? *v : Integer(0);
  }

  void add(std::size_t r, std::size_t c, const Integer& v) {
    if (r >= rows_ || c >= cols_) throw Error(ErrorCode::DimensionMismatch, "entry out of range");
    if (v == 0) return;
    auto& col = data_[c];
    auto it = std::lower_bound(col.begin(), col.end(), r,
                               [](const Entry& e, std::size_t row) { return e.row < row; });
    if (it != col.end() && it->row == r) {
      it->value += v;
      if (it->value == 0) col.erase(it);
    } else {
      col.insert(it, {r, v});
    }
  }

  void set(std::size_t r, std::size_t c, const Integer& v) {
    Integer cur = at(r, c);
    add(r, c, v - cur);
  }

  const SparseColumn& column(std::size_t c) const { return data_.at(c); }
  const std::vector<SparseColumn>& columns() const { return data_; }

  void set_column(std::size_t c, SparseColumn col) { data_.at(c) = std::move(col); }

  void append_column(SparseColumn col) {
    data_.push_back(std::move(col));
    ++cols_;
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& c : data_) n += c.size();
    return n;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const SparseColumn& c) { return c.empty(); });
  }

  IntMatrix transpose() const {
    IntMatrix t(cols_, rows_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto& e : data_[j]) t.data_[e.row].push_back({j, e.value});
    return t;
  }

  Vector apply(const Vector& x) const {
    if (x.size() != cols_) throw Error(ErrorCode::DimensionMismatch, "vector length != cols");
    Vector y(rows_);
    for (std::size_t j = 0; j < cols_; ++j) {
      if (x[j] == 0) continue;
      for (const auto& e : data_[j]) y[e.row] += e.value * x[j];
    }
    return y;
  }

  Vector column_dense(std::size_t c) const {
    Vector v(rows_);
    for (const auto& e : data_.at(c)) v[e.row] = e.value;
    return v;
  }

  std::vector<std::vector<Integer>> to_dense() const {
    std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols_));
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto& e : data_[j]) d[e.row][j] = e.value;
    return d;
  }

  IntMatrix select_columns(const std::vector<std::size_t>& idx) const {
    IntMatrix m(rows_, 0);
    for (auto j : idx) m.append_column(data_.at(j));
    return m;
  }

  IntMatrix select_rows(std::size_t begin, std::size_t end) const {
    IntMatrix m(end - begin, cols_);
    for (std::size_t j = 0; j < cols_; ++j)
      for (const auto& e : data_[j])
        if (e.row >= begin && e.row < end) m.data_[j].push_back({e.row - begin, e.value});
    return m;
  }

  friend bool operator==(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t j = 0; j < a.cols_; ++j) {
      const auto& x = a.data_[j];
      const auto& y = b.data_[j];
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i].row != y[i].row || x[i].value != y[i].value) return false;
    }
    return true;
  }
  friend bool operator!=(const IntMatrix& a, const IntMatrix& b) { return !(a == b); }

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    check_same_shape(a, b);
    IntMatrix c = a;
    for (std::size_t j = 0; j < a.cols_; ++j) axpy(c.data_[j], 1, b.data_[j]);
    return c;
  }

  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    check_same_shape(a, b);
    IntMatrix c = a;
    for (std::size_t j = 0; j < a.cols_; ++j) axpy(c.data_[j], -1, b.data_[j]);
    return c;
  }

  friend IntMatrix operator-(const IntMatrix& a) {
    IntMatrix c = a;
    for (auto& col : c.data_)
      for (auto& e : col) e.value = -e.value;
    return c;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::DimensionMismatch, "product shape mismatch");
    IntMatrix c(a.rows_, b.cols_);
    Vector acc(a.rows_);
    std::vector<char> touched(a.rows_, 0);
    std::vector<std::size_t> rows;
    for (std::size_t j = 0; j < b.cols_; ++j) {
      rows.clear();
      for (const auto& be : b.data_[j]) {
        for (const auto& ae : a.data_[be.row]) {
          if (!touched[ae.row]) {
            touched[ae.row] = 1;
            rows.push_back(ae.row);
          }
          acc[ae.row] += ae.value * be.value;
        }
      }
      std::sort(rows.begin(), rows.end());
      auto& out = c.data_[j];
      for (auto r : rows) {
        if (acc[r] != 0) out.push_back({r, acc[r]});
        acc[r] = 0;
        touched[r] = 0;
      }
    }
    return c;
  }

 private:
  static void check_same_shape(const IntMatrix& a, const IntMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_)
      throw Error(ErrorCode::DimensionMismatch, "matrix shapes differ");
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<SparseColumn> data_;
};

/// [a | b]
inline IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "hstack row mismatch");
  IntMatrix m = a;
  for (const auto& c : b.columns()) m.append_column(c);
  return m;
}

/// [a ; b]
inline IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.cols()) throw Error(ErrorCode::DimensionMismatch, "vstack column mismatch");
  std::vector<SparseColumn> cols(a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j) {
    cols[j] = a.column(j);
    for (const auto& e : b.column(j)) cols[j].push_back({e.row + a.rows(), e.value});
  }
  return IntMatrix::from_columns(a.rows() + b.rows(), std::move(cols));
}

/// Exact determinant by fraction-free (Bareiss) elimination.
inline Integer determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::DimensionMismatch, "determinant of non-square");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  auto a = m.to_dense();
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[p], a[k]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

inline std::string to_string(const Integer& v) { return v.str(); }

/// Rows in brackets, e.g. [[1, 0], [0, 1]].
inline std::string to_string(const IntMatrix& m) {
  std::string out = "[";
  auto d = m.to_dense();
  for (std::size_t r = 0; r < d.size(); ++r) {
    out += r ? ", [" : "[";
    for (std::size_t c = 0; c < d[r].size(); ++c) out += (c ? ", " : "") + d[r][c].str();
    out += "]";
  }
  return out + "]";
}

}  // namespace groupoidal
