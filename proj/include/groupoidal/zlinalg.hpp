#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lattice.hpp"
#include "matrix.hpp"
#include "snf.hpp"

namespace groupoidal {

/// Finitely generated abelian group Z^free_rank + Z/t_1 + ... + Z/t_k with t_i | t_{i+1}, t_i >= 2.
struct FgAbGroup {
  std::size_t free_rank = 0;
  std::vector<Integer> torsion;

  static FgAbGroup free(std::size_t r) { return {r, {}}; }

  /// Normal form of Z^free + (+)_i Z/orders_i; orders of 1 are dropped.
  static FgAbGroup from_orders(std::size_t free, std::vector<Integer> orders) {
    std::vector<Integer> pos;
    for (auto& o : orders) {
      Integer a = abs_value(o);
      if (a == 0) {
        ++free;
      } else if (a != 1) {
        pos.push_back(a);
      }
    }
    FgAbGroup g{free, {}};
    for (auto& t : divisibility_chain(std::move(pos)))
      if (t != 1) g.torsion.push_back(t);
    return g;
  }

  bool is_trivial() const { return free_rank == 0 && torsion.empty(); }

  friend bool operator==(const FgAbGroup& a, const FgAbGroup& b) {
    return a.free_rank == b.free_rank && a.torsion == b.torsion;
  }
  friend bool operator!=(const FgAbGroup& a, const FgAbGroup& b) { return !(a == b); }

  std::string str() const {
    std::string out;
    if (free_rank == 1) out = "Z";
    if (free_rank > 1) out = "Z^" + std::to_string(free_rank);
    for (const auto& t : torsion) {
      if (!out.empty()) out += " + ";
      out += "Z/" + t.str();
    }
    return out.empty() ? "0" : out;
  }
};

/// coker(A) = Z^rows / im A.
inline FgAbGroup cokernel_group(const IntMatrix& a) {
  auto d = smith_diagonal(a);
  return FgAbGroup::from_orders(a.rows() - d.size(), d);
}

inline FgAbGroup kernel_group(const IntMatrix& a) { return FgAbGroup::free(a.cols() - rank(a)); }

/// ker(d_out) / im(d_in).
inline FgAbGroup homology_at(const IntMatrix& d_out, const IntMatrix& d_in) {
  if (d_out.cols() != d_in.rows())
    throw Error(ErrorCode::DimensionMismatch, "cols(d_out) = " + std::to_string(d_out.cols()) +
                                                  " but rows(d_in) = " + std::to_string(d_in.rows()));
  if (!(d_out * d_in).is_zero()) throw Error(ErrorCode::CompositionNonzero, "d_out * d_in != 0");
  // ker(d_out) is saturated, so the torsion of ker/im is the torsion of coker(d_in).
  std::size_t r_out = rank(d_out);
  auto d = smith_diagonal(d_in);
  return FgAbGroup::from_orders(d_out.cols() - r_out - d.size(), d);
}

/// H_n (x) Z/m + Tor(H_{n-1}, Z/m).
inline FgAbGroup coefficients_via_uct(const FgAbGroup& h_n, const FgAbGroup& h_nm1, const Integer& m) {
  if (m < 2) throw Error(ErrorCode::BadModulus, "modulus " + m.str() + " < 2");
  std::vector<Integer> orders(h_n.free_rank, m);
  for (const auto& t : h_n.torsion) orders.push_back(gcd(t, m));
  for (const auto& t : h_nm1.torsion) orders.push_back(gcd(t, m));
  return FgAbGroup::from_orders(0, std::move(orders));
}

/// span(big) / span(small); small must lie in span(big), big must have independent columns.
inline FgAbGroup quotient_group(const IntMatrix& big, const IntMatrix& small) {
  ColumnReduction cr(big);
  IntMatrix y = solve_columns(cr, small);
  auto d = smith_diagonal(y);
  return FgAbGroup::from_orders(big.cols() - d.size(), d);
}

/// Explicit generators of span(cycles) / span(boundaries) with coordinates for any cycle.
class Presentation {
 public:
  Presentation(IntMatrix cycles, const IntMatrix& boundaries)
      : cycles_(std::move(cycles)), reduction_(cycles_) {
    IntMatrix y = solve_columns(reduction_, boundaries);
    auto s = snf(y);
    std::size_t k = cycles_.cols();
    IntMatrix zu = cycles_ * s.U;
    generators_ = IntMatrix(cycles_.rows(), 0);
    for (std::size_t i = 0; i < k; ++i) {
      Integer order = i < s.diagonal.size() ? s.diagonal[i] : Integer(0);
      if (order == 1) continue;
      kept_.push_back(i);
      orders_.push_back(order);
      generators_.append_column(zu.column(i));
    }
    p_ = s.P;
  }

  /// Orders of the generators, 0 for free ones.
  const std::vector<Integer>& orders() const { return orders_; }
  const IntMatrix& generators() const { return generators_; }
  const IntMatrix& cycles() const { return cycles_; }

  FgAbGroup group() const { return FgAbGroup::from_orders(0, orders_); }

  /// Coordinates of the class of a cycle; throws NoSolution if it is not a cycle.
  Vector coordinates(const Vector& z) const {
    auto c = reduction_.solve(z);
    if (!c) throw Error(ErrorCode::NoSolution, "vector is not in the cycle lattice");
    Vector full = p_.apply(*c);
    Vector out;
    for (std::size_t t = 0; t < kept_.size(); ++t) {
      Integer v = full[kept_[t]];
      if (orders_[t] != 0) {
        v %= orders_[t];
        if (v < 0) v += orders_[t];
      }
      out.push_back(v);
    }
    return out;
  }

  /// Matrix of the map induced by a chain map F into `target`.
  IntMatrix induced(const IntMatrix& f, const Presentation& target) const {
    IntMatrix m(target.orders_.size(), 0);
    for (std::size_t j = 0; j < generators_.cols(); ++j) {
      Vector img = f.apply(generators_.column_dense(j));
      m.append_column(IntMatrix::column_vector(target.coordinates(img)).column(0));
    }
    return m;
  }

 private:
  IntMatrix cycles_;
  ColumnReduction reduction_;
  IntMatrix generators_;
  std::vector<std::size_t> kept_;
  std::vector<Integer> orders_;
  IntMatrix p_;
};

/// Presentation of ker(d_out) / im(d_in).
inline Presentation homology_presentation(const IntMatrix& d_out, const IntMatrix& d_in) {
  if (d_out.cols() != d_in.rows()) throw Error(ErrorCode::DimensionMismatch, "complex shape mismatch");
  return Presentation(kernel_basis(d_out), d_in);
}

}  // namespace groupoidal
