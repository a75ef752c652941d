#pragma once

#include <vector>

#include "fgdesc/group.hpp"

namespace fgdesc {

/// Explicit F_q arithmetic for q = p^n up to the dense-table bound.
/// Elements are indexed 0..q-1; index e encodes the polynomial
/// sum_i digit_i(e) * x^i over F_p, reduced modulo a fixed irreducible
/// (the lexicographically least monic irreducible of degree n).
class FiniteField {
 public:
  explicit FiniteField(int q);

  int q() const { return q_; }
  int p() const { return p_; }
  int degree() const { return n_; }
  int zero() const { return 0; }
  int one() const { return 1; }

  int add(int a, int b) const { return add_[a * q_ + b]; }
  int mul(int a, int b) const { return mul_[a * q_ + b]; }
  int neg(int a) const { return neg_[a]; }
  int inverse(int a) const;  // a != 0
  int pow(int a, long long e) const;
  int frobenius(int a) const { return pow(a, p_); }

  /// Multiplicative order of a != 0.
  int mult_order(int a) const;
  /// Least generator of the multiplicative group.
  int primitive_element() const;

  /// Coefficients (in F_p, as 0..p-1) of the minimal polynomial of c over
  /// F_p, lowest degree first, monic. Computed from the Frobenius orbit.
  std::vector<int> minimal_polynomial(int c) const;

  const std::vector<int>& irreducible() const { return irred_; }

 private:
  int q_, p_, n_;
  std::vector<int> add_, mul_, neg_;
  std::vector<int> irred_;  // monic irreducible, coefficients low-to-high
};

/// PSL(2, q) acting on the projective line (q+1 points), as a dense table.
FiniteGroup psl2(int q);

}  // namespace fgdesc
