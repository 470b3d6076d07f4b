#pragma once

#include <vector>

#include "polycert/polynomial.hpp"
#include "polycert/rat_linalg.hpp"

namespace polycert {

// The (H_1..H_n, Q, b) parameterization of a cubic: the polynomial
// (1/6) sum_i x^T x_i H_i x + (1/2) x^T Q x + b^T x, constant term dropped.
// Its Hessian is the affine pencil sum_i x_i H_i + Q.
struct CubicCanonical {
  int n = 0;
  std::vector<RatMatrix> H;  // n symmetric n x n, (H_i)_{jk} symmetric in all indices
  RatMatrix Q;               // symmetric n x n
  RatVector b;               // length n

  // Hessian pencil evaluated at a point.
  RatMatrix hessian_at(const RatVector& x) const;
  std::vector<double> grad_at_num(const std::vector<double>& x) const;
  RatVector grad_at(const RatVector& x) const;

  // Reconstructs the polynomial (constant term zero).
  Polynomial to_polynomial() const;

  // Checks (H_i)_{jk} = (H_j)_{ik} = (H_k)_{ij} and symmetry of Q.
  bool valid() const;
};

// Exact canonical form of a polynomial of degree <= 3 (throws otherwise).
// The constant term of p is not representable and is dropped.
CubicCanonical to_cubic_canonical(const Polynomial& p);

// Canonical form of the model g^T d + (1/2) d^T H d + (1/6) T[d,d,d].
// T is given as a flat n*n*n array, symmetric under index permutations.
CubicCanonical cubic_model_from_derivatives(const RatVector& g, const RatMatrix& H,
                                            const std::vector<Rational>& T);

}  // namespace polycert
