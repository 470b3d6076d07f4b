#pragma once

#include <map>
#include <string>
#include <vector>

#include "polycert/conic/program.hpp"
#include "polycert/polynomial.hpp"

namespace polycert::conic {

// Polynomial whose coefficients are affine expressions over program variables.
// The carrier for sum-of-squares compilation: Gram-parameterized polynomials,
// products with known polynomials, and coefficientwise identities.
struct SymPoly {
  int nvars = 0;
  std::map<Monomial, LinExpr> coeffs;

  static SymPoly zero(int nvars) { return SymPoly{nvars, {}}; }
  static SymPoly from(const Polynomial& p);

  SymPoly& operator+=(const SymPoly& rhs);
  SymPoly& operator-=(const SymPoly& rhs);
  SymPoly times(const Polynomial& q) const;  // this * q
  SymPoly scaled(double s) const;
};

// sigma(x) = z(x)' Q z(x) with z the monomial basis of degree <= half_deg and
// Q a fresh PSD Gram variable. Gram indices follow monomial_basis order.
struct SosPoly {
  MatrixVar gram;
  std::vector<Monomial> basis;
  SymPoly poly;
};

SosPoly make_sos_poly(ConicProgram& prog, int nvars, int half_deg,
                      const std::string& name = "");

// n x n sos-matrix S(x) with degree-2 entries: y' S(x) y = w' Q w where
// w = y (x) (1, x_1, ..., x_nx) and Q is PSD of size n*(nx+1).
struct SosMatrix {
  MatrixVar gram;
  int nx = 0;  // number of x variables
  int n = 0;   // matrix size
  int windex(int j, int t) const { return j * (nx + 1) + t; }
};

SosMatrix make_sos_matrix(ConicProgram& prog, int nx, int n, const std::string& name = "");

// Entry S_ij(x) as a symbolic polynomial in x (degree <= 2).
SymPoly sos_matrix_entry(const SosMatrix& sm, int i, int j);

// Adds the coefficientwise identity sp == 0.
void add_equal_zero(ConicProgram& prog, const SymPoly& sp);

// Constrains target to be a sum of squares with degree bound 2*half_deg; the
// bound must be even, which is enforced by taking the half-degree. Returns the
// Gram variable so callers can read the certificate back.
SosPoly constrain_sos(ConicProgram& prog, const SymPoly& target, int half_deg,
                      const std::string& name = "");

// Evaluates z(x)' Q z(x) numerically from a solved Gram matrix.
double eval_gram_poly(const std::vector<Monomial>& basis, const Eigen::MatrixXd& Q,
                      const std::vector<double>& x);

// Rebuilds the polynomial of a solved Gram matrix with double coefficients
// (used by certificate replay, which re-verifies identities independently).
std::map<Monomial, double> gram_to_coeffs(const std::vector<Monomial>& basis,
                                          const Eigen::MatrixXd& Q);

}  // namespace polycert::conic
