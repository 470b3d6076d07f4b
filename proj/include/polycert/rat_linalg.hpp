#pragma once

#include <optional>
#include <vector>

#include "polycert/rational.hpp"

namespace polycert {

// Dense matrix over the rationals. Small and exact; this backs Algorithm-style
// classification code where tolerances are not allowed.
class RatMatrix {
 public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols) {}

  static RatMatrix identity(int n);
  static RatMatrix zero(int rows, int cols) { return RatMatrix(rows, cols); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rational& operator()(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  bool is_zero() const;
  bool is_symmetric() const;

  RatMatrix transposed() const;
  RatMatrix operator*(const RatMatrix& rhs) const;
  RatMatrix operator+(const RatMatrix& rhs) const;
  RatMatrix operator-(const RatMatrix& rhs) const;
  RatMatrix& operator+=(const RatMatrix& rhs);
  RatMatrix& operator*=(const Rational& s);

  std::vector<Rational> mul(const std::vector<Rational>& v) const;

  bool operator==(const RatMatrix& rhs) const = default;

 private:
  int rows_, cols_;
  std::vector<Rational> a_;
};

using RatVector = std::vector<Rational>;

Rational dot(const RatVector& a, const RatVector& b);

// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(RatMatrix& m);

int rank(RatMatrix m);

// Exact spanning basis of the null space of m (empty list when nonsingular).
std::vector<RatVector> nullspace_basis(const RatMatrix& m);

// Exact PSD test by symmetric Gaussian diagonal pivoting: strip zero
// rows/columns, reject negative diagonals and zero-diagonal rows with
// off-diagonal mass, pivot on a positive diagonal entry, recurse.
bool is_psd(const RatMatrix& m);

// Exact PD test via positivity of all leading principal minors.
bool is_pd(const RatMatrix& m);

Rational determinant(RatMatrix m);

// Solves a*x = b exactly. Returns nullopt when inconsistent. When the system
// is underdetermined, free variables are set to zero; *unique, when supplied,
// reports whether the solution was unique.
std::optional<RatVector> solve_linear(RatMatrix a, RatVector b, bool* unique = nullptr);

}  // namespace polycert
