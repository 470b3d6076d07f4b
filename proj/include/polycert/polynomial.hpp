#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polycert/rational.hpp"

namespace polycert {

// Exponent vector; length equals the ambient number of variables.
using Monomial = std::vector<int>;

// Sparse multivariate polynomial with exact rational coefficients. Immutable
// in spirit: operations return new values.
class Polynomial {
 public:
  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int i);

  int nvars() const { return nvars_; }
  const std::map<Monomial, Rational>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  // Degree of the zero polynomial is a distinct sentinel (nullopt), never -1.
  std::optional<int> degree() const;

  void add_term(const Monomial& m, const Rational& c);
  Rational coeff(const Monomial& m) const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator-() const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(const Rational& s) const;
  Polynomial& operator+=(const Polynomial& rhs);
  Polynomial& operator-=(const Polynomial& rhs);
  bool operator==(const Polynomial& rhs) const = default;

  Polynomial pow(int e) const;

  Rational evaluate(const std::vector<Rational>& x) const;
  double evaluate(const std::vector<double>& x) const;

  Polynomial partial(int i) const;
  std::vector<Polynomial> gradient() const;
  std::vector<std::vector<Polynomial>> hessian() const;

  // Terms of total degree exactly d.
  Polynomial homogeneous_part(int d) const;

  // Substitutes images[i] for variable i; all images share one variable count.
  Polynomial compose(const std::vector<Polynomial>& images) const;

  double max_abs_coeff_double() const;
  std::string to_string() const;

  std::string to_json() const;
  static Polynomial from_json(const std::string& text);

 private:
  int nvars_;
  std::map<Monomial, Rational> terms_;
};

// Evaluation point. Exact points carry rationals; inexact ones only doubles.
struct Point {
  std::vector<Rational> rational_coords;
  std::vector<double> double_coords;
  bool exact = false;

  static Point from_rationals(std::vector<Rational> coords);
  static Point from_doubles(std::vector<double> coords);
  int dim() const { return exact ? static_cast<int>(rational_coords.size()) : static_cast<int>(double_coords.size()); }
};

// evaluate(p, x): exact value for rational points, floating otherwise.
Rational evaluate_exact(const Polynomial& p, const Point& x);
double evaluate_num(const Polynomial& p, const Point& x);

// Monomials of total degree <= d (or == d when exact_degree), in graded
// lexicographic order: ascending total degree, ties by descending exponent of
// x1, then x2, and so on. Gram matrix indices are defined against this order.
std::vector<Monomial> monomial_basis(int nvars, int d, bool exact_degree = false);

}  // namespace polycert
