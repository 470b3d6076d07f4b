#pragma once

#include <optional>
#include <string>
#include <vector>

#include "polycert/cubic_form.hpp"
#include "polycert/polynomial.hpp"
#include "polycert/rat_linalg.hpp"

namespace polycert::cubicmin {

// Witness emitted when the third-order condition fails at a second-order
// point: the curve x(a) = xbar + a*dhat + quad_coeff*a^2*z descends for all
// small a != 0.
struct DescentParabola {
  RatVector direction;          // dhat in the Hessian null space, exact
  std::vector<double> z;        // unit vector -grad p3(dhat)/||.||
  double quad_coeff = 0.0;      // |grad p3(dhat)' z| / (z' H z)
};

struct ClassificationReport {
  bool critical = false;
  bool second_order = false;
  bool tonc_holds = false;
  bool toc_holds = false;
  bool local_min = false;
  bool strict_local_min = false;
  bool certified = false;  // decided in exact rational arithmetic
  std::optional<DescentParabola> witness;
  std::string to_json() const;
};

// Exact spanning basis of the null space of a symmetric rational matrix.
std::vector<RatVector> rational_nullspace_basis(const RatMatrix& h);

// Classifies a point against a polynomial of degree <= 3 (throws on higher
// degree: the third-order characterization of local minima is specific to
// cubics). Rational points take the exact route: gradient vanishing, PSD by
// diagonal pivoting, PD by leading minors, and the third-order condition by
// checking that all coefficients of grad p3 composed with a rational null
// space basis vanish. Floating points take a tolerance-based variant and the
// report is flagged non-certified.
ClassificationReport classify_point(const Polynomial& p, const Point& x, double tol = 1e-8);

}  // namespace polycert::cubicmin
