#pragma once

#include <functional>
#include <string>
#include <vector>

#include "polycert/cubicmin/search.hpp"

namespace polycert::cubicmin {

struct UnivariateTrace {
  std::vector<double> iterates;  // x_0 .. x_k
  std::vector<double> values;    // f(x_0) .. f(x_k)
  std::string halt_reason;       // empty when the full iteration budget ran
};

struct UnivariateDerivs {
  std::function<double(double)> f, f1, f2, f3;
};

// x_{k+1} = x_k - (f'' - sqrt(f''^2 - 2 f' f'''))/f''', the step to the local
// minimum of the third-order Taylor model. Falls back to a plain Newton step
// when the discriminant is negative or f''' vanishes (|f'''| < 1e-12), where
// the update is undefined.
UnivariateTrace third_order_newton(const UnivariateDerivs& d, double x0, int iters);

// Classical comparison iteration x_{k+1} = x_k - f'/f''.
UnivariateTrace classical_newton(const UnivariateDerivs& d, double x0, int iters);

struct MultivariateDerivs {
  // value, gradient, Hessian (dense row-major), and symmetric third-derivative
  // tensor (flat n*n*n) at a point.
  std::function<double(const std::vector<double>&)> f;
  std::function<std::vector<double>(const std::vector<double>&)> grad;
  std::function<std::vector<double>(const std::vector<double>&)> hess;
  std::function<std::vector<double>(const std::vector<double>&)> third;
};

struct MultivariateTrace {
  std::vector<std::vector<double>> iterates;
  std::vector<double> values;
  std::string halt_reason;
};

// Moves to a local minimum of the third-order Taylor model in each iteration
// (via the cubic local-minimum search); halts with a reason when the model
// has no local minimum.
MultivariateTrace third_order_newton(const MultivariateDerivs& d, std::vector<double> x0,
                                     int iters, double tol = 1e-8);

// Third-order Newton on a polynomial objective: derivatives are symbolic.
MultivariateTrace third_order_newton(const Polynomial& f, std::vector<double> x0, int iters,
                                     double tol = 1e-8);

}  // namespace polycert::cubicmin
