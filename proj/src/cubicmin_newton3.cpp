#include "polycert/cubicmin/newton3.hpp"

#include <cmath>

namespace polycert::cubicmin {

UnivariateTrace third_order_newton(const UnivariateDerivs& d, double x0, int iters) {
  UnivariateTrace tr;
  double x = x0;
  tr.iterates.push_back(x);
  tr.values.push_back(d.f(x));
  for (int k = 0; k < iters; ++k) {
    double g = d.f1(x), h = d.f2(x), t = d.f3(x);
    double disc = h * h - 2.0 * g * t;
    double step;
    if (std::abs(t) < 1e-12 || disc < 0) {
      if (std::abs(h) < 1e-300) {
        tr.halt_reason = "vanishing second derivative";
        break;
      }
      step = -g / h;  // Newton fallback
    } else {
      step = -(h - std::sqrt(disc)) / t;
    }
    x += step;
    if (!std::isfinite(x)) {
      tr.halt_reason = "iterate diverged";
      break;
    }
    tr.iterates.push_back(x);
    tr.values.push_back(d.f(x));
  }
  return tr;
}

UnivariateTrace classical_newton(const UnivariateDerivs& d, double x0, int iters) {
  UnivariateTrace tr;
  double x = x0;
  tr.iterates.push_back(x);
  tr.values.push_back(d.f(x));
  for (int k = 0; k < iters; ++k) {
    double h = d.f2(x);
    if (std::abs(h) < 1e-300) {
      tr.halt_reason = "vanishing second derivative";
      break;
    }
    x -= d.f1(x) / h;
    if (!std::isfinite(x)) {
      tr.halt_reason = "iterate diverged";
      break;
    }
    tr.iterates.push_back(x);
    tr.values.push_back(d.f(x));
  }
  return tr;
}

MultivariateTrace third_order_newton(const MultivariateDerivs& d, std::vector<double> x0,
                                     int iters, double tol) {
  MultivariateTrace tr;
  int n = static_cast<int>(x0.size());
  std::vector<double> x = std::move(x0);
  tr.iterates.push_back(x);
  tr.values.push_back(d.f(x));
  for (int k = 0; k < iters; ++k) {
    std::vector<double> g = d.grad(x), h = d.hess(x), t = d.third(x);
    RatVector gr(n);
    RatMatrix Hr(n, n);
    std::vector<Rational> Tr(n * n * n);
    for (int i = 0; i < n; ++i) gr[i] = rational_from_double(g[i]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Hr(i, j) = rational_from_double(h[i * n + j]);
    for (size_t i = 0; i < Tr.size(); ++i) Tr[i] = rational_from_double(t[i]);
    CubicCanonical model = cubic_model_from_derivatives(gr, Hr, Tr);
    LocalMinSearchResult lm = find_local_minimum(model.to_polynomial(), false, tol);
    if (lm.outcome != LocalMinOutcome::LocalMin) {
      tr.halt_reason = lm.outcome == LocalMinOutcome::NoLocalMin
                           ? "third-order model has no local minimum"
                           : "model subproblem inconclusive";
      break;
    }
    for (int i = 0; i < n; ++i) x[i] += lm.point[i];
    tr.iterates.push_back(x);
    tr.values.push_back(d.f(x));
  }
  return tr;
}

MultivariateTrace third_order_newton(const Polynomial& f, std::vector<double> x0, int iters,
                                     double tol) {
  int n = f.nvars();
  auto grad = f.gradient();
  auto hess = f.hessian();
  std::vector<std::vector<Polynomial>> third(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) third[i].push_back(hess[j][k].partial(i));

  MultivariateDerivs d;
  d.f = [&f](const std::vector<double>& x) { return f.evaluate(x); };
  d.grad = [&grad, n](const std::vector<double>& x) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = grad[i].evaluate(x);
    return g;
  };
  d.hess = [&hess, n](const std::vector<double>& x) {
    std::vector<double> h(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h[i * n + j] = hess[i][j].evaluate(x);
    return h;
  };
  d.third = [&third, n](const std::vector<double>& x) {
    std::vector<double> t(n * n * n);
    for (int i = 0; i < n; ++i)
      for (int jk = 0; jk < n * n; ++jk) t[i * n * n + jk] = third[i][jk].evaluate(x);
    return t;
  };
  return third_order_newton(d, std::move(x0), iters, tol);
}

}  // namespace polycert::cubicmin
