#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polycert/cubicmin/newton3.hpp"

#include <cmath>

using namespace polycert;
using namespace polycert::cubicmin;

namespace {
// f(x) = 20 x arctan(x) - 10 log(1 + x^2) + x^2
UnivariateDerivs arctan_objective() {
  UnivariateDerivs d;
  d.f = [](double x) { return 20 * x * std::atan(x) - 10 * std::log(1 + x * x) + x * x; };
  d.f1 = [](double x) { return 20 * std::atan(x) + 2 * x; };
  d.f2 = [](double x) { return 2 + 20 / (1 + x * x); };
  d.f3 = [](double x) { return -40 * x / ((1 + x * x) * (1 + x * x)); };
  return d;
}
}  // namespace

TEST_CASE("third-order Newton reproduces the published iterates") {
  UnivariateDerivs d = arctan_objective();
  UnivariateTrace tr = third_order_newton(d, 1.5, 4);
  REQUIRE(tr.iterates.size() >= 4);
  CHECK(tr.values[0] == doctest::Approx(19.9473).epsilon(1e-4));
  CHECK(tr.iterates[1] == doctest::Approx(-0.2327).epsilon(5e-3));
  CHECK(std::abs(tr.iterates[1] - (-0.2327)) <= 1e-3);
  CHECK(std::abs(tr.values[1] - 0.5910) <= 1e-3);
  CHECK(std::abs(tr.iterates[3]) <= 1e-6);
}

TEST_CASE("classical Newton comparison from the same start") {
  UnivariateDerivs d = arctan_objective();
  UnivariateTrace tr = classical_newton(d, 1.5, 4);
  REQUIRE(tr.iterates.size() >= 2);
  CHECK(std::abs(tr.iterates[1] - (-1.2786)) <= 1e-3);
}

TEST_CASE("degenerate f''' = 0 falls back to a Newton step") {
  UnivariateDerivs d;
  d.f = [](double x) { return x * x; };
  d.f1 = [](double x) { return 2 * x; };
  d.f2 = [](double) { return 2.0; };
  d.f3 = [](double) { return 0.0; };
  UnivariateTrace tr = third_order_newton(d, 3.0, 2);
  CHECK(tr.iterates[1] == doctest::Approx(0.0));
  CHECK(tr.values[1] == doctest::Approx(0.0));
}

TEST_CASE("multivariate third-order Newton is exact on cubics") {
  // f = (x1 - 1)^2 + (x2 + 2)^2 + x1^3 / 10 restricted near its local min:
  // one model step from the start lands on a local minimum of f itself,
  // because the third-order model of a cubic is the cubic.
  Polynomial f(2);
  f.add_term({2, 0}, 1);
  f.add_term({1, 0}, -2);
  f.add_term({0, 2}, 1);
  f.add_term({0, 1}, 4);
  f.add_term({0, 0}, 5);
  f.add_term({3, 0}, Rational(1, 10));
  MultivariateTrace tr = third_order_newton(f, {0.0, 0.0}, 1, 1e-8);
  REQUIRE(tr.iterates.size() == 2);
  auto grad = f.gradient();
  for (const auto& g : grad)
    CHECK(std::abs(g.evaluate(tr.iterates[1])) <= 1e-5);
}

TEST_CASE("multivariate iteration halts when the model has no local minimum") {
  Polynomial f(1);  // x^3: the model is x^3 itself, which has no local minimum
  f.add_term({3}, 1);
  MultivariateTrace tr = third_order_newton(f, {1.0}, 3, 1e-8);
  CHECK(tr.iterates.size() == 1);
  CHECK(tr.halt_reason == "third-order model has no local minimum");
}
