#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polycert/cubicmin/search.hpp"

#include <cmath>
#include <random>

using namespace polycert;
using namespace polycert::cubicmin;
using conic::SolveStatus;

namespace {

Polynomial x1sq_x2() {
  Polynomial p(2);
  p.add_term({2, 1}, 1);
  return p;
}

Polynomial cube_minus_6x() {
  Polynomial p(1);
  p.add_term({3}, 1);
  p.add_term({1}, -6);
  return p;
}

// Random cubic with a planted second-order point xbar: the Hessian at xbar is
// a random psd matrix and the gradient vanishes there.
Polynomial planted_cubic(std::mt19937_64& rng, int n, std::vector<Rational>& xbar_out) {
  std::vector<Rational> xbar(n);
  for (int i = 0; i < n; ++i) xbar[i] = Rational(static_cast<int>(rng() % 5) - 2, 2);
  Polynomial p3(n);
  for (const auto& m : monomial_basis(n, 3, true)) {
    int c = static_cast<int>(rng() % 7) - 3;
    if (c != 0) p3.add_term(m, Rational(c));
  }
  CubicCanonical c3 = to_cubic_canonical(p3);
  // W = V'V psd; Q = W - sum_i xbar_i H_i so Hess p(xbar) = W.
  RatMatrix V(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) V(i, j) = Rational(static_cast<int>(rng() % 5) - 2);
  RatMatrix W = V.transposed() * V;
  RatMatrix Q = W;
  for (int i = 0; i < n; ++i) {
    RatMatrix scaled = c3.H[i];
    scaled *= -xbar[i];
    Q += scaled;
  }
  CubicCanonical c;
  c.n = n;
  c.H = c3.H;
  c.Q = Q;
  c.b.assign(n, Rational(0));
  RatVector g = c.grad_at(xbar);
  for (int i = 0; i < n; ++i) c.b[i] = -g[i];
  xbar_out = xbar;
  return c.to_polynomial();
}

}  // namespace

TEST_CASE("second_order_sdp on x1^2 x2 reaches objective zero with y in SO_p") {
  auto out = second_order_sdp(to_cubic_canonical(x1sq_x2()), 1e-8);
  REQUIRE(out.outcome.status == SolveStatus::Optimal);
  CHECK(out.outcome.value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(out.outcome.value >= -1e-7);  // objective nonnegativity
  REQUIRE(out.solution.has_value());
  // SO_p = {x1 = 0, x2 >= 0}
  CHECK(std::abs(out.solution->y[0]) <= 1e-4);
  CHECK(out.solution->y[1] >= -1e-4);
}

TEST_CASE("second_order_sdp on a nonconstant linear polynomial has no SOP") {
  Polynomial p(1);
  p.add_term({1}, 1);
  auto out = second_order_sdp(to_cubic_canonical(p), 1e-8);
  bool ruled_out = out.outcome.status == SolveStatus::Infeasible ||
                   (out.outcome.status == SolveStatus::Optimal && out.outcome.value > 1e-4);
  CHECK(ruled_out);
}

TEST_CASE("second_order_sdp on x^3 finds the origin") {
  Polynomial p(1);
  p.add_term({3}, 1);
  auto out = second_order_sdp(to_cubic_canonical(p), 1e-8);
  REQUIRE(out.outcome.status == SolveStatus::Optimal);
  CHECK(out.outcome.value == doctest::Approx(0.0).epsilon(1e-6));
  CHECK(std::abs(out.solution->y[0]) <= 1e-3);
}

TEST_CASE("cubic_sos_relaxation value for x^3 - 6x is p(sqrt 2)") {
  auto res = cubic_sos_relaxation(to_cubic_canonical(cube_minus_6x()), 1e-8);
  REQUIRE(res.outcome.status == SolveStatus::Optimal);
  CHECK(res.gamma == doctest::Approx(-4 * std::sqrt(2.0)).epsilon(1e-6));
}

TEST_CASE("cubic_sos_relaxation equals p(xbar) on planted instances") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 2 + static_cast<int>(rng() % 2);
    std::vector<Rational> xbar;
    Polynomial p = planted_cubic(rng, n, xbar);
    auto res = cubic_sos_relaxation(to_cubic_canonical(p), 1e-8);
    REQUIRE(res.outcome.status == SolveStatus::Optimal);
    double px = to_double(p.evaluate(xbar));
    CHECK(res.gamma == doctest::Approx(px).epsilon(1e-5));
    // The planted point belongs to the recovered spectrahedron.
    std::vector<double> xd(n);
    for (int i = 0; i < n; ++i) xd[i] = to_double(xbar[i]);
    CHECK(gamma_contains(to_cubic_canonical(p), res, xd, 1e-4));
  }
}

TEST_CASE("gamma and the second-order SDP agree on x1^2 x2") {
  CubicCanonical c = to_cubic_canonical(x1sq_x2());
  auto res = cubic_sos_relaxation(c, 1e-8);
  REQUIRE(res.outcome.status == SolveStatus::Optimal);
  CHECK(res.gamma == doctest::Approx(0.0).epsilon(1e-6));
  // Points of SO_p = {x1 = 0, x2 >= 0} lie in Gamma; others do not.
  CHECK(gamma_contains(c, res, {0.0, 1.0}, 1e-4));
  CHECK(gamma_contains(c, res, {0.0, 0.25}, 1e-4));
  CHECK(!gamma_contains(c, res, {0.5, 1.0}, 1e-4));
  CHECK(!gamma_contains(c, res, {0.0, -1.0}, 1e-4));
}

TEST_CASE("find_local_minimum: x^3 - 6x has the strict minimum sqrt(2)") {
  auto res = find_local_minimum(cube_minus_6x(), false, 1e-8);
  REQUIRE(res.outcome == LocalMinOutcome::LocalMin);
  CHECK(res.point[0] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));
  CHECK(res.strict);
  CHECK(res.esdp_calls == 3);
}

TEST_CASE("find_local_minimum: x^3 has none (relint point fails TOC)") {
  Polynomial p(1);
  p.add_term({3}, 1);
  auto res = find_local_minimum(p, false, 1e-8);
  REQUIRE(res.outcome == LocalMinOutcome::NoLocalMin);
  CHECK(res.reason == "relint point fails TOC");
}

TEST_CASE("find_local_minimum: x2^2 - x1^2 x2 has none") {
  Polynomial p(2);
  p.add_term({0, 2}, 1);
  p.add_term({2, 1}, -1);
  auto res = find_local_minimum(p, false, 1e-8);
  CHECK(res.outcome == LocalMinOutcome::NoLocalMin);
}

TEST_CASE("find_local_minimum lands on the line x1 + x2 = 1") {
  Polynomial p(2);
  p.add_term({3, 0}, 1);
  p.add_term({2, 1}, 3);
  p.add_term({1, 2}, 3);
  p.add_term({0, 3}, 1);
  p.add_term({1, 0}, -3);
  p.add_term({0, 1}, -3);
  auto res = find_local_minimum(p, false, 1e-8);
  REQUIRE(res.outcome == LocalMinOutcome::LocalMin);
  CHECK(res.point[0] + res.point[1] == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(!res.strict);
  // Asking for a strict local minimum correctly reports there is none.
  auto strict = find_local_minimum(p, true, 1e-8);
  CHECK(strict.outcome == LocalMinOutcome::NoLocalMin);
}

TEST_CASE("SO_p consistency between the two oracles on planted instances") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Rational> xbar;
    Polynomial p = planted_cubic(rng, 2, xbar);
    CubicCanonical c = to_cubic_canonical(p);
    auto so = second_order_sdp(c, 1e-8);
    REQUIRE(so.outcome.status == SolveStatus::Optimal);
    if (so.outcome.value > 1e-6) continue;  // no second-order point planted? never here
    std::vector<double> y(c.n);
    for (int i = 0; i < c.n; ++i) y[i] = so.solution->y[i];
    auto rel = cubic_sos_relaxation(c, 1e-8);
    REQUIRE(rel.outcome.status == SolveStatus::Optimal);
    CHECK(gamma_contains(c, rel, y, 1e-3));
    // And the recovered y passes the tolerance classifier as second-order.
    auto rep = classify_point(p, Point::from_doubles(y), 1e-4);
    CHECK(rep.second_order);
  }
}
