#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polycert/cubicmin/classify.hpp"

#include <random>

using namespace polycert;
using namespace polycert::cubicmin;

namespace {
Point rp(std::vector<int> v) {
  std::vector<Rational> r(v.begin(), v.end());
  return Point::from_rationals(r);
}
}  // namespace

TEST_CASE("x1^2 x2 at (0,1) is a local minimum") {
  Polynomial p(2);
  p.add_term({2, 1}, 1);
  ClassificationReport r = classify_point(p, rp({0, 1}));
  CHECK(r.certified);
  CHECK(r.critical);
  CHECK(r.second_order);
  CHECK(r.toc_holds);
  CHECK(r.local_min);
  CHECK(!r.strict_local_min);
}

TEST_CASE("x1^2 x2 at (0,0): second-order point, TOC violated") {
  Polynomial p(2);
  p.add_term({2, 1}, 1);
  ClassificationReport r = classify_point(p, rp({0, 0}));
  CHECK(r.critical);
  CHECK(r.second_order);
  CHECK(!r.toc_holds);
  CHECK(!r.local_min);
  CHECK(r.witness.has_value());
}

TEST_CASE("x2^2 - x1^2 x2 at origin: TONC holds, TOC fails, descent parabola") {
  Polynomial p(2);
  p.add_term({0, 2}, 1);
  p.add_term({2, 1}, -1);
  ClassificationReport r = classify_point(p, rp({0, 0}));
  CHECK(r.critical);
  CHECK(r.second_order);
  CHECK(r.tonc_holds);
  CHECK(!r.toc_holds);
  CHECK(!r.local_min);
  REQUIRE(r.witness.has_value());
  // The prescribed parabola is x2 = (1/2) x1^2: direction (1,0), z = (0,1).
  CHECK(r.witness->direction[0] != 0);
  CHECK(r.witness->direction[1] == 0);
  CHECK(r.witness->z[0] == doctest::Approx(0.0));
  CHECK(r.witness->z[1] == doctest::Approx(1.0));
  double dirscale = to_double(r.witness->direction[0]);
  // Rescale to a unit direction: the parabola coefficient then equals 1/2.
  CHECK(r.witness->quad_coeff / (dirscale * dirscale) == doctest::Approx(0.5));

  // The parabola descends: p < 0 on x2 = x1^2/2 except at the origin.
  for (double a : {0.2, -0.3, 0.05}) {
    double x1 = a * dirscale;
    double x2 = r.witness->quad_coeff * a * a;
    CHECK(p.evaluate(std::vector<double>{x1, x2}) < 0);
  }
}

TEST_CASE("x^3 - 6x at sqrt(2), floating, is a strict local minimum") {
  Polynomial p(1);
  p.add_term({3}, 1);
  p.add_term({1}, -6);
  ClassificationReport r = classify_point(p, Point::from_doubles({std::sqrt(2.0)}), 1e-8);
  CHECK(!r.certified);
  CHECK(r.critical);
  CHECK(r.strict_local_min);
  CHECK(r.local_min);
}

TEST_CASE("degree-4 polynomial is rejected") {
  // 2x1^4 + 2x1^2 x2 + x2^2 has a local minimum at 0, but TOC-based
  // classification does not apply beyond cubics.
  Polynomial p(2);
  p.add_term({4, 0}, 2);
  p.add_term({2, 1}, 2);
  p.add_term({0, 2}, 1);
  CHECK_THROWS_AS(classify_point(p, rp({0, 0})), std::invalid_argument);
}

TEST_CASE("rational nullspace basis examples") {
  CHECK(rational_nullspace_basis(RatMatrix::identity(3)).empty());
  auto b = rational_nullspace_basis(RatMatrix(3, 3));
  CHECK(b.size() == 3);
  RatMatrix h(2, 2);
  h(0, 0) = 2;
  auto s = rational_nullspace_basis(h);
  REQUIRE(s.size() == 1);
  CHECK(s[0][0] == 0);
  CHECK(s[0][1] != 0);
}

TEST_CASE("set of local minima is convex (sampled)") {
  // (x1+x2)^3 - 3x1 - 3x2: local minima form the line x1 + x2 = 1.
  Polynomial p(2);
  p.add_term({3, 0}, 1);
  p.add_term({2, 1}, 3);
  p.add_term({1, 2}, 3);
  p.add_term({0, 3}, 1);
  p.add_term({1, 0}, -3);
  p.add_term({0, 1}, -3);

  std::vector<Point> minima = {rp({1, 0}), rp({0, 1}), rp({2, -1})};
  for (const auto& m : minima) CHECK(classify_point(p, m).local_min);
  // Convex combinations of local minima stay local minima.
  for (int num = 0; num <= 4; ++num) {
    Rational t(num, 4);
    std::vector<Rational> mix = {1 - t + 2 * (t - t), 0};
    mix[0] = (1 - t) * 1 + t * 2;
    mix[1] = (1 - t) * 0 + t * (-1);
    CHECK(classify_point(p, Point::from_rationals(mix)).local_min);
  }
  // A critical point off the line is not a local minimum.
  ClassificationReport off = classify_point(p, rp({-1, 0}));
  CHECK(off.critical);
  CHECK(!off.local_min);
}

TEST_CASE("two local minima share the Hessian null space") {
  Polynomial p(2);
  p.add_term({3, 0}, 1);
  p.add_term({2, 1}, 3);
  p.add_term({1, 2}, 3);
  p.add_term({0, 3}, 1);
  p.add_term({1, 0}, -3);
  p.add_term({0, 1}, -3);
  CubicCanonical c = to_cubic_canonical(p);
  auto ns1 = rational_nullspace_basis(c.hessian_at({Rational(1), Rational(0)}));
  auto ns2 = rational_nullspace_basis(c.hessian_at({Rational(0), Rational(1)}));
  REQUIRE(ns1.size() == ns2.size());
  // Same subspace: each basis vector of one lies in the span of the other.
  for (const auto& v : ns1) {
    RatMatrix stacked(static_cast<int>(ns2.size()) + 1, 2);
    for (size_t r = 0; r < ns2.size(); ++r)
      for (int j = 0; j < 2; ++j) stacked(static_cast<int>(r), j) = ns2[r][j];
    for (int j = 0; j < 2; ++j) stacked(static_cast<int>(ns2.size()), j) = v[j];
    CHECK(rank(stacked) == static_cast<int>(ns2.size()));
  }
}

TEST_CASE("gradient matches central finite differences on random cubics") {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 10; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    Polynomial p(n);
    for (const auto& m : monomial_basis(n, 3)) {
      int cv = static_cast<int>(rng() % 9) - 4;
      if (cv != 0) p.add_term(m, Rational(cv));
    }
    auto grad = p.gradient();
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = (static_cast<double>(rng() % 1000) / 500.0) - 1.0;
    const double h = 1e-5;
    for (int i = 0; i < n; ++i) {
      std::vector<double> xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      double fd = (p.evaluate(xp) - p.evaluate(xm)) / (2 * h);
      double gi = grad[i].evaluate(x);
      CHECK(std::abs(fd - gi) <= 1e-6 * std::max(1.0, std::abs(gi)));
    }
  }
}
