#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polycert/cubic_form.hpp"

#include <random>

using namespace polycert;

namespace {
Polynomial random_cubic(std::mt19937_64& rng, int n) {
  Polynomial p(n);
  for (const auto& m : monomial_basis(n, 3)) {
    int c = static_cast<int>(rng() % 9) - 4;
    if (c != 0) p.add_term(m, Rational(c));
  }
  return p;
}
}  // namespace

TEST_CASE("x1^2 x2 canonical form") {
  Polynomial p(2);
  p.add_term({2, 1}, 1);
  CubicCanonical c = to_cubic_canonical(p);
  CHECK(c.valid());
  CHECK(c.H[0](0, 0) == 0);
  CHECK(c.H[0](0, 1) == 2);
  CHECK(c.H[0](1, 0) == 2);
  CHECK(c.H[0](1, 1) == 0);
  CHECK(c.H[1](0, 0) == 2);
  CHECK(c.H[1](0, 1) == 0);
  CHECK(c.H[1](1, 1) == 0);
  CHECK(c.Q.is_zero());
  CHECK(c.b[0] == 0);
  CHECK(c.b[1] == 0);
}

TEST_CASE("x^3 - 6x canonical form") {
  Polynomial p(1);
  p.add_term({3}, 1);
  p.add_term({1}, -6);
  CubicCanonical c = to_cubic_canonical(p);
  CHECK(c.H[0](0, 0) == 6);
  CHECK(c.Q(0, 0) == 0);
  CHECK(c.b[0] == -6);
}

TEST_CASE("affine polynomial gives zero H and Q") {
  Polynomial p(3);
  p.add_term({1, 0, 0}, 2);
  p.add_term({0, 0, 1}, -5);
  p.add_term({0, 0, 0}, 9);
  CubicCanonical c = to_cubic_canonical(p);
  for (int i = 0; i < 3; ++i) CHECK(c.H[i].is_zero());
  CHECK(c.Q.is_zero());
  CHECK(c.b[0] == 2);
  CHECK(c.b[1] == 0);
  CHECK(c.b[2] == -5);
}

TEST_CASE("degree > 3 rejected") {
  Polynomial p(1);
  p.add_term({4}, 1);
  CHECK_THROWS(to_cubic_canonical(p));
}

TEST_CASE("round trip reproduces p minus its constant term") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 1 + static_cast<int>(rng() % 4);
    Polynomial p = random_cubic(rng, n);
    CubicCanonical c = to_cubic_canonical(p);
    CHECK(c.valid());
    Polynomial back = c.to_polynomial();
    Polynomial diff = p - back;
    // Only the constant term may remain.
    for (const auto& [m, coef] : diff.terms()) {
      for (int e : m) CHECK(e == 0);
    }
  }
}

TEST_CASE("Hessian switch lemma on random canonicals") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 2 + static_cast<int>(rng() % 3);
    CubicCanonical c = to_cubic_canonical(random_cubic(rng, n));
    RatVector y(n), z(n);
    for (int i = 0; i < n; ++i) {
      y[i] = Rational(static_cast<int>(rng() % 9) - 4);
      z[i] = Rational(static_cast<int>(rng() % 9) - 4);
    }
    // (sum_i y_i H_i) z == (sum_i z_i H_i) y
    RatVector lhs(n), rhs(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          lhs[j] += y[i] * c.H[i](j, k) * z[k];
          rhs[j] += z[i] * c.H[i](j, k) * y[k];
        }
    for (int j = 0; j < n; ++j) CHECK(lhs[j] == rhs[j]);
  }
}

TEST_CASE("gradient of canonical matches symbolic gradient") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 1 + static_cast<int>(rng() % 3);
    Polynomial p = random_cubic(rng, n);
    CubicCanonical c = to_cubic_canonical(p);
    RatVector x(n);
    for (int i = 0; i < n; ++i) x[i] = Rational(static_cast<int>(rng() % 7) - 3, 2);
    RatVector g = c.grad_at(x);
    auto gs = p.gradient();
    for (int i = 0; i < n; ++i) CHECK(g[i] == gs[i].evaluate(x));
    // Hessian pencil matches the symbolic Hessian too.
    RatMatrix h = c.hessian_at(x);
    auto hs = p.hessian();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(h(i, j) == hs[i][j].evaluate(x));
  }
}

TEST_CASE("cubic model from derivatives") {
  // T = 0 gives the quadratic model.
  RatVector g = {Rational(1), Rational(-2)};
  RatMatrix H(2, 2);
  H(0, 0) = 2;
  H(1, 1) = 4;
  std::vector<Rational> T(8, Rational(0));
  CubicCanonical c = cubic_model_from_derivatives(g, H, T);
  CHECK(c.Q(0, 0) == 2);
  CHECK(c.b[0] == 1);
  for (int i = 0; i < 2; ++i) CHECK(c.H[i].is_zero());

  // Derivatives of p = x1^2 x2 at the origin give back p itself.
  Polynomial p(2);
  p.add_term({2, 1}, 1);
  CubicCanonical direct = to_cubic_canonical(p);
  std::vector<Rational> T2(8, Rational(0));
  auto t = [&](int i, int j, int k) -> Rational& { return T2[(i * 2 + j) * 2 + k]; };
  t(0, 0, 1) = t(0, 1, 0) = t(1, 0, 0) = 2;  // third partials of x1^2 x2
  CubicCanonical model = cubic_model_from_derivatives(RatVector{Rational(0), Rational(0)},
                                                      RatMatrix(2, 2), T2);
  CHECK(model.to_polynomial() == direct.to_polynomial());

  // Asymmetric tensor is rejected.
  std::vector<Rational> bad(8, Rational(0));
  bad[1] = 1;  // T(0,0,1) without the symmetric copies
  CHECK_THROWS(cubic_model_from_derivatives(g, H, bad));
}
