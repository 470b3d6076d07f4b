#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polycert/rat_linalg.hpp"

#include <random>

using namespace polycert;

namespace {
RatMatrix mat2(Rational a, Rational b, Rational c, Rational d) {
  RatMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return m;
}
}  // namespace

TEST_CASE("nullspace of identity is empty") {
  CHECK(nullspace_basis(RatMatrix::identity(3)).empty());
}

TEST_CASE("nullspace of zero matrix spans everything") {
  RatMatrix z(3, 3);
  auto basis = nullspace_basis(z);
  REQUIRE(basis.size() == 3);
  for (const auto& v : basis) {
    auto mv = z.mul(v);
    for (const auto& x : mv) CHECK(x == 0);
  }
  RatMatrix stacked(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) stacked(i, j) = basis[i][j];
  CHECK(rank(stacked) == 3);
}

TEST_CASE("nullspace of [[2,0],[0,0]] is span{(0,1)}") {
  auto basis = nullspace_basis(mat2(2, 0, 0, 0));
  REQUIRE(basis.size() == 1);
  CHECK(basis[0][0] == 0);
  CHECK(basis[0][1] != 0);
}

TEST_CASE("psd and pd checks") {
  CHECK(is_psd(RatMatrix::identity(4)));
  CHECK(is_pd(RatMatrix::identity(4)));
  CHECK(is_psd(RatMatrix(3, 3)));   // zero matrix
  CHECK(!is_pd(RatMatrix(3, 3)));
  CHECK(is_psd(mat2(2, 0, 0, 0)));
  CHECK(!is_pd(mat2(2, 0, 0, 0)));
  CHECK(!is_psd(mat2(-2, 0, 0, 1)));
  CHECK(!is_psd(mat2(0, 1, 1, 0)));       // zero diagonal, nonzero off-diagonal
  CHECK(!is_psd(mat2(1, 2, 2, 1)));       // det < 0
  CHECK(is_psd(mat2(1, 1, 1, 1)));
  CHECK(is_pd(mat2(2, 1, 1, 2)));
}

TEST_CASE("psd check agrees with random Gram matrices") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng() % 4);
    int r = 1 + static_cast<int>(rng() % n);
    RatMatrix v(n, r);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < r; ++j) v(i, j) = Rational(static_cast<int>(rng() % 11) - 5);
    RatMatrix g = v * v.transposed();
    CHECK(is_psd(g));
    // Subtracting something positive from the diagonal of a singular Gram
    // matrix (r < n) must break positive semidefiniteness.
    if (r < n) {
      RatMatrix bad = g;
      bad(n - 1, n - 1) -= 1;
      RatMatrix vtv = v.transposed() * v;
      // bad is psd only if removing 1 keeps all diagonal minors nonneg; just
      // check the known failure when the last row of v is zero.
      bool lastzero = true;
      for (int j = 0; j < r; ++j)
        if (v(n - 1, j) != 0) lastzero = false;
      if (lastzero) CHECK(!is_psd(bad));
      (void)vtv;
    }
  }
}

TEST_CASE("determinant") {
  CHECK(determinant(mat2(1, 2, 3, 4)) == Rational(-2));
  CHECK(determinant(RatMatrix::identity(5)) == 1);
}

TEST_CASE("solve_linear") {
  bool unique = false;
  auto x = solve_linear(mat2(1, 1, 1, -1), {Rational(3), Rational(1)}, &unique);
  REQUIRE(x.has_value());
  CHECK(unique);
  CHECK((*x)[0] == 2);
  CHECK((*x)[1] == 1);

  // Inconsistent system.
  RatMatrix a(2, 1);
  a(0, 0) = 1;
  a(1, 0) = 1;
  CHECK(!solve_linear(a, {Rational(0), Rational(1)}).has_value());

  // Underdetermined system.
  RatMatrix b(1, 2);
  b(0, 0) = 1;
  b(0, 1) = 1;
  auto y = solve_linear(b, {Rational(2)}, &unique);
  REQUIRE(y.has_value());
  CHECK(!unique);
  CHECK((*y)[0] + (*y)[1] == 2);
}
