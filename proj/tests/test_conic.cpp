#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "polycert/conic/program.hpp"
#include "polycert/conic/sdr.hpp"
#include "polycert/conic/sos.hpp"

#include <random>

using namespace polycert;
using namespace polycert::conic;

TEST_CASE("scalar PSD with contradictory equality is infeasible") {
  ConicProgram prog;
  ScalarVar s = prog.add_scalar("s", /*nonneg=*/true);
  LinExpr e;
  e.add(s, 1.0);
  prog.add_eq(e, -1.0);
  SolveOutcome out = solve(prog, 1e-8);
  CHECK(out.status == SolveStatus::Infeasible);
}

TEST_CASE("min t with [[1,t],[t,1]] psd attains -1") {
  for (Lowering mode : {Lowering::Direct, Lowering::Dual}) {
    ConicProgram prog;
    ScalarVar t = prog.add_scalar("t");
    MatrixVar X = prog.add_psd_matrix(2, "X");
    // X = [[1, t], [t, 1]]
    LinExpr d0, d1, off;
    d0.add(X, 0, 0, 1.0);
    prog.add_eq(d0, 1.0);
    d1.add(X, 1, 1, 1.0);
    prog.add_eq(d1, 1.0);
    off.add(X, 0, 1, 1.0);
    off.add(t, -1.0);
    prog.add_eq(off, 0.0);
    LinExpr obj;
    obj.add(t, 1.0);
    prog.set_objective(Sense::Minimize, obj);
    SolveOutcome out = solve(prog, 1e-8, mode);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.value == doctest::Approx(-1.0).epsilon(1e-6));
    CHECK(prog.max_violation(out) <= 1e-7);
  }
}

TEST_CASE("free maximization with no constraints is unbounded") {
  ConicProgram prog;
  ScalarVar t = prog.add_scalar("t");
  LinExpr obj;
  obj.add(t, 1.0);
  prog.set_objective(Sense::Maximize, obj);
  SolveOutcome out = solve(prog, 1e-8);
  CHECK(out.status == SolveStatus::Unbounded);
}

TEST_CASE("small LP") {
  ConicProgram prog;
  ScalarVar x = prog.add_scalar("x", true), y = prog.add_scalar("y", true);
  LinExpr c1;
  c1.add(x, 1.0).add(y, 2.0);
  prog.add_ineq_ge(c1, 3.0);
  LinExpr obj;
  obj.add(x, 1.0).add(y, 1.0);
  prog.set_objective(Sense::Minimize, obj);
  for (Lowering mode : {Lowering::Direct, Lowering::Dual}) {
    SolveOutcome out = solve(prog, 1e-8, mode);
    REQUIRE(out.status == SolveStatus::Optimal);
    CHECK(out.value == doctest::Approx(1.5).epsilon(1e-6));
    CHECK(out.value_of(y) == doctest::Approx(1.5).epsilon(1e-5));
  }
}

TEST_CASE("replayed optimal assignments satisfy constraints to 10*tol") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 8; ++trial) {
    ConicProgram prog;
    MatrixVar X = prog.add_psd_matrix(4, "X");
    for (int c = 0; c < 4; ++c) {
      LinExpr e;
      for (int i = 0; i <= c; ++i)
        for (int j = i; j <= c; ++j)
          e.add(X, i, j, static_cast<double>(static_cast<int>(rng() % 7) - 3));
      prog.add_eq(e, static_cast<double>(static_cast<int>(rng() % 5)));
    }
    LinExpr tr;
    for (int i = 0; i < 4; ++i) tr.add(X, i, i, 1.0);
    prog.set_objective(Sense::Minimize, tr);
    SolveOutcome out = solve(prog, 1e-8);
    if (out.status == SolveStatus::Optimal) CHECK(prog.max_violation(out) <= 1e-7);
  }
}

TEST_CASE("sos: (x+1)^2 is sos") {
  ConicProgram prog;
  Polynomial p(1);  // x^2 + 2x + 1
  p.add_term({2}, 1);
  p.add_term({1}, 2);
  p.add_term({0}, 1);
  constrain_sos(prog, SymPoly::from(p), 1);
  SolveOutcome out = solve(prog, 1e-8);
  CHECK(out.status == SolveStatus::Optimal);
}

TEST_CASE("sos: -x^2 is not sos") {
  ConicProgram prog;
  Polynomial p(1);
  p.add_term({2}, -1);
  constrain_sos(prog, SymPoly::from(p), 1);
  SolveOutcome out = solve(prog, 1e-8);
  CHECK(out.status == SolveStatus::Infeasible);
}

TEST_CASE("sos: Motzkin polynomial is nonnegative but not sos") {
  // x^4 y^2 + x^2 y^4 - 3 x^2 y^2 + 1
  Polynomial p(2);
  p.add_term({4, 2}, 1);
  p.add_term({2, 4}, 1);
  p.add_term({2, 2}, -3);
  p.add_term({0, 0}, 1);
  for (Lowering mode : {Lowering::Direct, Lowering::Dual}) {
    ConicProgram prog;
    constrain_sos(prog, SymPoly::from(p), 3);
    SolveOutcome out = solve(prog, 1e-8, mode);
    CHECK(out.status == SolveStatus::Infeasible);
  }
}

TEST_CASE("sos feasibility is monotone in the degree bound") {
  // (x^2 + x)^2 is sos at half-degree 2 and stays sos at half-degree 3.
  Polynomial q(1);
  q.add_term({2}, 1);
  q.add_term({1}, 1);
  Polynomial p = q * q;
  for (int hd : {2, 3}) {
    ConicProgram prog;
    constrain_sos(prog, SymPoly::from(p), hd);
    CHECK(solve(prog, 1e-8).status == SolveStatus::Optimal);
  }
}

TEST_CASE("relint point of boxes, segments, singletons") {
  {
    SdrSet set;
    ScalarVar x = set.prog.add_scalar("x"), y = set.prog.add_scalar("y");
    for (ScalarVar v : {x, y}) {
      LinExpr lo, hi;
      lo.add(v, 1.0);
      set.prog.add_ineq_ge(lo, 0.0);
      hi.add(v, -1.0);
      set.prog.add_ineq_ge(hi, -1.0);  // v <= 1
    }
    set.projection = {x, y};
    RelintResult r = relint_point(set, 1e-8);
    REQUIRE(r.feasible);
    CHECK(r.point[0] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.point[1] == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(r.solves == 4);
  }
  {
    SdrSet set;
    ScalarVar x = set.prog.add_scalar("x"), y = set.prog.add_scalar("y");
    LinExpr ex;
    ex.add(x, 1.0);
    set.prog.add_eq(ex, 0.0);
    LinExpr lo, hi;
    lo.add(y, 1.0);
    set.prog.add_ineq_ge(lo, 0.0);
    hi.add(y, -1.0);
    set.prog.add_ineq_ge(hi, -1.0);
    set.projection = {x, y};
    RelintResult r = relint_point(set, 1e-8);
    REQUIRE(r.feasible);
    CHECK(r.point[0] == doctest::Approx(0.0).epsilon(1e-6));
    CHECK(r.point[1] == doctest::Approx(0.5).epsilon(1e-5));
  }
  {
    SdrSet set;
    ScalarVar x = set.prog.add_scalar("x"), y = set.prog.add_scalar("y");
    LinExpr ex, ey;
    ex.add(x, 1.0);
    ey.add(y, 1.0);
    set.prog.add_eq(ex, 3.0);
    set.prog.add_eq(ey, 4.0);
    set.projection = {x, y};
    RelintResult r = relint_point(set, 1e-8);
    REQUIRE(r.feasible);
    CHECK(r.point[0] == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(r.point[1] == doctest::Approx(4.0).epsilon(1e-6));
  }
  {
    // Unbounded-both-ways coordinate is fixed to 0, never an error.
    SdrSet set;
    ScalarVar x = set.prog.add_scalar("x");
    set.projection = {x};
    RelintResult r = relint_point(set, 1e-8);
    REQUIRE(r.feasible);
    CHECK(r.point[0] == doctest::Approx(0.0));
  }
  {
    // Empty set reports infeasible.
    SdrSet set;
    ScalarVar x = set.prog.add_scalar("x", true);
    LinExpr e;
    e.add(x, 1.0);
    set.prog.add_eq(e, -2.0);
    set.projection = {x};
    RelintResult r = relint_point(set, 1e-8);
    CHECK(!r.feasible);
  }
}

TEST_CASE("relint interior perturbation stays feasible on the box") {
  SdrSet set;
  std::vector<ScalarVar> xs;
  for (int i = 0; i < 3; ++i) {
    ScalarVar v = set.prog.add_scalar("x", true);
    LinExpr hi;
    hi.add(v, -1.0);
    set.prog.add_ineq_ge(hi, -1.0);
    xs.push_back(v);
  }
  set.projection = xs;
  RelintResult r = relint_point(set, 1e-8);
  REQUIRE(r.feasible);
  for (double d : {-0.25, 0.25})
    for (int i = 0; i < 3; ++i) {
      double v = r.point[i] + d;
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
}

TEST_CASE("dump_json mentions variables and constraints") {
  ConicProgram prog;
  ScalarVar t = prog.add_scalar("t");
  MatrixVar X = prog.add_psd_matrix(2, "X");
  LinExpr e;
  e.add(t, 1.0).add(X, 0, 1, 2.0);
  prog.add_eq(e, 1.0);
  std::string dump = prog.dump_json();
  CHECK(dump.find("psd_matrices") != std::string::npos);
  CHECK(dump.find("constraints") != std::string::npos);
}
