#pragma once

#include <optional>
#include <vector>

#include "polycert/conic/program.hpp"

namespace polycert::conic {

// Semidefinite-representable set: a conic feasibility description with a
// designated projection onto named scalar coordinates. A positive box radius
// clamps the projection coordinates to |x_i| <= box during the bound solves,
// which keeps them well-posed when the set recedes; bounds landing on the box
// are read as infinite and handled by the usual midpoint rules.
struct SdrSet {
  ConicProgram prog;
  std::vector<ScalarVar> projection;
  double box = 0.0;  // 0 disables clamping
};

struct RelintResult {
  bool feasible = false;    // false: the set is (certified) empty
  bool reliable = true;     // false when some solve came back Inaccurate
  std::vector<double> point;
  std::vector<std::pair<double, double>> bounds;  // per-coordinate [inf, sup]
  int solves = 0;
};

// Sequential fix-coordinate recovery of a relative-interior point of the
// projection: inf and sup each coordinate over the current set, fix the
// midpoint (one-sided unbounded: finite side +/- 1; both unbounded: 0),
// intersect, continue. 2n solver calls; a precomputed infimum of the first
// coordinate (from a feasibility test reusing that objective) saves one.
RelintResult relint_point(const SdrSet& set, double tol,
                          std::optional<double> first_coord_inf = std::nullopt);

}  // namespace polycert::conic
