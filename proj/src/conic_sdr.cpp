#include "polycert/conic/sdr.hpp"

#include <cmath>
#include <limits>

namespace polycert::conic {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

RelintResult relint_point(const SdrSet& set, double tol, std::optional<double> first_inf) {
  RelintResult res;
  ConicProgram prog = set.prog;  // local copy accumulates fixing constraints
  if (set.box > 0) {
    for (ScalarVar v : set.projection) {
      LinExpr lo, hi;
      lo.add(v, 1.0);
      prog.add_ineq_ge(lo, -set.box);
      hi.add(v, -1.0);
      prog.add_ineq_ge(hi, -set.box);
    }
  }
  for (size_t i = 0; i < set.projection.size(); ++i) {
    ScalarVar xi = set.projection[i];
    LinExpr coord;
    coord.add(xi, 1.0);

    double lo, hi;
    auto bound = [&](Sense sense) -> std::optional<double> {
      prog.set_objective(sense, coord);
      SolveOutcome out = solve(prog, tol);
      switch (out.status) {
        case SolveStatus::Optimal:
          if (set.box > 0 && std::abs(out.value) >= set.box * (1 - 1e-3))
            return sense == Sense::Minimize ? -kInf : kInf;
          return out.value;
        case SolveStatus::Unbounded: return sense == Sense::Minimize ? -kInf : kInf;
        case SolveStatus::Infeasible:
          res.feasible = false;
          // Infeasibility after a coordinate was fixed is a numerical artifact
          // (midpoints are strictly between attained bounds).
          if (i > 0) res.reliable = false;
          return std::nullopt;
        case SolveStatus::Inaccurate:
          res.reliable = false;
          return out.value;  // best effort
      }
      return std::nullopt;
    };

    if (i == 0 && first_inf.has_value()) {
      lo = *first_inf;
    } else {
      auto v = bound(Sense::Minimize);
      ++res.solves;
      if (!v) return res;
      lo = *v;
    }
    auto v = bound(Sense::Maximize);
    ++res.solves;
    if (!v) return res;
    hi = *v;

    double star;
    bool lo_fin = std::isfinite(lo), hi_fin = std::isfinite(hi);
    if (lo_fin && hi_fin)
      star = (hi - lo <= tol) ? hi : 0.5 * (lo + hi);
    else if (lo_fin)
      star = lo + 1.0;
    else if (hi_fin)
      star = hi - 1.0;
    else
      star = 0.0;

    res.bounds.emplace_back(lo, hi);
    res.point.push_back(star);
    prog.add_eq(coord, star);
  }
  res.feasible = true;
  return res;
}

}  // namespace polycert::conic
