#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "polycert/conic/program.hpp"
#include "polycert/conic/sdr.hpp"
#include "polycert/cubic_form.hpp"
#include "polycert/cubicmin/classify.hpp"

namespace polycert::cubicmin {

// Solution of the combined primal-dual cubic SDP: objective value ~0 signals
// a second-order point at y, and any feasible value eps yields the guarantee
// p(y) <= p(x) + (2/3) eps over the convexity region.
struct SecondOrderSdpSolution {
  Eigen::MatrixXd Y;
  Eigen::VectorXd y;
  double z = 0.0;
  double objective = 0.0;
  double eps_bound = 0.0;  // (2/3) * max(objective, 0)
};

struct SecondOrderSdpOutcome {
  conic::SolveOutcome outcome;
  std::optional<SecondOrderSdpSolution> solution;
};

SecondOrderSdpOutcome second_order_sdp(const CubicCanonical& c, double tol = 1e-8);

// Result of the sos relaxation sup { gamma : p - gamma = sigma + Tr(S Hess p),
// sigma a degree-2 sos, S an n x n sos-matrix with degree-2 entries }, plus
// the linearized spectrahedral description of the set of second-order points
// recovered from the optimal multipliers.
struct CubicSosResult {
  conic::SolveOutcome outcome;
  double gamma = 0.0;
  // Affine factors q_i of sigma*: coefficients over the basis (1, x_1..x_n).
  std::vector<std::vector<double>> sigma_factors;
  // Rows r_t(x) of the sos-matrix factor: r_t[j] holds the affine
  // coefficients of component j over (1, x).
  std::vector<std::vector<std::vector<double>>> smat_factor_rows;
  std::vector<double> cr_relint;  // point in the relative interior of CR_p
  bool cr_relint_ok = false;
};

CubicSosResult cubic_sos_relaxation(const CubicCanonical& c, double tol = 1e-8);

// Membership test for the recovered spectrahedron Gamma = SO_p:
// Hess p(x) psd, q_i(x) = 0, Hess p(y0) r_t(x) = 0, all within tol.
bool gamma_contains(const CubicCanonical& c, const CubicSosResult& res,
                    const std::vector<double>& x, double tol);

enum class LocalMinOutcome { LocalMin, NoLocalMin, Inconclusive };

struct LocalMinSearchResult {
  LocalMinOutcome outcome = LocalMinOutcome::Inconclusive;
  std::vector<double> point;
  bool strict = false;
  std::string reason;      // "SOP set empty" | "relint point fails TOC" | diagnostics
  double eps_bound = 0.0;  // (2/3) * residual of the zero-objective constraint
  ClassificationReport report;
  int esdp_calls = 0;
  std::string to_json() const;
};

// Algorithm: test feasibility of the spectrahedral description of the set of
// second-order points (objective pinned to zero), recover a relative-interior
// point of its y-projection in 2n solver calls (the first feasibility solve
// doubles as the first infimum), then certify the candidate by point
// classification. want_strict additionally demands a positive definite
// Hessian at the recovered point.
LocalMinSearchResult find_local_minimum(const Polynomial& p, bool want_strict = false,
                                        double tol = 1e-8);

}  // namespace polycert::cubicmin
