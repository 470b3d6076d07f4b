#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace polycert::conic {

// Standard cone form solved by the interior-point method:
//
//   minimize    c'u
//   subject to  A u = b,
//               G u + s = h,   s in K = R+^{nn_dim} x PSD(k_1) x ... x PSD(k_t),
//
// with u free. PSD slots use the svec convention (off-diagonals scaled by
// sqrt(2)) so that inner products of slot coordinates equal trace inner
// products. The solver runs a homogeneous self-dual embedding with
// Nesterov-Todd scaling and a Mehrotra predictor-corrector, which yields
// infeasibility/unboundedness certificates rather than just failed solves.
struct SparseRow {
  std::vector<std::pair<int, double>> coeffs;  // (unknown index, value)
  void add(int j, double v) {
    if (v != 0.0) coeffs.emplace_back(j, v);
  }
};

// One nonzero of a symmetric loading matrix for a PSD slot: the slot slack is
// S_b = H0_b - sum_j u_j E_{b,j}, and entries store E(a,b) with a <= b.
struct PsdEntry {
  int unknown;
  int row, col;  // row <= col
  double value;
};

struct PsdBlock {
  int dim = 0;
  Eigen::MatrixXd offset;        // H0_b, symmetric dim x dim
  std::vector<PsdEntry> entries; // sorted by unknown index during finalize
};

struct StdForm {
  int num_unknowns = 0;
  std::vector<SparseRow> eq_rows;  // A
  std::vector<double> eq_rhs;      // b
  std::vector<SparseRow> nn_rows;  // s_r = nn_rhs_r - row . u  >= 0
  std::vector<double> nn_rhs;
  std::vector<PsdBlock> psd_blocks;
  std::vector<double> cost;  // c

  int cone_dim() const;
  int cone_order() const;  // nn_dim + sum of psd dims (barrier degree)
};

enum class IpmStatus { Optimal, Infeasible, Unbounded, Inaccurate };

struct IpmResult {
  IpmStatus status = IpmStatus::Inaccurate;
  double objective = 0.0;
  Eigen::VectorXd u;        // primal unknowns (de-homogenized)
  Eigen::VectorXd eq_dual;  // y
  Eigen::VectorXd cone_dual;  // z over cone coordinates (svec convention)
  Eigen::VectorXd cone_slack; // s over cone coordinates
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double cert_residual = 0.0;  // quality of the infeasibility certificate, if any
  int iterations = 0;
  std::string message;
};

struct IpmOptions {
  double tol = 1e-8;
  // Reduced-accuracy acceptance once the double-precision Newton system hits
  // its conditioning wall (weakly complementary optima). Mirrors the
  // "optimal, inaccurate" rung of mainstream conic solvers; the achieved
  // residuals are always reported in the result.
  double feas_tol_reduced = 1e-6;
  double gap_tol_reduced = 1e-5;
  int max_iterations = 100;
  bool verbose = false;
};

IpmResult ipm_solve(const StdForm& problem, const IpmOptions& options);

// svec index helpers shared with the lowering code: entries (i<=j) of a k x k
// symmetric matrix enumerated column-major within the upper triangle by
// (j, i<=j).
int svec_dim(int k);
int svec_index(int k, int i, int j);
void svec_from_matrix(const Eigen::MatrixXd& m, Eigen::VectorXd& out, int offset);
void matrix_from_svec(const Eigen::VectorXd& v, int offset, int k, Eigen::MatrixXd& out);

}  // namespace polycert::conic
