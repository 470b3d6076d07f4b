#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "polycert/conic/ipm.hpp"

namespace polycert::conic {

// Handles into a ConicProgram. A coordinate is either a scalar variable or an
// upper-triangle entry of a symmetric PSD matrix variable.
struct ScalarVar {
  int id = -1;
};
struct MatrixVar {
  int id = -1;
  int dim = 0;
};

// Sparse affine expression over program coordinates.
class LinExpr {
 public:
  LinExpr() = default;
  /*implicit*/ LinExpr(double c) : constant_(c) {}

  LinExpr& add(ScalarVar v, double coef);
  LinExpr& add(MatrixVar m, int i, int j, double coef);  // coefficient on X_ij (=X_ji)
  LinExpr& add_const(double c) {
    constant_ += c;
    return *this;
  }
  // Accumulates through an existing coefficient key (used by SymPoly).
  LinExpr& add_raw(const std::pair<int, std::pair<int, int>>& key, double coef) {
    if (coef != 0.0) coeffs_[key] += coef;
    return *this;
  }

  double constant() const { return constant_; }
  const std::map<std::pair<int, std::pair<int, int>>, double>& coeffs() const { return coeffs_; }

 private:
  // key: (var id, (i,j)) with (i,j)=(-1,-1) for scalars, i<=j for matrix entries
  std::map<std::pair<int, std::pair<int, int>>, double> coeffs_;
  double constant_ = 0.0;
};

enum class Sense { Minimize, Maximize };
enum class Lowering { Auto, Direct, Dual };

enum class SolveStatus { Optimal, Infeasible, Unbounded, Inaccurate };

// Result contract of the numeric oracle: Optimal assignments satisfy all
// constraints to the stated tolerance; Infeasible/Unbounded are only declared
// on the strength of a certificate, everything else comes back Inaccurate.
struct SolveOutcome {
  SolveStatus status = SolveStatus::Inaccurate;
  double value = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double tolerance = 0.0;
  int iterations = 0;
  std::string message;

  std::vector<double> scalar_values;                // by scalar var id
  std::vector<Eigen::MatrixXd> matrix_values;       // by matrix var id

  double value_of(ScalarVar v) const { return scalar_values.at(v.id); }
  const Eigen::MatrixXd& matrix_of(MatrixVar m) const { return matrix_values.at(m.id); }
  bool has_assignment() const { return !scalar_values.empty() || !matrix_values.empty(); }
};

// Solver-agnostic program description: scalar variables, symmetric PSD matrix
// variables, elementwise-nonnegative scalars, linear constraints, and an
// optional linear objective.
class ConicProgram {
 public:
  ScalarVar add_scalar(const std::string& name = "", bool nonneg = false);
  MatrixVar add_psd_matrix(int dim, const std::string& name = "");

  void add_eq(const LinExpr& lhs, double rhs = 0.0);
  void add_ineq_ge(const LinExpr& lhs, double rhs = 0.0);  // lhs >= rhs
  void set_objective(Sense sense, const LinExpr& objective);

  int num_scalars() const { return static_cast<int>(scalar_nonneg_.size()); }
  int num_matrices() const { return static_cast<int>(matrix_dims_.size()); }
  int matrix_dim(int id) const { return matrix_dims_[id]; }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  // Largest constraint violation of an assignment, cone memberships included
  // (negative eigenvalues and negative nonneg-scalars count as violations).
  double max_violation(const SolveOutcome& out) const;

  // Sparse JSON dump (variables, cones, triplet linear maps) for debugging.
  std::string dump_json() const;

  friend SolveOutcome solve(const ConicProgram&, double tol, Lowering hint);

 private:
  struct Constraint {
    LinExpr expr;
    double rhs;
    bool equality;
  };
  std::vector<bool> scalar_nonneg_;
  std::vector<std::string> scalar_names_;
  std::vector<int> matrix_dims_;
  std::vector<std::string> matrix_names_;
  std::vector<Constraint> constraints_;
  LinExpr objective_;
  Sense sense_ = Sense::Minimize;
  bool has_objective_ = false;
};

SolveOutcome solve(const ConicProgram& prog, double tol = 1e-8,
                   Lowering hint = Lowering::Auto);

}  // namespace polycert::conic
