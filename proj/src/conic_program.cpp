#include "polycert/conic/program.hpp"

#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace polycert::conic {

LinExpr& LinExpr::add(ScalarVar v, double coef) {
  if (v.id < 0) throw std::invalid_argument("unbound scalar var");
  if (coef != 0.0) coeffs_[{v.id, {-1, -1}}] += coef;
  return *this;
}

LinExpr& LinExpr::add(MatrixVar m, int i, int j, double coef) {
  if (m.id < 0) throw std::invalid_argument("unbound matrix var");
  if (i > j) std::swap(i, j);
  if (i < 0 || j >= m.dim) throw std::out_of_range("matrix entry index");
  if (coef != 0.0) coeffs_[{~m.id, {i, j}}] += coef;  // ~id keeps scalar/matrix keys apart
  return *this;
}

ScalarVar ConicProgram::add_scalar(const std::string& name, bool nonneg) {
  scalar_nonneg_.push_back(nonneg);
  scalar_names_.push_back(name);
  return ScalarVar{static_cast<int>(scalar_nonneg_.size()) - 1};
}

MatrixVar ConicProgram::add_psd_matrix(int dim, const std::string& name) {
  if (dim <= 0) throw std::invalid_argument("matrix dimension must be positive");
  matrix_dims_.push_back(dim);
  matrix_names_.push_back(name);
  return MatrixVar{static_cast<int>(matrix_dims_.size()) - 1, dim};
}

void ConicProgram::add_eq(const LinExpr& lhs, double rhs) {
  constraints_.push_back({lhs, rhs, true});
}

void ConicProgram::add_ineq_ge(const LinExpr& lhs, double rhs) {
  constraints_.push_back({lhs, rhs, false});
}

void ConicProgram::set_objective(Sense sense, const LinExpr& objective) {
  sense_ = sense;
  objective_ = objective;
  has_objective_ = true;
}

namespace {

// Flat coordinate space: scalars first, then svec entries of each matrix.
struct CoordMap {
  int num_scalars = 0;
  std::vector<int> matrix_offset;
  std::vector<int> matrix_dim;
  int total = 0;

  int coord(int var_key, int i, int j) const {
    if (i < 0) return var_key;  // scalar
    int id = ~var_key;
    return matrix_offset[id] + svec_index(matrix_dim[id], i, j);
  }
};

CoordMap build_coord_map(int num_scalars, const std::vector<int>& dims) {
  CoordMap cm;
  cm.num_scalars = num_scalars;
  cm.matrix_dim = dims;
  int off = num_scalars;
  for (int d : dims) {
    cm.matrix_offset.push_back(off);
    off += svec_dim(d);
  }
  cm.total = off;
  return cm;
}

struct LoweredObjective {
  std::vector<double> cost;  // over coordinates
  double constant = 0.0;
};

LoweredObjective lower_objective(const LinExpr& obj, Sense sense, bool has_obj,
                                 const CoordMap& cm) {
  LoweredObjective lo;
  lo.cost.assign(cm.total, 0.0);
  if (!has_obj) return lo;
  double sgn = sense == Sense::Maximize ? -1.0 : 1.0;
  for (const auto& [key, coef] : obj.coeffs())
    lo.cost[cm.coord(key.first, key.second.first, key.second.second)] += sgn * coef;
  lo.constant = sgn * obj.constant();
  return lo;
}

}  // namespace

double ConicProgram::max_violation(const SolveOutcome& out) const {
  double viol = 0.0;
  auto eval = [&](const LinExpr& e) {
    double v = e.constant();
    for (const auto& [key, coef] : e.coeffs()) {
      if (key.second.first < 0)
        v += coef * out.scalar_values.at(key.first);
      else
        v += coef * out.matrix_values.at(~key.first)(key.second.first, key.second.second);
    }
    return v;
  };
  for (const auto& c : constraints_) {
    double v = eval(c.expr) - c.rhs;
    viol = std::max(viol, c.equality ? std::abs(v) : -v);
  }
  for (size_t i = 0; i < scalar_nonneg_.size(); ++i)
    if (scalar_nonneg_[i]) viol = std::max(viol, -out.scalar_values.at(i));
  for (size_t m = 0; m < matrix_dims_.size(); ++m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.matrix_values.at(m),
                                                      Eigen::EigenvaluesOnly);
    viol = std::max(viol, -es.eigenvalues().minCoeff());
  }
  return viol;
}

std::string ConicProgram::dump_json() const {
  nlohmann::json j;
  j["scalars"] = nlohmann::json::array();
  for (size_t i = 0; i < scalar_nonneg_.size(); ++i)
    j["scalars"].push_back({{"name", scalar_names_[i]}, {"nonneg", static_cast<bool>(scalar_nonneg_[i])}});
  j["psd_matrices"] = nlohmann::json::array();
  for (size_t m = 0; m < matrix_dims_.size(); ++m)
    j["psd_matrices"].push_back({{"name", matrix_names_[m]}, {"dim", matrix_dims_[m]}});
  auto expr_json = [](const LinExpr& e) {
    nlohmann::json t = nlohmann::json::array();
    for (const auto& [key, coef] : e.coeffs()) {
      if (key.second.first < 0)
        t.push_back({{"scalar", key.first}, {"coef", coef}});
      else
        t.push_back({{"matrix", ~key.first},
                     {"i", key.second.first},
                     {"j", key.second.second},
                     {"coef", coef}});
    }
    return t;
  };
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : constraints_)
    j["constraints"].push_back({{"terms", expr_json(c.expr)},
                                {"constant", c.expr.constant()},
                                {"rhs", c.rhs},
                                {"kind", c.equality ? "eq" : "ge"}});
  if (has_objective_)
    j["objective"] = {{"sense", sense_ == Sense::Minimize ? "min" : "max"},
                      {"terms", expr_json(objective_)},
                      {"constant", objective_.constant()}};
  return j.dump(2);
}

SolveOutcome solve(const ConicProgram& prog, double tol, Lowering hint) {
  CoordMap cm = build_coord_map(prog.num_scalars(), prog.matrix_dims_);
  LoweredObjective lo = lower_objective(prog.objective_, prog.sense_, prog.has_objective_, cm);
  double sense_sign = prog.sense_ == Sense::Maximize ? -1.0 : 1.0;

  int n_eq = 0, n_ineq = 0;
  for (const auto& c : prog.constraints_) (c.equality ? n_eq : n_ineq)++;

  Lowering mode = hint;
  if (mode == Lowering::Auto)
    mode = (n_eq + n_ineq + 8 < cm.total) ? Lowering::Dual : Lowering::Direct;

  StdForm sf;
  IpmOptions opt;
  opt.tol = tol;
  SolveOutcome out;
  out.tolerance = tol;

  auto fill_assignment_from_coords = [&](const Eigen::VectorXd& u) {
    out.scalar_values.assign(cm.num_scalars, 0.0);
    for (int i = 0; i < cm.num_scalars; ++i) out.scalar_values[i] = u[i];
    out.matrix_values.clear();
    for (size_t m = 0; m < prog.matrix_dims_.size(); ++m) {
      Eigen::MatrixXd M;
      Eigen::VectorXd mv = u.segment(cm.matrix_offset[m], svec_dim(cm.matrix_dim[m]));
      // coordinates hold raw entries in Direct mode, so undo nothing here;
      // this helper is only used where u carries entry values.
      M.resize(cm.matrix_dim[m], cm.matrix_dim[m]);
      int idx = 0;
      for (int j = 0; j < cm.matrix_dim[m]; ++j)
        for (int i = 0; i <= j; ++i) {
          M(i, j) = mv[idx];
          M(j, i) = mv[idx];
          ++idx;
        }
      out.matrix_values.push_back(std::move(M));
    }
  };

  if (mode == Lowering::Direct) {
    sf.num_unknowns = cm.total;
    sf.cost = lo.cost;
    for (const auto& c : prog.constraints_) {
      SparseRow row;
      for (const auto& [key, coef] : c.expr.coeffs())
        row.add(cm.coord(key.first, key.second.first, key.second.second), coef);
      if (c.equality) {
        sf.eq_rows.push_back(std::move(row));
        sf.eq_rhs.push_back(c.rhs - c.expr.constant());
      } else {
        // slack = expr - rhs >= 0, in the s = h - G u convention
        for (auto& [j, v] : row.coeffs) v = -v;
        sf.nn_rows.push_back(std::move(row));
        sf.nn_rhs.push_back(c.expr.constant() - c.rhs);
      }
    }
    for (int i = 0; i < cm.num_scalars; ++i) {
      if (!prog.scalar_nonneg_[i]) continue;
      SparseRow row;
      row.add(i, -1.0);
      sf.nn_rows.push_back(std::move(row));
      sf.nn_rhs.push_back(0.0);
    }
    for (size_t m = 0; m < prog.matrix_dims_.size(); ++m) {
      PsdBlock blk;
      blk.dim = cm.matrix_dim[m];
      blk.offset = Eigen::MatrixXd::Zero(blk.dim, blk.dim);
      for (int j = 0; j < blk.dim; ++j)
        for (int i = 0; i <= j; ++i)
          blk.entries.push_back({cm.matrix_offset[m] + svec_index(blk.dim, i, j), i, j, -1.0});
      sf.psd_blocks.push_back(std::move(blk));
    }

    IpmResult r = ipm_solve(sf, opt);
    out.primal_residual = r.primal_residual;
    out.dual_residual = r.dual_residual;
    out.gap = r.gap;
    out.iterations = r.iterations;
    out.message = r.message;
    switch (r.status) {
      case IpmStatus::Optimal: out.status = SolveStatus::Optimal; break;
      case IpmStatus::Infeasible: out.status = SolveStatus::Infeasible; break;
      case IpmStatus::Unbounded: out.status = SolveStatus::Unbounded; break;
      case IpmStatus::Inaccurate: out.status = SolveStatus::Inaccurate; break;
    }
    if (r.u.size() == cm.total) fill_assignment_from_coords(r.u);
    if (out.status == SolveStatus::Optimal || out.status == SolveStatus::Inaccurate)
      out.value = sense_sign * (r.objective + lo.constant);
    return out;
  }

  // Dual lowering: treat the program as an SDPA-style primal over the cone of
  // coordinates and hand its dual to the IPM. The cone multipliers of the
  // solved dual are exactly the primal coordinate values.
  std::vector<double> cost = lo.cost;
  struct EqRowData {
    std::vector<std::pair<int, double>> coords;  // (coordinate, coef)
    double rhs;
  };
  std::vector<EqRowData> eqs;
  std::vector<bool> coord_nonneg(cm.total, false);
  for (int i = 0; i < cm.num_scalars; ++i) coord_nonneg[i] = prog.scalar_nonneg_[i];

  int total_coords = cm.total;
  for (const auto& c : prog.constraints_) {
    EqRowData row;
    for (const auto& [key, coef] : c.expr.coeffs()) {
      int coord = cm.coord(key.first, key.second.first, key.second.second);
      // Matrix entry coefficients follow the trace convention C.X: an
      // off-diagonal program coefficient g on X_ij splits into two symmetric
      // loadings of g/2; the svec pairing restores g * X_ij.
      row.coords.emplace_back(coord, coef);
    }
    row.rhs = c.rhs - c.expr.constant();
    if (!c.equality) {
      row.coords.emplace_back(total_coords, -1.0);  // expr - slack = rhs
      coord_nonneg.push_back(true);
      cost.push_back(0.0);
      ++total_coords;
    }
    eqs.push_back(std::move(row));
  }

  int E = static_cast<int>(eqs.size());
  sf.num_unknowns = E;
  sf.cost.assign(E, 0.0);
  for (int i = 0; i < E; ++i) sf.cost[i] = -eqs[i].rhs;  // min -b'w

  // Transposed views: per coordinate, the list of (eq index, coef).
  std::vector<std::vector<std::pair<int, double>>> by_coord(total_coords);
  for (int i = 0; i < E; ++i)
    for (auto& [coord, coef] : eqs[i].coords) by_coord[coord].emplace_back(i, coef);

  std::vector<int> eq_row_of_free(total_coords, -1);
  for (int coord = 0; coord < total_coords; ++coord) {
    bool is_matrix_entry = coord < cm.total && coord >= cm.num_scalars;
    if (is_matrix_entry) continue;
    if (coord_nonneg[coord]) {
      SparseRow row;
      for (auto& [i, coef] : by_coord[coord]) row.add(i, coef);
      sf.nn_rows.push_back(std::move(row));
      sf.nn_rhs.push_back(cost[coord]);
    } else {
      SparseRow row;
      for (auto& [i, coef] : by_coord[coord]) row.add(i, coef);
      eq_row_of_free[coord] = static_cast<int>(sf.eq_rows.size());
      sf.eq_rows.push_back(std::move(row));
      sf.eq_rhs.push_back(cost[coord]);
    }
  }
  std::vector<int> nn_row_of_coord(total_coords, -1);
  {
    int r = 0;
    for (int coord = 0; coord < total_coords; ++coord) {
      bool is_matrix_entry = coord < cm.total && coord >= cm.num_scalars;
      if (is_matrix_entry || !coord_nonneg[coord]) continue;
      nn_row_of_coord[coord] = r++;
    }
  }
  for (size_t m = 0; m < prog.matrix_dims_.size(); ++m) {
    PsdBlock blk;
    int k = cm.matrix_dim[m];
    blk.dim = k;
    blk.offset = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j)
      for (int i = 0; i <= j; ++i) {
        int coord = cm.matrix_offset[m] + svec_index(k, i, j);
        double cval = cost[coord];
        if (cval != 0.0) {
          double entry = (i == j) ? cval : cval / 2.0;
          blk.offset(i, j) = entry;
          blk.offset(j, i) = entry;
        }
        for (auto& [eq, coef] : by_coord[coord])
          blk.entries.push_back({eq, i, j, (i == j) ? coef : coef / 2.0});
      }
    sf.psd_blocks.push_back(std::move(blk));
  }

  IpmResult r = ipm_solve(sf, opt);
  out.primal_residual = r.primal_residual;
  out.dual_residual = r.dual_residual;
  out.gap = r.gap;
  out.iterations = r.iterations;
  out.message = r.message;
  switch (r.status) {
    case IpmStatus::Optimal: out.status = SolveStatus::Optimal; break;
    case IpmStatus::Infeasible:
      // The lowered (dual) problem is infeasible, so the original program is
      // unbounded whenever it is feasible at all.
      out.status = SolveStatus::Unbounded;
      out.message = "dual-form infeasible: original problem unbounded (or infeasible)";
      break;
    case IpmStatus::Unbounded:
      out.status = SolveStatus::Infeasible;  // Farkas ray for the original
      break;
    case IpmStatus::Inaccurate: out.status = SolveStatus::Inaccurate; break;
  }
  if (out.status == SolveStatus::Optimal || out.status == SolveStatus::Inaccurate) {
    out.value = sense_sign * (-r.objective + lo.constant);
    // Recover primal coordinates from the duals of the lowered problem.
    Eigen::VectorXd u = Eigen::VectorXd::Zero(cm.total);
    for (int coord = 0; coord < cm.total; ++coord) {
      if (eq_row_of_free[coord] >= 0 && r.eq_dual.size() > 0)
        u[coord] = r.eq_dual[eq_row_of_free[coord]];
      else if (nn_row_of_coord[coord] >= 0 && r.cone_dual.size() > 0)
        u[coord] = r.cone_dual[nn_row_of_coord[coord]];
    }
    int psd_off = static_cast<int>(sf.nn_rows.size());
    for (size_t m = 0; m < prog.matrix_dims_.size(); ++m) {
      int k = cm.matrix_dim[m];
      if (r.cone_dual.size() >= psd_off + svec_dim(k)) {
        Eigen::MatrixXd M;
        matrix_from_svec(r.cone_dual, psd_off, k, M);
        for (int j = 0; j < k; ++j)
          for (int i = 0; i <= j; ++i)
            u[cm.matrix_offset[m] + svec_index(k, i, j)] = M(i, j);
      }
      psd_off += svec_dim(k);
    }
    out.scalar_values.assign(cm.num_scalars, 0.0);
    for (int i = 0; i < cm.num_scalars; ++i) out.scalar_values[i] = u[i];
    for (size_t m = 0; m < prog.matrix_dims_.size(); ++m) {
      int k = cm.matrix_dim[m];
      Eigen::MatrixXd M(k, k);
      for (int j = 0; j < k; ++j)
        for (int i = 0; i <= j; ++i) {
          double v = u[cm.matrix_offset[m] + svec_index(k, i, j)];
          M(i, j) = v;
          M(j, i) = v;
        }
      out.matrix_values.push_back(std::move(M));
    }
  }
  return out;
}

}  // namespace polycert::conic
