#include "polycert/cubicmin/search.hpp"

#include <cmath>

#include "json.hpp"
#include "polycert/conic/sos.hpp"

namespace polycert::cubicmin {

using conic::ConicProgram;
using conic::LinExpr;
using conic::Lowering;
using conic::MatrixVar;
using conic::ScalarVar;
using conic::Sense;
using conic::SolveOutcome;
using conic::SolveStatus;

namespace {

double rat(const Rational& q) { return to_double(q); }

// Shared constraint block of the cubic SDPs: U = [[Y, y],[y', 1]] psd,
// T(Y,y,z) psd, and the relaxed stationarity rows
// (1/2) Tr(H_i Y) + e_i' Q y + b_i = 0.
struct CubicSdpVars {
  MatrixVar U;  // (n+1) x (n+1)
  MatrixVar T;  // (n+1) x (n+1)
  ScalarVar z;
  std::vector<ScalarVar> y;  // mirrors of U(i, n) for projection/objectives
};

CubicSdpVars build_cubic_sdp(ConicProgram& prog, const CubicCanonical& c) {
  int n = c.n;
  CubicSdpVars v;
  v.U = prog.add_psd_matrix(n + 1, "U");
  v.T = prog.add_psd_matrix(n + 1, "T");
  v.z = prog.add_scalar("z");

  LinExpr corner;
  corner.add(v.U, n, n, 1.0);
  prog.add_eq(corner, 1.0);

  for (int i = 0; i < n; ++i) {
    ScalarVar yi = prog.add_scalar("y" + std::to_string(i));
    LinExpr tie;
    tie.add(v.U, i, n, 1.0);
    tie.add(yi, -1.0);
    prog.add_eq(tie, 0.0);
    v.y.push_back(yi);
  }

  // T upper-left block: sum_i y_i H_i + Q.
  for (int j = 0; j < n; ++j)
    for (int k = j; k < n; ++k) {
      LinExpr e;
      e.add(v.T, j, k, 1.0);
      for (int i = 0; i < n; ++i)
        if (c.H[i](j, k) != 0) e.add(v.U, i, n, -rat(c.H[i](j, k)));
      prog.add_eq(e, rat(c.Q(j, k)));
    }
  // T last column: Tr(H_j Y) + (Q y)_j.
  for (int j = 0; j < n; ++j) {
    LinExpr e;
    e.add(v.T, j, n, 1.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (c.H[j](a, b) != 0) e.add(v.U, a, b, -rat(c.H[j](a, b)));
    for (int k = 0; k < n; ++k)
      if (c.Q(j, k) != 0) e.add(v.U, k, n, -rat(c.Q(j, k)));
    prog.add_eq(e, 0.0);
  }
  // T corner: z.
  {
    LinExpr e;
    e.add(v.T, n, n, 1.0);
    e.add(v.z, -1.0);
    prog.add_eq(e, 0.0);
  }
  // Stationarity rows.
  for (int i = 0; i < n; ++i) {
    LinExpr e;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        if (c.H[i](a, b) != 0) e.add(v.U, a, b, 0.5 * rat(c.H[i](a, b)));
    for (int k = 0; k < n; ++k)
      if (c.Q(i, k) != 0) e.add(v.U, k, n, rat(c.Q(i, k)));
    prog.add_eq(e, -rat(c.b[i]));
  }
  return v;
}

LinExpr cubic_sdp_objective(const CubicCanonical& c, const CubicSdpVars& v) {
  int n = c.n;
  LinExpr obj;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (c.Q(a, b) != 0) obj.add(v.U, a, b, 0.5 * rat(c.Q(a, b)));
  for (int i = 0; i < n; ++i)
    if (c.b[i] != 0) obj.add(v.U, i, n, rat(c.b[i]));
  obj.add(v.z, 0.5);
  return obj;
}

}  // namespace

SecondOrderSdpOutcome second_order_sdp(const CubicCanonical& c, double tol) {
  SecondOrderSdpOutcome out;
  ConicProgram prog;
  CubicSdpVars v = build_cubic_sdp(prog, c);
  prog.set_objective(Sense::Minimize, cubic_sdp_objective(c, v));
  out.outcome = conic::solve(prog, tol, Lowering::Direct);
  if (out.outcome.status == SolveStatus::Optimal ||
      (out.outcome.status == SolveStatus::Inaccurate && out.outcome.has_assignment())) {
    SecondOrderSdpSolution sol;
    const Eigen::MatrixXd& U = out.outcome.matrix_of(v.U);
    int n = c.n;
    sol.Y = U.topLeftCorner(n, n);
    sol.y = U.topRightCorner(n, 1);
    sol.z = out.outcome.value_of(v.z);
    sol.objective = out.outcome.value;
    sol.eps_bound = (2.0 / 3.0) * std::max(sol.objective, 0.0);
    out.solution = sol;
  }
  return out;
}

CubicSosResult cubic_sos_relaxation(const CubicCanonical& c, double tol) {
  int n = c.n;
  CubicSosResult res;
  Polynomial p = c.to_polynomial();

  ConicProgram prog;
  ScalarVar gamma = prog.add_scalar("gamma");
  conic::SosPoly sigma = conic::make_sos_poly(prog, n, 1, "sigma");
  conic::SosMatrix smat = conic::make_sos_matrix(prog, n, n, "S");

  auto hess = p.hessian();
  conic::SymPoly identity = conic::SymPoly::from(p);
  {
    conic::SymPoly g = conic::SymPoly::zero(n);
    g.coeffs[Monomial(n, 0)].add(gamma, 1.0);
    identity -= g;
  }
  identity -= sigma.poly;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) identity -= conic::sos_matrix_entry(smat, i, j).times(hess[i][j]);
  conic::add_equal_zero(prog, identity);

  LinExpr obj;
  obj.add(gamma, 1.0);
  prog.set_objective(Sense::Maximize, obj);
  res.outcome = conic::solve(prog, tol);
  if (res.outcome.status != SolveStatus::Optimal) return res;
  res.gamma = res.outcome.value;

  // Factor sigma* into affine squares.
  {
    const Eigen::MatrixXd& G = res.outcome.matrix_of(sigma.gram);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    double lmax = std::max(1.0, es.eigenvalues().maxCoeff());
    for (int t = 0; t < G.rows(); ++t) {
      double lam = es.eigenvalues()[t];
      if (lam <= std::sqrt(tol) * lmax) continue;
      std::vector<double> q(n + 1);
      for (int a = 0; a <= n; ++a) q[a] = std::sqrt(lam) * es.eigenvectors()(a, t);
      res.sigma_factors.push_back(std::move(q));
    }
  }
  // Factor S* = R(x)'R(x) into affine rows.
  {
    const Eigen::MatrixXd& G = res.outcome.matrix_of(smat.gram);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    double lmax = std::max(1.0, es.eigenvalues().maxCoeff());
    for (int t = 0; t < G.rows(); ++t) {
      double lam = es.eigenvalues()[t];
      if (lam <= std::sqrt(tol) * lmax) continue;
      std::vector<std::vector<double>> row(n, std::vector<double>(n + 1, 0.0));
      for (int j = 0; j < n; ++j)
        for (int u = 0; u <= n; ++u)
          row[j][u] = std::sqrt(lam) * es.eigenvectors()(smat.windex(j, u), t);
      res.smat_factor_rows.push_back(std::move(row));
    }
  }

  // Relative-interior point of the convexity region, for the linearized
  // description of Gamma.
  {
    conic::SdrSet cr;
    std::vector<ScalarVar> xs;
    for (int i = 0; i < n; ++i) xs.push_back(cr.prog.add_scalar("x" + std::to_string(i)));
    MatrixVar Hm = cr.prog.add_psd_matrix(n, "H");
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        LinExpr e;
        e.add(Hm, j, k, 1.0);
        for (int i = 0; i < n; ++i)
          if (c.H[i](j, k) != 0) e.add(xs[i], -rat(c.H[i](j, k)));
        cr.prog.add_eq(e, rat(c.Q(j, k)));
      }
    cr.projection = xs;
    cr.box = 1e2;
    conic::RelintResult rr = conic::relint_point(cr, tol);
    res.cr_relint_ok = rr.feasible && rr.reliable;
    if (res.cr_relint_ok) res.cr_relint = rr.point;
  }
  return res;
}

bool gamma_contains(const CubicCanonical& c, const CubicSosResult& res,
                    const std::vector<double>& x, double tol) {
  int n = c.n;
  // Hessian pencil psd within tol.
  Eigen::MatrixXd H(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double v = rat(c.Q(j, k));
      for (int i = 0; i < n; ++i) v += x[i] * rat(c.H[i](j, k));
      H(j, k) = v;
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  if (es.eigenvalues().minCoeff() < -tol) return false;

  auto affine_eval = [&](const std::vector<double>& coeffs) {
    double v = coeffs[0];
    for (int i = 0; i < n; ++i) v += coeffs[i + 1] * x[i];
    return v;
  };
  for (const auto& q : res.sigma_factors) {
    double scale = 1.0;
    for (double cc : q) scale = std::max(scale, std::abs(cc));
    if (std::abs(affine_eval(q)) > tol * scale) return false;
  }
  if (!res.cr_relint_ok) return true;  // linearization unavailable; psd + sigma checks only
  Eigen::MatrixXd H0(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double v = rat(c.Q(j, k));
      for (int i = 0; i < n; ++i) v += res.cr_relint[i] * rat(c.H[i](j, k));
      H0(j, k) = v;
    }
  for (const auto& row : res.smat_factor_rows) {
    Eigen::VectorXd r(n);
    double scale = 1.0;
    for (int j = 0; j < n; ++j) {
      r[j] = affine_eval(row[j]);
      for (double cc : row[j]) scale = std::max(scale, std::abs(cc));
    }
    if ((H0 * r).cwiseAbs().maxCoeff() > tol * scale * std::max(1.0, H0.cwiseAbs().maxCoeff()))
      return false;
  }
  return true;
}

std::string LocalMinSearchResult::to_json() const {
  nlohmann::json j;
  switch (outcome) {
    case LocalMinOutcome::LocalMin: j["outcome"] = "LocalMin"; break;
    case LocalMinOutcome::NoLocalMin: j["outcome"] = "NoLocalMin"; break;
    case LocalMinOutcome::Inconclusive: j["outcome"] = "Inconclusive"; break;
  }
  if (!point.empty()) j["point"] = point;
  j["strict"] = strict;
  if (!reason.empty()) j["reason"] = reason;
  j["eps_bound"] = eps_bound;
  j["esdp_calls"] = esdp_calls;
  j["classification"] = nlohmann::json::parse(report.to_json());
  return j.dump();
}

LocalMinSearchResult find_local_minimum(const Polynomial& p, bool want_strict, double tol) {
  CubicCanonical c = to_cubic_canonical(p);
  int n = c.n;
  LocalMinSearchResult res;

  conic::SdrSet sop;
  CubicSdpVars v = build_cubic_sdp(sop.prog, c);
  sop.prog.add_eq(cubic_sdp_objective(c, v), 0.0);
  sop.projection = v.y;
  // Bound solves over a recessive SO_p are numerically hostile; clamp the
  // projection during relint and read bounds on the box face as infinite.
  sop.box = 1e2;

  // TEST1: emptiness of the spectrahedral description, solved unboxed.
  {
    conic::SolveOutcome feas = conic::solve(sop.prog, tol);
    ++res.esdp_calls;
    if (feas.status == conic::SolveStatus::Infeasible) {
      res.outcome = LocalMinOutcome::NoLocalMin;
      res.reason = "SOP set empty";
      return res;
    }
    if (feas.status == conic::SolveStatus::Inaccurate) {
      res.outcome = LocalMinOutcome::Inconclusive;
      res.reason = "solver accuracy insufficient while testing SOP emptiness";
      return res;
    }
  }

  conic::RelintResult rr = conic::relint_point(sop, tol);
  if (!rr.feasible || !rr.reliable) {
    // The set is nonempty (TEST1), so a failure here is numerical; retry once
    // with a much larger clamp in case the set lives far from the origin.
    conic::SdrSet wide = sop;
    wide.box = 1e4;
    rr = conic::relint_point(wide, tol);
  }
  res.esdp_calls += rr.solves;
  if (!rr.feasible || !rr.reliable) {
    res.outcome = LocalMinOutcome::Inconclusive;
    res.reason = "solver accuracy insufficient during relative-interior recovery";
    return res;
  }

  std::vector<double> xstar = rr.point;
  res.point = xstar;

  // Guarantee from the rank-1 lift (x x', x, x' Hess p(x) x): its objective
  // value eps gives p(x) <= p(w) + (2/3) eps over the convexity region.
  {
    Eigen::MatrixXd H(n, n);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double hv = rat(c.Q(j, k));
        for (int i = 0; i < n; ++i) hv += xstar[i] * rat(c.H[i](j, k));
        H(j, k) = hv;
      }
    Eigen::Map<const Eigen::VectorXd> xs(xstar.data(), n);
    double obj = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) obj += 0.5 * rat(c.Q(a, b)) * xstar[a] * xstar[b];
    for (int i = 0; i < n; ++i) obj += rat(c.b[i]) * xstar[i];
    obj += 0.5 * xs.dot(H * xs);
    res.eps_bound = (2.0 / 3.0) * std::max(obj, 0.0);
  }

  // TEST2: try to certify exactly through a small-denominator rationalization,
  // fall back to the tolerance-based classification.
  bool classified = false;
  {
    std::vector<Rational> rx(n);
    bool ok = true;
    for (int i = 0; i < n; ++i) {
      rx[i] = rationalize(xstar[i], 1000000);
      if (std::abs(to_double(rx[i]) - xstar[i]) > std::sqrt(tol)) ok = false;
    }
    if (ok) {
      ClassificationReport exact = classify_point(p, Point::from_rationals(rx), tol);
      if (exact.local_min) {
        res.report = exact;
        classified = true;
        for (int i = 0; i < n; ++i) res.point[i] = to_double(rx[i]);
      }
    }
  }
  if (!classified) res.report = classify_point(p, Point::from_doubles(xstar), std::sqrt(tol));

  if (!res.report.local_min) {
    res.outcome = LocalMinOutcome::NoLocalMin;
    res.reason = "relint point fails TOC";
    return res;
  }
  res.strict = res.report.strict_local_min;
  if (want_strict && !res.strict) {
    res.outcome = LocalMinOutcome::NoLocalMin;
    res.reason = "local minimum found but not strict; no strict local minimum exists";
    return res;
  }
  res.outcome = LocalMinOutcome::LocalMin;
  return res;
}

}  // namespace polycert::cubicmin
