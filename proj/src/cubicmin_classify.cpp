#include "polycert/cubicmin/classify.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace polycert::cubicmin {

std::string ClassificationReport::to_json() const {
  nlohmann::json j;
  j["critical"] = critical;
  j["second_order"] = second_order;
  j["tonc_holds"] = tonc_holds;
  j["toc_holds"] = toc_holds;
  j["local_min"] = local_min;
  j["strict_local_min"] = strict_local_min;
  j["certified"] = certified;
  if (witness) {
    nlohmann::json w;
    w["direction"] = nlohmann::json::array();
    for (const auto& d : witness->direction) w["direction"].push_back(rational_to_string(d));
    w["z"] = witness->z;
    w["quad_coeff"] = witness->quad_coeff;
    j["descent_parabola"] = std::move(w);
  }
  return j.dump();
}

std::vector<RatVector> rational_nullspace_basis(const RatMatrix& h) {
  if (!h.is_symmetric()) throw std::invalid_argument("nullspace basis expects a symmetric matrix");
  return nullspace_basis(h);
}

namespace {

// Linear images lambda -> sum_i lambda_i v_i as polynomials in lambda.
std::vector<Polynomial> span_images(const std::vector<RatVector>& basis, int n) {
  int k = static_cast<int>(basis.size());
  std::vector<Polynomial> images(n, Polynomial(k));
  for (int coord = 0; coord < n; ++coord) {
    Monomial m(k, 0);
    for (int i = 0; i < k; ++i) {
      if (basis[i][coord] == 0) continue;
      m[i] = 1;
      images[coord].add_term(m, basis[i][coord]);
      m[i] = 0;
    }
  }
  return images;
}

// First small integer combination of the basis on which grad p3 is nonzero.
// If some coefficient of g(lambda) = grad p3(sum lambda_i v_i) is nonzero,
// one of e_a or e_a + e_b already witnesses it (the diagonal coefficient
// c_aa is g at e_a; a surviving cross coefficient c_ab shows up at e_a+e_b).
std::optional<RatVector> violating_direction(const std::vector<Polynomial>& grad_p3,
                                             const std::vector<RatVector>& basis, int n) {
  int k = static_cast<int>(basis.size());
  auto grad_at = [&](const RatVector& d) {
    RatVector g(n);
    for (int m = 0; m < n; ++m) g[m] = grad_p3[m].evaluate(d);
    return g;
  };
  auto nonzero = [](const RatVector& g) {
    for (const auto& v : g)
      if (v != 0) return true;
    return false;
  };
  for (int a = 0; a < k; ++a)
    if (nonzero(grad_at(basis[a]))) return basis[a];
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) {
      RatVector d(n);
      for (int i = 0; i < n; ++i) d[i] = basis[a][i] + basis[b][i];
      if (nonzero(grad_at(d))) return d;
    }
  return std::nullopt;
}

ClassificationReport classify_exact(const Polynomial& p, const RatVector& xbar) {
  int n = p.nvars();
  ClassificationReport rep;
  rep.certified = true;

  CubicCanonical c = to_cubic_canonical(p);
  RatVector grad = c.grad_at(xbar);
  rep.critical = true;
  for (const auto& g : grad)
    if (g != 0) rep.critical = false;

  RatMatrix hess = c.hessian_at(xbar);
  bool psd = is_psd(hess);
  rep.second_order = rep.critical && psd;
  rep.strict_local_min = rep.critical && is_pd(hess);

  Polynomial p3 = p.homogeneous_part(3);
  std::vector<RatVector> basis = nullspace_basis(hess);
  auto images = span_images(basis, n);

  Polynomial p3_on_null = p3.compose(images);
  rep.tonc_holds = p3_on_null.is_zero();

  auto grad_p3 = p3.gradient();
  rep.toc_holds = true;
  for (const auto& gm : grad_p3)
    if (!gm.compose(images).is_zero()) rep.toc_holds = false;

  rep.local_min = rep.critical && rep.second_order && rep.toc_holds;

  if (rep.second_order && !rep.toc_holds) {
    auto dir = violating_direction(grad_p3, basis, n);
    if (dir) {
      DescentParabola w;
      w.direction = *dir;
      RatVector g(n);
      for (int m = 0; m < n; ++m) g[m] = grad_p3[m].evaluate(*dir);
      double norm = 0;
      std::vector<double> gd(n);
      for (int m = 0; m < n; ++m) {
        gd[m] = to_double(g[m]);
        norm += gd[m] * gd[m];
      }
      norm = std::sqrt(norm);
      w.z.resize(n);
      for (int m = 0; m < n; ++m) w.z[m] = -gd[m] / norm;
      double zhz = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) zhz += w.z[i] * to_double(hess(i, j)) * w.z[j];
      w.quad_coeff = norm / zhz;  // |grad p3(dhat)' z| = ||grad p3(dhat)||
      rep.witness = std::move(w);
    }
  }
  return rep;
}

ClassificationReport classify_numeric(const Polynomial& p, const std::vector<double>& xbar,
                                      double tol) {
  int n = p.nvars();
  ClassificationReport rep;
  rep.certified = false;
  double scale = std::max(1.0, p.max_abs_coeff_double());
  double nx = 1.0;
  for (double v : xbar) nx = std::max(nx, std::abs(v));
  double thresh = tol * scale * nx * nx;

  auto grad = p.gradient();
  rep.critical = true;
  for (const auto& g : grad)
    if (std::abs(g.evaluate(xbar)) > thresh) rep.critical = false;

  auto hess = p.hessian();
  Eigen::MatrixXd H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) H(i, j) = hess[i][j].evaluate(xbar);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
  double lmin = n > 0 ? es.eigenvalues().minCoeff() : 0.0;
  rep.second_order = rep.critical && lmin >= -thresh;
  rep.strict_local_min = rep.critical && lmin > thresh;

  // Numerical null space: eigenvectors with |lambda| below the threshold.
  std::vector<std::vector<double>> basis;
  for (int i = 0; i < n; ++i)
    if (std::abs(es.eigenvalues()[i]) <= thresh) {
      std::vector<double> v(n);
      for (int j = 0; j < n; ++j) v[j] = es.eigenvectors()(j, i);
      basis.push_back(std::move(v));
    }

  Polynomial p3 = p.homogeneous_part(3);
  auto grad_p3 = p3.gradient();
  rep.tonc_holds = true;
  rep.toc_holds = true;
  // Sample the quadratic map g on basis vectors and pair sums: g vanishes on
  // the span iff it vanishes on these (polarization of a quadratic).
  std::vector<std::vector<double>> probes = basis;
  for (size_t a = 0; a < basis.size(); ++a)
    for (size_t b = a + 1; b < basis.size(); ++b) {
      std::vector<double> s(n);
      for (int i = 0; i < n; ++i) s[i] = basis[a][i] + basis[b][i];
      probes.push_back(std::move(s));
    }
  for (const auto& d : probes) {
    if (std::abs(p3.evaluate(d)) > thresh * 4) rep.tonc_holds = false;
    for (const auto& gm : grad_p3)
      if (std::abs(gm.evaluate(d)) > thresh * 4) rep.toc_holds = false;
  }
  rep.local_min = rep.critical && rep.second_order && rep.toc_holds;
  return rep;
}

}  // namespace

ClassificationReport classify_point(const Polynomial& p, const Point& x, double tol) {
  if (p.degree().value_or(0) > 3)
    throw std::invalid_argument(
        "classify_point: TOC-based classification is only valid for degree <= 3");
  if (x.dim() != p.nvars()) throw std::invalid_argument("point dimension mismatch");
  if (x.exact) return classify_exact(p, x.rational_coords);
  return classify_numeric(p, x.double_coords, tol);
}

}  // namespace polycert::cubicmin
