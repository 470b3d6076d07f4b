#include "polycert/conic/sos.hpp"

#include <stdexcept>

namespace polycert::conic {

SymPoly SymPoly::from(const Polynomial& p) {
  SymPoly sp;
  sp.nvars = p.nvars();
  for (const auto& [m, c] : p.terms()) sp.coeffs[m] = LinExpr(to_double(c));
  return sp;
}

SymPoly& SymPoly::operator+=(const SymPoly& rhs) {
  if (nvars != rhs.nvars) throw std::invalid_argument("SymPoly nvars mismatch");
  for (const auto& [m, e] : rhs.coeffs) {
    LinExpr& mine = coeffs[m];
    mine.add_const(e.constant());
    for (const auto& [key, coef] : e.coeffs()) mine.add_raw(key, coef);
  }
  return *this;
}

SymPoly& SymPoly::operator-=(const SymPoly& rhs) {
  *this += rhs.scaled(-1.0);
  return *this;
}

SymPoly SymPoly::times(const Polynomial& q) const {
  if (nvars != q.nvars()) throw std::invalid_argument("SymPoly times: nvars mismatch");
  SymPoly out = SymPoly::zero(nvars);
  for (const auto& [mq, cq] : q.terms()) {
    double c = to_double(cq);
    for (const auto& [m, e] : coeffs) {
      Monomial prod(nvars);
      for (int i = 0; i < nvars; ++i) prod[i] = m[i] + mq[i];
      LinExpr& tgt = out.coeffs[prod];
      tgt.add_const(c * e.constant());
      for (const auto& [key, coef] : e.coeffs()) tgt.add_raw(key, c * coef);
    }
  }
  return out;
}

SymPoly SymPoly::scaled(double s) const {
  SymPoly out = SymPoly::zero(nvars);
  for (const auto& [m, e] : coeffs) {
    LinExpr t(s * e.constant());
    for (const auto& [key, coef] : e.coeffs()) t.add_raw(key, s * coef);
    out.coeffs[m] = std::move(t);
  }
  return out;
}

SosPoly make_sos_poly(ConicProgram& prog, int nvars, int half_deg, const std::string& name) {
  if (half_deg < 0) throw std::invalid_argument("negative degree bound");
  SosPoly sp;
  sp.basis = monomial_basis(nvars, half_deg);
  int sz = static_cast<int>(sp.basis.size());
  sp.gram = prog.add_psd_matrix(sz, name);
  sp.poly = SymPoly::zero(nvars);
  for (int a = 0; a < sz; ++a)
    for (int b = a; b < sz; ++b) {
      Monomial m(nvars);
      for (int i = 0; i < nvars; ++i) m[i] = sp.basis[a][i] + sp.basis[b][i];
      sp.poly.coeffs[m].add(sp.gram, a, b, a == b ? 1.0 : 2.0);
    }
  return sp;
}

SosMatrix make_sos_matrix(ConicProgram& prog, int nx, int n, const std::string& name) {
  SosMatrix sm;
  sm.nx = nx;
  sm.n = n;
  sm.gram = prog.add_psd_matrix(n * (nx + 1), name);
  return sm;
}

SymPoly sos_matrix_entry(const SosMatrix& sm, int i, int j) {
  // M_ij(x) = sum over ordered pairs (t, t') of Q_{(i,t),(j,t')} v_t v_{t'},
  // where v = (1, x). Symmetry of Q makes this symmetric in (i, j).
  SymPoly out = SymPoly::zero(sm.nx);
  for (int t = 0; t <= sm.nx; ++t)
    for (int u = 0; u <= sm.nx; ++u) {
      Monomial m(sm.nx, 0);
      if (t > 0) m[t - 1] += 1;
      if (u > 0) m[u - 1] += 1;
      out.coeffs[m].add(sm.gram, sm.windex(i, t), sm.windex(j, u), 1.0);
    }
  return out;
}

void add_equal_zero(ConicProgram& prog, const SymPoly& sp) {
  for (const auto& [m, e] : sp.coeffs) prog.add_eq(e, 0.0);
}

SosPoly constrain_sos(ConicProgram& prog, const SymPoly& target, int half_deg,
                      const std::string& name) {
  SosPoly sp = make_sos_poly(prog, target.nvars, half_deg, name);
  SymPoly diff = sp.poly;
  diff -= target;
  add_equal_zero(prog, diff);
  return sp;
}

double eval_gram_poly(const std::vector<Monomial>& basis, const Eigen::MatrixXd& Q,
                      const std::vector<double>& x) {
  int sz = static_cast<int>(basis.size());
  Eigen::VectorXd z(sz);
  for (int a = 0; a < sz; ++a) {
    double v = 1.0;
    for (size_t i = 0; i < x.size(); ++i)
      for (int e = 0; e < basis[a][i]; ++e) v *= x[i];
    z[a] = v;
  }
  return z.dot(Q * z);
}

std::map<Monomial, double> gram_to_coeffs(const std::vector<Monomial>& basis,
                                          const Eigen::MatrixXd& Q) {
  std::map<Monomial, double> out;
  int sz = static_cast<int>(basis.size());
  int nvars = sz > 0 ? static_cast<int>(basis[0].size()) : 0;
  for (int a = 0; a < sz; ++a)
    for (int b = a; b < sz; ++b) {
      Monomial m(nvars);
      for (int i = 0; i < nvars; ++i) m[i] = basis[a][i] + basis[b][i];
      out[m] += (a == b ? 1.0 : 2.0) * Q(a, b);
    }
  for (auto it = out.begin(); it != out.end();)
    it = it->second == 0.0 ? out.erase(it) : std::next(it);
  return out;
}

}  // namespace polycert::conic
