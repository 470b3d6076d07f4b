#include "polycert/cubic_form.hpp"

#include <stdexcept>

namespace polycert {

RatMatrix CubicCanonical::hessian_at(const RatVector& x) const {
  RatMatrix h = Q;
  for (int i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) h(j, k) += x[i] * H[i](j, k);
  }
  return h;
}

RatVector CubicCanonical::grad_at(const RatVector& x) const {
  // Entry i is (1/2) x^T H_i x + e_i^T Q x + b_i.
  RatVector g(n);
  for (int i = 0; i < n; ++i) {
    Rational quad = 0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) quad += x[j] * H[i](j, k) * x[k];
    Rational lin = 0;
    for (int j = 0; j < n; ++j) lin += Q(i, j) * x[j];
    g[i] = quad / 2 + lin + b[i];
  }
  return g;
}

std::vector<double> CubicCanonical::grad_at_num(const std::vector<double>& x) const {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) {
    double quad = 0;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) quad += x[j] * to_double(H[i](j, k)) * x[k];
    double lin = 0;
    for (int j = 0; j < n; ++j) lin += to_double(Q(i, j)) * x[j];
    g[i] = quad / 2 + lin + to_double(b[i]);
  }
  return g;
}

Polynomial CubicCanonical::to_polynomial() const {
  Polynomial p(n);
  Rational sixth(1, 6), half(1, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        if (H[i](j, k) == 0) continue;
        Monomial m(n, 0);
        m[i] += 1;
        m[j] += 1;
        m[k] += 1;
        p.add_term(m, sixth * H[i](j, k));
      }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (Q(i, j) == 0) continue;
      Monomial m(n, 0);
      m[i] += 1;
      m[j] += 1;
      p.add_term(m, half * Q(i, j));
    }
  for (int i = 0; i < n; ++i) {
    if (b[i] == 0) continue;
    Monomial m(n, 0);
    m[i] = 1;
    p.add_term(m, b[i]);
  }
  return p;
}

bool CubicCanonical::valid() const {
  if (static_cast<int>(H.size()) != n || Q.rows() != n || Q.cols() != n ||
      static_cast<int>(b.size()) != n)
    return false;
  if (!Q.is_symmetric()) return false;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (H[i](j, k) != H[j](i, k) || H[i](j, k) != H[k](i, j)) return false;
  return true;
}

CubicCanonical to_cubic_canonical(const Polynomial& p) {
  if (p.degree().value_or(0) > 3) throw std::invalid_argument("to_cubic_canonical: degree > 3");
  int n = p.nvars();
  CubicCanonical c;
  c.n = n;
  c.H.assign(n, RatMatrix(n, n));
  c.Q = RatMatrix(n, n);
  c.b.assign(n, Rational(0));

  for (const auto& [m, coef] : p.terms()) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      for (int e = 0; e < m[i]; ++e) idx.push_back(i);
    switch (idx.size()) {
      case 0:
        break;  // constant dropped
      case 1:
        c.b[idx[0]] += coef;
        break;
      case 2: {
        // x_i^2 -> Q_ii = 2c; x_i x_j -> Q_ij = Q_ji = c.
        int i = idx[0], j = idx[1];
        if (i == j) {
          c.Q(i, i) += 2 * coef;
        } else {
          c.Q(i, j) += coef;
          c.Q(j, i) += coef;
        }
        break;
      }
      case 3: {
        // (H_i)_{jk} is the third partial d^3 p / dx_i dx_j dx_k.
        int i = idx[0], j = idx[1], k = idx[2];
        Rational third;
        if (i == j && j == k)
          third = 6 * coef;
        else if (i == j || j == k || i == k)
          third = 2 * coef;
        else
          third = coef;
        int perms[6][3] = {{i, j, k}, {i, k, j}, {j, i, k}, {j, k, i}, {k, i, j}, {k, j, i}};
        bool seen[6] = {};
        for (int t = 0; t < 6; ++t) {
          if (seen[t]) continue;
          for (int u = t; u < 6; ++u)
            if (perms[u][0] == perms[t][0] && perms[u][1] == perms[t][1] &&
                perms[u][2] == perms[t][2])
              seen[u] = true;
          c.H[perms[t][0]](perms[t][1], perms[t][2]) = third;
        }
        break;
      }
    }
  }
  return c;
}

CubicCanonical cubic_model_from_derivatives(const RatVector& g, const RatMatrix& H,
                                            const std::vector<Rational>& T) {
  int n = static_cast<int>(g.size());
  if (H.rows() != n || H.cols() != n || static_cast<int>(T.size()) != n * n * n)
    throw std::invalid_argument("cubic model: dimension mismatch");
  if (!H.is_symmetric()) throw std::invalid_argument("cubic model: Hessian not symmetric");
  auto t = [&](int i, int j, int k) -> const Rational& { return T[(i * n + j) * n + k]; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (t(i, j, k) != t(j, i, k) || t(i, j, k) != t(k, j, i))
          throw std::invalid_argument("cubic model: tensor not symmetric");
  CubicCanonical c;
  c.n = n;
  c.Q = H;
  c.b = g;
  c.H.assign(n, RatMatrix(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) c.H[i](j, k) = t(i, j, k);
  return c;
}

}  // namespace polycert
