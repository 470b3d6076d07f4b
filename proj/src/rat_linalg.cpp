#include "polycert/rat_linalg.hpp"

#include <cassert>
#include <stdexcept>

namespace polycert {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

bool RatMatrix::is_zero() const {
  for (const auto& x : a_)
    if (x != 0) return false;
  return true;
}

bool RatMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if ((*this)(i, j) != (*this)(j, i)) return false;
  return true;
}

RatMatrix RatMatrix::transposed() const {
  RatMatrix t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

RatMatrix RatMatrix::operator*(const RatMatrix& rhs) const {
  assert(cols_ == rhs.rows_);
  RatMatrix out(rows_, rhs.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rational& v = (*this)(i, k);
      if (v == 0) continue;
      for (int j = 0; j < rhs.cols_; ++j) out(i, j) += v * rhs(k, j);
    }
  return out;
}

RatMatrix RatMatrix::operator+(const RatMatrix& rhs) const {
  RatMatrix out = *this;
  out += rhs;
  return out;
}

RatMatrix RatMatrix::operator-(const RatMatrix& rhs) const {
  assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
  RatMatrix out = *this;
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] -= rhs.a_[i];
  return out;
}

RatMatrix& RatMatrix::operator+=(const RatMatrix& rhs) {
  assert(rows_ == rhs.rows_ && cols_ == rhs.cols_);
  for (size_t i = 0; i < a_.size(); ++i) a_[i] += rhs.a_[i];
  return *this;
}

RatMatrix& RatMatrix::operator*=(const Rational& s) {
  for (auto& x : a_) x *= s;
  return *this;
}

std::vector<Rational> RatMatrix::mul(const std::vector<Rational>& v) const {
  assert(static_cast<int>(v.size()) == cols_);
  std::vector<Rational> out(rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j)
      if ((*this)(i, j) != 0) out[i] += (*this)(i, j) * v[j];
  return out;
}

Rational dot(const RatVector& a, const RatVector& b) {
  assert(a.size() == b.size());
  Rational s = 0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

std::vector<int> rref(RatMatrix& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    if (piv != r)
      for (int j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
    Rational inv = Rational(1) / m(r, c);
    for (int j = c; j < m.cols(); ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c) == 0) continue;
      Rational f = m(i, c);
      for (int j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(RatMatrix m) { return static_cast<int>(rref(m).size()); }

std::vector<RatVector> nullspace_basis(const RatMatrix& m) {
  RatMatrix e = m;
  std::vector<int> pivots = rref(e);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int c : pivots) is_pivot[c] = true;

  std::vector<RatVector> basis;
  for (int c = 0; c < m.cols(); ++c) {
    if (is_pivot[c]) continue;
    RatVector v(m.cols());
    v[c] = 1;
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = -e(static_cast<int>(r), c);
    basis.push_back(std::move(v));
  }
  return basis;
}

bool is_psd(const RatMatrix& m0) {
  if (!m0.is_symmetric()) throw std::invalid_argument("is_psd: matrix not symmetric");
  RatMatrix m = m0;
  int n = m.rows();
  std::vector<bool> active(n, true);
  for (;;) {
    int piv = -1;
    for (int i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (m(i, i) < 0) return false;
      if (piv < 0 && m(i, i) > 0) piv = i;
    }
    if (piv < 0) {
      // All remaining diagonals are zero; PSD iff the remaining block is zero.
      for (int i = 0; i < n; ++i) {
        if (!active[i]) continue;
        for (int j = 0; j < n; ++j)
          if (active[j] && m(i, j) != 0) return false;
      }
      return true;
    }
    // Zero diagonal with a nonzero entry in the pivot row/column is indefinite.
    for (int i = 0; i < n; ++i)
      if (active[i] && i != piv && m(i, i) == 0 && m(i, piv) != 0) return false;
    Rational d = m(piv, piv);
    for (int i = 0; i < n; ++i) {
      if (!active[i] || i == piv || m(i, piv) == 0) continue;
      Rational f = m(i, piv) / d;
      for (int j = 0; j < n; ++j)
        if (active[j] && j != piv) m(i, j) -= f * m(piv, j);
    }
    active[piv] = false;
  }
}

Rational determinant(RatMatrix m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  int n = m.rows();
  Rational det = 1;
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i)
      if (m(i, c) != 0) {
        piv = i;
        break;
      }
    if (piv < 0) return Rational(0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(c, j));
      det = -det;
    }
    det *= m(c, c);
    Rational inv = Rational(1) / m(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (m(i, c) == 0) continue;
      Rational f = m(i, c) * inv;
      for (int j = c; j < n; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return det;
}

bool is_pd(const RatMatrix& m) {
  if (!m.is_symmetric()) throw std::invalid_argument("is_pd: matrix not symmetric");
  int n = m.rows();
  for (int k = 1; k <= n; ++k) {
    RatMatrix lead(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) lead(i, j) = m(i, j);
    if (determinant(std::move(lead)) <= 0) return false;
  }
  return true;
}

std::optional<RatVector> solve_linear(RatMatrix a, RatVector b, bool* unique) {
  assert(static_cast<int>(b.size()) == a.rows());
  int n = a.cols();
  RatMatrix aug(a.rows(), n + 1);
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n) = b[i];
  }
  std::vector<int> pivots = rref(aug);
  for (int c : pivots)
    if (c == n) return std::nullopt;  // row (0 ... 0 | 1): inconsistent
  if (unique) *unique = static_cast<int>(pivots.size()) == n;
  RatVector x(n);
  for (size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = aug(static_cast<int>(r), n);
  return x;
}

}  // namespace polycert
