#include "polycert/conic/ipm.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace polycert::conic {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
}

int svec_dim(int k) { return k * (k + 1) / 2; }

int svec_index(int k, int i, int j) {
  (void)k;
  if (i > j) std::swap(i, j);
  return j * (j + 1) / 2 + i;
}

void svec_from_matrix(const Eigen::MatrixXd& m, Eigen::VectorXd& out, int offset) {
  int k = static_cast<int>(m.rows());
  int idx = offset;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i <= j; ++i) out[idx++] = (i == j) ? m(i, j) : kSqrt2 * m(i, j);
}

void matrix_from_svec(const Eigen::VectorXd& v, int offset, int k, Eigen::MatrixXd& out) {
  out.resize(k, k);
  int idx = offset;
  for (int j = 0; j < k; ++j)
    for (int i = 0; i <= j; ++i) {
      double val = (i == j) ? v[idx] : v[idx] / kSqrt2;
      out(i, j) = val;
      out(j, i) = val;
      ++idx;
    }
}

int StdForm::cone_dim() const {
  int d = static_cast<int>(nn_rows.size());
  for (const auto& b : psd_blocks) d += svec_dim(b.dim);
  return d;
}

int StdForm::cone_order() const {
  int d = static_cast<int>(nn_rows.size());
  for (const auto& b : psd_blocks) d += b.dim;
  return d;
}

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct BlockLayout {
  int nn = 0;                    // leading nonnegative coordinates
  std::vector<int> psd_offset;   // svec offsets of PSD blocks
  std::vector<int> psd_dim;
  int total = 0;
};

// Nesterov-Todd scaling state per iteration.
struct Scaling {
  VectorXd w_nn;                 // nonneg block scaling
  VectorXd lambda_nn;
  std::vector<MatrixXd> R, Rinv; // per PSD block
  std::vector<VectorXd> lambda_psd;
  std::vector<MatrixXd> sigma;      // R R'
  std::vector<MatrixXd> sigma_inv;  // Rinv' Rinv
};

struct Workspace {
  const StdForm& P;
  BlockLayout L;
  int nu, p, mc;
  double data_norm = 1.0;

  // per-block loading entries grouped by unknown (for KKT assembly)
  struct BlockEntryGroup {
    int unknown;
    std::vector<std::array<double, 3>> ent;  // {row, col, value} with row<=col
  };
  std::vector<std::vector<BlockEntryGroup>> grouped;

  explicit Workspace(const StdForm& prob) : P(prob) {
    nu = prob.num_unknowns;
    p = static_cast<int>(prob.eq_rows.size());
    L.nn = static_cast<int>(prob.nn_rows.size());
    int off = L.nn;
    for (const auto& b : prob.psd_blocks) {
      L.psd_offset.push_back(off);
      L.psd_dim.push_back(b.dim);
      off += svec_dim(b.dim);
    }
    L.total = off;
    mc = off;
    grouped.resize(prob.psd_blocks.size());
    for (size_t bi = 0; bi < prob.psd_blocks.size(); ++bi) {
      std::vector<PsdEntry> es = prob.psd_blocks[bi].entries;
      std::sort(es.begin(), es.end(),
                [](const PsdEntry& a, const PsdEntry& b) { return a.unknown < b.unknown; });
      for (const auto& e : es) {
        if (grouped[bi].empty() || grouped[bi].back().unknown != e.unknown)
          grouped[bi].push_back({e.unknown, {}});
        grouped[bi].back().ent.push_back(
            {static_cast<double>(e.row), static_cast<double>(e.col), e.value});
      }
      for (const auto& e : es) data_norm = std::max(data_norm, std::abs(e.value));
      data_norm = std::max(data_norm, prob.psd_blocks[bi].offset.cwiseAbs().maxCoeff());
    }
    for (const auto& r : prob.eq_rows)
      for (auto& [j, v] : r.coeffs) data_norm = std::max(data_norm, std::abs(v));
    for (const auto& r : prob.nn_rows)
      for (auto& [j, v] : r.coeffs) data_norm = std::max(data_norm, std::abs(v));
  }

  VectorXd apply_A(const VectorXd& u) const {
    VectorXd out = VectorXd::Zero(p);
    for (int i = 0; i < p; ++i)
      for (auto& [j, v] : P.eq_rows[i].coeffs) out[i] += v * u[j];
    return out;
  }

  VectorXd apply_AT(const VectorXd& y) const {
    VectorXd out = VectorXd::Zero(nu);
    for (int i = 0; i < p; ++i) {
      if (y[i] == 0.0) continue;
      for (auto& [j, v] : P.eq_rows[i].coeffs) out[j] += v * y[i];
    }
    return out;
  }

  VectorXd apply_G(const VectorXd& u) const {
    VectorXd out = VectorXd::Zero(mc);
    for (int r = 0; r < L.nn; ++r)
      for (auto& [j, v] : P.nn_rows[r].coeffs) out[r] += v * u[j];
    for (size_t bi = 0; bi < P.psd_blocks.size(); ++bi) {
      int off = L.psd_offset[bi], k = L.psd_dim[bi];
      for (const auto& e : P.psd_blocks[bi].entries) {
        double scale = (e.row == e.col) ? 1.0 : kSqrt2;
        out[off + svec_index(k, e.row, e.col)] += scale * e.value * u[e.unknown];
      }
    }
    return out;
  }

  VectorXd apply_GT(const VectorXd& z) const {
    VectorXd out = VectorXd::Zero(nu);
    for (int r = 0; r < L.nn; ++r) {
      if (z[r] == 0.0) continue;
      for (auto& [j, v] : P.nn_rows[r].coeffs) out[j] += v * z[r];
    }
    for (size_t bi = 0; bi < P.psd_blocks.size(); ++bi) {
      int off = L.psd_offset[bi], k = L.psd_dim[bi];
      for (const auto& e : P.psd_blocks[bi].entries) {
        double scale = (e.row == e.col) ? 1.0 : kSqrt2;
        out[e.unknown] += scale * e.value * z[off + svec_index(k, e.row, e.col)];
      }
    }
    return out;
  }

  VectorXd cone_h() const {
    VectorXd h(mc);
    for (int r = 0; r < L.nn; ++r) h[r] = P.nn_rhs[r];
    for (size_t bi = 0; bi < P.psd_blocks.size(); ++bi)
      svec_from_matrix(P.psd_blocks[bi].offset, h, L.psd_offset[bi]);
    return h;
  }

  // Smallest cone eigenvalue of v (coordinatewise for NN, eigenvalue for PSD).
  double min_eig(const VectorXd& v) const {
    double m = std::numeric_limits<double>::infinity();
    for (int r = 0; r < L.nn; ++r) m = std::min(m, v[r]);
    MatrixXd tmp;
    for (size_t bi = 0; bi < P.psd_blocks.size(); ++bi) {
      matrix_from_svec(v, L.psd_offset[bi], L.psd_dim[bi], tmp);
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(tmp, Eigen::EigenvaluesOnly);
      m = std::min(m, es.eigenvalues().minCoeff());
    }
    if (mc == 0) m = 0.0;
    return m;
  }

  VectorXd cone_identity() const {
    VectorXd e = VectorXd::Zero(mc);
    for (int r = 0; r < L.nn; ++r) e[r] = 1.0;
    for (size_t bi = 0; bi < P.psd_blocks.size(); ++bi) {
      int k = L.psd_dim[bi];
      for (int i = 0; i < k; ++i) e[L.psd_offset[bi] + svec_index(k, i, i)] = 1.0;
    }
    return e;
  }
};

bool compute_scaling(const Workspace& W, const VectorXd& s, const VectorXd& z, Scaling& sc) {
  int l = W.L.nn;
  sc.w_nn.resize(l);
  sc.lambda_nn.resize(l);
  for (int r = 0; r < l; ++r) {
    if (s[r] <= 0 || z[r] <= 0) return false;
    sc.w_nn[r] = std::sqrt(s[r] / z[r]);
    sc.lambda_nn[r] = std::sqrt(s[r] * z[r]);
  }
  size_t nb = W.P.psd_blocks.size();
  sc.R.resize(nb);
  sc.Rinv.resize(nb);
  sc.lambda_psd.resize(nb);
  sc.sigma.resize(nb);
  sc.sigma_inv.resize(nb);
  MatrixXd S, Z;
  for (size_t bi = 0; bi < nb; ++bi) {
    int k = W.L.psd_dim[bi];
    matrix_from_svec(s, W.L.psd_offset[bi], k, S);
    matrix_from_svec(z, W.L.psd_offset[bi], k, Z);
    Eigen::LLT<MatrixXd> ls(S), lz(Z);
    if (ls.info() != Eigen::Success || lz.info() != Eigen::Success) return false;
    MatrixXd Ls = ls.matrixL();
    MatrixXd Lz = lz.matrixL();
    Eigen::JacobiSVD<MatrixXd> svd(Lz.transpose() * Ls,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    VectorXd lam = svd.singularValues();
    if (lam.minCoeff() <= 0) return false;
    VectorXd li = lam.cwiseSqrt().cwiseInverse();
    sc.R[bi] = Ls * svd.matrixV() * li.asDiagonal();
    sc.Rinv[bi] = li.asDiagonal() * svd.matrixU().transpose() * Lz.transpose();
    sc.lambda_psd[bi] = lam;
    sc.sigma[bi] = sc.R[bi] * sc.R[bi].transpose();
    sc.sigma_inv[bi] = sc.Rinv[bi].transpose() * sc.Rinv[bi];
  }
  return true;
}

enum class ScaleOp { W, WT_inv, Wprime, WprimeW, WprimeW_inv };

// Applies one of the NT scaling maps blockwise to a cone vector.
VectorXd apply_scaling(const Workspace& Wk, const Scaling& sc, ScaleOp op, const VectorXd& v) {
  VectorXd out(Wk.mc);
  for (int r = 0; r < Wk.L.nn; ++r) {
    double w = sc.w_nn[r];
    switch (op) {
      case ScaleOp::W:
      case ScaleOp::Wprime: out[r] = w * v[r]; break;
      case ScaleOp::WT_inv: out[r] = v[r] / w; break;
      case ScaleOp::WprimeW: out[r] = w * w * v[r]; break;
      case ScaleOp::WprimeW_inv: out[r] = v[r] / (w * w); break;
    }
  }
  MatrixXd V, T;
  for (size_t bi = 0; bi < Wk.P.psd_blocks.size(); ++bi) {
    int k = Wk.L.psd_dim[bi];
    matrix_from_svec(v, Wk.L.psd_offset[bi], k, V);
    switch (op) {
      case ScaleOp::W: T = sc.R[bi].transpose() * V * sc.R[bi]; break;
      case ScaleOp::Wprime: T = sc.R[bi] * V * sc.R[bi].transpose(); break;
      case ScaleOp::WT_inv: T = sc.Rinv[bi] * V * sc.Rinv[bi].transpose(); break;
      case ScaleOp::WprimeW: T = sc.sigma[bi] * V * sc.sigma[bi]; break;
      case ScaleOp::WprimeW_inv: T = sc.sigma_inv[bi] * V * sc.sigma_inv[bi]; break;
    }
    svec_from_matrix(T, out, Wk.L.psd_offset[bi]);
  }
  return out;
}

// Jordan product u o v in the scaled space, and lambda \ v.
VectorXd jordan_product(const Workspace& Wk, const VectorXd& u, const VectorXd& v) {
  VectorXd out(Wk.mc);
  for (int r = 0; r < Wk.L.nn; ++r) out[r] = u[r] * v[r];
  MatrixXd U, V;
  for (size_t bi = 0; bi < Wk.P.psd_blocks.size(); ++bi) {
    int k = Wk.L.psd_dim[bi];
    matrix_from_svec(u, Wk.L.psd_offset[bi], k, U);
    matrix_from_svec(v, Wk.L.psd_offset[bi], k, V);
    MatrixXd T = 0.5 * (U * V + V * U);
    svec_from_matrix(T, out, Wk.L.psd_offset[bi]);
  }
  return out;
}

VectorXd lambda_solve(const Workspace& Wk, const Scaling& sc, const VectorXd& v) {
  VectorXd out(Wk.mc);
  for (int r = 0; r < Wk.L.nn; ++r) out[r] = v[r] / sc.lambda_nn[r];
  MatrixXd V;
  for (size_t bi = 0; bi < Wk.P.psd_blocks.size(); ++bi) {
    int k = Wk.L.psd_dim[bi];
    matrix_from_svec(v, Wk.L.psd_offset[bi], k, V);
    const VectorXd& lam = sc.lambda_psd[bi];
    MatrixXd T(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) T(i, j) = 2.0 * V(i, j) / (lam[i] + lam[j]);
    svec_from_matrix(T, out, Wk.L.psd_offset[bi]);
  }
  return out;
}

VectorXd lambda_vec(const Workspace& Wk, const Scaling& sc) {
  VectorXd out = VectorXd::Zero(Wk.mc);
  for (int r = 0; r < Wk.L.nn; ++r) out[r] = sc.lambda_nn[r];
  for (size_t bi = 0; bi < Wk.P.psd_blocks.size(); ++bi) {
    int k = Wk.L.psd_dim[bi];
    for (int i = 0; i < k; ++i)
      out[Wk.L.psd_offset[bi] + svec_index(k, i, i)] = sc.lambda_psd[bi][i];
  }
  return out;
}

// Maximum t such that lambda + t*d stays in the cone (in scaled coordinates).
double max_step(const Workspace& Wk, const Scaling& sc, const VectorXd& d) {
  double step = std::numeric_limits<double>::infinity();
  for (int r = 0; r < Wk.L.nn; ++r)
    if (d[r] < 0) step = std::min(step, -sc.lambda_nn[r] / d[r]);
  MatrixXd D;
  for (size_t bi = 0; bi < Wk.P.psd_blocks.size(); ++bi) {
    int k = Wk.L.psd_dim[bi];
    matrix_from_svec(d, Wk.L.psd_offset[bi], k, D);
    VectorXd li = sc.lambda_psd[bi].cwiseSqrt().cwiseInverse();
    MatrixXd M = li.asDiagonal() * D * li.asDiagonal();
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(M, Eigen::EigenvaluesOnly);
    double mmin = es.eigenvalues().minCoeff();
    if (mmin < 0) step = std::min(step, -1.0 / mmin);
  }
  return step;
}

// KKT factorization: H = G'(W'W)^-1 G, Schur = A H^-1 A'. H is symmetrically
// equilibrated before factoring; LDLT picks up the nearly-semidefinite cases
// where plain Cholesky fails.
struct KktFactor {
  Eigen::LLT<MatrixXd> Hllt;
  Eigen::LDLT<MatrixXd> Hldlt;
  bool h_use_ldlt = false;
  VectorXd hscale;  // D: factorization is of D H D
  Eigen::LLT<MatrixXd> Sllt;
  Eigen::LDLT<MatrixXd> Sldlt;
  bool s_use_ldlt = false;
  MatrixXd Adense;
  bool ok = false;

  VectorXd solveH(const VectorXd& v) const {
    VectorXd scaled = hscale.cwiseProduct(v);
    VectorXd sol = h_use_ldlt ? VectorXd(Hldlt.solve(scaled)) : VectorXd(Hllt.solve(scaled));
    return hscale.cwiseProduct(sol);
  }
  MatrixXd solveH(const MatrixXd& v) const {
    MatrixXd scaled = hscale.asDiagonal() * v;
    MatrixXd sol = h_use_ldlt ? MatrixXd(Hldlt.solve(scaled)) : MatrixXd(Hllt.solve(scaled));
    return hscale.asDiagonal() * sol;
  }
  VectorXd solveS(const VectorXd& v) const {
    return s_use_ldlt ? VectorXd(Sldlt.solve(v)) : VectorXd(Sllt.solve(v));
  }
};

bool assemble_and_factor(const Workspace& Wk, const Scaling& sc, KktFactor& F) {
  int nu = Wk.nu;
  MatrixXd H = MatrixXd::Zero(nu, nu);
  // Nonnegative rows: H += sum_r (1/w_r^2) g_r g_r'.
  for (int r = 0; r < Wk.L.nn; ++r) {
    double d = 1.0 / (sc.w_nn[r] * sc.w_nn[r]);
    const auto& row = Wk.P.nn_rows[r].coeffs;
    for (size_t a = 0; a < row.size(); ++a)
      for (size_t b = a; b < row.size(); ++b) {
        double v = d * row[a].second * row[b].second;
        int ja = row[a].first, jb = row[b].first;
        if (ja <= jb)
          H(ja, jb) += v;
        else
          H(jb, ja) += v;
      }
  }
  // PSD blocks: H_jk += Tr(E_j Sinv E_k Sinv) via the entry-pair expansion.
  for (size_t bi = 0; bi < Wk.P.psd_blocks.size(); ++bi) {
    const MatrixXd& Si = sc.sigma_inv[bi];
    const auto& groups = Wk.grouped[bi];
    for (size_t gj = 0; gj < groups.size(); ++gj) {
      for (size_t gk = gj; gk < groups.size(); ++gk) {
        double acc = 0.0;
        for (const auto& e1 : groups[gj].ent)
          for (const auto& e2 : groups[gk].ent) {
            int a = static_cast<int>(e1[0]), b = static_cast<int>(e1[1]);
            int c = static_cast<int>(e2[0]), d2 = static_cast<int>(e2[1]);
            double kappa;
            if (a == b && c == d2)
              kappa = Si(a, c) * Si(a, c);
            else if (a == b)
              kappa = 2.0 * Si(a, c) * Si(a, d2);
            else if (c == d2)
              kappa = 2.0 * Si(c, a) * Si(c, b);
            else
              kappa = 2.0 * (Si(a, c) * Si(b, d2) + Si(a, d2) * Si(b, c));
            acc += e1[2] * e2[2] * kappa;
          }
        int j = groups[gj].unknown, k = groups[gk].unknown;
        H(std::min(j, k), std::max(j, k)) += acc;
      }
    }
  }
  H = H.selfadjointView<Eigen::Upper>();

  // Symmetric equilibration keeps Cholesky healthy across the huge dynamic
  // range the NT scaling induces late in the iteration. Coordinates with no
  // cone loading have an exactly zero H row; they get a small static
  // regularizer instead (their steps are pinned by the equality rows, and the
  // outer refinement absorbs the perturbation).
  F.hscale.resize(nu);
  for (int i = 0; i < nu; ++i) F.hscale[i] = H(i, i) > 0 ? 1.0 / std::sqrt(H(i, i)) : 1.0;
  MatrixXd Hs = F.hscale.asDiagonal() * H * F.hscale.asDiagonal();
  for (int i = 0; i < nu; ++i)
    if (H(i, i) <= 0) Hs(i, i) = 1e-8;
  F.h_use_ldlt = false;
  F.Hllt.compute(Hs);
  if (F.Hllt.info() != Eigen::Success) {
    F.h_use_ldlt = true;
    F.Hldlt.compute(Hs);
    if (F.Hldlt.info() != Eigen::Success) {
      F.h_use_ldlt = false;
      double jit = 1e-12;
      for (int attempt = 0; attempt < 6; ++attempt) {
        MatrixXd Hr = Hs;
        Hr.diagonal().array() += jit;
        F.Hllt.compute(Hr);
        if (F.Hllt.info() == Eigen::Success) break;
        jit *= 1e3;
        if (attempt == 5) return false;
      }
    }
  }

  if (Wk.p > 0) {
    F.Adense = MatrixXd::Zero(Wk.p, nu);
    for (int i = 0; i < Wk.p; ++i)
      for (auto& [j, v] : Wk.P.eq_rows[i].coeffs) F.Adense(i, j) += v;
    MatrixXd S = F.Adense * F.solveH(MatrixXd(F.Adense.transpose()));
    F.s_use_ldlt = false;
    F.Sllt.compute(S);
    if (F.Sllt.info() != Eigen::Success) {
      F.s_use_ldlt = true;
      F.Sldlt.compute(S);
      if (F.Sldlt.info() != Eigen::Success) {
        // Dependent equality rows make S singular; jitter regularizes the
        // multipliers (the primal step is unaffected and refinement cleans up).
        F.s_use_ldlt = false;
        double jit = 1e-12 * std::max(1.0, S.diagonal().maxCoeff());
        for (int attempt = 0; attempt < 6; ++attempt) {
          MatrixXd Sr = S;
          Sr.diagonal().array() += jit;
          F.Sllt.compute(Sr);
          if (F.Sllt.info() == Eigen::Success) break;
          jit *= 1e3;
          if (attempt == 5) return false;
        }
      }
    }
  }
  F.ok = true;
  return true;
}

// Solves [0 A' G'; A 0 0; G 0 -W'W] [du dy dz] = [d1 d2 d3].
void kkt_solve(const Workspace& Wk, const Scaling& sc, const KktFactor& F, const VectorXd& d1,
               const VectorXd& d2, const VectorXd& d3, VectorXd& du, VectorXd& dy, VectorXd& dz,
               int refine = 2) {
  du = VectorXd::Zero(Wk.nu);
  dy = VectorXd::Zero(Wk.p);
  dz = VectorXd::Zero(Wk.mc);
  VectorXd r1 = d1, r2 = d2, r3 = d3;
  for (int pass = 0; pass <= refine; ++pass) {
    VectorXd rhat = r1 + Wk.apply_GT(apply_scaling(Wk, sc, ScaleOp::WprimeW_inv, r3));
    VectorXd eu, ey;
    if (Wk.p > 0) {
      VectorXd t = F.solveH(rhat);
      ey = F.solveS(F.Adense * t - r2);
      eu = F.solveH(VectorXd(rhat - F.Adense.transpose() * ey));
    } else {
      ey = VectorXd::Zero(0);
      eu = F.solveH(rhat);
    }
    VectorXd ez = apply_scaling(Wk, sc, ScaleOp::WprimeW_inv, Wk.apply_G(eu) - r3);
    du += eu;
    dy += ey;
    dz += ez;
    if (pass == refine) break;
    r1 = d1 - (Wk.apply_AT(dy) + Wk.apply_GT(dz));
    r2 = d2 - Wk.apply_A(du);
    r3 = d3 - (Wk.apply_G(du) - apply_scaling(Wk, sc, ScaleOp::WprimeW, dz));
  }
}

IpmResult solve_no_cones(const StdForm& P, const Workspace& Wk, const IpmOptions& opt) {
  // Pure equality problem: min c'u s.t. Au = b. Least squares settles it.
  IpmResult res;
  VectorXd c = Eigen::Map<const VectorXd>(P.cost.data(), P.num_unknowns);
  if (Wk.p == 0) {
    if (c.norm() <= opt.tol) {
      res.status = IpmStatus::Optimal;
      res.u = VectorXd::Zero(P.num_unknowns);
      res.objective = 0.0;
    } else {
      res.status = IpmStatus::Unbounded;
      res.u = -c;
      res.cert_residual = 0.0;
    }
    return res;
  }
  MatrixXd A = MatrixXd::Zero(Wk.p, Wk.nu);
  for (int i = 0; i < Wk.p; ++i)
    for (auto& [j, v] : P.eq_rows[i].coeffs) A(i, j) += v;
  VectorXd b = Eigen::Map<const VectorXd>(P.eq_rhs.data(), Wk.p);
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(A);
  VectorXd u0 = cod.solve(b);
  if ((A * u0 - b).norm() > opt.tol * (1 + b.norm())) {
    res.status = IpmStatus::Infeasible;
    return res;
  }
  // Objective is unbounded iff c has a component in the null space of A.
  VectorXd yls = cod.transpose().solve(c);
  VectorXd proj = c - A.transpose() * yls;
  if (proj.norm() > opt.tol * (1 + c.norm())) {
    res.status = IpmStatus::Unbounded;
    res.u = -proj;
    return res;
  }
  res.status = IpmStatus::Optimal;
  res.u = u0;
  res.eq_dual = -yls;
  res.objective = c.dot(u0);
  return res;
}

}  // namespace

namespace {
IpmResult ipm_solve_inner(const StdForm& P, const IpmOptions& opt) {
  Workspace Wk(P);
  IpmResult res;
  if (Wk.mc == 0) return solve_no_cones(P, Wk, opt);

  const int nu = Wk.nu, p = Wk.p, mc = Wk.mc;
  VectorXd c = Eigen::Map<const VectorXd>(P.cost.data(), nu);
  VectorXd b = (p > 0) ? VectorXd(Eigen::Map<const VectorXd>(P.eq_rhs.data(), p))
                       : VectorXd::Zero(0).eval();
  VectorXd h = Wk.cone_h();
  const double order = Wk.P.cone_order();

  // Initialization at the identity scaling (cvxopt-style primal/dual starts).
  Scaling sc0;
  {
    VectorXd ones = VectorXd::Ones(mc), e = Wk.cone_identity();
    VectorXd se = e, ze = e;
    if (!compute_scaling(Wk, se, ze, sc0)) {
      res.message = "initial scaling failed";
      return res;
    }
  }
  KktFactor F0;
  if (!assemble_and_factor(Wk, sc0, F0)) {
    res.message = "initial KKT factorization failed";
    return res;
  }
  VectorXd x, y, z, s;
  {
    VectorXd x0, y0, z0;
    kkt_solve(Wk, sc0, F0, VectorXd::Zero(nu), b, h, x0, y0, z0);
    x = x0;
    y = VectorXd::Zero(p);
    s = -z0;
    double m = Wk.min_eig(s);
    if (m <= 0) s += (1.0 - m) * Wk.cone_identity();
    VectorXd x1, y1, z1;
    kkt_solve(Wk, sc0, F0, -c, VectorXd::Zero(p), VectorXd::Zero(mc), x1, y1, z1);
    y = y1;
    z = z1;
    m = Wk.min_eig(z);
    if (m <= 0) z += (1.0 - m) * Wk.cone_identity();
  }
  double tau = 1.0, kappa = 1.0;

  double best_metric = std::numeric_limits<double>::infinity();
  IpmResult best;
  double best_tau = 1.0, best_kappa = 1.0;
  int bad_streak = 0;

  auto dehomogenized = [&](IpmStatus st) {
    IpmResult r;
    r.status = st;
    r.u = x / tau;
    r.eq_dual = y / tau;
    r.cone_dual = z / tau;
    r.cone_slack = s / tau;
    r.objective = c.dot(r.u);
    VectorXd rp1 = Wk.apply_A(r.u) - b;
    VectorXd rp2 = Wk.apply_G(r.u) + r.cone_slack - h;
    VectorXd rd = Wk.apply_AT(r.eq_dual) + Wk.apply_GT(r.cone_dual) + c;
    r.primal_residual = std::max(p > 0 ? rp1.norm() / (1 + b.norm()) : 0.0,
                                 rp2.norm() / (1 + h.norm()));
    r.dual_residual = rd.norm() / (1 + c.norm());
    r.gap = r.cone_slack.dot(r.cone_dual);
    return r;
  };

  Scaling sc;
  KktFactor F;
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    VectorXd rd = Wk.apply_AT(y) + Wk.apply_GT(z) + c * tau;
    VectorXd rp1 = p > 0 ? VectorXd(Wk.apply_A(x) - b * tau) : VectorXd::Zero(0);
    VectorXd rp2 = Wk.apply_G(x) + s - h * tau;
    double rg = c.dot(x) + (p > 0 ? b.dot(y) : 0.0) + h.dot(z) + kappa;
    double gap = s.dot(z);
    double mu = (gap + tau * kappa) / (order + 1);

    // Convergence on the de-homogenized iterate.
    double pobj = c.dot(x) / tau;
    double dobj = -((p > 0 ? b.dot(y) : 0.0) + h.dot(z)) / tau;
    double pres = std::max(p > 0 ? rp1.norm() / tau / (1 + b.norm()) : 0.0,
                           rp2.norm() / tau / (1 + h.norm()));
    double dres = rd.norm() / tau / (1 + c.norm());
    double agap = gap / (tau * tau);
    double rel = agap / std::max({1.0, std::abs(pobj), std::abs(dobj)});
    double metric = std::max({pres, dres, std::min(agap, rel)});
    if (metric < best_metric) {
      best_metric = metric;
      best = dehomogenized(IpmStatus::Inaccurate);
      best.iterations = iter;
      best_tau = tau;
      best_kappa = kappa;
      bad_streak = 0;
    } else if (metric > 1e4 * best_metric && best_metric < 1e3 * opt.tol) {
      if (++bad_streak >= 3) {
        if (opt.verbose) std::fprintf(stderr, "    break: diverging\n");
        break;
      }
    }
    if (opt.verbose)
      std::fprintf(stderr, "it %2d pobj % .6e dobj % .6e pres %.2e dres %.2e gap %.2e tau %.2e kap %.2e\n",
                   iter, pobj, dobj, pres, dres, agap, tau, kappa);
    if (pres <= opt.tol && dres <= opt.tol && (agap <= opt.tol || rel <= opt.tol)) {
      res = dehomogenized(IpmStatus::Optimal);
      res.iterations = iter;
      return res;
    }

    // Infeasibility certificates.
    double by_hz = (p > 0 ? b.dot(y) : 0.0) + h.dot(z);
    if (by_hz < 0) {
      double cert = (Wk.apply_AT(y) + Wk.apply_GT(z)).norm() / (-by_hz);
      if (cert <= opt.tol * Wk.data_norm) {
        res.status = IpmStatus::Infeasible;
        res.eq_dual = y / (-by_hz);
        res.cone_dual = z / (-by_hz);
        res.cert_residual = cert;
        res.iterations = iter;
        return res;
      }
    }
    double cx = c.dot(x);
    if (cx < 0) {
      double cert = std::max(p > 0 ? Wk.apply_A(x).norm() : 0.0,
                             (Wk.apply_G(x) + s).norm()) / (-cx);
      if (cert <= opt.tol * Wk.data_norm) {
        res.status = IpmStatus::Unbounded;
        res.u = x / (-cx);
        res.cert_residual = cert;
        res.iterations = iter;
        return res;
      }
    }
    if (!std::isfinite(mu) || mu <= 0) {
      if (opt.verbose) std::fprintf(stderr, "    break: bad mu\n");
      break;
    }

    if (!compute_scaling(Wk, s, z, sc)) {
      if (opt.verbose) std::fprintf(stderr, "    break: scaling failed\n");
      break;
    }
    if (!assemble_and_factor(Wk, sc, F)) {
      if (opt.verbose) std::fprintf(stderr, "    break: factorization failed\n");
      break;
    }
    VectorXd lam = lambda_vec(Wk, sc);
    VectorXd lamlam = jordan_product(Wk, lam, lam);
    VectorXd e = Wk.cone_identity();

    VectorXd dx1, dy1, dz1;
    kkt_solve(Wk, sc, F, -c, b, h, dx1, dy1, dz1);
    double denom = c.dot(dx1) + (p > 0 ? b.dot(dy1) : 0.0) + h.dot(dz1) - kappa / tau;
    if (std::abs(denom) < 1e-300) {
      if (opt.verbose) std::fprintf(stderr, "    break: zero denom\n");
      break;
    }

    // Newton solve against explicit residual targets:
    //   A'dy + G'dz + c dtau = t1,   A dx - b dtau = t2,
    //   G dx + ds - h dtau = t3,     lambda o (W^-T ds + W dz) = tc,
    //   c'dx + b'dy + h'dz + dkappa = tg,   tau dkappa + kappa dtau = tk.
    auto newton_step = [&](const VectorXd& t1, const VectorXd& t2, const VectorXd& t3,
                           const VectorXd& tc, double tg, double tk, VectorXd& dx, VectorXd& dy,
                           VectorXd& dz, VectorXd& ds, double& dtau, double& dkappa) {
      VectorXd wlds = apply_scaling(Wk, sc, ScaleOp::Wprime, lambda_solve(Wk, sc, tc));
      VectorXd d3 = t3 - wlds;
      VectorXd dx2, dy2, dz2;
      kkt_solve(Wk, sc, F, t1, t2, d3, dx2, dy2, dz2);
      double num = tg - c.dot(dx2) - (p > 0 ? b.dot(dy2) : 0.0) - h.dot(dz2) - tk / tau;
      dtau = num / denom;
      dx = dx2 + dtau * dx1;
      dy = dy2 + dtau * dy1;
      dz = dz2 + dtau * dz1;
      ds = wlds - apply_scaling(Wk, sc, ScaleOp::WprimeW, dz);
      dkappa = (tk - kappa * dtau) / tau;
    };

    // Same solve followed by one refinement pass on the full Newton system;
    // the ds back-substitution cancels catastrophically when mu is tiny, and
    // re-solving against the measured residuals restores the lost digits.
    auto take_step = [&](double sigma, const VectorXd& ds_target, double dkap_target,
                         VectorXd& dx, VectorXd& dy, VectorXd& dz, VectorXd& ds, double& dtau,
                         double& dkappa) {
      VectorXd t1 = -(1 - sigma) * rd;
      VectorXd t2 = p > 0 ? VectorXd(-(1 - sigma) * rp1) : VectorXd::Zero(0).eval();
      VectorXd t3 = -(1 - sigma) * rp2;
      double tg = -(1 - sigma) * rg;
      newton_step(t1, t2, t3, ds_target, tg, dkap_target, dx, dy, dz, ds, dtau, dkappa);
      auto residuals = [&](const VectorXd& ax, const VectorXd& ay, const VectorXd& az,
                           const VectorXd& as, double at, double ak, VectorXd& o1, VectorXd& o2,
                           VectorXd& o3, VectorXd& oc, double& og, double& ok2) {
        o1 = t1 - (Wk.apply_AT(ay) + Wk.apply_GT(az) + c * at);
        o2 = p > 0 ? VectorXd(t2 - (Wk.apply_A(ax) - b * at)) : VectorXd::Zero(0).eval();
        o3 = t3 - (Wk.apply_G(ax) + as - h * at);
        oc = ds_target - jordan_product(Wk, lam,
                                        apply_scaling(Wk, sc, ScaleOp::WT_inv, as) +
                                            apply_scaling(Wk, sc, ScaleOp::W, az));
        og = tg - (c.dot(ax) + (p > 0 ? b.dot(ay) : 0.0) + h.dot(az) + ak);
        ok2 = dkap_target - (tau * ak + kappa * at);
      };
      VectorXd r1, r2, r3, rc;
      double rgres, rkres;
      residuals(dx, dy, dz, ds, dtau, dkappa, r1, r2, r3, rc, rgres, rkres);
      double pre = std::max({r1.norm(), r2.norm(), r3.norm(), std::abs(rgres)});
      VectorXd ex, ey, ez, es;
      double etau, ekappa;
      newton_step(r1, r2, r3, rc, rgres, rkres, ex, ey, ez, es, etau, ekappa);
      VectorXd cx = dx + ex, cy = dy + ey, cz = dz + ez, cs = ds + es;
      double ctau = dtau + etau, ckappa = dkappa + ekappa;
      VectorXd q1, q2, q3, qc;
      double qg, qk;
      residuals(cx, cy, cz, cs, ctau, ckappa, q1, q2, q3, qc, qg, qk);
      double post = std::max({q1.norm(), q2.norm(), q3.norm(), std::abs(qg)});
      if (post < pre) {  // keep the refinement only if it helped
        dx = cx; dy = cy; dz = cz; ds = cs; dtau = ctau; dkappa = ckappa;
      } else {
        post = pre;
      }
      if (opt.verbose)
        std::fprintf(stderr, "    step residual %.2e -> %.2e |dx|=%.2e dtau=%.2e\n", pre, post,
                     dx.norm(), dtau);
      return post;
    };

    // Predictor.
    VectorXd dxa, dya, dza, dsa;
    double dtaua, dkappaa;
    take_step(0.0, -lamlam, -tau * kappa, dxa, dya, dza, dsa, dtaua, dkappaa);
    VectorXd ds_sc = apply_scaling(Wk, sc, ScaleOp::WT_inv, dsa);
    VectorXd dz_sc = apply_scaling(Wk, sc, ScaleOp::W, dza);
    double alpha = std::min(max_step(Wk, sc, ds_sc), max_step(Wk, sc, dz_sc));
    if (dtaua < 0) alpha = std::min(alpha, -tau / dtaua);
    if (dkappaa < 0) alpha = std::min(alpha, -kappa / dkappaa);
    alpha = std::min(1.0, alpha);
    double mu_aff = ((s + alpha * dsa).dot(z + alpha * dza) +
                     (tau + alpha * dtaua) * (kappa + alpha * dkappaa)) / (order + 1);
    double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3.0);

    // Corrector.
    VectorXd cross = jordan_product(Wk, ds_sc, dz_sc);
    VectorXd ds_target = sigma * mu * e - lamlam - cross;
    double dkap_target = sigma * mu - tau * kappa - dtaua * dkappaa;
    VectorXd dx, dyv, dz2, ds2;
    double dtau, dkappa;
    double step_res = take_step(sigma, ds_target, dkap_target, dx, dyv, dz2, ds2, dtau, dkappa);
    double target_scale = std::max(
        mu, (1.0 - sigma) * std::sqrt(rd.squaredNorm() + rp1.squaredNorm() +
                                      rp2.squaredNorm() + rg * rg));
    if (step_res > target_scale) {
      if (opt.verbose) std::fprintf(stderr, "    break: step residual %.2e vs %.2e\n", step_res, target_scale);
      break;
    }
    ds_sc = apply_scaling(Wk, sc, ScaleOp::WT_inv, ds2);
    dz_sc = apply_scaling(Wk, sc, ScaleOp::W, dz2);
    alpha = std::min(max_step(Wk, sc, ds_sc), max_step(Wk, sc, dz_sc));
    if (dtau < 0) alpha = std::min(alpha, -tau / dtau);
    if (dkappa < 0) alpha = std::min(alpha, -kappa / dkappa);
    alpha = std::min(1.0, 0.99 * alpha);
    if (!std::isfinite(alpha) || alpha <= 1e-14) {
      if (opt.verbose) std::fprintf(stderr, "    break: alpha %.2e\n", alpha);
      break;
    }

    x += alpha * dx;
    y += alpha * dyv;
    z += alpha * dz2;
    s += alpha * ds2;
    tau += alpha * dtau;
    kappa += alpha * dkappa;
    if (tau <= 0 || kappa < 0 || !x.allFinite()) {
      if (opt.verbose) std::fprintf(stderr, "    break: invalid iterate\n");
      break;
    }
  }

  // The loop stalled. Re-examine the final iterate for certificates at a
  // reduced threshold before considering a reduced-accuracy optimum; a stall
  // with tau collapsing against kappa signals in/unboundedness, not optimality.
  {
    const double cert_tol = 1e-6 * Wk.data_norm;
    double by_hz = (p > 0 ? b.dot(y) : 0.0) + h.dot(z);
    if (by_hz < 0) {
      double cert = (Wk.apply_AT(y) + Wk.apply_GT(z)).norm() / (-by_hz);
      if (cert <= cert_tol) {
        res.status = IpmStatus::Infeasible;
        res.eq_dual = y / (-by_hz);
        res.cone_dual = z / (-by_hz);
        res.cert_residual = cert;
        res.message = "infeasibility certificate at reduced accuracy";
        return res;
      }
    }
    double cx = c.dot(x);
    if (cx < 0) {
      double cert = std::max(p > 0 ? Wk.apply_A(x).norm() : 0.0,
                             (Wk.apply_G(x) + s).norm()) / (-cx);
      if (cert <= cert_tol) {
        res.status = IpmStatus::Unbounded;
        res.u = x / (-cx);
        res.cert_residual = cert;
        res.message = "unboundedness certificate at reduced accuracy";
        return res;
      }
    }
  }
  if (best_tau > 10.0 * best_kappa && best.primal_residual <= opt.feas_tol_reduced &&
      best.dual_residual <= opt.feas_tol_reduced) {
    double rel = best.gap / std::max(1.0, std::abs(best.objective));
    if (std::min(best.gap, rel) <= opt.gap_tol_reduced) {
      best.status = IpmStatus::Optimal;
      best.message = "optimal at reduced accuracy";
      return best;
    }
  }
  best.message = "did not converge to tolerance";
  best.status = IpmStatus::Inaccurate;
  return best;
}
}  // namespace

IpmResult ipm_solve(const StdForm& P_in, const IpmOptions& opt_in) {
  IpmOptions opt = opt_in;
  if (const char* v = std::getenv("POLYCERT_IPM_VERBOSE"); v && *v == '1') opt.verbose = true;

  // Drop identically-zero equality rows; an inconsistent one is a trivial
  // infeasibility certificate (and would make the Schur complement singular).
  StdForm P = P_in;
  std::vector<int> kept;
  {
    size_t keep = 0;
    for (size_t i = 0; i < P.eq_rows.size(); ++i) {
      bool zero = true;
      for (auto& [j, v] : P.eq_rows[i].coeffs)
        if (v != 0.0) zero = false;
      if (zero) {
        if (std::abs(P.eq_rhs[i]) > 0) {
          IpmResult r;
          r.status = IpmStatus::Infeasible;
          r.cert_residual = 0.0;
          r.message = "inconsistent zero row";
          r.eq_dual = Eigen::VectorXd::Zero(P_in.eq_rows.size());
          r.eq_dual[i] = P.eq_rhs[i] > 0 ? -1.0 : 1.0;  // b'y < 0 with A'y = 0
          return r;
        }
        continue;
      }
      if (keep != i) {
        P.eq_rows[keep] = std::move(P.eq_rows[i]);
        P.eq_rhs[keep] = P.eq_rhs[i];
      }
      kept.push_back(static_cast<int>(i));
      ++keep;
    }
    P.eq_rows.resize(keep);
    P.eq_rhs.resize(keep);
  }

  IpmResult r = ipm_solve_inner(P, opt);
  if (kept.size() != P_in.eq_rows.size() && r.eq_dual.size() == static_cast<int>(kept.size())) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(P_in.eq_rows.size());
    for (size_t i = 0; i < kept.size(); ++i) full[kept[i]] = r.eq_dual[i];
    r.eq_dual = std::move(full);
  }
  return r;
}

}  // namespace polycert::conic
