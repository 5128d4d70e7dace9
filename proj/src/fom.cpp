#include "paradiag/fom.hpp"

#include <cmath>
#include <stdexcept>

namespace paradiag {

using cd = std::complex<double>;

static void check_inner_options(const InnerOptions& opt) {
  if (opt.q < 1) throw std::invalid_argument("inner solve: q must be >= 1");
  if (opt.maxit < 1) throw std::invalid_argument("inner solve: maxit must be >= 1");
  if (!(opt.eps > 0.0)) throw std::invalid_argument("inner solve: eps must be > 0");
}

InnerSolveResult fom_solve(const Eigen::SparseMatrix<double>& K, const TimeSpectrum& sp,
                           double taubeta, const Eigen::VectorXd& b,
                           const InnerOptions& opt, const ShiftBank& bank,
                           PinTLedger& ledger) {
  check_inner_options(opt);
  if (sp.s != 1) throw std::invalid_argument("fom_solve: spectrum must have s=1");
  if (b.size() != K.rows()) throw std::invalid_argument("fom_solve: size mismatch");

  const Eigen::Index n = b.size();
  const int ell = sp.ell;
  const double accel = sp.accel_scale();
  const double beta = b.norm();

  InnerSolveResult res;
  res.rhs_norm = beta;
  if (beta == 0.0) {
    res.x = Eigen::MatrixXcd::Zero(n, 1);
    res.converged = true;
    return res;
  }

  const int maxit = static_cast<int>(std::min<Eigen::Index>(opt.maxit, n));
  Eigen::MatrixXd V(n, maxit + 1);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(maxit + 1, maxit);
  V.col(0) = b / beta;

  Eigen::VectorXcd y;
  int m = 0;
  bool converged = false, breakdown = false;

  while (m < maxit && !converged && !breakdown) {
    // Arnoldi step: modified Gram-Schmidt with one reorthogonalization pass
    Eigen::VectorXd w = K * V.col(m);
    const double wnorm0 = w.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k <= m; ++k) {
        const double t = V.col(k).dot(w);
        T(k, m) += t;
        w -= t * V.col(k);
      }
    const double tnext = w.norm();
    T(m + 1, m) = tnext;
    if (tnext <= 1e-13 * std::max(wnorm0, 1e-300)) {
      breakdown = true;
      T(m + 1, m) = 0.0;
    } else {
      V.col(m + 1) = w / tnext;
    }
    ++m;

    const bool must_check = breakdown || (m % opt.q == 0) || m == maxit;
    if (!must_check) continue;

    /* Projected solve at dimension m:
     *   (I_m + accel * sum_i gamma_i (I_m - taubeta t Vᵀh_i e_mᵀ) S_i) y = beta e_1,
     * residual ||r|| = accel * taubeta * t * ||(I - VVᵀ) sum_i gamma_i (S_i y)_m h_i||
     * (the taubeta factor comes from the resolvent identity
     *  (sigma I + taubeta K) V_m = V_m (sigma I + taubeta T_m) + taubeta t v_{m+1} e_mᵀ).
     * Breakdown means t = 0: no h_i terms, projected residual exact zero.
     */
    const auto Vm = V.leftCols(m);
    const Eigen::MatrixXcd Tm = T.topLeftCorner(m, m).cast<cd>();
    const double t = T(m, m - 1);  // t_{m+1,m} (zero on breakdown)

    Eigen::MatrixXcd H;  // columns h_i = R_i v_{m+1}
    Eigen::MatrixXcd VtH;
    if (!breakdown) {
      H = bank.sweep_single(V.col(m).cast<cd>(), ledger);
      VtH = Vm.transpose().cast<cd>() * H;
    }

    std::vector<Eigen::MatrixXcd> S(static_cast<size_t>(ell));
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(m, m);
    const Eigen::MatrixXcd Im = Eigen::MatrixXcd::Identity(m, m);
    for (int i = 0; i < ell; ++i) {
      Eigen::MatrixXcd Mi = Tm * taubeta;
      Mi.diagonal().array() += (1.0 - sp.pis(i));
      S[static_cast<size_t>(i)] = Mi.partialPivLu().solve(Im);
      const auto& Si = S[static_cast<size_t>(i)];
      const cd g = accel * sp.gammas(i, 0);
      A += g * Si;
      if (!breakdown) A -= (g * taubeta * t) * (VtH.col(i) * Si.row(m - 1));
    }

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
    rhs(0) = beta;
    y = A.partialPivLu().solve(rhs);

    double rnorm = 0.0;
    if (!breakdown) {
      Eigen::VectorXcd c(ell);
      for (int i = 0; i < ell; ++i)
        c(i) = sp.gammas(i, 0) * (S[static_cast<size_t>(i)].row(m - 1) * y).value();
      Eigen::VectorXcd z = H * c;
      z -= Vm.cast<cd>() * (Vm.transpose().cast<cd>() * z).eval();
      rnorm = accel * taubeta * t * z.norm();
    }
    res.residual_history.emplace_back(m, rnorm / beta);
    if (opt.trace) opt.trace->push_back(Vm.cast<cd>() * y);
    converged = rnorm <= opt.eps * beta;
  }

  res.x = V.leftCols(m).cast<cd>() * y;
  res.iterations = m;
  res.converged = converged || breakdown;
  res.breakdown = breakdown;
  res.final_residual = res.residual_history.empty() ? 0.0
                                                    : res.residual_history.back().second;
  return res;
}

InnerSolveResult block_fom_solve(const Eigen::SparseMatrix<double>& K,
                                 const TimeSpectrum& sp, double taubeta,
                                 const Eigen::MatrixXd& B, const InnerOptions& opt,
                                 const ShiftBank& bank, PinTLedger& ledger) {
  check_inner_options(opt);
  const int s = sp.s;
  if (B.cols() != s) throw std::invalid_argument("block_fom_solve: B must have s columns");
  if (B.rows() != K.rows()) throw std::invalid_argument("block_fom_solve: size mismatch");

  const Eigen::Index n = B.rows();
  const int ell = sp.ell;
  const double accel = sp.accel_scale();
  const double bnorm = B.norm();

  InnerSolveResult res;
  res.rhs_norm = bnorm;
  if (bnorm == 0.0) {
    res.x = Eigen::MatrixXcd::Zero(n, s);
    res.converged = true;
    return res;
  }

  // Deflating start block: B = V_1 * beta0 with V_1 of full column rank.
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(B);
  qr.setThreshold(1e-12);
  const int r = static_cast<int>(qr.rank());
  Eigen::MatrixXd beta0 =
      Eigen::MatrixXd(qr.matrixR().topRows(r).triangularView<Eigen::Upper>()) *
      qr.colsPermutation().transpose();
  Eigen::MatrixXd Q1 = qr.householderQ() * Eigen::MatrixXd::Identity(n, r);

  const int maxit = std::max(1, std::min<int>(opt.maxit, static_cast<int>(n) / r));
  Eigen::MatrixXd V(n, static_cast<Eigen::Index>(r) * (maxit + 1));
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(r) * (maxit + 1),
                                            static_cast<Eigen::Index>(r) * maxit);
  V.leftCols(r) = Q1;

  Eigen::MatrixXcd Y;  // rm x s
  int m = 0;
  bool converged = false, breakdown = false;

  while (m < maxit && !converged && !breakdown) {
    Eigen::MatrixXd W = K * V.middleCols(static_cast<Eigen::Index>(m) * r, r);
    const double wnorm0 = W.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (int k = 0; k <= m; ++k) {
        const auto Vk = V.middleCols(static_cast<Eigen::Index>(k) * r, r);
        Eigen::MatrixXd C = Vk.transpose() * W;
        T.block(static_cast<Eigen::Index>(k) * r, static_cast<Eigen::Index>(m) * r, r, r) += C;
        W -= Vk * C;
      }
    Eigen::HouseholderQR<Eigen::MatrixXd> wqr(W);
    Eigen::MatrixXd tnext =
        Eigen::MatrixXd(wqr.matrixQR().topRows(r).triangularView<Eigen::Upper>());
    if (W.norm() <= 1e-13 * std::max(wnorm0, 1e-300)) {
      breakdown = true;
    } else {
      T.block(static_cast<Eigen::Index>(m + 1) * r, static_cast<Eigen::Index>(m) * r, r, r) =
          tnext;
      V.middleCols(static_cast<Eigen::Index>(m + 1) * r, r) =
          wqr.householderQ() * Eigen::MatrixXd::Identity(n, r);
    }
    ++m;

    const bool must_check = breakdown || (m % opt.q == 0) || m == maxit;
    if (!must_check) continue;

    const Eigen::Index rm = static_cast<Eigen::Index>(r) * m;
    const auto Vm = V.leftCols(rm);
    const Eigen::MatrixXcd Tm = T.topLeftCorner(rm, rm).cast<cd>();
    const Eigen::MatrixXd tn =
        breakdown ? Eigen::MatrixXd::Zero(r, r).eval()
                  : T.block(rm, rm - r, r, r).eval();

    std::vector<Eigen::MatrixXcd> H;  // H_i = R_i V_{m+1}
    std::vector<Eigen::MatrixXcd> VtH(static_cast<size_t>(ell));
    if (!breakdown) {
      H = bank.sweep_block(V.middleCols(rm, r).cast<cd>(), ledger);
      for (int i = 0; i < ell; ++i)
        VtH[static_cast<size_t>(i)] =
            Vm.transpose().cast<cd>() * H[static_cast<size_t>(i)];
    }

    /* System over Y = [y^{(1)} .. y^{(s)}]: for each component k,
     *   y^{(k)} + accel * sum_h sum_i gamma_i^{(k)} theta_i^{(h)} P_i y^{(h)}
     *     = (e_1 kron I_r) beta0 e_k,
     *   P_i = S_i - taubeta (VᵀH_i) t_{m+1,m} (bottom r rows of S_i).
     */
    std::vector<Eigen::MatrixXcd> S(static_cast<size_t>(ell));
    Eigen::MatrixXcd A =
        Eigen::MatrixXcd::Identity(static_cast<Eigen::Index>(s) * rm,
                                   static_cast<Eigen::Index>(s) * rm);
    const Eigen::MatrixXcd Irm = Eigen::MatrixXcd::Identity(rm, rm);
    for (int i = 0; i < ell; ++i) {
      Eigen::MatrixXcd Mi = Tm * taubeta;
      Mi.diagonal().array() += (1.0 - sp.pis(i));
      S[static_cast<size_t>(i)] = Mi.partialPivLu().solve(Irm);
      Eigen::MatrixXcd Pi = S[static_cast<size_t>(i)];
      if (!breakdown)
        Pi -= taubeta * (VtH[static_cast<size_t>(i)] * tn.cast<cd>() * Pi.bottomRows(r));
      for (int k = 0; k < s; ++k)
        for (int h = 0; h < s; ++h)
          A.block(static_cast<Eigen::Index>(k) * rm, static_cast<Eigen::Index>(h) * rm, rm,
                  rm) += (accel * sp.gammas(i, k) * sp.thetas(i, h)) * Pi;
    }

    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s) * rm);
    for (int k = 0; k < s; ++k)
      rhs.segment(static_cast<Eigen::Index>(k) * rm, r) = beta0.col(k).cast<cd>();
    Eigen::VectorXcd y = A.partialPivLu().solve(rhs);
    Y.resize(rm, s);
    for (int k = 0; k < s; ++k) Y.col(k) = y.segment(static_cast<Eigen::Index>(k) * rm, rm);

    double rnorm = 0.0;
    if (!breakdown) {
      Eigen::MatrixXcd Z = Eigen::MatrixXcd::Zero(n, s);
      for (int i = 0; i < ell; ++i) {
        const Eigen::MatrixXcd SiY = S[static_cast<size_t>(i)] * Y;
        const Eigen::VectorXcd wi =
            SiY.bottomRows(r) * sp.thetas.row(i).transpose();
        Z += (H[static_cast<size_t>(i)] * (tn.cast<cd>() * wi)) * sp.gammas.row(i);
      }
      Z -= Vm.cast<cd>() * (Vm.transpose().cast<cd>() * Z).eval();
      rnorm = accel * taubeta * Z.norm();
    }
    res.residual_history.emplace_back(m, rnorm / bnorm);
    converged = rnorm <= opt.eps * bnorm;
  }

  res.x = V.leftCols(Y.rows()).cast<cd>() * Y;
  res.iterations = m;
  res.converged = converged || breakdown;
  res.breakdown = breakdown;
  res.final_residual = res.residual_history.empty() ? 0.0
                                                    : res.residual_history.back().second;
  return res;
}

double residual_certificate(const TimeSpectrum& sp, const ShiftBank& bank,
                            const Eigen::MatrixXcd& x, const Eigen::MatrixXcd& b) {
  if (x.cols() != sp.s || b.cols() != sp.s || x.rows() != b.rows())
    throw std::invalid_argument("residual_certificate: shape mismatch");
  const double accel = sp.accel_scale();
  Eigen::MatrixXcd Jx = x;
  for (int i = 0; i < sp.ell; ++i) {
    const Eigen::VectorXcd vi = x * sp.thetas.row(i).transpose();
    const Eigen::MatrixXcd ri = bank.solve_one(i, vi);
    Jx += accel * (ri * sp.gammas.row(i));
  }
  return (Jx - b).norm();
}

}  // namespace paradiag
