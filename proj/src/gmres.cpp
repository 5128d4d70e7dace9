#include "paradiag/gmres.hpp"

#include <cmath>
#include <stdexcept>

#include "paradiag/solver.hpp"

namespace paradiag {

using cd = std::complex<double>;

Eigen::MatrixXd allatonce_apply(const SpatialProblem& p, const BdfScheme& scheme,
                                double tau, const Eigen::MatrixXd& X) {
  const double tb = tau * scheme.beta_value();
  Eigen::MatrixXd Y = X + tb * (p.K * X);
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    for (Eigen::Index d = 1; d <= scheme.s && d <= j; ++d)
      Y.col(j) -= scheme.alpha_value(static_cast<int>(d)) * X.col(j - d);
  return Y;
}

Eigen::MatrixXd circulant_precond_apply(const ShiftBank& bank, const TimeSpectrum& sp,
                                        const Eigen::MatrixXd& X, PinTLedger& ledger) {
  Eigen::MatrixXcd Z = X.cast<cd>();
  time_transform(Z, sp, TransformDirection::Forward);
  Z = bank.sweep(Z, ledger);
  time_transform(Z, sp, TransformDirection::Inverse);
  return Z.real();
}

GmresReport gmres_allatonce(const SpatialProblem& p, const BdfScheme& scheme, int ell,
                            double tau, const GmresOptions& opt,
                            const std::vector<Eigen::VectorXd>* history) {
  if (!(opt.eps > 0.0)) throw std::invalid_argument("gmres: eps must be > 0");
  if (opt.maxit < 1) throw std::invalid_argument("gmres: maxit must be >= 1");

  const TimeSpectrum sp = spectrum(scheme, ell, 1.0);
  const std::vector<Eigen::VectorXd> hist =
      history ? *history : default_history(p, scheme, tau);
  const Eigen::MatrixXd G = bdf_rhs(p, scheme, tau, ell, hist);
  const double gnorm = G.norm();

  PinTLedger ledger;
  ShiftBank bank(p.K, sp, tau * scheme.beta_value());

  GmresReport rep;
  if (gnorm == 0.0) {
    rep.U = Eigen::MatrixXd::Zero(G.rows(), G.cols());
    rep.converged = true;
    return rep;
  }
  if (opt.eps >= 1.0) {
    // trivial tolerance: zero-dimensional Krylov space; return the
    // preconditioned right-hand side as the zeroth iterate
    rep.U = circulant_precond_apply(bank, sp, G, ledger);
    rep.converged = true;
    rep.rel_residual = allatonce_residual(p, scheme, tau, rep.U, G);
    rep.pint_loops = ledger.loops();
    return rep;
  }

  const int maxit = opt.maxit;
  std::vector<Eigen::MatrixXd> V;
  V.reserve(static_cast<size_t>(maxit) + 1);
  V.push_back(G / gnorm);

  Eigen::MatrixXd Hs = Eigen::MatrixXd::Zero(maxit + 1, maxit);
  Eigen::VectorXd cs(maxit), sn(maxit);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(maxit + 1);
  g(0) = gnorm;

  int p_its = 0;
  bool converged = false;
  for (int j = 0; j < maxit && !converged; ++j) {
    Eigen::MatrixXd Z = circulant_precond_apply(bank, sp, V[static_cast<size_t>(j)], ledger);
    Eigen::MatrixXd W = allatonce_apply(p, scheme, tau, Z);
    for (int k = 0; k <= j; ++k) {  // MGS in the Frobenius inner product
      const double hkj = (V[static_cast<size_t>(k)].array() * W.array()).sum();
      Hs(k, j) = hkj;
      W -= hkj * V[static_cast<size_t>(k)];
    }
    const double hn = W.norm();
    Hs(j + 1, j) = hn;
    if (hn > 0.0) V.push_back(W / hn);

    // apply stored rotations, then the new one
    for (int k = 0; k < j; ++k) {
      const double t = cs(k) * Hs(k, j) + sn(k) * Hs(k + 1, j);
      Hs(k + 1, j) = -sn(k) * Hs(k, j) + cs(k) * Hs(k + 1, j);
      Hs(k, j) = t;
    }
    const double denom = std::hypot(Hs(j, j), Hs(j + 1, j));
    cs(j) = Hs(j, j) / denom;
    sn(j) = Hs(j + 1, j) / denom;
    Hs(j, j) = denom;
    Hs(j + 1, j) = 0.0;
    g(j + 1) = -sn(j) * g(j);
    g(j) = cs(j) * g(j);

    p_its = j + 1;
    const double relres = std::abs(g(j + 1)) / gnorm;
    rep.residual_history.push_back(relres);
    converged = relres <= opt.eps;
    if (hn == 0.0) converged = true;  // lucky breakdown: solution is exact
  }

  Eigen::VectorXd y = Hs.topLeftCorner(p_its, p_its)
                          .triangularView<Eigen::Upper>()
                          .solve(g.head(p_its));
  Eigen::MatrixXd Vy = Eigen::MatrixXd::Zero(G.rows(), G.cols());
  for (int k = 0; k < p_its; ++k) Vy += y(k) * V[static_cast<size_t>(k)];
  rep.U = circulant_precond_apply(bank, sp, Vy, ledger);

  rep.iterations = p_its;
  rep.converged = converged;
  rep.rel_residual = allatonce_residual(p, scheme, tau, rep.U, G);
  rep.pint_loops = ledger.loops();
  return rep;
}

}  // namespace paradiag
