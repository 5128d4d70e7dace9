#include "paradiag/solver.hpp"

#include <cmath>
#include <stdexcept>

namespace paradiag {

using cd = std::complex<double>;

double allatonce_residual(const SpatialProblem& p, const BdfScheme& scheme, double tau,
                          const Eigen::MatrixXd& U, const Eigen::MatrixXd& G) {
  const double tb = tau * scheme.beta_value();
  Eigen::MatrixXd R = U + tb * (p.K * U) - G;
  // (U Sigma^T) col j = sum_d alpha_d U(:, j-d)
  for (Eigen::Index j = 0; j < U.cols(); ++j)
    for (Eigen::Index d = 1; d <= scheme.s && d <= j; ++d)
      R.col(j) -= scheme.alpha_value(static_cast<int>(d)) * U.col(j - d);
  const double gnorm = G.norm();
  return gnorm == 0.0 ? R.norm() : R.norm() / gnorm;
}

namespace {

struct AssembledU {
  Eigen::MatrixXd U;
  double imag_residue;
};

AssembledU realify(const Eigen::MatrixXcd& Uc) {
  return {Uc.real(), Uc.imag().cwiseAbs().maxCoeff()};
}

// Shared order-1 path: Algorithm with alpha-weighted circulant. solve_be is
// the alpha = 1, no-early-exit special case.
SolveReport run_order1(const SpatialProblem& p, int ell, double tau, double alpha,
                       const SolveOptions& opt) {
  if (ell < 1) throw std::invalid_argument("solver: ell must be >= 1");
  if (!(tau > 0.0)) throw std::invalid_argument("solver: tau must be > 0");

  const BdfScheme scheme = bdf_coefficients(1);
  const TimeSpectrum sp = spectrum(scheme, ell, alpha);
  const double accel = sp.accel_scale();
  const Eigen::MatrixXd G = bdf_rhs(p, scheme, tau, ell, {p.u0});

  PinTLedger ledger;
  ShiftBank bank(p.K, sp, tau * scheme.beta_value());

  // particular solution of the circulant part
  Eigen::MatrixXcd L = G.cast<cd>();
  time_transform(L, sp, TransformDirection::Forward);
  L = bank.sweep(L, ledger);

  SolveReport rep;
  {
    Eigen::MatrixXcd U1c = L;
    time_transform(U1c, sp, TransformDirection::Inverse);
    auto [U1, imag1] = realify(U1c);
    rep.u1_norm = U1.norm();
    rep.imag_residue = imag1;
    rep.U = std::move(U1);
  }
  rep.rel_residual = allatonce_residual(p, scheme, tau, rep.U, G);
  rep.u1_rel_residual = rep.rel_residual;
  if (opt.allow_early_exit &&
      rep.rel_residual * G.norm() <= opt.eps * rep.u1_norm) {
    rep.early_exit = true;
    rep.pint_loops = ledger.loops();
    return rep;
  }

  // correction system J x = b, b = L F^{-T} e_ell = L * gamma
  const Eigen::VectorXcd bc = L * sp.gammas.col(0);
  const Eigen::VectorXd b = bc.real();

  InnerSolveResult inner;
  Eigen::MatrixXcd X;
  if (opt.skip_correction) {
    X = b.cast<cd>();
    inner.converged = true;
  } else {
    InnerOptions io;
    io.eps = opt.eps;
    io.q = opt.q;
    io.maxit = opt.maxit;
    inner = fom_solve(p.K, sp, tau * scheme.beta_value(), b, io, bank, ledger);
    X = inner.x;
  }

  Eigen::MatrixXcd W = bank.sweep_single(X.col(0), ledger);
  Eigen::MatrixXcd Uc = L - accel * W;
  time_transform(Uc, sp, TransformDirection::Inverse);
  auto [U, imag] = realify(Uc);

  rep.U = std::move(U);
  rep.imag_residue = std::max(rep.imag_residue, imag);
  {
    Eigen::MatrixXcd U2c = -accel * W;
    time_transform(U2c, sp, TransformDirection::Inverse);
    rep.u2_norm = U2c.real().norm();
  }
  rep.inner_iterations = inner.iterations;
  rep.inner_converged = inner.converged;
  rep.inner_history = inner.residual_history;
  rep.rel_residual = allatonce_residual(p, scheme, tau, rep.U, G);
  rep.pint_loops = ledger.loops();
  return rep;
}

}  // namespace

SolveReport solve_be(const SpatialProblem& p, int ell, double tau,
                     const SolveOptions& opt) {
  SolveOptions o = opt;
  o.allow_early_exit = false;
  return run_order1(p, ell, tau, 1.0, o);
}

SolveReport solve_be_alpha(const SpatialProblem& p, int ell, double tau, double alpha,
                           const SolveOptions& opt) {
  return run_order1(p, ell, tau, alpha, opt);
}

SolveReport solve_bdf(const SpatialProblem& p, int s, int ell, double tau,
                      const SolveOptions& opt,
                      const std::vector<Eigen::VectorXd>* history) {
  if (!(tau > 0.0)) throw std::invalid_argument("solver: tau must be > 0");
  const BdfScheme scheme = bdf_coefficients(s);
  std::vector<Eigen::VectorXd> hist =
      history ? *history : default_history(p, scheme, tau);

  if (s == 1) {
    SpatialProblem q = p;
    q.u0 = hist.at(0);
    SolveOptions o = opt;
    o.allow_early_exit = false;
    return run_order1(q, ell, tau, 1.0, o);
  }
  if (ell < s + 1)
    throw std::invalid_argument("solve_bdf: needs ell >= s+1");

  const TimeSpectrum sp = spectrum(scheme, ell, 1.0);
  const double tb = tau * scheme.beta_value();
  const Eigen::MatrixXd G = bdf_rhs(p, scheme, tau, ell, hist);

  PinTLedger ledger;
  ShiftBank bank(p.K, sp, tb);

  Eigen::MatrixXcd L = G.cast<cd>();
  time_transform(L, sp, TransformDirection::Forward);
  L = bank.sweep(L, ledger);

  SolveReport rep;
  {
    Eigen::MatrixXcd U1c = L;
    time_transform(U1c, sp, TransformDirection::Inverse);
    const Eigen::MatrixXd U1 = U1c.real();
    rep.u1_norm = U1.norm();
    rep.u1_rel_residual = allatonce_residual(p, scheme, tau, U1, G);
  }

  // block correction rhs: B = L * [gamma^{(1)} .. gamma^{(s)}]
  const Eigen::MatrixXcd Bc = L * sp.gammas;
  const Eigen::MatrixXd B = Bc.real();

  InnerOptions io;
  io.eps = opt.eps;
  io.q = opt.q;
  io.maxit = opt.maxit;
  InnerSolveResult inner = block_fom_solve(p.K, sp, tb, B, io, bank, ledger);

  // W columns: R_i applied to sum_k theta_i^{(k)} x^{(k)} = (X Theta^T) col i
  Eigen::MatrixXcd W = bank.sweep(inner.x * sp.thetas.transpose(), ledger);
  Eigen::MatrixXcd Uc = L - W;
  time_transform(Uc, sp, TransformDirection::Inverse);
  auto [U, imag] = realify(Uc);

  rep.U = std::move(U);
  rep.imag_residue = imag;
  {
    Eigen::MatrixXcd U2c = -W;
    time_transform(U2c, sp, TransformDirection::Inverse);
    rep.u2_norm = U2c.real().norm();
  }
  rep.inner_iterations = inner.iterations;
  rep.inner_converged = inner.converged;
  rep.inner_history = inner.residual_history;
  rep.rel_residual = allatonce_residual(p, scheme, tau, rep.U, G);
  rep.pint_loops = ledger.loops();
  return rep;
}

}  // namespace paradiag
