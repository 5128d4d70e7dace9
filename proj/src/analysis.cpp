#include "paradiag/analysis.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <stdexcept>

namespace paradiag {

using cd = std::complex<double>;

double condition_bound(double tau, double lambda_min) {
  if (!(tau > 0.0) || !(lambda_min > 0.0))
    throw std::invalid_argument("condition_bound: tau and lambda_min must be > 0");
  return 1.0 + 1.0 / (tau * lambda_min);
}

static cd spectral_map(const TimeSpectrum& sp, double tau, double lambda) {
  cd sum = 0.0;
  for (int i = 0; i < sp.ell; ++i)
    sum += sp.gammas(i, 0) / (1.0 - sp.pis(i) + tau * lambda);
  return 1.0 + sp.accel_scale() * sum;
}

std::pair<double, double> jl_extremes(const TimeSpectrum& sp, double tau,
                                      double lambda_min, double lambda_max) {
  if (sp.s != 1) throw std::invalid_argument("jl_extremes: needs an s=1 spectrum");
  const cd lo = spectral_map(sp, tau, lambda_max);
  const cd hi = spectral_map(sp, tau, lambda_min);
  const double tol = 1e-12 * (1.0 + std::abs(hi));
  if (std::abs(lo.imag()) > tol || std::abs(hi.imag()) > tol)
    throw std::runtime_error("jl_extremes: spectral sums are not real");
  return {lo.real(), hi.real()};
}

static void check_oracle_size(Eigen::Index n) {
  if (n > 256)
    throw std::invalid_argument("dense correction oracle limited to n_bar <= 256");
}

Eigen::MatrixXcd dense_jl(const Eigen::MatrixXd& K, const TimeSpectrum& sp,
                          double taubeta) {
  if (sp.s != 1) throw std::invalid_argument("dense_jl: needs an s=1 spectrum");
  check_oracle_size(K.rows());
  const Eigen::Index n = K.rows();
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Identity(n, n);
  const double accel = sp.accel_scale();
  for (int i = 0; i < sp.ell; ++i) {
    Eigen::MatrixXcd A = (taubeta * K).cast<cd>();
    A.diagonal().array() += (1.0 - sp.pis(i));
    J += (accel * sp.gammas(i, 0)) *
         A.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
  }
  return J;
}

Eigen::MatrixXcd dense_jl_block(const Eigen::MatrixXd& K, const TimeSpectrum& sp,
                                double taubeta) {
  check_oracle_size(K.rows());
  const Eigen::Index n = K.rows();
  const int s = sp.s;
  const double accel = sp.accel_scale();
  Eigen::MatrixXcd J = Eigen::MatrixXcd::Identity(n * s, n * s);
  for (int i = 0; i < sp.ell; ++i) {
    Eigen::MatrixXcd A = (taubeta * K).cast<cd>();
    A.diagonal().array() += (1.0 - sp.pis(i));
    const Eigen::MatrixXcd Ri =
        A.partialPivLu().solve(Eigen::MatrixXcd::Identity(n, n));
    for (int k = 0; k < s; ++k)
      for (int h = 0; h < s; ++h)
        J.block(k * n, h * n, n, n) +=
            (accel * sp.gammas(i, k) * sp.thetas(i, h)) * Ri;
  }
  return J;
}

double lambda_min_spd(const Eigen::SparseMatrix<double>& K, double tol,
                      int max_sweeps) {
  if (K.rows() != K.cols() || K.rows() == 0)
    throw std::invalid_argument("lambda_min_spd: K must be square and nonempty");
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(K);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("lambda_min_spd: factorization failed (K not SPD?)");

  Eigen::VectorXd x = Eigen::VectorXd::Ones(K.rows());
  x.normalize();
  double rho_old = 0.0;
  for (int it = 0; it < max_sweeps; ++it) {
    // sparse solves must not alias their right-hand side
    const Eigen::VectorXd y = ldlt.solve(x);
    x = y;
    x.normalize();
    const double rho = x.dot(K * x);
    if (it > 0 && std::abs(rho - rho_old) <= tol * std::abs(rho)) return rho;
    rho_old = rho;
  }
  return rho_old;
}

double dft_scaling_condition(double alpha, int ell) {
  if (!(alpha > 0.0) || alpha > 1.0 || ell < 1)
    throw std::invalid_argument("dft_scaling_condition: needs 0 < alpha <= 1, ell >= 1");
  return std::pow(alpha, -static_cast<double>(ell - 1) / ell);
}

Eigen::MatrixXd sequential_oracle(const SpatialProblem& p, const BdfScheme& scheme,
                                  double tau, int ell,
                                  const std::vector<Eigen::VectorXd>& history) {
  const int s = scheme.s;
  if (static_cast<int>(history.size()) != s)
    throw std::invalid_argument("sequential_oracle: history must hold s states");
  const double tb = tau * scheme.beta_value();
  Eigen::SparseMatrix<double> A = tb * p.K;
  for (Eigen::Index i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += 1.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("sequential_oracle: time-step matrix is singular");

  Eigen::MatrixXd U(p.n_bar(), ell);
  auto state = [&](int idx) -> Eigen::VectorXd {
    // u_idx for idx <= 0 from history, otherwise from computed columns
    if (idx <= 0) return history[static_cast<size_t>(s - 1 + idx)];
    return U.col(idx - 1);
  };
  for (int j = 1; j <= ell; ++j) {
    Eigen::VectorXd rhs = tb * p.forcing(j, tau);
    for (int k = 1; k <= s; ++k) rhs += scheme.alpha_value(k) * state(j - k);
    U.col(j - 1) = lu.solve(rhs);
  }
  return U;
}

}  // namespace paradiag
