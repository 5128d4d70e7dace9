#include "paradiag/time_circulant.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "paradiag/dft.hpp"

namespace paradiag {

using cd = std::complex<double>;

static void check_alpha(const BdfScheme& scheme, double alpha_circ) {
  if (!(alpha_circ > 0.0) || alpha_circ > 1.0)
    throw std::invalid_argument("circulant weight must satisfy 0 < alpha <= 1, got " +
                                std::to_string(alpha_circ));
  if (scheme.s >= 2 && alpha_circ != 1.0)
    throw std::invalid_argument("alpha-weighted circulant is only defined for s=1");
}

LowRankTimeSplit split_time_operator(const BdfScheme& scheme, int ell,
                                     double alpha_circ) {
  check_alpha(scheme, alpha_circ);
  LowRankTimeSplit sp;
  sp.s = scheme.s;
  sp.ell = ell;
  sp.alpha_circ = alpha_circ;
  sp.circulant = build_circulant(scheme, ell, alpha_circ);  // checks ell >= s+1
  sp.core = alpha_circ * bdf_corner_block(scheme);
  return sp;
}

double TimeSpectrum::accel_scale() const {
  return std::pow(alpha_circ, 1.0 / static_cast<double>(ell));
}

#ifndef NDEBUG
// Convention self-check: F C F^{-1} must be diag(pis) under the pinned DFT.
static void debug_check_diagonalization(const BdfScheme& scheme,
                                        const TimeSpectrum& sp) {
  if (sp.ell > 64 || sp.ell < scheme.s + 1) return;
  const int ell = sp.ell;
  Eigen::MatrixXcd C = build_circulant(scheme, ell, sp.alpha_circ).toDense().cast<cd>();
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(ell, ell);
  const double root = std::pow(sp.alpha_circ, 1.0 / ell);
  for (int j = 0; j < ell; ++j) D(j, j) = std::pow(root, j);
  // columns of F: transform the identity
  Eigen::MatrixXcd F = Eigen::MatrixXcd::Identity(ell, ell);
  for (int k = 0; k < ell; ++k) {
    Eigen::VectorXcd col = F.col(k);
    dft_forward_inplace(col);
    F.col(k) = col;
  }
  Eigen::MatrixXcd lhs = F * D * C * D.inverse() * F.inverse();
  double off = (lhs - Eigen::MatrixXcd(sp.pis.asDiagonal())).norm();
  if (!(off <= 1e-8 * (1.0 + lhs.norm())))
    throw std::logic_error("circulant diagonalization self-check failed");
}
#endif

TimeSpectrum spectrum(const BdfScheme& scheme, int ell, double alpha_circ) {
  check_alpha(scheme, alpha_circ);
  const int s = scheme.s;
  if (ell < s + 1 && !(s == 1 && ell == 1))
    throw std::invalid_argument("spectrum needs ell >= s+1 (or ell=1 with s=1), got ell=" +
                                std::to_string(ell));

  TimeSpectrum sp;
  sp.s = s;
  sp.ell = ell;
  sp.alpha_circ = alpha_circ;
  sp.pis.resize(ell);
  sp.gammas.resize(ell, s);
  sp.thetas.resize(ell, s);
  sp.d_alpha.resize(ell);

  const double root = std::pow(alpha_circ, 1.0 / static_cast<double>(ell));
  for (int j = 0; j < ell; ++j) sp.d_alpha(j) = std::pow(root, j);

  if (s == 1) {
    // pi_i = alpha^{1/ell} w^{i-1}: scaled roots of unity, closed form
    for (int i = 0; i < ell; ++i) {
      const double phi = -2.0 * std::numbers::pi * i / ell;
      sp.pis(i) = root * cd(std::cos(phi), std::sin(phi));
    }
  } else {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(ell);
    for (int d = 1; d <= s; ++d) c(d) = scheme.alpha_value(d);
    dft_forward_inplace(c);
    sp.pis = c;
  }

  // gamma^{(k)} = F^{-T} E2 B^T e_k = F^{-1} w_k, with w_k carrying alpha_{s+k-h}
  // at position ell-s+h for h = k..s (B upper triangular).
  const Eigen::MatrixXd B = bdf_corner_block(scheme);
  for (int k = 1; k <= s; ++k) {
    Eigen::VectorXcd w = Eigen::VectorXcd::Zero(ell);
    for (int h = k; h <= s; ++h) w(ell - s + h - 1) = B(k - 1, h - 1);
    dft_inverse_inplace(w);
    sp.gammas.col(k - 1) = w;
  }

  // theta^{(k)} = F e_k: theta_i = w^{(i-1)(k-1)}
  for (int k = 0; k < s; ++k)
    for (int i = 0; i < ell; ++i) {
      const double phi = -2.0 * std::numbers::pi * (static_cast<double>(i) * k) / ell;
      sp.thetas(i, k) = cd(std::cos(phi), std::sin(phi));
    }

#ifndef NDEBUG
  debug_check_diagonalization(scheme, sp);
#endif
  return sp;
}

void time_transform(Eigen::MatrixXcd& U, const TimeSpectrum& sp,
                    TransformDirection dir) {
  if (U.cols() != sp.ell)
    throw std::invalid_argument("time_transform: matrix has " +
                                std::to_string(U.cols()) + " columns, spectrum ell=" +
                                std::to_string(sp.ell));
  if (dir == TransformDirection::Forward) {
    if (sp.alpha_circ != 1.0)
      for (int j = 0; j < sp.ell; ++j) U.col(j) *= sp.d_alpha(j);
    dft_rows_forward_inplace(U);
  } else {
    dft_rows_inverse_inplace(U);
    if (sp.alpha_circ != 1.0)
      for (int j = 0; j < sp.ell; ++j) U.col(j) /= sp.d_alpha(j);
  }
}

}  // namespace paradiag
