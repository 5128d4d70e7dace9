#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <utility>
#include <vector>

#include "paradiag/problems.hpp"
#include "paradiag/time_circulant.hpp"

namespace paradiag {

// Spectral condition bound for the order-1 correction matrix with symmetric
// positive definite K: kappa <= 1 + 1/(tau * lambda_min).
double condition_bound(double tau, double lambda_min);

// Extreme eigenvalues of the order-1 correction matrix from the scalar
// spectral map lambda -> 1 + sum_i gamma_i / (1 - pi_i + tau*lambda):
// the map is decreasing on [lambda_min, lambda_max] for SPD K.
// Returns (min, max); imaginary parts of the sums must vanish.
std::pair<double, double> jl_extremes(const TimeSpectrum& sp, double tau,
                                      double lambda_min, double lambda_max);

// Dense assembly of the correction matrix (oracle, n_bar <= 256):
//   J = I + accel * sum_i gamma_i (sigma_i I + taubeta K)^{-1}   (s = 1)
Eigen::MatrixXcd dense_jl(const Eigen::MatrixXd& K, const TimeSpectrum& sp,
                          double taubeta);

// Dense block oracle for order s: s x s grid of n_bar x n_bar blocks
//   J_{k,h} = delta_{kh} I + accel * sum_i gamma_i^{(k)} theta_i^{(h)} R_i.
Eigen::MatrixXcd dense_jl_block(const Eigen::MatrixXd& K, const TimeSpectrum& sp,
                                double taubeta);

// Smallest eigenvalue of a sparse SPD matrix by inverse power iteration with
// Rayleigh-quotient stopping (default: relative change <= 1e-12, <= 500 steps).
double lambda_min_spd(const Eigen::SparseMatrix<double>& K, double tol = 1e-12,
                      int max_sweeps = 500);

// Condition number of the alpha-weighted transform F D_alpha: alpha^{-(ell-1)/ell}.
double dft_scaling_condition(double alpha, int ell);

// Sequential time stepping (the exact solution of the all-at-once system):
// u_j = (I + taubeta K)^{-1} (sum_k alpha_k u_{j-k} + taubeta f_j).
// history as in bdf_rhs. Returns the n_bar x ell trajectory.
Eigen::MatrixXd sequential_oracle(const SpatialProblem& p, const BdfScheme& scheme,
                                  double tau, int ell,
                                  const std::vector<Eigen::VectorXd>& history);

}  // namespace paradiag
