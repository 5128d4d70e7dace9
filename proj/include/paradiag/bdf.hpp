#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <vector>

namespace paradiag {

// Exact rational coefficient; the BDF tables are small integer ratios and
// identities like sum(alpha) = 1 should hold without roundoff.
struct Rational {
  long long num = 0;
  long long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
};

/* s-step backward differentiation formula written as
 *   u_j = sum_{k=1..s} alpha_k u_{j-k} + tau * beta * (du/dt at t_j),
 * so one step of the discretized evolution u' = -K u + f reads
 *   (I + tau*beta*K) u_j = sum_k alpha_k u_{j-k} + tau*beta*f_j.
 */
struct BdfScheme {
  int s = 1;
  Rational beta;
  std::vector<Rational> alpha;  // alpha_1 .. alpha_s

  double beta_value() const { return beta.value(); }
  double alpha_value(int k) const { return alpha.at(static_cast<size_t>(k) - 1).value(); }
};

// Orders 1..6 (the zero-stable range). Throws std::invalid_argument outside it.
BdfScheme bdf_coefficients(int s);

// ell x ell lower-triangular time-stepping operator: unit diagonal omitted
// (it lives in the identity part of the all-at-once matrix); row j carries
// alpha_{j-k} at column k for 1 <= j-k <= s. Requires ell >= s+1.
Eigen::SparseMatrix<double> build_sigma(const BdfScheme& scheme, int ell);

// Circulant completion of build_sigma: same band plus the wrap-around corner
// entries alpha_d at (j, ell+j-d) for j <= d, each scaled by alpha_circ.
Eigen::SparseMatrix<double> build_circulant(const BdfScheme& scheme, int ell,
                                            double alpha_circ = 1.0);

// Core of the corner correction: with E1 = [e_1..e_s], E2 = [e_{ell-s+1}..e_ell],
//   Sigma_s = C_s - E1 * B * E2^T,  B(i,h) = alpha_{s+i-h} for h >= i, 0 below.
// Upper triangular with alpha_s on the diagonal, hence invertible.
Eigen::MatrixXd bdf_corner_block(const BdfScheme& scheme);

}  // namespace paradiag
