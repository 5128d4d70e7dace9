#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "paradiag/bdf.hpp"

namespace paradiag {

/* Splitting of the BDF time operator into a circulant plus a rank-s corner
 * correction:
 *   Sigma_s = C_alpha - E1 * core * E2^T,
 * E1 = [e_1..e_s], E2 = [e_{ell-s+1}..e_ell], core = alpha_circ * B with B
 * from bdf_corner_block. alpha_circ != 1 is only supported for s = 1.
 */
struct LowRankTimeSplit {
  int s = 1;
  int ell = 0;
  double alpha_circ = 1.0;
  Eigen::SparseMatrix<double> circulant;  // C_alpha
  Eigen::MatrixXd core;                   // s x s, includes the alpha_circ factor
};

LowRankTimeSplit split_time_operator(const BdfScheme& scheme, int ell,
                                     double alpha_circ = 1.0);

/* Eigenstructure of the circulant part under the D_alpha-scaled DFT, plus the
 * transform-side weight vectors the rank-s correction turns into:
 *   pis:    eigenvalues of C_alpha, pi = alpha^{1/ell} * F C_1 e_1 for s = 1,
 *           pi = F c for s >= 2 (c = first column of C_s);
 *   gammas: column k is F^{-T} E2 B^T e_k (no alpha factor; it reappears as
 *           accel_scale in the correction equation);
 *   thetas: column k is F e_k;
 *   d_alpha: diag of D_alpha, d_j = alpha^{(j-1)/ell}.
 */
struct TimeSpectrum {
  int s = 1;
  int ell = 0;
  double alpha_circ = 1.0;
  Eigen::VectorXcd pis;     // ell
  Eigen::MatrixXcd gammas;  // ell x s
  Eigen::MatrixXcd thetas;  // ell x s
  Eigen::VectorXd d_alpha;  // ell

  // multiplier in front of the correction term of the inner system
  double accel_scale() const;
};

// Requires 0 < alpha_circ <= 1; ell >= s+1 except ell = 1 with s = 1 (the
// closed-form path, where C_1 degenerates to [1]).
TimeSpectrum spectrum(const BdfScheme& scheme, int ell, double alpha_circ = 1.0);

enum class TransformDirection { Forward, Inverse };

// Forward: U <- U * D_alpha * F^T. Inverse: U <- U * F^{-T} * D_alpha^{-1}.
void time_transform(Eigen::MatrixXcd& U, const TimeSpectrum& sp,
                    TransformDirection dir);

}  // namespace paradiag
