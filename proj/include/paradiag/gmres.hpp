#pragma once

#include <Eigen/Dense>
#include <vector>

#include "paradiag/problems.hpp"
#include "paradiag/shift_bank.hpp"

namespace paradiag {

/* Matrix-oriented GMRES baseline for the all-at-once system
 *   A(U) = (I + taubeta K) U - U Sigma_s^T = G,
 * right-preconditioned by the circulant part of the splitting:
 *   P^{-1}(X) = inverse-transform( sweep( X F^T ) ).
 * Iterates are n_bar x ell matrices under the Frobenius inner product;
 * unrestarted modified Gram-Schmidt Arnoldi with Givens rotations. With right
 * preconditioning the Givens estimate is the true unpreconditioned residual,
 * so stopping is on the actual ||G - A(U)||_F / ||G||_F. Each iteration costs
 * one parallel-in-time loop; the final solution recovery U = P^{-1}(V y)
 * costs one more, giving p + 1 loops for p iterations.
 */

struct GmresOptions {
  double eps = 1e-8;
  int maxit = 200;
};

struct GmresReport {
  Eigen::MatrixXd U;
  int iterations = 0;
  long pint_loops = 0;
  bool converged = false;
  double rel_residual = 0.0;  // true residual, recomputed from U
  std::vector<double> residual_history;  // Givens estimates, relative
};

// A(X) for the order-s scheme (no solves, no ledger).
Eigen::MatrixXd allatonce_apply(const SpatialProblem& p, const BdfScheme& scheme,
                                double tau, const Eigen::MatrixXd& X);

// P^{-1}(X): forward DFT, bank sweep, inverse DFT; real part (imaginary
// residue is roundoff since the circulant operator is real). One ledger loop.
Eigen::MatrixXd circulant_precond_apply(const ShiftBank& bank, const TimeSpectrum& sp,
                                        const Eigen::MatrixXd& X, PinTLedger& ledger);

GmresReport gmres_allatonce(const SpatialProblem& p, const BdfScheme& scheme, int ell,
                            double tau, const GmresOptions& opt = {},
                            const std::vector<Eigen::VectorXd>* history = nullptr);

}  // namespace paradiag
