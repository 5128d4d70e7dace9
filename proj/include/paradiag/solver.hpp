#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "paradiag/fom.hpp"
#include "paradiag/problems.hpp"

namespace paradiag {

/* All-at-once ParaDiag solve of
 *   (I + taubeta K) U - U Sigma_s^T = G
 * by the circulant + rank-s splitting: transform, sweep the shifted systems
 * for the particular solution L, solve the small dense correction system by
 * Krylov projection, one more sweep for the correction, transform back.
 *
 * Parallel-in-time loop accounting (tracked by the ledger, one per sweep):
 *   full solve      m/q + 2   (L sweep + one per residual check + W sweep)
 *   early exit      1         (alpha-weighted path, U1 already good enough)
 *   skip_correction 2         (correction system approximated by identity)
 */

struct SolveOptions {
  double eps = 1e-8;
  int q = 1;
  int maxit = 100;
  bool skip_correction = false;  // x = b shortcut (2-loop mode)
  bool allow_early_exit = true;  // test U1 alone first (alpha-weighted path)
};

struct SolveReport {
  Eigen::MatrixXd U;  // n_bar x ell
  long pint_loops = 0;
  int inner_iterations = 0;
  bool inner_converged = true;
  bool early_exit = false;
  double rel_residual = 0.0;  // ||(I+taubeta K)U - U Sigma^T - G||_F / ||G||_F
  double u1_rel_residual = 0.0;  // same residual for the circulant part alone
  double u1_norm = 0.0;       // circulant-part solution
  double u2_norm = 0.0;       // rank-s correction
  double imag_residue = 0.0;  // max |Im| discarded when realifying U
  std::vector<std::pair<int, double>> inner_history;
};

// Backward Euler, plain circulant splitting (alpha = 1, no early exit).
SolveReport solve_be(const SpatialProblem& p, int ell, double tau,
                     const SolveOptions& opt = {});

// Backward Euler with alpha-weighted circulant; 0 < alpha <= 1. The early
// exit accepts U1 when its residual is <= eps * ||U1||_F.
SolveReport solve_be_alpha(const SpatialProblem& p, int ell, double tau, double alpha,
                           const SolveOptions& opt = {});

// Order-s BDF, alpha = 1, block correction. history = [u_{1-s},...,u_0];
// defaults to default_history(p, scheme, tau).
SolveReport solve_bdf(const SpatialProblem& p, int s, int ell, double tau,
                      const SolveOptions& opt = {},
                      const std::vector<Eigen::VectorXd>* history = nullptr);

// Frobenius residual of the all-at-once equation, normalized by ||G||_F.
double allatonce_residual(const SpatialProblem& p, const BdfScheme& scheme, double tau,
                          const Eigen::MatrixXd& U, const Eigen::MatrixXd& G);

}  // namespace paradiag
