#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "paradiag/bdf.hpp"

namespace paradiag {

/* Spatially discretized linear evolution problem
 *   u'(t) = -K u(t) + f(t),   u(0) = u0,
 * on the unit square with homogeneous-in-structure Dirichlet boundaries folded
 * into K and f. Interior nodes are ordered lexicographically, x fastest, so a
 * grid with n interior points per dimension gives n_bar = n^2 unknowns.
 */
struct SpatialProblem {
  std::string name;
  int n = 0;       // interior points per dimension
  double h = 0.0;  // mesh width 1/(n+1)
  std::optional<double> nu;
  Eigen::SparseMatrix<double> K;
  Eigen::VectorXd u0;
  // forcing at time index j (t_j = j*tau); includes eliminated boundary data
  std::function<Eigen::VectorXd(int j, double tau)> forcing;

  Eigen::Index n_bar() const { return K.rows(); }
};

// Heat equation u_t = laplace(u), zero Dirichlet data, u0 = x*y*(x-1)*(1-y),
// f = 0. K = (I kron T + T kron I), T = tridiag(-1,2,-1)/h^2.
SpatialProblem heat2d(int n);

// Extreme eigenvalues of the heat2d stiffness matrix, closed form.
double heat_lambda_min(int n);
double heat_lambda_max(int n);

// Advection-diffusion u_t = nu*laplace(u) - w . grad(u) with recirculating
// wind w = (2y(1-x^2), -2x(1-y^2)) discretized by centered differences.
// Dirichlet data g = 1 on the x=0 edge, 0 elsewhere, enters through the
// forcing; u0 = 0 at interior nodes. wind_scale = 0 is a test hook that
// reduces K to nu * heat2d-K.
SpatialProblem advdiff2d(int n, double nu, double wind_scale = 1.0);

// All-at-once right-hand side: column j holds tau*beta*f_j plus, for j <= s,
// the history terms sum_{k=j..s} alpha_k u_{j-k}. history = [u_{1-s},...,u_0]
// (size s, oldest first).
Eigen::MatrixXd bdf_rhs(const SpatialProblem& p, const BdfScheme& scheme, double tau,
                        int ell, const std::vector<Eigen::VectorXd>& history);

// Default history for an order-s scheme: u_{1-s} = u0, later entries from s-1
// sequential backward Euler warm-up steps (forcing indices 1..s-1). Exact for
// time-constant forcing; supply an explicit history otherwise.
std::vector<Eigen::VectorXd> default_history(const SpatialProblem& p,
                                             const BdfScheme& scheme, double tau);

}  // namespace paradiag
