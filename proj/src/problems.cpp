#include "paradiag/problems.hpp"

#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace paradiag {

static void check_n(int n) {
  if (n < 1) throw std::invalid_argument("grid needs n >= 1 interior points per dim");
}

SpatialProblem heat2d(int n) {
  check_n(n);
  SpatialProblem p;
  p.name = "heat2d";
  p.n = n;
  p.h = 1.0 / (n + 1);
  const double ih2 = 1.0 / (p.h * p.h);
  const Eigen::Index nb = static_cast<Eigen::Index>(n) * n;

  std::vector<Eigen::Triplet<double>> tr;
  tr.reserve(static_cast<size_t>(5 * nb));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Eigen::Index id = static_cast<Eigen::Index>(j) * n + i;
      tr.emplace_back(id, id, 4.0 * ih2);
      if (i > 0) tr.emplace_back(id, id - 1, -ih2);
      if (i < n - 1) tr.emplace_back(id, id + 1, -ih2);
      if (j > 0) tr.emplace_back(id, id - n, -ih2);
      if (j < n - 1) tr.emplace_back(id, id + n, -ih2);
    }
  p.K.resize(nb, nb);
  p.K.setFromTriplets(tr.begin(), tr.end());

  p.u0.resize(nb);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = (i + 1) * p.h, y = (j + 1) * p.h;
      p.u0(static_cast<Eigen::Index>(j) * n + i) = x * y * (x - 1.0) * (1.0 - y);
    }

  p.forcing = [nb](int, double) { return Eigen::VectorXd::Zero(nb).eval(); };
  return p;
}

double heat_lambda_min(int n) {
  check_n(n);
  const double h = 1.0 / (n + 1);
  const double s = std::sin(std::numbers::pi / (2.0 * (n + 1)));
  return 8.0 / (h * h) * s * s;
}

double heat_lambda_max(int n) {
  check_n(n);
  const double h = 1.0 / (n + 1);
  const double c = std::cos(std::numbers::pi / (2.0 * (n + 1)));
  return 8.0 / (h * h) * c * c;
}

SpatialProblem advdiff2d(int n, double nu, double wind_scale) {
  check_n(n);
  if (!(nu > 0.0)) throw std::invalid_argument("advdiff2d needs nu > 0");
  SpatialProblem p;
  p.name = "advdiff2d";
  p.n = n;
  p.h = 1.0 / (n + 1);
  p.nu = nu;
  const double h = p.h, ih2 = 1.0 / (h * h), i2h = 1.0 / (2.0 * h);
  const Eigen::Index nb = static_cast<Eigen::Index>(n) * n;

  // K u = -nu*laplace_h(u) + w . grad_h(u). Each stencil leg either couples to
  // an interior unknown (goes into K) or to Dirichlet data (goes into f with
  // flipped sign, since u' = -K u + f). g = 1 on the x=0 edge, 0 elsewhere.
  std::vector<Eigen::Triplet<double>> tr;
  tr.reserve(static_cast<size_t>(5 * nb));
  Eigen::VectorXd f = Eigen::VectorXd::Zero(nb);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const Eigen::Index id = static_cast<Eigen::Index>(j) * n + i;
      const double x = (i + 1) * h, y = (j + 1) * h;
      const double w1 = wind_scale * 2.0 * y * (1.0 - x * x);
      const double w2 = wind_scale * (-2.0) * x * (1.0 - y * y);
      tr.emplace_back(id, id, 4.0 * nu * ih2);
      const double cw = -nu * ih2 - w1 * i2h;  // west  (i-1, j)
      const double ce = -nu * ih2 + w1 * i2h;  // east  (i+1, j)
      const double cs = -nu * ih2 - w2 * i2h;  // south (i, j-1)
      const double cn = -nu * ih2 + w2 * i2h;  // north (i, j+1)
      if (i > 0)
        tr.emplace_back(id, id - 1, cw);
      else
        f(id) -= cw * 1.0;  // x=0 edge, g=1
      if (i < n - 1) tr.emplace_back(id, id + 1, ce);
      if (j > 0) tr.emplace_back(id, id - n, cs);
      if (j < n - 1) tr.emplace_back(id, id + n, cn);
      // east/south/north boundary legs carry g=0: nothing to add
    }
  p.K.resize(nb, nb);
  p.K.setFromTriplets(tr.begin(), tr.end());
  p.u0 = Eigen::VectorXd::Zero(nb);
  p.forcing = [f](int, double) { return f; };
  return p;
}

Eigen::MatrixXd bdf_rhs(const SpatialProblem& p, const BdfScheme& scheme, double tau,
                        int ell, const std::vector<Eigen::VectorXd>& history) {
  const int s = scheme.s;
  if (static_cast<int>(history.size()) != s)
    throw std::invalid_argument("bdf_rhs: history must hold s=" + std::to_string(s) +
                                " states, got " + std::to_string(history.size()));
  const Eigen::Index nb = p.n_bar();
  for (const auto& u : history)
    if (u.size() != nb) throw std::invalid_argument("bdf_rhs: history state has wrong size");
  if (ell < 1) throw std::invalid_argument("bdf_rhs: ell must be >= 1");

  const double tb = tau * scheme.beta_value();
  Eigen::MatrixXd G(nb, ell);
  for (int j = 1; j <= ell; ++j) {
    Eigen::VectorXd col = tb * p.forcing(j, tau);
    for (int k = j; k <= s; ++k) {
      // u_{j-k} with j-k <= 0 comes from history: index s-1 + (j-k)
      col += scheme.alpha_value(k) * history[static_cast<size_t>(s - 1 + j - k)];
    }
    G.col(j - 1) = col;
  }
  return G;
}

std::vector<Eigen::VectorXd> default_history(const SpatialProblem& p,
                                             const BdfScheme& scheme, double tau) {
  std::vector<Eigen::VectorXd> hist{p.u0};
  if (scheme.s == 1) return hist;
  Eigen::SparseMatrix<double> A = p.K * tau;
  for (Eigen::Index i = 0; i < A.rows(); ++i) A.coeffRef(i, i) += 1.0;
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(A);
  if (lu.info() != Eigen::Success)
    throw std::runtime_error("default_history: backward Euler matrix is singular");
  Eigen::VectorXd u = p.u0;
  for (int k = 1; k < scheme.s; ++k) {
    // sparse solves must not alias their right-hand side
    const Eigen::VectorXd rhs = u + tau * p.forcing(k, tau);
    u = lu.solve(rhs);
    hist.push_back(u);
  }
  return hist;
}

}  // namespace paradiag
