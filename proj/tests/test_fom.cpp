#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "paradiag/analysis.hpp"
#include "paradiag/fom.hpp"
#include "test_support.hpp"

using namespace paradiag;
using testsup::cd;

namespace {

struct Setup {
  Eigen::MatrixXd Kd;
  Eigen::SparseMatrix<double> K;
  TimeSpectrum sp;
  double tb;
  ShiftBank bank;

  Setup(int n, int ell, double alpha, double tb_, unsigned seed,
        double lo = 0.5, double hi = 40.0)
      : Kd(testsup::random_spd(n, seed, lo, hi)),
        K(Kd.sparseView()),
        sp(spectrum(bdf_coefficients(1), ell, alpha)),
        tb(tb_),
        bank(K, sp, tb_) {}

  Eigen::VectorXcd direct(const Eigen::VectorXd& b) const {
    const Eigen::MatrixXcd J = dense_jl(Kd, sp, tb);
    return J.partialPivLu().solve(b.cast<cd>());
  }
};

}  // namespace

TEST_CASE("projection solver matches the dense correction solve") {
  for (double alpha : {1.0, 0.5}) {
    Setup su(24, 8, alpha, 0.1, 77);
    const Eigen::VectorXd b = testsup::random_vector(24, 3);
    InnerOptions opt;
    opt.eps = 1e-12;
    PinTLedger ledger;
    const InnerSolveResult r = fom_solve(su.K, su.sp, su.tb, b, opt, su.bank, ledger);
    CHECK(r.converged);
    CHECK(r.iterations <= opt.maxit);
    CHECK(r.rhs_norm == doctest::Approx(b.norm()));

    const Eigen::VectorXcd want = su.direct(b);
    CHECK((r.x.col(0) - want).norm() <= 1e-8 * (1.0 + want.norm()));

    // independent certificate through actual shifted solves
    const double cert = residual_certificate(su.sp, su.bank, r.x, b.cast<cd>());
    CHECK(cert <= 1e-9 * b.norm());
  }
}

TEST_CASE("reported residual tracks the certificate at every check") {
  Setup su(30, 6, 1.0, 0.2, 12);
  const Eigen::VectorXd b = testsup::random_vector(30, 4);
  std::vector<Eigen::VectorXcd> trace;
  InnerOptions opt;
  opt.eps = 1e-10;
  opt.trace = &trace;
  PinTLedger ledger;
  const InnerSolveResult r = fom_solve(su.K, su.sp, su.tb, b, opt, su.bank, ledger);
  REQUIRE(r.residual_history.size() == trace.size());
  for (size_t k = 0; k < trace.size(); ++k) {
    const double cert =
        residual_certificate(su.sp, su.bank, trace[k], b.cast<cd>());
    CHECK(r.residual_history[k].second * b.norm() ==
          doctest::Approx(cert).epsilon(1e-6));
  }
  // residuals decrease overall
  CHECK(r.residual_history.back().second <
        r.residual_history.front().second + 1e-16);
}

TEST_CASE("each residual check costs exactly one parallel loop") {
  Setup su(32, 6, 1.0, 0.15, 9);
  const Eigen::VectorXd b = testsup::random_vector(32, 5);

  InnerOptions opt;
  opt.eps = 1e-12;
  opt.q = 1;
  PinTLedger l1;
  const InnerSolveResult r1 = fom_solve(su.K, su.sp, su.tb, b, opt, su.bank, l1);
  CHECK(l1.loops() == static_cast<long>(r1.residual_history.size()));
  CHECK(static_cast<int>(r1.residual_history.size()) == r1.iterations);

  opt.q = 3;
  PinTLedger l3;
  const InnerSolveResult r3 = fom_solve(su.K, su.sp, su.tb, b, opt, su.bank, l3);
  CHECK(l3.loops() == static_cast<long>(r3.residual_history.size()));
  CHECK(l3.loops() <= l1.loops());
  for (const auto& [m, res] : r3.residual_history)
    CHECK((m % 3 == 0 || m == r3.iterations));
}

TEST_CASE("invariant subspace breakdown finishes exactly without extra loops") {
  // diagonal K: starting from e_1 the Krylov space stalls after one step
  Eigen::VectorXd d(10);
  for (int i = 0; i < 10; ++i) d(i) = 1.0 + i;
  Eigen::SparseMatrix<double> K(10, 10);
  for (int i = 0; i < 10; ++i) K.insert(i, i) = d(i);
  K.makeCompressed();

  const TimeSpectrum sp = spectrum(bdf_coefficients(1), 6, 1.0);
  const ShiftBank bank(K, sp, 0.1);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(10);
  b(0) = 2.5;

  InnerOptions opt;
  opt.eps = 1e-12;
  PinTLedger ledger;
  const InnerSolveResult r = fom_solve(K, sp, 0.1, b, opt, bank, ledger);
  CHECK(r.breakdown);
  CHECK(r.converged);
  CHECK(r.iterations == 1);
  CHECK(r.final_residual == 0.0);
  CHECK(ledger.loops() == 0);  // breakdown check needs no bank sweep

  const double cert = residual_certificate(sp, bank, r.x, b.cast<cd>());
  CHECK(cert <= 1e-12 * b.norm());
}

TEST_CASE("zero right-hand side short-circuits") {
  Setup su(12, 4, 1.0, 0.1, 21);
  InnerOptions opt;
  PinTLedger ledger;
  const InnerSolveResult r =
      fom_solve(su.K, su.sp, su.tb, Eigen::VectorXd::Zero(12), opt, su.bank, ledger);
  CHECK(r.converged);
  CHECK(r.iterations == 0);
  CHECK(r.x.norm() == 0.0);
  CHECK(ledger.loops() == 0);
}

TEST_CASE("option validation and shape checks") {
  Setup su(8, 4, 1.0, 0.1, 2);
  PinTLedger ledger;
  const Eigen::VectorXd b = testsup::random_vector(8, 1);
  InnerOptions bad;
  bad.q = 0;
  CHECK_THROWS_AS(fom_solve(su.K, su.sp, su.tb, b, bad, su.bank, ledger),
                  std::invalid_argument);
  bad = InnerOptions{};
  bad.maxit = 0;
  CHECK_THROWS_AS(fom_solve(su.K, su.sp, su.tb, b, bad, su.bank, ledger),
                  std::invalid_argument);
  bad = InnerOptions{};
  bad.eps = 0.0;
  CHECK_THROWS_AS(fom_solve(su.K, su.sp, su.tb, b, bad, su.bank, ledger),
                  std::invalid_argument);

  const TimeSpectrum sp2 = spectrum(bdf_coefficients(2), 6, 1.0);
  const ShiftBank bank2(su.K, sp2, su.tb);
  CHECK_THROWS_AS(fom_solve(su.K, sp2, su.tb, b, InnerOptions{}, bank2, ledger),
                  std::invalid_argument);
}

TEST_CASE("maxit caps the space dimension and reports non-convergence") {
  Setup su(24, 8, 1.0, 0.1, 55, 1e-4, 1.0);  // tiny lambda_min slows convergence
  const Eigen::VectorXd b = testsup::random_vector(24, 6);
  InnerOptions opt;
  opt.eps = 1e-15;
  opt.maxit = 2;
  PinTLedger ledger;
  const InnerSolveResult r = fom_solve(su.K, su.sp, su.tb, b, opt, su.bank, ledger);
  CHECK(r.iterations == 2);
  CHECK_FALSE(r.converged);
  CHECK(r.final_residual > 1e-15);
}
