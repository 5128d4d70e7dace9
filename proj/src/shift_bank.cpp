#include "paradiag/shift_bank.hpp"

#include <omp.h>

#include <Eigen/SparseLU>
#include <cstdlib>
#include <string>

namespace paradiag {

using cd = std::complex<double>;

SingularShiftError::SingularShiftError(int i)
    : std::runtime_error("shifted system " + std::to_string(i) +
                         " is singular (factorization failed)"),
      shift_index(i) {}

namespace {
std::atomic<int> worker_override{0};
}

void set_worker_override(int workers) {
  worker_override.store(workers < 0 ? 0 : workers, std::memory_order_relaxed);
}

int resolve_workers() {
  const int o = worker_override.load(std::memory_order_relaxed);
  if (o > 0) return o;
  if (const char* env = std::getenv("PARADIAG_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return omp_get_max_threads();
}

struct ShiftBank::Factor {
  Eigen::SparseLU<Eigen::SparseMatrix<cd>> lu;
};

ShiftBank::ShiftBank(const Eigen::SparseMatrix<double>& K, const TimeSpectrum& sp,
                     double taubeta, bool use_conjugate_pairs)
    : taubeta_(taubeta) {
  if (K.rows() != K.cols()) throw std::invalid_argument("ShiftBank: K must be square");
  const int ell = sp.ell;
  shifts_ = Eigen::VectorXcd::Ones(ell) - sp.pis;
  factors_.resize(ell);
  conj_partner_.assign(ell, -1);

  if (use_conjugate_pairs) {
    // sigma_{ell+2-i} = conj(sigma_i) when the spectrum is conjugate-closed;
    // reuse the partner's factorization via conjugated solves where it holds.
    for (int i = 1; i < ell; ++i) {
      const int j = ell - i;  // 0-based partner of index i
      if (j <= i) break;
      const double scale = 1.0 + std::abs(shifts_(i));
      if (std::abs(shifts_(j) - std::conj(shifts_(i))) <= 1e-14 * scale)
        conj_partner_[j] = i;
    }
  }

  const Eigen::SparseMatrix<cd> Kc = (taubeta * K).cast<cd>();
  Eigen::SparseMatrix<cd> Ic(K.rows(), K.cols());
  Ic.setIdentity();

  const int nw = resolve_workers();
  int failed = 0;  // smallest failed index + 1
#pragma omp parallel for schedule(dynamic) num_threads(nw)
  for (int i = 0; i < ell; ++i) {
    if (conj_partner_[i] >= 0) continue;
    Eigen::SparseMatrix<cd> A = Kc + shifts_(i) * Ic;
    auto f = std::make_shared<Factor>();
    f->lu.compute(A);
    if (f->lu.info() != Eigen::Success) {
#pragma omp critical
      if (failed == 0 || i + 1 < failed) failed = i + 1;
    } else {
      factors_[i] = std::move(f);
    }
  }
  if (failed > 0) throw SingularShiftError(failed);
  for (int i = 0; i < ell; ++i)
    if (factors_[i]) ++factored_count_;
}

Eigen::MatrixXcd ShiftBank::apply(int i, const Eigen::MatrixXcd& rhs) const {
  if (conj_partner_[i] >= 0)
    return factors_[conj_partner_[i]]->lu.solve(rhs.conjugate()).conjugate();
  return factors_[i]->lu.solve(rhs);
}

Eigen::MatrixXcd ShiftBank::solve_one(int i, const Eigen::MatrixXcd& rhs) const {
  if (i < 0 || i >= size()) throw std::invalid_argument("solve_one: shift index out of range");
  return apply(i, rhs);
}

Eigen::MatrixXcd ShiftBank::sweep(const Eigen::MatrixXcd& rhs, PinTLedger& ledger) const {
  if (rhs.cols() != size())
    throw std::invalid_argument("sweep: rhs must have one column per shift");
  Eigen::MatrixXcd X(rhs.rows(), rhs.cols());
  const int nw = resolve_workers();
#pragma omp parallel for schedule(dynamic) num_threads(nw)
  for (int i = 0; i < size(); ++i) X.col(i) = apply(i, rhs.col(i));
  ledger.add_loop();
  return X;
}

Eigen::MatrixXcd ShiftBank::sweep_serial(const Eigen::MatrixXcd& rhs,
                                         PinTLedger& ledger) const {
  if (rhs.cols() != size())
    throw std::invalid_argument("sweep_serial: rhs must have one column per shift");
  Eigen::MatrixXcd X(rhs.rows(), rhs.cols());
  for (int i = 0; i < size(); ++i) X.col(i) = apply(i, rhs.col(i));
  ledger.add_loop();
  return X;
}

Eigen::MatrixXcd ShiftBank::sweep_single(const Eigen::VectorXcd& v,
                                         PinTLedger& ledger) const {
  Eigen::MatrixXcd X(v.size(), size());
  const int nw = resolve_workers();
#pragma omp parallel for schedule(dynamic) num_threads(nw)
  for (int i = 0; i < size(); ++i) X.col(i) = apply(i, v);
  ledger.add_loop();
  return X;
}

std::vector<Eigen::MatrixXcd> ShiftBank::sweep_block(const Eigen::MatrixXcd& B,
                                                     PinTLedger& ledger) const {
  std::vector<Eigen::MatrixXcd> H(static_cast<size_t>(size()));
  const int nw = resolve_workers();
#pragma omp parallel for schedule(dynamic) num_threads(nw)
  for (int i = 0; i < size(); ++i) H[static_cast<size_t>(i)] = apply(i, B);
  ledger.add_loop();
  return H;
}

}  // namespace paradiag
