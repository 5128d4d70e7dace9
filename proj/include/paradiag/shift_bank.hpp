#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <atomic>
#include <memory>
#include <stdexcept>
#include <vector>

#include "paradiag/time_circulant.hpp"

namespace paradiag {

// Counts parallel-in-time loops: one per sweep over all shifted systems,
// regardless of how many right-hand-side columns a sweep carries.
class PinTLedger {
 public:
  void add_loop() { count_.fetch_add(1, std::memory_order_relaxed); }
  long loops() const { return count_.load(std::memory_order_relaxed); }
  void reset() { count_.store(0, std::memory_order_relaxed); }

 private:
  std::atomic<long> count_{0};
};

struct SingularShiftError : std::runtime_error {
  int shift_index;  // 1-based
  explicit SingularShiftError(int i);
};

// Worker count for the shift loop: explicit override > PARADIAG_WORKERS env
// variable > available hardware parallelism.
int resolve_workers();
void set_worker_override(int workers);  // 0 clears the override

/* Bank of factorizations of the shifted systems
 *   (sigma_i I + taubeta K),  sigma_i = 1 - pi_i,  i = 1..ell,
 * computed once and reused across every phase of a solve. The shift loop is
 * the data-parallel core: sweep() runs it under OpenMP, sweep_serial() is the
 * plain reference loop kept for testing and benchmarking; both produce
 * bit-identical output since the columns are independent.
 */
class ShiftBank {
 public:
  ShiftBank(const Eigen::SparseMatrix<double>& K, const TimeSpectrum& sp,
            double taubeta, bool use_conjugate_pairs = false);

  int size() const { return static_cast<int>(shifts_.size()); }
  double taubeta() const { return taubeta_; }
  const Eigen::VectorXcd& shifts() const { return shifts_; }
  int factored_count() const { return factored_count_; }

  // X(:,i) = (sigma_i I + taubeta K)^{-1} rhs(:,i); one ledger loop
  Eigen::MatrixXcd sweep(const Eigen::MatrixXcd& rhs, PinTLedger& ledger) const;
  Eigen::MatrixXcd sweep_serial(const Eigen::MatrixXcd& rhs, PinTLedger& ledger) const;

  // X(:,i) = (sigma_i I + taubeta K)^{-1} v; one ledger loop
  Eigen::MatrixXcd sweep_single(const Eigen::VectorXcd& v, PinTLedger& ledger) const;

  // H[i] = (sigma_i I + taubeta K)^{-1} B for a shared block rhs; one ledger loop
  std::vector<Eigen::MatrixXcd> sweep_block(const Eigen::MatrixXcd& B,
                                            PinTLedger& ledger) const;

  // single shifted solve, no ledger accounting (diagnostics/oracles)
  Eigen::MatrixXcd solve_one(int i, const Eigen::MatrixXcd& rhs) const;

 private:
  struct Factor;
  Eigen::MatrixXcd apply(int i, const Eigen::MatrixXcd& rhs) const;

  double taubeta_ = 0.0;
  Eigen::VectorXcd shifts_;
  std::vector<std::shared_ptr<Factor>> factors_;
  std::vector<int> conj_partner_;  // -1, or index whose factor solves conj systems
  int factored_count_ = 0;
};

}  // namespace paradiag
