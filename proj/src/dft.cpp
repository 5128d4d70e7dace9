#include "paradiag/dft.hpp"

#include <fftw3.h>

#include <mutex>

namespace paradiag {

// FFTW plan creation/destruction is not thread-safe; execution of a plan on
// its own buffer is. Transforms are cheap relative to the shifted solves, so
// plans are made per call under a lock with FFTW_ESTIMATE.
static std::mutex fftw_mutex;

static void transform_vector(Eigen::VectorXcd& x, int sign) {
  const int n = static_cast<int>(x.size());
  if (n == 0) return;
  auto* data = reinterpret_cast<fftw_complex*>(x.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    plan = fftw_plan_dft_1d(n, data, data, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(plan);
  }
}

void dft_forward_inplace(Eigen::VectorXcd& x) { transform_vector(x, FFTW_FORWARD); }

void dft_inverse_inplace(Eigen::VectorXcd& x) {
  transform_vector(x, FFTW_BACKWARD);
  x /= static_cast<double>(x.size());
}

// Rows of a column-major matrix are strided vectors: stride = rows between
// consecutive elements, distance 1 between consecutive transforms.
static void transform_rows(Eigen::MatrixXcd& M, int sign) {
  const int n = static_cast<int>(M.cols());
  const int howmany = static_cast<int>(M.rows());
  if (n == 0 || howmany == 0) return;
  auto* data = reinterpret_cast<fftw_complex*>(M.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    plan = fftw_plan_many_dft(1, &n, howmany, data, nullptr, howmany, 1, data,
                              nullptr, howmany, 1, sign, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(fftw_mutex);
    fftw_destroy_plan(plan);
  }
}

void dft_rows_forward_inplace(Eigen::MatrixXcd& M) { transform_rows(M, FFTW_FORWARD); }

void dft_rows_inverse_inplace(Eigen::MatrixXcd& M) {
  transform_rows(M, FFTW_BACKWARD);
  M /= static_cast<double>(M.cols());
}

}  // namespace paradiag
