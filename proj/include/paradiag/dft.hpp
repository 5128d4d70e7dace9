#pragma once

#include <Eigen/Dense>

namespace paradiag {

/* Discrete Fourier transform convention used throughout:
 *   F(j,k) = w^{(j-1)(k-1)},  w = exp(-2*pi*i/n),  unnormalized,
 * so F is symmetric, F*e_1 is the all-ones vector, and F^{-1} = conj(F)/n.
 * Column-transforms below map x to F*x; row variants apply F to every row,
 * i.e. M -> M*F^T (= M*F). Arbitrary lengths are supported.
 */

void dft_forward_inplace(Eigen::VectorXcd& x);   // x <- F x
void dft_inverse_inplace(Eigen::VectorXcd& x);   // x <- F^{-1} x

void dft_rows_forward_inplace(Eigen::MatrixXcd& M);  // M <- M F^T
void dft_rows_inverse_inplace(Eigen::MatrixXcd& M);  // M <- M F^{-T}

}  // namespace paradiag
