#include "paradiag/bdf.hpp"

#include <stdexcept>
#include <string>

namespace paradiag {

BdfScheme bdf_coefficients(int s) {
  BdfScheme sc;
  sc.s = s;
  switch (s) {
    case 1:
      sc.beta = {1, 1};
      sc.alpha = {{1, 1}};
      break;
    case 2:
      sc.beta = {2, 3};
      sc.alpha = {{4, 3}, {-1, 3}};
      break;
    case 3:
      sc.beta = {6, 11};
      sc.alpha = {{18, 11}, {-9, 11}, {2, 11}};
      break;
    case 4:
      sc.beta = {12, 25};
      sc.alpha = {{48, 25}, {-36, 25}, {16, 25}, {-3, 25}};
      break;
    case 5:
      sc.beta = {60, 137};
      sc.alpha = {{300, 137}, {-300, 137}, {200, 137}, {-75, 137}, {12, 137}};
      break;
    case 6:
      sc.beta = {60, 147};
      sc.alpha = {{360, 147}, {-450, 147}, {400, 147}, {-225, 147}, {72, 147}, {-10, 147}};
      break;
    default:
      throw std::invalid_argument("bdf order unsupported: s=" + std::to_string(s) +
                                  " (zero-stable range is 1..6)");
  }
  return sc;
}

static void check_ell(const BdfScheme& scheme, int ell) {
  if (ell < scheme.s + 1)
    throw std::invalid_argument("time operator needs ell >= s+1, got ell=" +
                                std::to_string(ell) + " s=" + std::to_string(scheme.s));
}

Eigen::SparseMatrix<double> build_sigma(const BdfScheme& scheme, int ell) {
  check_ell(scheme, ell);
  std::vector<Eigen::Triplet<double>> tr;
  tr.reserve(static_cast<size_t>(ell) * scheme.s);
  for (int j = 0; j < ell; ++j)
    for (int d = 1; d <= scheme.s; ++d)
      if (j - d >= 0) tr.emplace_back(j, j - d, scheme.alpha_value(d));
  Eigen::SparseMatrix<double> S(ell, ell);
  S.setFromTriplets(tr.begin(), tr.end());
  return S;
}

Eigen::SparseMatrix<double> build_circulant(const BdfScheme& scheme, int ell,
                                            double alpha_circ) {
  check_ell(scheme, ell);
  std::vector<Eigen::Triplet<double>> tr;
  tr.reserve(static_cast<size_t>(ell) * scheme.s);
  for (int j = 0; j < ell; ++j)
    for (int d = 1; d <= scheme.s; ++d) {
      if (j - d >= 0)
        tr.emplace_back(j, j - d, scheme.alpha_value(d));
      else
        tr.emplace_back(j, j - d + ell, alpha_circ * scheme.alpha_value(d));
    }
  Eigen::SparseMatrix<double> C(ell, ell);
  C.setFromTriplets(tr.begin(), tr.end());
  return C;
}

Eigen::MatrixXd bdf_corner_block(const BdfScheme& scheme) {
  const int s = scheme.s;
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(s, s);
  for (int i = 1; i <= s; ++i)
    for (int h = i; h <= s; ++h) B(i - 1, h - 1) = scheme.alpha_value(s + i - h);
  return B;
}

}  // namespace paradiag
