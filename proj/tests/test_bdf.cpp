#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <stdexcept>

#include "paradiag/bdf.hpp"

using namespace paradiag;

TEST_CASE("coefficient table matches the classical BDF rationals") {
  const BdfScheme s1 = bdf_coefficients(1);
  CHECK(s1.beta.num == 1);
  CHECK(s1.beta.den == 1);
  REQUIRE(s1.alpha.size() == 1);
  CHECK(s1.alpha[0].num == 1);

  const BdfScheme s2 = bdf_coefficients(2);
  CHECK(s2.beta.num == 2);
  CHECK(s2.beta.den == 3);
  CHECK(s2.alpha[0].value() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(s2.alpha[1].value() == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));

  const BdfScheme s3 = bdf_coefficients(3);
  CHECK(s3.beta.value() == doctest::Approx(6.0 / 11.0).epsilon(1e-15));
  CHECK(s3.alpha[0].value() == doctest::Approx(18.0 / 11.0).epsilon(1e-15));
  CHECK(s3.alpha[2].value() == doctest::Approx(2.0 / 11.0).epsilon(1e-15));

  const BdfScheme s6 = bdf_coefficients(6);
  CHECK(s6.beta.value() == doctest::Approx(60.0 / 147.0).epsilon(1e-15));
  CHECK(s6.alpha[0].value() == doctest::Approx(360.0 / 147.0).epsilon(1e-15));
  CHECK(s6.alpha[5].value() == doctest::Approx(-10.0 / 147.0).epsilon(1e-15));
}

TEST_CASE("schemes reproduce constants, linears, and quadratics") {
  for (int s = 1; s <= 6; ++s) {
    const BdfScheme sc = bdf_coefficients(s);
    // constants: sum_k alpha_k = 1 (exact since denominators agree per order)
    long long num_sum = 0;
    for (const auto& a : sc.alpha) {
      CHECK(a.den == sc.alpha[0].den);
      num_sum += a.num;
    }
    CHECK(num_sum == sc.alpha[0].den);
    // linears: beta = sum_k k*alpha_k
    double k_sum = 0.0;
    for (int k = 1; k <= s; ++k) k_sum += k * sc.alpha_value(k);
    CHECK(k_sum == doctest::Approx(sc.beta_value()).epsilon(1e-14));
    // quadratics (s >= 2): sum_k k^2 alpha_k = 0
    if (s >= 2) {
      double k2_sum = 0.0;
      for (int k = 1; k <= s; ++k) k2_sum += double(k) * k * sc.alpha_value(k);
      CHECK(std::abs(k2_sum) <= 1e-13);
    }
  }
}

TEST_CASE("orders outside 1..6 are rejected") {
  CHECK_THROWS_AS(bdf_coefficients(0), std::invalid_argument);
  CHECK_THROWS_AS(bdf_coefficients(7), std::invalid_argument);
  CHECK_THROWS_AS(bdf_coefficients(-3), std::invalid_argument);
}

TEST_CASE("sigma holds the band and nothing else") {
  const BdfScheme sc = bdf_coefficients(2);
  const Eigen::MatrixXd S = build_sigma(sc, 6).toDense();
  for (int j = 0; j < 6; ++j)
    for (int k = 0; k < 6; ++k) {
      const int d = j - k;
      const double want = (d >= 1 && d <= 2) ? sc.alpha_value(d) : 0.0;
      CHECK(S(j, k) == doctest::Approx(want).epsilon(1e-15));
    }
  CHECK_THROWS_AS(build_sigma(sc, 2), std::invalid_argument);
}

TEST_CASE("corner block is upper triangular with alpha_s on the diagonal") {
  const BdfScheme sc = bdf_coefficients(3);
  const Eigen::MatrixXd B = bdf_corner_block(sc);
  REQUIRE(B.rows() == 3);
  // B(i,h) = alpha_{s+i-h} for h >= i
  CHECK(B(0, 0) == doctest::Approx(sc.alpha_value(3)));
  CHECK(B(0, 1) == doctest::Approx(sc.alpha_value(2)));
  CHECK(B(0, 2) == doctest::Approx(sc.alpha_value(1)));
  CHECK(B(1, 1) == doctest::Approx(sc.alpha_value(3)));
  CHECK(B(1, 2) == doctest::Approx(sc.alpha_value(2)));
  CHECK(B(2, 2) == doctest::Approx(sc.alpha_value(3)));
  CHECK(B(1, 0) == 0.0);
  CHECK(B(2, 0) == 0.0);
  CHECK(B(2, 1) == 0.0);
}

TEST_CASE("circulant = sigma + corner placement of the scaled block") {
  const int ell = 7;
  for (int s : {1, 2, 3}) {
    const BdfScheme sc = bdf_coefficients(s);
    for (double a : {1.0, 0.3}) {
      if (s >= 2 && a != 1.0) continue;
      const Eigen::MatrixXd C = build_circulant(sc, ell, a).toDense();
      const Eigen::MatrixXd S = build_sigma(sc, ell).toDense();
      const Eigen::MatrixXd B = bdf_corner_block(sc);
      Eigen::MatrixXd corner = Eigen::MatrixXd::Zero(ell, ell);
      corner.block(0, ell - s, s, s) = a * B;
      CHECK((C - S - corner).norm() <= 1e-15 * C.norm());
    }
  }
}
