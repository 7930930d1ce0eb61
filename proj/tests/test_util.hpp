#pragma once

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "tempcorr/matcore.hpp"
#include "tempcorr/quantum.hpp"

namespace tempcorr::testing {

inline CMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  CMatrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) m(r, c) = Complex(g(rng), g(rng));
  return 0.5 * (m + m.adjoint());
}

inline DensityMatrix random_state(std::mt19937_64& rng, Eigen::Index d) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) a(r, c) = Complex(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(0.5 * (rho + rho.adjoint()));
}

inline void expect_matrix_near(const CMatrix& a, const CMatrix& b, double tol) {
  ASSERT_EQ(a.rows(), b.rows());
  ASSERT_EQ(a.cols(), b.cols());
  EXPECT_LE(max_abs_diff(a, b), tol) << "actual:\n" << a << "\nexpected:\n" << b;
}

}  // namespace tempcorr::testing
