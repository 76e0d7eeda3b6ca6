#pragma once

// Test-only reference computations. Each one takes a different route from the
// library code it is compared against.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdint>
#include <random>

#include "spectrace/finop.hpp"
#include "spectrace/summation.hpp"

namespace oracle {

using spectrace::finop::Matrix;

// PSD square root through the Hermitian eigendecomposition U diag(sqrt(l)) U*.
inline Matrix eig_sqrt(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (a + a.adjoint()));
  Eigen::VectorXd l = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * l.cast<std::complex<double>>().asDiagonal() * eig.eigenvectors().adjoint();
}

// Seeded PSD matrix X* X with X complex Gaussian.
inline Matrix random_psd(std::size_t dim, std::uint64_t seed) {
  const auto x = spectrace::finop::random_operator(dim, seed).matrix();
  return x.adjoint() * x;
}

inline double singular_value_sum(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(a.adjoint() * a);
  return eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
}

// sum over the square [-R, R]^2 minus the origin, row by row.
template <class F>
double square_sum(std::int64_t radius, F&& f) {
  spectrace::CompensatedSum s;
  for (std::int64_t k = -radius; k <= radius; ++k) {
    for (std::int64_t m = -radius; m <= radius; ++m) {
      if (k == 0 && m == 0) continue;
      s.add(f(k, m));
    }
  }
  return s.value();
}

}  // namespace oracle
