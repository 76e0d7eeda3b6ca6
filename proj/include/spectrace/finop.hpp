#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace spectrace::finop {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// A linear map on C^d, d >= 1, with finite entries.
class DenseOperator {
 public:
  explicit DenseOperator(Matrix entries);

  static DenseOperator from_row_major(std::size_t dim, std::span<const Complex> entries);
  static DenseOperator identity(std::size_t dim);
  static DenseOperator diagonal(std::span<const Complex> values);
  static DenseOperator zero(std::size_t dim);

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  [[nodiscard]] const Matrix& matrix() const { return entries_; }
  [[nodiscard]] Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  [[nodiscard]] std::vector<Complex> row_major() const;

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b);
  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b);

 private:
  Matrix entries_;
};

/// d orthonormal vectors in C^d stored as matrix columns. The constructor
/// rejects column sets whose Gram matrix is off the identity by more than
/// 1e-12 in any entry.
class OrthonormalBasis {
 public:
  explicit OrthonormalBasis(Matrix columns);
  static OrthonormalBasis standard(std::size_t dim);

  [[nodiscard]] std::size_t dim() const { return static_cast<std::size_t>(columns_.cols()); }
  [[nodiscard]] const Matrix& columns() const { return columns_; }
  [[nodiscard]] Vector column(std::size_t i) const { return columns_.col(static_cast<Eigen::Index>(i)); }

 private:
  Matrix columns_;
};

/// A = sum_n mu_n <alpha_n, .> beta_n with mu_n > 0 non-increasing.
struct CanonicalDecomposition {
  std::vector<double> mu;
  std::vector<Vector> alpha;
  std::vector<Vector> beta;

  [[nodiscard]] std::size_t rank() const { return mu.size(); }
  [[nodiscard]] Matrix reconstruct(std::size_t dim) const;
};

/// Largest singular value.
double op_norm(const DenseOperator& a);

/// <x, y> = sum conj(x_i) y_i
Complex inner(const Vector& x, const Vector& y);

DenseOperator adjoint(const DenseOperator& a);

/// Hermitian within tol * max(1, ||A||) and every eigenvalue of the Hermitian
/// part >= -tol * ||A||.
bool is_psd(const DenseOperator& a, double tol);

struct SeriesRoot {
  Matrix root;
  int terms = 0;
  bool converged = false;  // last term norm fell below tol/4 before max_terms
};

/// The binomial-series square root: scale so the Frobenius norm is 1, sum
/// I + sum_j c_j (I - A)^j with c_j the Taylor coefficients of sqrt(1 - z),
/// stop once a term's Frobenius norm is below tol/4, then undo the scaling.
/// Does not check its input.
SeriesRoot sqrt_series(const Matrix& hermitian_psd, double tol, int max_terms);

/// Unique PSD square root with ||B^2 - A|| <= tol * max(1, ||A||). The binomial
/// series runs first (at most 2000 terms); if small eigenvalues stall it, the
/// coupled Newton-Schulz iteration on A / ||A||_F takes over.
/// Throws std::invalid_argument for non-PSD input and ConvergenceError when
/// the combined iteration cap (10,000) is hit.
DenseOperator sqrt_psd(const DenseOperator& a, double tol);

/// |A| = sqrt(A* A)
DenseOperator abs_op(const DenseOperator& a, double tol);

/// sum_n <b_n, A b_n>
Complex trace_diag(const DenseOperator& a, const OrthonormalBasis& basis);

/// Singular-value form and the trace norm sum mu_n. Singular values below
/// 1e-12 * ||A|| are dropped.
std::pair<CanonicalDecomposition, double> canonical_and_trace_norm(const DenseOperator& a);

struct LidskiiReport {
  Complex trace;
  Complex eigenvalue_sum;
  double discrepancy = 0.0;
  bool passed = false;
};

LidskiiReport lidskii_report(const DenseOperator& a, double tol);
bool lidskii_check(const DenseOperator& a, double tol);

/// Householder QR of a seeded complex Gaussian matrix.
OrthonormalBasis random_orthonormal_basis(std::size_t dim, std::uint64_t seed);

/// Complex Gaussian entries (real and imaginary parts N(0, 1/2)).
DenseOperator random_operator(std::size_t dim, std::uint64_t seed);

}  // namespace spectrace::finop
