#include "spectrace/finop.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "spectrace/errors.hpp"
#include "spectrace/summation.hpp"

namespace spectrace::finop {

namespace {

constexpr int kIterationCap = 10'000;
// Series terms attempted before handing over to Newton-Schulz steps.
constexpr int kSeriesBudget = 2'000;
constexpr double kOrthonormalTol = 1e-12;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_positive_tol(double tol, const char* where) {
  if (!std::isfinite(tol) || tol <= 0.0) {
    throw std::invalid_argument(std::string(where) + ": tolerance must be positive and finite");
  }
}

Matrix hermitian_part(const Matrix& a) { return 0.5 * (a + a.adjoint()); }

double spectral_norm(const Matrix& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

}  // namespace

DenseOperator::DenseOperator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() < 1 || entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("DenseOperator: matrix must be square with dim >= 1");
  }
  if (!entries_.allFinite()) throw std::invalid_argument("DenseOperator: entries must be finite");
}

DenseOperator DenseOperator::from_row_major(std::size_t dim, std::span<const Complex> entries) {
  if (entries.size() != dim * dim) {
    throw std::invalid_argument("DenseOperator: expected dim*dim entries");
  }
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = entries[static_cast<std::size_t>(i * d + j)];
  }
  return DenseOperator(std::move(m));
}

DenseOperator DenseOperator::identity(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DenseOperator(Matrix::Identity(d, d));
}

DenseOperator DenseOperator::zero(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return DenseOperator(Matrix::Zero(d, d));
}

DenseOperator DenseOperator::diagonal(std::span<const Complex> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v(static_cast<Eigen::Index>(i)) = values[i];
  return DenseOperator(Matrix(v.asDiagonal()));
}

std::vector<Complex> DenseOperator::row_major() const {
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(entries_.size()));
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    for (Eigen::Index j = 0; j < entries_.cols(); ++j) out.push_back(entries_(i, j));
  }
  return out;
}

DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("DenseOperator: dimension mismatch");
  return DenseOperator(a.matrix() * b.matrix());
}

DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("DenseOperator: dimension mismatch");
  return DenseOperator(a.matrix() + b.matrix());
}

OrthonormalBasis::OrthonormalBasis(Matrix columns) : columns_(std::move(columns)) {
  if (columns_.rows() < 1 || columns_.rows() != columns_.cols()) {
    throw std::invalid_argument("OrthonormalBasis: need d columns in C^d, d >= 1");
  }
  const Matrix gram = columns_.adjoint() * columns_;
  const Matrix deviation = gram - Matrix::Identity(gram.rows(), gram.cols());
  if (deviation.cwiseAbs().maxCoeff() > kOrthonormalTol) {
    throw std::invalid_argument("OrthonormalBasis: columns are not orthonormal within 1e-12");
  }
}

OrthonormalBasis OrthonormalBasis::standard(std::size_t dim) {
  const auto d = static_cast<Eigen::Index>(dim);
  return OrthonormalBasis(Matrix::Identity(d, d));
}

Matrix CanonicalDecomposition::reconstruct(std::size_t dim) const {
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix out = Matrix::Zero(d, d);
  for (std::size_t n = 0; n < mu.size(); ++n) out += mu[n] * beta[n] * alpha[n].adjoint();
  return out;
}

double op_norm(const DenseOperator& a) { return spectral_norm(a.matrix()); }

Complex inner(const Vector& x, const Vector& y) { return x.dot(y); }

DenseOperator adjoint(const DenseOperator& a) { return DenseOperator(a.matrix().adjoint()); }

bool is_psd(const DenseOperator& a, double tol) {
  require_positive_tol(tol, "is_psd");
  const double norm = op_norm(a);
  const Matrix& m = a.matrix();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol * std::max(1.0, norm)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(hermitian_part(m), Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) {
    throw ConvergenceError("is_psd: Hermitian eigensolver did not converge");
  }
  return eig.eigenvalues().minCoeff() >= -tol * norm;
}

SeriesRoot sqrt_series(const Matrix& h, double tol, int max_terms) {
  const Eigen::Index d = h.rows();
  SeriesRoot out;
  const double scale = h.norm();  // Frobenius bound on the operator norm
  if (scale == 0.0) {
    out.root = Matrix::Zero(d, d);
    out.converged = true;
    return out;
  }
  const Matrix identity = Matrix::Identity(d, d);
  const Matrix x = identity - h / scale;
  Matrix power = identity;
  Matrix root = identity;
  double coefficient = 1.0;
  for (int j = 1; j <= max_terms; ++j) {
    power = power * x;
    // Taylor coefficients of sqrt(1 - z): c_j = c_{j-1} (2j - 3) / (2j)
    coefficient *= (2.0 * j - 3.0) / (2.0 * j);
    const Matrix term = coefficient * power;
    root += term;
    out.terms = j;
    if (term.norm() < 0.25 * tol) {
      out.converged = true;
      break;
    }
  }
  out.root = std::sqrt(scale) * hermitian_part(root);
  return out;
}

DenseOperator sqrt_psd(const DenseOperator& a, double tol) {
  require_positive_tol(tol, "sqrt_psd");
  if (!is_psd(a, tol)) throw std::invalid_argument("sqrt_psd: operator is not positive semidefinite");

  const Matrix h = hermitian_part(a.matrix());
  const double target = tol * std::max(1.0, spectral_norm(h));
  auto residual = [&h](const Matrix& b) { return spectral_norm(b * b - h); };

  SeriesRoot series = sqrt_series(h, tol, kSeriesBudget);
  if (residual(series.root) <= target) return DenseOperator(std::move(series.root));

  // Coupled Newton-Schulz: Y -> sqrt(H/c), Z -> sqrt(H/c)^-1, no inverses.
  // Eigenvalues near 0 grow by about 3/2 per step until they catch up, exact
  // zeros stay put, so singular input is fine.
  const double scale = h.norm();
  const Eigen::Index d = h.rows();
  const Matrix identity = Matrix::Identity(d, d);
  Matrix y = h / scale;
  Matrix z = identity;
  int iterations = series.terms;
  double previous_step = std::numeric_limits<double>::infinity();
  while (true) {
    if (++iterations > kIterationCap) {
      throw ConvergenceError("sqrt_psd: iteration cap reached; tolerance too small for the conditioning");
    }
    const Matrix t = 0.5 * (3.0 * identity - z * y);
    Matrix next = hermitian_part(y * t);
    z = hermitian_part(t * z);
    const double step = (next - y).norm();
    y = std::move(next);
    if (!y.allFinite()) throw ConvergenceError("sqrt_psd: Newton-Schulz iterate diverged");
    if (step <= 0.5 * previous_step && step > kEps * y.norm()) {
      previous_step = step;
      continue;  // still contracting
    }
    if (residual(std::sqrt(scale) * y) <= target) break;
    previous_step = step;
  }
  return DenseOperator(std::sqrt(scale) * y);
}

DenseOperator abs_op(const DenseOperator& a, double tol) {
  return sqrt_psd(DenseOperator(hermitian_part(a.matrix().adjoint() * a.matrix())), tol);
}

Complex trace_diag(const DenseOperator& a, const OrthonormalBasis& basis) {
  if (basis.dim() != a.dim()) throw std::invalid_argument("trace_diag: dimension mismatch");
  CompensatedComplexSum sum;
  for (std::size_t n = 0; n < basis.dim(); ++n) {
    const Vector v = basis.column(n);
    sum.add(inner(v, a.matrix() * v));
  }
  return sum.value();
}

std::pair<CanonicalDecomposition, double> canonical_and_trace_norm(const DenseOperator& a) {
  Eigen::JacobiSVD<Matrix> svd(a.matrix(), Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sigma = svd.singularValues();
  CanonicalDecomposition dec;
  const double cutoff = 1e-12 * (sigma.size() > 0 ? sigma(0) : 0.0);
  CompensatedSum norm;
  for (Eigen::Index n = 0; n < sigma.size(); ++n) {
    if (!(sigma(n) > cutoff)) break;
    dec.mu.push_back(sigma(n));
    // A x = sum sigma_n u_n (v_n^* x): alpha_n = v_n, beta_n = u_n
    dec.alpha.emplace_back(svd.matrixV().col(n));
    dec.beta.emplace_back(svd.matrixU().col(n));
    norm.add(sigma(n));
  }
  return {std::move(dec), norm.value()};
}

LidskiiReport lidskii_report(const DenseOperator& a, double tol) {
  require_positive_tol(tol, "lidskii_check");
  Eigen::ComplexEigenSolver<Matrix> eig(a.matrix(), false);
  if (eig.info() != Eigen::Success) {
    throw ConvergenceError("lidskii_check: eigenvalue solver did not converge");
  }
  LidskiiReport out;
  out.trace = trace_diag(a, OrthonormalBasis::standard(a.dim()));
  CompensatedComplexSum sum;
  for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) sum.add(eig.eigenvalues()(i));
  out.eigenvalue_sum = sum.value();
  out.discrepancy = std::abs(out.trace - out.eigenvalue_sum);
  out.passed = out.discrepancy <= tol * std::max(1.0, op_norm(a));
  return out;
}

bool lidskii_check(const DenseOperator& a, double tol) { return lidskii_report(a, tol).passed; }

namespace {

Matrix gaussian_matrix(std::size_t dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  const auto d = static_cast<Eigen::Index>(dim);
  Matrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

}  // namespace

OrthonormalBasis random_orthonormal_basis(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_orthonormal_basis: dim must be at least 1");
  Eigen::HouseholderQR<Matrix> qr(gaussian_matrix(dim, seed));
  const auto d = static_cast<Eigen::Index>(dim);
  return OrthonormalBasis(qr.householderQ() * Matrix::Identity(d, d));
}

DenseOperator random_operator(std::size_t dim, std::uint64_t seed) {
  if (dim < 1) throw std::invalid_argument("random_operator: dim must be at least 1");
  return DenseOperator(gaussian_matrix(dim, seed));
}

}  // namespace spectrace::finop
