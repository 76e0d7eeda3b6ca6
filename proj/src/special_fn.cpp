#include "spectrace/special_fn.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "quadrature.hpp"
#include "spectrace/errors.hpp"
#include "spectrace/summation.hpp"

namespace spectrace {

void require_tolerance(double tol, const char* where) {
  if (!std::isfinite(tol) || tol <= 0.0) {
    throw std::invalid_argument(std::string(where) + ": tolerance must be positive and finite");
  }
  if (tol < kMinTolerance) {
    throw std::invalid_argument(std::string(where) +
                                ": tolerance below 1e-13 is not attainable in binary64");
  }
}

}  // namespace spectrace

namespace spectrace::special {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr std::int64_t kMaxSeriesTerms = 2'000'000'000;

// Half-width of the integral bracket for sum_{j>M} j^-s:
// (M^{1-s} - (M+1)^{1-s}) / (2(s-1)).
double zeta_tail_half_width(double s, double m) {
  const double head = std::pow(m, 1.0 - s);
  return -std::expm1((1.0 - s) * std::log1p(1.0 / m)) * head / (2.0 * (s - 1.0));
}

double zeta_tail_midpoint(double s, double m) {
  return 0.5 * (std::pow(m, 1.0 - s) + std::pow(m + 1.0, 1.0 - s)) / (s - 1.0);
}

}  // namespace

BoundedValue zeta(double s, double tol) {
  if (!std::isfinite(s) || s <= 1.0) {
    throw std::invalid_argument("zeta: s must exceed 1 (the series diverges otherwise)");
  }
  require_tolerance(tol, "zeta");

  const double rounding = 4.0 * kEps * (1.0 + 1.0 / (s - 1.0));
  const double budget = tol - rounding;
  if (budget <= 0.0) {
    throw ConvergenceError("zeta: tolerance is below the summation rounding floor for this s");
  }

  double m = std::max(1.0, std::floor(std::pow(2.0 * budget, -1.0 / s)));
  while (zeta_tail_half_width(s, m) > budget) {
    m = std::ceil(m * 1.01) + 1.0;
    if (m > static_cast<double>(kMaxSeriesTerms)) {
      throw ConvergenceError("zeta: term cap reached before meeting the tolerance");
    }
  }
  while (m > 1.0 && zeta_tail_half_width(s, m - 1.0) <= budget) m -= 1.0;

  const auto terms = static_cast<std::int64_t>(m);
  CompensatedSum sum;
  for (std::int64_t j = terms; j >= 1; --j) sum.add(std::pow(static_cast<double>(j), -s));
  sum.add(zeta_tail_midpoint(s, m));

  BoundedValue out;
  out.value = sum.value();
  out.error_bound = zeta_tail_half_width(s, m) + 4.0 * kEps * out.value;
  out.terms_used = terms;
  return out;
}

BoundedValue dirichlet_beta(double s, double tol) {
  if (!std::isfinite(s) || s <= 0.0) {
    throw std::invalid_argument("dirichlet_beta: s must be positive");
  }
  require_tolerance(tol, "dirichlet_beta");

  const double budget = tol - 4.0 * kEps;
  auto term = [s](double m) { return std::pow(2.0 * m + 1.0, -s); };

  // smallest count M with the first omitted term a_M <= budget
  double m = std::max(1.0, std::ceil(0.5 * (std::pow(budget, -1.0 / s) - 1.0)));
  while (term(m) > budget) m += 1.0;
  while (m > 1.0 && term(m - 1.0) <= budget) m -= 1.0;
  if (m > static_cast<double>(kMaxSeriesTerms)) {
    throw ConvergenceError("dirichlet_beta: term cap reached before meeting the tolerance");
  }

  const auto terms = static_cast<std::int64_t>(m);
  CompensatedSum sum;
  for (std::int64_t j = terms - 1; j >= 0; --j) {
    const double a = term(static_cast<double>(j));
    sum.add(j % 2 == 0 ? a : -a);
  }

  BoundedValue out;
  out.value = sum.value();
  out.error_bound = term(m) + 4.0 * kEps;
  out.terms_used = terms;
  return out;
}

double gamma_positive_integer(int n) {
  if (n < 1) throw std::invalid_argument("gamma_positive_integer: n must be at least 1");
  double f = 1.0;
  for (int k = 2; k < n; ++k) {
    f *= static_cast<double>(k);
    if (std::isinf(f)) {
      throw std::overflow_error("gamma_positive_integer: (n-1)! exceeds the binary64 range");
    }
  }
  return f;
}

namespace detail {

BoundedValue theta3_minus_one(double t, double abs_tol) {
  CompensatedSum sum;
  std::int64_t j = 1;
  double tail = 0.0;
  constexpr std::int64_t kMaxTerms = 100'000'000;
  for (;; ++j) {
    const double jj = static_cast<double>(j);
    sum.add(std::exp(-jj * jj * t));
    // 2 * sum_{i>j} e^{-i^2 t}: consecutive ratios beyond j are at most e^{-(2j+3)t}
    const double next = jj + 1.0;
    tail = 2.0 * std::exp(-next * next * t) / -std::expm1(-(2.0 * jj + 3.0) * t);
    if (tail <= abs_tol) break;
    if (j >= kMaxTerms) throw ConvergenceError("theta3: term cap reached (t too small)");
  }
  BoundedValue out;
  out.value = 2.0 * sum.value();
  out.error_bound = tail + 2.0 * kEps * out.value;
  out.terms_used = j;
  return out;
}

double mellin_tail_bound(int n, double cutoff) {
  const double log_t = std::log(cutoff);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    total += std::exp(-cutoff + k * log_t - std::lgamma(k + 1.0));
  }
  return 5.0 * total;
}

double mellin_cutoff(int n, double budget) {
  // theta_3^2 - 1 <= 5 e^{-t} holds for every t >= 2.
  double cutoff = 2.0;
  while (mellin_tail_bound(n, cutoff) > budget) cutoff += 1.0 / 64.0;
  return cutoff;
}

}  // namespace detail

BoundedValue theta3(double t, double tol) {
  if (!std::isfinite(t) || t <= 0.0) {
    throw std::invalid_argument("theta3: t must be positive (the series diverges at q = 1)");
  }
  require_tolerance(tol, "theta3");
  const BoundedValue shifted = detail::theta3_minus_one(t, 0.5 * tol);
  BoundedValue out;
  out.value = 1.0 + shifted.value;
  out.error_bound = shifted.error_bound + kEps * out.value;
  out.terms_used = shifted.terms_used;
  if (out.error_bound > tol) {
    throw ConvergenceError("theta3: rounding in the sum exceeds the requested tolerance");
  }
  return out;
}

BoundedValue mellin_theta(int n, double tol) {
  if (n < 2) {
    throw std::invalid_argument("mellin_theta: n must be at least 2 (the integral diverges at t = 0)");
  }
  require_tolerance(tol, "mellin_theta");
  const double log_gamma = std::log(gamma_positive_integer(n));

  // theta_3^2 - 1 = S (2 + S) with S = theta_3 - 1, which avoids cancellation
  // for large t.
  auto integrand = [n, log_gamma](double t) {
    const double s = detail::theta3_minus_one(t, 1e-18).value;
    return std::exp((n - 1) * std::log(t) - log_gamma) * s * (2.0 + s);
  };

  const double cutoff = detail::mellin_cutoff(n, 0.5 * tol);
  const double tail = detail::mellin_tail_bound(n, cutoff);

  const auto near = spectrace::detail::integrate_adaptive(integrand, 0.0, 1.0, 0.2 * tol);
  const auto far = spectrace::detail::integrate_adaptive(integrand, 1.0, cutoff, 0.2 * tol);

  BoundedValue out;
  out.value = near.value + far.value;
  out.error_bound = tail + near.error + far.error + 8.0 * kEps * std::abs(out.value);
  out.terms_used = near.evaluations + far.evaluations;
  if (out.error_bound > tol) {
    throw ConvergenceError("mellin_theta: error budget exceeded");
  }
  return out;
}

}  // namespace spectrace::special
