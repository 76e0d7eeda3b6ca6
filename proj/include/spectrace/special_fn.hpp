#pragma once

#include <cstdint>

namespace spectrace::special {

/// A floating-point value together with a rigorous bound on |true - value|.
struct BoundedValue {
  double value = 0.0;
  double error_bound = 0.0;
  std::int64_t terms_used = 0;
};

/// Riemann zeta for real s > 1 by direct summation of the first M terms.
/// The remainder sum_{j>M} j^-s is bracketed by the integrals over [M+1, inf)
/// and [M, inf); the midpoint of that bracket is added to the partial sum and
/// its half-width (plus summation rounding) is reported as error_bound.
BoundedValue zeta(double s, double tol);

/// Dirichlet beta, sum_{m>=0} (-1)^m (2m+1)^-s, for s > 0. Partial sum with the
/// Leibniz bound (first omitted term) as error_bound.
BoundedValue dirichlet_beta(double s, double tol);

/// Gamma(n) = (n-1)! for integer n >= 1. Throws std::overflow_error once the
/// factorial leaves the binary64 range (n >= 172).
double gamma_positive_integer(int n);

/// theta_3(q) = sum_{j in Z} q^{j^2} at q = e^{-t}, t > 0.
BoundedValue theta3(double t, double tol);

/// (1/Gamma(n)) * integral_0^inf t^{n-1} (theta_3(e^{-t})^2 - 1) dt for
/// integer n >= 2, by adaptive Gauss-Kronrod quadrature on [0,1] and [1,T].
/// The cutoff T is chosen so that the discarded tail is below tol/2.
BoundedValue mellin_theta(int n, double tol);

namespace detail {

// theta_3(e^{-t}) - 1 summed until the rigorous tail bound is below
// abs_tol; no tolerance floor. Used by the quadrature.
BoundedValue theta3_minus_one(double t, double abs_tol);

// 5 * e^{-T} * sum_{k<n} T^k / k!  ==  (1/Gamma(n)) * int_T^inf 5 e^{-t} t^{n-1} dt.
double mellin_tail_bound(int n, double cutoff);

// Smallest cutoff T >= 2 (on a 1/64 grid) with mellin_tail_bound(n, T) <= budget.
double mellin_cutoff(int n, double budget);

}  // namespace detail

}  // namespace spectrace::special
