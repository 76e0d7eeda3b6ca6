#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace spectrace::torus {

/// Fourier mode: k on the circle (dim 1) or (k, m) on the square torus (dim 2).
struct Mode {
  int dim = 1;
  std::int64_t k = 0;
  std::int64_t m = 0;

  static Mode circle(std::int64_t k) { return {1, k, 0}; }
  static Mode torus(std::int64_t k, std::int64_t m) { return {2, k, m}; }
  [[nodiscard]] bool is_zero() const { return k == 0 && m == 0; }
};

enum class OperatorKind {
  InvLaplaceS1,  // D^-n on S^1:    (-1)^n / k^{2n}
  InvLaplaceT2,  // D^-n on T^2:    (-1)^n / (k^2+m^2)^n
  PPowerT2,      // (d* D^-1)^n:    (-i)^n (k+m)^n / (k^2+m^2)^n
};

/// Diagonal operator in the Fourier eigenbasis. The constant mode lies in the
/// kernel of D^-1, so every rule evaluates to 0 there.
struct EigenRule {
  OperatorKind kind = OperatorKind::InvLaplaceS1;
  int power = 1;

  [[nodiscard]] int dim() const { return kind == OperatorKind::InvLaplaceS1 ? 1 : 2; }
  [[nodiscard]] std::complex<double> operator()(const Mode& mode) const;
};

/// Throws std::invalid_argument if mode.dim does not match the rule.
std::complex<double> eigenrule_eval(const EigenRule& rule, const Mode& mode);

/// Dyadic-block witness for the divergence of sum (k+m)^2/(k^2+m^2)^2: the
/// blocks 2^j <= k, m <= 2^{j+1}-1 for j = 1..target are pairwise disjoint.
struct DivergenceCertificate {
  int target = 0;
  std::int64_t radius = 0;              // 2^{target+1} - 1
  double attained = 0.0;                // sum over all blocks
  std::vector<double> block_sums;       // block j at index j-1
  std::vector<double> block_floors;     // proven lower bound per block, see block_floor()
  std::int64_t terms = 0;

  /// attained >= target, the inequality the dyadic construction aims for.
  [[nodiscard]] bool meets_target() const { return attained >= static_cast<double>(target); }
  /// Every block sum is at least its proven floor, so partial sums are
  /// unbounded (they grow at least linearly in the number of blocks).
  [[nodiscard]] bool floors_hold() const;
};

/// Unbounded-growth witness: partial absolute sums at increasing radii next
/// to a closed-form lower bound that tends to infinity with the radius.
struct GrowthCertificate {
  std::string series;               // human-readable summand
  std::string lower_bound_formula;  // e.g. "4*H_R" or "R"
  std::vector<std::int64_t> radii;
  std::vector<double> partial_abs_sums;
  std::vector<double> lower_bounds;
  std::int64_t terms = 0;

  [[nodiscard]] bool strictly_increasing() const;
  [[nodiscard]] bool dominates_lower_bounds() const;
};

using Certificate = std::variant<DivergenceCertificate, GrowthCertificate>;

struct CrossCheck {
  std::string route;
  std::complex<double> value;
  double bound = 0.0;
  std::int64_t terms = 0;
  std::int64_t radius = 0;
  bool agrees = false;
};

struct TraceClass {
  std::complex<double> value;
  double error_bound = 0.0;
  std::int64_t terms = 0;
  std::int64_t radius = 0;
  std::optional<CrossCheck> cross_check;
};

struct NotTraceClass {
  Certificate certificate;
};

struct Undetermined {
  std::string reason;
};

struct TraceClassification {
  std::string operator_name;  // "InvLaplaceS1", "InvLaplaceT2", "PPowerT2"
  int power = 0;
  std::variant<TraceClass, NotTraceClass, Undetermined> status;
  bool extension = false;  // result goes beyond what the source theorems cover
  std::vector<std::string> notes;

  [[nodiscard]] std::string status_name() const;
};

/// Tr(D^-n) on S^1 = 2 (-1)^n zeta(2n), cross-checked by direct summation over
/// |k| <= min(K(tol), direct_cap).
TraceClassification trace_inv_laplacian_s1(int n, double tol, std::int64_t direct_cap = 1'000'000);

/// Tr(D^-n) on T^2 = 4 (-1)^n zeta(n) beta(n) for n >= 2, cross-checked against
/// the shell sum at radius min(R(tol), direct_cap). n = 1 is not trace class.
TraceClassification trace_inv_laplacian_t2(int n, double tol, std::int64_t direct_cap = 2000,
                                           int threads = 1);

/// Tr(P^n), P = d* D^-1 on T^2. Even n > 2: direct shell summation at radius
/// min(R(tol), max_radius). Odd n >= 3: 0 by the (k,m) -> (-k,-m) symmetry.
/// n = 2: not trace class (dyadic certificate). n = 1: not trace class
/// (growth certificate).
TraceClassification trace_p_power_t2(int n, double tol, std::int64_t max_radius = 2000,
                                     int threads = 1, int certificate_target = 5);

/// Sums (k+m)^2/(k^2+m^2)^2 over the dyadic blocks j = 1..target, 1 <= target <= 12.
DivergenceCertificate p2_divergence_certificate(int target);

/// Proven lower bound for dyadic block j: (k+m)^2 >= k^2+m^2 for k, m >= 0 and
/// k^2+m^2 <= 2(2^{j+1}-1)^2 < 2^{2j+3}, times the 2^{2j} block points gives 1/8.
double block_floor(int j);

/// Partial absolute sums of the eigenvalues at the given radii, with the
/// matching closed-form lower bounds. Supports InvLaplaceT2 and PPowerT2 at power 1.
GrowthCertificate growth_certificate(OperatorKind kind, const std::vector<std::int64_t>& radii,
                                     int threads = 1);

/// Upper bound on sum_{shells r > R} |(k+m)^n / (k^2+m^2)^n|, using
/// |k+m|^n <= 2^{n/2} (k^2+m^2)^{n/2}. Requires n >= 3.
double p_power_tail_bound(int n, std::int64_t radius);

struct PartialSumRow {
  std::int64_t index = 0;  // radius or block index
  double partial_sum = 0.0;
};

/// Cumulative sums of (k+m)^2/(k^2+m^2)^2 after each dyadic block.
std::vector<PartialSumRow> p2_block_trajectory(int target);

void write_partial_sum_csv(std::ostream& os, const std::vector<PartialSumRow>& rows,
                           const char* index_name);

}  // namespace spectrace::torus
