#include "spectrace/torus_spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "spectrace/errors.hpp"
#include "spectrace/lattice.hpp"
#include "spectrace/special_fn.hpp"
#include "spectrace/summation.hpp"

namespace spectrace::torus {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

using int128 = __int128;

// base^exp in 128-bit integers; nullopt when |result| would exceed 2^126.
std::optional<int128> checked_pow(std::int64_t base, int exp) {
  const int128 limit = int128(1) << 126;
  int128 out = 1;
  const int128 b = base < 0 ? -int128(base) : int128(base);
  for (int i = 0; i < exp; ++i) {
    if (b != 0 && out > limit / b) return std::nullopt;
    out *= b;
  }
  if (base < 0 && exp % 2 == 1) out = -out;
  return out;
}

// numerator^exp / denominator^exp, rounded once per conversion when the
// integer powers fit, otherwise evaluated in long double.
double ratio_power(std::int64_t numerator, std::int64_t denominator, int exp) {
  const auto num = checked_pow(numerator, exp);
  const auto den = checked_pow(denominator, exp);
  if (num && den) return static_cast<double>(*num) / static_cast<double>(*den);
  return static_cast<double>(std::pow(static_cast<long double>(numerator) / denominator, exp));
}

// (-i)^n
std::complex<double> minus_i_power(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

double sign_power(int n) { return n % 2 == 0 ? 1.0 : -1.0; }

const char* kind_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::InvLaplaceS1: return "InvLaplaceS1";
    case OperatorKind::InvLaplaceT2: return "InvLaplaceT2";
    case OperatorKind::PPowerT2: return "PPowerT2";
  }
  return "unknown";
}

void require_power(int n, const char* where) {
  if (n < 1) throw std::invalid_argument(std::string(where) + ": power must be at least 1");
}

}  // namespace

std::complex<double> EigenRule::operator()(const Mode& mode) const {
  if (mode.is_zero()) return {0.0, 0.0};
  switch (kind) {
    case OperatorKind::InvLaplaceS1:
      return {sign_power(power) * ratio_power(1, mode.k * mode.k, power), 0.0};
    case OperatorKind::InvLaplaceT2:
      return {sign_power(power) * ratio_power(1, mode.k * mode.k + mode.m * mode.m, power), 0.0};
    case OperatorKind::PPowerT2: {
      const double magnitude = ratio_power(mode.k + mode.m, mode.k * mode.k + mode.m * mode.m, power);
      const auto phase = minus_i_power(power);
      return {phase.real() * magnitude, phase.imag() * magnitude};
    }
  }
  return {0.0, 0.0};
}

std::complex<double> eigenrule_eval(const EigenRule& rule, const Mode& mode) {
  if (mode.dim != rule.dim()) {
    throw std::invalid_argument("eigenrule_eval: mode dimension does not match the operator");
  }
  if (rule.power < 1) throw std::invalid_argument("eigenrule_eval: power must be at least 1");
  return rule(mode);
}

bool DivergenceCertificate::floors_hold() const {
  if (block_sums.size() != block_floors.size()) return false;
  for (std::size_t i = 0; i < block_sums.size(); ++i) {
    if (!(block_sums[i] >= block_floors[i])) return false;
  }
  return !block_sums.empty();
}

bool GrowthCertificate::strictly_increasing() const {
  for (std::size_t i = 1; i < partial_abs_sums.size(); ++i) {
    if (!(partial_abs_sums[i] > partial_abs_sums[i - 1])) return false;
  }
  return !partial_abs_sums.empty();
}

bool GrowthCertificate::dominates_lower_bounds() const {
  if (partial_abs_sums.size() != lower_bounds.size()) return false;
  for (std::size_t i = 0; i < lower_bounds.size(); ++i) {
    if (!(partial_abs_sums[i] >= lower_bounds[i])) return false;
  }
  return !lower_bounds.empty();
}

std::string TraceClassification::status_name() const {
  switch (status.index()) {
    case 0: return "TraceClass";
    case 1: return "NotTraceClass";
    default: return "Undetermined";
  }
}

double block_floor(int j) {
  if (j < 1) throw std::invalid_argument("block_floor: j must be at least 1");
  return 0.125;
}

DivergenceCertificate p2_divergence_certificate(int target) {
  if (target < 1 || target > 12) {
    throw std::invalid_argument("p2_divergence_certificate: target must lie in [1, 12]");
  }
  DivergenceCertificate cert;
  cert.target = target;
  cert.radius = (std::int64_t{1} << (target + 1)) - 1;
  CompensatedSum attained;
  for (int j = 1; j <= target; ++j) {
    const std::int64_t lo = std::int64_t{1} << j;
    const std::int64_t hi = (std::int64_t{1} << (j + 1)) - 1;
    CompensatedSum block;
    for (std::int64_t k = lo; k <= hi; ++k) {
      for (std::int64_t m = lo; m <= hi; ++m) {
        const auto s = static_cast<double>((k + m) * (k + m));
        const auto q = static_cast<double>(k * k + m * m);
        block.add(s / (q * q));
        ++cert.terms;
      }
    }
    cert.block_sums.push_back(block.value());
    cert.block_floors.push_back(block_floor(j));
    attained.add(block.value());
  }
  cert.attained = attained.value();
  return cert;
}

std::vector<PartialSumRow> p2_block_trajectory(int target) {
  const auto cert = p2_divergence_certificate(target);
  std::vector<PartialSumRow> rows;
  CompensatedSum running;
  for (std::size_t j = 0; j < cert.block_sums.size(); ++j) {
    running.add(cert.block_sums[j]);
    rows.push_back({static_cast<std::int64_t>(j + 1), running.value()});
  }
  return rows;
}

GrowthCertificate growth_certificate(OperatorKind kind, const std::vector<std::int64_t>& radii,
                                     int threads) {
  if (radii.empty()) throw std::invalid_argument("growth_certificate: no radii given");
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (radii[i] < 1 || (i > 0 && radii[i] <= radii[i - 1])) {
      throw std::invalid_argument("growth_certificate: radii must be positive and increasing");
    }
  }
  GrowthCertificate cert;
  if (kind == OperatorKind::InvLaplaceT2) {
    cert.series = "1/(k^2+m^2)";
    // shell r holds 8r modes with k^2+m^2 <= 2r^2, so it contributes >= 4/r
    cert.lower_bound_formula = "4*H_R";
  } else if (kind == OperatorKind::PPowerT2) {
    cert.series = "|k+m|/(k^2+m^2)";
    // the r+1 modes (r, 0..r) and the r+1 modes (-r, -r..0) each have
    // |k+m| >= r and k^2+m^2 <= 2r^2, so shell r contributes >= 1
    cert.lower_bound_formula = "R";
  } else {
    throw std::invalid_argument("growth_certificate: only torus operators at power 1 are supported");
  }

  const bool laplace = kind == OperatorKind::InvLaplaceT2;
  auto term = [laplace](std::int64_t k, std::int64_t m) {
    const auto q = static_cast<double>(k * k + m * m);
    return laplace ? 1.0 / q : static_cast<double>(k + m >= 0 ? k + m : -(k + m)) / q;
  };
  lattice::SumOptions options;
  options.threads = threads;
  CompensatedSum running;
  CompensatedSum harmonic;
  std::int64_t prev = 0;
  for (const auto radius : radii) {
    const auto acc = lattice::sum_shells(prev + 1, radius, term, options);
    running.add(acc.abs_sum);
    cert.terms += acc.terms;
    for (std::int64_t r = prev + 1; r <= radius; ++r) harmonic.add(1.0 / static_cast<double>(r));
    cert.radii.push_back(radius);
    cert.partial_abs_sums.push_back(running.value());
    if (kind == OperatorKind::InvLaplaceT2) {
      // rounded down so the stated bound stays a bound
      cert.lower_bounds.push_back(4.0 * harmonic.value() * (1.0 - 4.0 * kEps));
    } else {
      cert.lower_bounds.push_back(static_cast<double>(radius));
    }
    prev = radius;
  }
  return cert;
}

double p_power_tail_bound(int n, std::int64_t radius) {
  if (n < 3) throw std::invalid_argument("p_power_tail_bound: requires n >= 3");
  if (radius < 1) throw std::invalid_argument("p_power_tail_bound: radius must be at least 1");
  const double half = 0.5 * n;
  return std::pow(2.0, half) * 4.0 * std::pow(static_cast<double>(radius), 2.0 - n) / (half - 1.0);
}

TraceClassification trace_inv_laplacian_s1(int n, double tol, std::int64_t direct_cap) {
  require_power(n, "trace_inv_laplacian_s1");
  require_tolerance(tol, "trace_inv_laplacian_s1");
  TraceClassification out;
  out.operator_name = kind_name(OperatorKind::InvLaplaceS1);
  out.power = n;

  const auto z = special::zeta(2.0 * n, std::max(kMinTolerance, 0.5 * tol));
  TraceClass tc;
  tc.value = {2.0 * sign_power(n) * z.value, 0.0};
  tc.error_bound = 2.0 * z.error_bound;
  tc.terms = z.terms_used;

  // direct route: sum over 0 < |k| <= K, tail 2 K^{1-2n} / (2n-1)
  const double p = 2.0 * n;
  auto direct_tail = [p](std::int64_t cutoff) {
    return 2.0 * std::pow(static_cast<double>(cutoff), 1.0 - p) / (p - 1.0);
  };
  std::int64_t cutoff = std::max<std::int64_t>(
      1, static_cast<std::int64_t>(std::ceil(std::pow(2.0 / ((p - 1.0) * tol), 1.0 / (p - 1.0)))));
  while (cutoff > 1 && direct_tail(cutoff - 1) <= tol) --cutoff;
  cutoff = std::min(cutoff, std::max<std::int64_t>(1, direct_cap));

  const EigenRule rule{OperatorKind::InvLaplaceS1, n};
  CompensatedSum direct;
  for (std::int64_t k = cutoff; k >= 1; --k) {
    direct.add(rule(Mode::circle(k)).real());
    direct.add(rule(Mode::circle(-k)).real());
  }
  CrossCheck check;
  check.route = "direct eigenvalue sum over 0 < |k| <= K";
  check.value = {direct.value(), 0.0};
  check.bound = direct_tail(cutoff) + 4.0 * kEps * std::abs(direct.value());
  check.terms = 2 * cutoff;
  check.radius = cutoff;
  check.agrees = std::abs(check.value - tc.value) <= check.bound + tc.error_bound;
  tc.radius = cutoff;
  tc.cross_check = check;
  out.status = tc;
  return out;
}

TraceClassification trace_inv_laplacian_t2(int n, double tol, std::int64_t direct_cap, int threads) {
  require_power(n, "trace_inv_laplacian_t2");
  require_tolerance(tol, "trace_inv_laplacian_t2");
  TraceClassification out;
  out.operator_name = kind_name(OperatorKind::InvLaplaceT2);
  out.power = n;

  if (n == 1) {
    out.extension = true;
    out.notes.push_back("the lattice-sum closed form requires n >= 2");
    out.notes.push_back("sum 1/(k^2+m^2) diverges: each shell r contributes at least 4/r");
    out.status = NotTraceClass{growth_certificate(OperatorKind::InvLaplaceT2, {100, 1000, 10000}, threads)};
    return out;
  }

  const auto closed = lattice::lattice_sum_closed(n, tol);
  TraceClass tc;
  tc.value = {sign_power(n) * closed.value, 0.0};
  tc.error_bound = closed.error_bound;
  tc.terms = closed.terms_used;

  const std::int64_t radius =
      std::min(lattice::radius_for_tail(n, tol), std::max<std::int64_t>(1, direct_cap));
  lattice::SumOptions options;
  options.threads = threads;
  const auto direct = lattice::lattice_sum_direct(n, radius, options);
  CrossCheck check;
  check.route = "shell sum over 1 <= max(|k|,|m|) <= R";
  check.value = sign_power(n) * direct.value;
  check.bound = direct.tail_bound + 4.0 * kEps * direct.abs_sum;
  check.terms = direct.terms;
  check.radius = radius;
  // the omitted shells are all positive, so the closed form sits in
  // [direct, direct + tail] up to the two error bounds
  const double gap = closed.value - direct.value.real();
  check.agrees = gap >= -(closed.error_bound + 4.0 * kEps * direct.abs_sum) &&
                 gap <= check.bound + closed.error_bound;
  tc.radius = radius;
  tc.cross_check = check;
  out.status = tc;
  return out;
}

TraceClassification trace_p_power_t2(int n, double tol, std::int64_t max_radius, int threads,
                                     int certificate_target) {
  require_power(n, "trace_p_power_t2");
  require_tolerance(tol, "trace_p_power_t2");
  if (max_radius < 1) throw std::invalid_argument("trace_p_power_t2: max_radius must be at least 1");
  TraceClassification out;
  out.operator_name = kind_name(OperatorKind::PPowerT2);
  out.power = n;
  const EigenRule rule{OperatorKind::PPowerT2, n};
  auto term = [&rule](std::int64_t k, std::int64_t m) { return rule(Mode::torus(k, m)); };
  lattice::SumOptions options;
  options.threads = threads;

  if (n == 1) {
    out.extension = true;
    out.notes.push_back("sum |k+m|/(k^2+m^2) diverges: each shell r contributes at least 1");
    out.status = NotTraceClass{growth_certificate(OperatorKind::PPowerT2, {100, 1000, 10000}, threads)};
    return out;
  }

  if (n == 2) {
    auto cert = p2_divergence_certificate(certificate_target);
    if (!cert.meets_target()) {
      char buf[256];
      std::snprintf(buf, sizeof buf,
                    "dyadic blocks j=1..%d sum to %.6f < %d; divergence rests on the per-block floor 1/8",
                    cert.target, cert.attained, cert.target);
      out.notes.emplace_back(buf);
    }
    if (!cert.floors_hold()) {
      out.status = Undetermined{"a dyadic block fell below its proven floor"};
      return out;
    }
    out.status = NotTraceClass{std::move(cert)};
    return out;
  }

  if (n % 2 == 1) {
    out.extension = true;
    out.notes.push_back(
        "odd power: absolutely convergent and lambda(-k,-m) = -lambda(k,m), so the trace is 0");
    const std::int64_t radius = std::min<std::int64_t>(200, max_radius);
    const auto acc = lattice::sum_shells(1, radius, term, options);
    TraceClass tc;
    tc.value = {0.0, 0.0};
    tc.error_bound = 0.0;
    tc.terms = acc.terms;
    tc.radius = radius;
    CrossCheck check;
    check.route = "symmetric shell partial sum";
    check.value = acc.value();
    check.bound = 1e-12 * std::max(1.0, acc.abs_sum.value());
    check.terms = acc.terms;
    check.radius = radius;
    check.agrees = std::abs(check.value) <= check.bound;
    tc.cross_check = check;
    out.status = tc;
    return out;
  }

  // even n > 2
  const double half = 0.5 * n;
  const double budget = 0.5 * tol;
  auto radius = static_cast<std::int64_t>(
      std::ceil(std::pow(std::pow(2.0, half) * 4.0 / ((half - 1.0) * budget), 1.0 / (n - 2.0))));
  radius = std::max<std::int64_t>(1, radius);
  while (radius > 1 && p_power_tail_bound(n, radius - 1) <= budget) --radius;
  if (radius > max_radius) {
    radius = max_radius;
    out.notes.push_back("radius capped at max_radius; error_bound exceeds the requested tolerance");
  }
  const auto acc = lattice::sum_shells(1, radius, term, options);
  TraceClass tc;
  tc.value = acc.value();
  tc.error_bound = p_power_tail_bound(n, radius) + 4.0 * kEps * acc.abs_sum.value();
  tc.terms = acc.terms;
  tc.radius = radius;
  out.status = tc;
  return out;
}

void write_partial_sum_csv(std::ostream& os, const std::vector<PartialSumRow>& rows,
                           const char* index_name) {
  os << index_name << ",partial_sum\n";
  char buf[96];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(row.index), row.partial_sum);
    os << buf;
  }
}

}  // namespace spectrace::torus
