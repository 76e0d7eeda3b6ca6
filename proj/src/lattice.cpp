#include "spectrace/lattice.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "spectrace/errors.hpp"

namespace spectrace::lattice {

namespace {

void require_power(double n, const char* where) {
  if (!std::isfinite(n) || n < 2.0) {
    throw std::invalid_argument(std::string(where) + ": power must satisfy n >= 2");
  }
}

void require_radius(std::int64_t radius, const char* where) {
  if (radius < 1) throw std::invalid_argument(std::string(where) + ": radius must be at least 1");
}

// (k^2 + m^2)^-n with repeated multiplication when n is a small integer.
struct InversePowerTerm {
  double power;
  int integer_power;  // 0 when power is not a small integer

  explicit InversePowerTerm(double n)
      : power(n), integer_power(n == std::floor(n) && n <= 64.0 ? static_cast<int>(n) : 0) {}

  double operator()(std::int64_t k, std::int64_t m) const {
    const double q = static_cast<double>(k * k + m * m);
    if (integer_power > 0) {
      const double inv = 1.0 / q;
      double out = inv;
      for (int i = 1; i < integer_power; ++i) out *= inv;
      return out;
    }
    return std::pow(q, -power);
  }
};

}  // namespace

std::vector<Mode2D> shell_modes(std::int64_t r) {
  if (r < 1) throw std::invalid_argument("shell_modes: r must be at least 1");
  std::vector<Mode2D> modes;
  modes.reserve(static_cast<std::size_t>(8 * r));
  for_each_shell_mode(r, [&](std::int64_t k, std::int64_t m) { modes.push_back({k, m}); });
  return modes;
}

double tail_bound(double n, std::int64_t radius) {
  require_power(n, "tail_bound");
  require_radius(radius, "tail_bound");
  return 4.0 * std::pow(static_cast<double>(radius), 2.0 - 2.0 * n) / (n - 1.0);
}

std::int64_t radius_for_tail(double n, double tol) {
  require_power(n, "radius_for_tail");
  if (!(tol > 0.0)) throw std::invalid_argument("radius_for_tail: tol must be positive");
  double r = std::ceil(std::pow(4.0 / ((n - 1.0) * tol), 1.0 / (2.0 * n - 2.0)));
  auto radius = std::max<std::int64_t>(1, static_cast<std::int64_t>(r));
  while (tail_bound(n, radius) > tol) ++radius;
  while (radius > 1 && tail_bound(n, radius - 1) <= tol) --radius;
  return radius;
}

SumOutcome lattice_sum_direct(double n, std::int64_t radius, const SumOptions& options) {
  require_power(n, "lattice_sum_direct");
  require_radius(radius, "lattice_sum_direct");
  const InversePowerTerm term(n);
  const ShellAccumulation acc = sum_shells(1, radius, term, options);
  SumOutcome out;
  out.value = acc.value();
  out.abs_sum = acc.abs_sum.value();
  out.tail_bound = tail_bound(n, radius);
  out.terms = acc.terms;
  out.radius = radius;
  return out;
}

special::BoundedValue lattice_sum_closed(int n, double tol) {
  if (n < 2) throw std::invalid_argument("lattice_sum_closed: n must be at least 2");
  require_tolerance(tol, "lattice_sum_closed");
  const double part = std::max(kMinTolerance, tol / 16.0);
  const auto z = special::zeta(n, part);
  const auto b = special::dirichlet_beta(n, part);
  special::BoundedValue out;
  out.value = 4.0 * z.value * b.value;
  out.error_bound = 4.0 * (std::abs(z.value) * b.error_bound + std::abs(b.value) * z.error_bound +
                           z.error_bound * b.error_bound) +
                    2.0 * std::numeric_limits<double>::epsilon() * std::abs(out.value);
  out.terms_used = z.terms_used + b.terms_used;
  return out;
}

std::vector<ShellRow> shell_partial_sums(double n, std::int64_t radius) {
  require_power(n, "shell_partial_sums");
  require_radius(radius, "shell_partial_sums");
  const InversePowerTerm term(n);
  std::vector<ShellRow> rows;
  rows.reserve(static_cast<std::size_t>(radius));
  CompensatedSum cumulative;
  for (std::int64_t r = 1; r <= radius; ++r) {
    CompensatedSum shell;
    for_each_shell_mode(r, [&](std::int64_t k, std::int64_t m) { shell.add(term(k, m)); });
    cumulative.add(shell.value());
    rows.push_back({r, shell.value(), cumulative.value(), tail_bound(n, r)});
  }
  return rows;
}

void write_shell_csv(std::ostream& os, const std::vector<ShellRow>& rows) {
  os << "r,shell_sum,cumulative,tail_bound\n";
  char buf[128];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g\n", static_cast<long long>(row.r),
                  row.shell_sum, row.cumulative, row.tail_bound);
    os << buf;
  }
}

}  // namespace spectrace::lattice
