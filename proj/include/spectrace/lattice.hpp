#pragma once

#include <algorithm>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <thread>
#include <type_traits>
#include <vector>

#include "spectrace/special_fn.hpp"
#include "spectrace/summation.hpp"

namespace spectrace::lattice {

/// A nonzero point (k, m) of Z^2, i.e. a Fourier mode on the square torus.
struct Mode2D {
  std::int64_t k = 0;
  std::int64_t m = 0;
  friend bool operator==(const Mode2D&, const Mode2D&) = default;
};

struct SumOutcome {
  std::complex<double> value;
  double abs_sum = 0.0;     // sum of |term|
  double tail_bound = 0.0;  // rigorous bound on the discarded shells r > radius
  std::int64_t terms = 0;
  std::int64_t radius = 0;  // sup-norm cutoff R
};

enum class ShellOrder { Forward, Reverse };

struct SumOptions {
  int threads = 1;
  ShellOrder order = ShellOrder::Forward;
};

/// The 8r modes with max(|k|, |m|) = r, counterclockwise from (r, -r+1):
/// up the right edge to (r, r), left along the top to (-r, r), down the left
/// edge to (-r, -r), right along the bottom to (r, -r).
std::vector<Mode2D> shell_modes(std::int64_t r);

/// Calls visit(k, m) for every mode of shell r in shell_modes order.
template <class Visitor>
void for_each_shell_mode(std::int64_t r, Visitor&& visit) {
  for (std::int64_t m = -r + 1; m <= r; ++m) visit(r, m);
  for (std::int64_t k = r - 1; k >= -r; --k) visit(k, r);
  for (std::int64_t m = r - 1; m >= -r; --m) visit(-r, m);
  for (std::int64_t k = -r + 1; k <= r; ++k) visit(k, -r);
}

template <class Visitor>
void for_each_shell_mode_reversed(std::int64_t r, Visitor&& visit) {
  for (std::int64_t k = r; k >= -r + 1; --k) visit(k, -r);
  for (std::int64_t m = -r; m <= r - 1; ++m) visit(-r, m);
  for (std::int64_t k = -r; k <= r - 1; ++k) visit(k, r);
  for (std::int64_t m = r; m >= -r + 1; --m) visit(r, m);
}

struct ShellAccumulation {
  CompensatedSum re;
  CompensatedSum im;
  CompensatedSum abs_sum;
  std::int64_t terms = 0;

  [[nodiscard]] std::complex<double> value() const { return {re.value(), im.value()}; }

  void merge(const ShellAccumulation& other) {
    re.add(other.re);
    im.add(other.im);
    abs_sum.add(other.abs_sum);
    terms += other.terms;
  }
};

namespace detail {

inline constexpr std::int64_t kShellsPerChunk = 64;

template <class Term>
ShellAccumulation accumulate_chunk(std::int64_t first, std::int64_t last, const Term& term,
                                   ShellOrder order) {
  ShellAccumulation acc;
  auto visit = [&](std::int64_t k, std::int64_t m) {
    const auto t = term(k, m);
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(t)>>) {
      acc.re.add(t);
      acc.abs_sum.add(std::abs(t));
    } else {
      acc.re.add(t.real());
      acc.im.add(t.imag());
      acc.abs_sum.add(std::abs(t));
    }
  };
  if (order == ShellOrder::Forward) {
    for (std::int64_t r = first; r <= last; ++r) for_each_shell_mode(r, visit);
  } else {
    for (std::int64_t r = last; r >= first; --r) for_each_shell_mode_reversed(r, visit);
  }
  // every shell r holds exactly 8r modes
  acc.terms = 4 * (last - first + 1) * (first + last);
  return acc;
}

// Fixed-shape pairwise reduction over chunks [lo, hi).
inline ShellAccumulation reduce_chunks(const std::vector<ShellAccumulation>& chunks, std::size_t lo,
                                       std::size_t hi, ShellOrder order) {
  if (hi - lo == 1) return chunks[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  ShellAccumulation left = reduce_chunks(chunks, lo, mid, order);
  ShellAccumulation right = reduce_chunks(chunks, mid, hi, order);
  if (order == ShellOrder::Forward) {
    left.merge(right);
    return left;
  }
  right.merge(left);
  return right;
}

}  // namespace detail

/// Sums term(k, m) over the shells first..last. Shells are grouped in fixed
/// chunks of 64 and the chunk results are combined by a fixed pairwise tree,
/// so the result is bit-identical for any thread count.
template <class Term>
ShellAccumulation sum_shells(std::int64_t first, std::int64_t last, const Term& term,
                             const SumOptions& options = {}) {
  if (last < first) return {};
  const std::int64_t count = last - first + 1;
  const std::int64_t n_chunks = (count + detail::kShellsPerChunk - 1) / detail::kShellsPerChunk;
  std::vector<ShellAccumulation> chunks(static_cast<std::size_t>(n_chunks));

  auto work = [&](std::int64_t worker, std::int64_t stride) {
    for (std::int64_t c = worker; c < n_chunks; c += stride) {
      const std::int64_t lo = first + c * detail::kShellsPerChunk;
      const std::int64_t hi = std::min(last, lo + detail::kShellsPerChunk - 1);
      chunks[static_cast<std::size_t>(c)] = detail::accumulate_chunk(lo, hi, term, options.order);
    }
  };

  const std::int64_t threads = std::max<std::int64_t>(1, std::min<std::int64_t>(options.threads, n_chunks));
  if (threads == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (std::int64_t w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }
  return detail::reduce_chunks(chunks, 0, chunks.size(), options.order);
}

/// Rigorous bound 4 R^{2-2n} / (n-1) on sum over shells r > R of (k^2+m^2)^-n.
double tail_bound(double n, std::int64_t radius);

/// Smallest R with tail_bound(n, R) <= tol.
std::int64_t radius_for_tail(double n, double tol);

/// sum over 1 <= max(|k|,|m|) <= R of (k^2 + m^2)^-n, for real n >= 2.
SumOutcome lattice_sum_direct(double n, std::int64_t radius, const SumOptions& options = {});

/// 4 zeta(n) beta(n) for integer n >= 2 with the propagated error bound.
special::BoundedValue lattice_sum_closed(int n, double tol);

struct ShellRow {
  std::int64_t r = 0;
  double shell_sum = 0.0;
  double cumulative = 0.0;
  double tail_bound = 0.0;
};

/// Per-shell partial sums of (k^2 + m^2)^-n for r = 1..R.
std::vector<ShellRow> shell_partial_sums(double n, std::int64_t radius);

/// CSV with header r,shell_sum,cumulative,tail_bound; 17 significant digits.
void write_shell_csv(std::ostream& os, const std::vector<ShellRow>& rows);

}  // namespace spectrace::lattice
