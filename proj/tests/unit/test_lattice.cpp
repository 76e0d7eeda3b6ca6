#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "oracles.hpp"
#include "spectrace/lattice.hpp"

using namespace spectrace::lattice;

namespace {

double closed_reference(int n) {
  // 4 zeta(n) beta(n), 30-digit mpmath values
  switch (n) {
    case 2: return 6.02681203969194012;
    case 3: return 4.65891361560384344;
    case 4: return 4.28143066080578059;
    case 5: return 4.13177480174588;
    case 6: return 4.06402192772130;
    default: return 0.0;
  }
}

double inv_pow(std::int64_t k, std::int64_t m, int n) {
  return std::pow(static_cast<double>(k * k + m * m), -n);
}

}  // namespace

TEST_CASE("each shell holds 8r distinct modes on its boundary") {
  CHECK_THROWS_AS(shell_modes(0), std::invalid_argument);
  for (std::int64_t r : {1, 2, 3, 17, 100}) {
    const auto modes = shell_modes(r);
    CHECK(modes.size() == static_cast<std::size_t>(8 * r));
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    for (const auto& p : modes) {
      CHECK(std::max(std::abs(p.k), std::abs(p.m)) == r);
      seen.emplace(p.k, p.m);
    }
    CHECK(seen.size() == modes.size());
  }
  const auto first = shell_modes(1);
  CHECK(first.front() == Mode2D{1, 0});
  CHECK(first.back() == Mode2D{1, -1});
}

TEST_CASE("shells 1..R cover the punctured square exactly") {
  const std::int64_t radius = 20;
  std::set<std::pair<std::int64_t, std::int64_t>> from_shells;
  for (std::int64_t r = 1; r <= radius; ++r)
    for (const auto& p : shell_modes(r)) from_shells.emplace(p.k, p.m);
  std::set<std::pair<std::int64_t, std::int64_t>> square;
  for (std::int64_t k = -radius; k <= radius; ++k)
    for (std::int64_t m = -radius; m <= radius; ++m)
      if (k != 0 || m != 0) square.emplace(k, m);
  CHECK(from_shells == square);
}

TEST_CASE("reversed traversal visits the same modes backwards") {
  for (std::int64_t r : {1, 4, 9}) {
    std::vector<Mode2D> forward;
    std::vector<Mode2D> backward;
    for_each_shell_mode(r, [&](std::int64_t k, std::int64_t m) { forward.push_back({k, m}); });
    for_each_shell_mode_reversed(r, [&](std::int64_t k, std::int64_t m) { backward.push_back({k, m}); });
    std::reverse(backward.begin(), backward.end());
    CHECK(forward == backward);
  }
}

TEST_CASE("lattice_sum_direct small radii by hand") {
  const auto one = lattice_sum_direct(2.0, 1);
  CHECK(one.value.real() == 5.0);
  CHECK(one.value.imag() == 0.0);
  CHECK(one.terms == 8);
  CHECK(one.radius == 1);
  CHECK(one.abs_sum == 5.0);
  // n = 3 at R = 1: four 1s and four 1/8s
  CHECK(lattice_sum_direct(3.0, 1).value.real() == 4.5);
  CHECK_THROWS_AS(lattice_sum_direct(2.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(lattice_sum_direct(1.5, 10), std::invalid_argument);
}

TEST_CASE("lattice_sum_direct matches a row-major square sum") {
  for (int n : {2, 3, 4}) {
    for (std::int64_t radius : {5, 40}) {
      const double brute = oracle::square_sum(radius, [n](auto k, auto m) { return inv_pow(k, m, n); });
      const auto s = lattice_sum_direct(n, radius);
      CHECK(std::abs(s.value.real() - brute) <= 1e-13 * brute);
      CHECK(s.terms == (2 * radius + 1) * (2 * radius + 1) - 1);
    }
  }
}

TEST_CASE("closed form lies between the partial sum and the tail bound") {
  for (int n : {2, 3, 4}) {
    for (std::int64_t radius : {100, 500, 2000}) {
      CAPTURE(n);
      CAPTURE(radius);
      const auto s = lattice_sum_direct(n, radius);
      const double reference = closed_reference(n);
      CHECK(s.value.real() <= reference);
      CHECK(s.tail_bound == doctest::Approx(tail_bound(n, radius)));
      CHECK(reference - s.value.real() <= s.tail_bound + 1e-12);
    }
  }
}

TEST_CASE("tail bound dominates an explicit tail block") {
  // shells R+1..4R are part of the tail, so their sum must sit under the bound
  for (int n : {2, 3}) {
    const std::int64_t radius = 50;
    const auto inner = lattice_sum_direct(n, radius);
    const auto outer = lattice_sum_direct(n, 4 * radius);
    CHECK(outer.value.real() - inner.value.real() <= tail_bound(n, radius));
  }
  CHECK(radius_for_tail(2.0, 1e-6) == 2000);
  CHECK(tail_bound(2.0, radius_for_tail(2.0, 1e-6)) <= 1e-6);
  CHECK(tail_bound(2.0, radius_for_tail(2.0, 1e-6) - 1) > 1e-6);
}

TEST_CASE("summand is invariant under the dihedral group") {
  const std::int64_t radius = 30;
  for (int n : {2, 3}) {
    auto base = [n](std::int64_t k, std::int64_t m) { return inv_pow(k, m, n); };
    const double reference = sum_shells(1, radius, base).value().real();
    const std::vector<std::function<std::pair<std::int64_t, std::int64_t>(std::int64_t, std::int64_t)>> maps = {
        [](auto k, auto m) { return std::pair{-k, m}; },
        [](auto k, auto m) { return std::pair{m, k}; },
        [](auto k, auto m) { return std::pair{-m, k}; },
        [](auto k, auto m) { return std::pair{-k, -m}; },
    };
    for (const auto& g : maps) {
      const double moved = sum_shells(1, radius, [&](std::int64_t k, std::int64_t m) {
                             const auto [a, b] = g(k, m);
                             return inv_pow(a, b, n);
                           }).value().real();
      CHECK(std::abs(moved - reference) <= 1e-12);
    }
  }
}

TEST_CASE("reverse summation order agrees") {
  for (int n : {2, 3, 4}) {
    const auto fwd = lattice_sum_direct(n, 1000);
    const auto rev = lattice_sum_direct(n, 1000, {.threads = 1, .order = ShellOrder::Reverse});
    CHECK(std::abs(fwd.value.real() - rev.value.real()) <= 1e-12);
    CHECK(fwd.terms == rev.terms);
  }
}

TEST_CASE("result is bit-identical across thread counts") {
  const auto one = lattice_sum_direct(2.5, 700, {.threads = 1});
  for (int t : {2, 3, 4, 7}) {
    const auto many = lattice_sum_direct(2.5, 700, {.threads = t});
    CHECK(many.value.real() == one.value.real());
    CHECK(many.abs_sum == one.abs_sum);
    CHECK(many.terms == one.terms);
  }
}

TEST_CASE("lattice_sum_closed") {
  for (int n = 2; n <= 6; ++n) {
    const auto v = lattice_sum_closed(n, 1e-11);
    CHECK(std::abs(v.value - closed_reference(n)) <= 1e-11);
    CHECK(v.error_bound <= 1e-11);
  }
  CHECK_THROWS_AS(lattice_sum_closed(1, 1e-10), std::invalid_argument);
}

TEST_CASE("shell_partial_sums and CSV") {
  const auto rows = shell_partial_sums(2.0, 3);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].r == 1);
  CHECK(rows[0].shell_sum == 5.0);
  CHECK(rows[2].cumulative == doctest::Approx(lattice_sum_direct(2.0, 3).value.real()).epsilon(1e-15));
  std::ostringstream os;
  write_shell_csv(os, rows);
  const std::string text = os.str();
  CHECK(text.rfind("r,shell_sum,cumulative,tail_bound\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
}
