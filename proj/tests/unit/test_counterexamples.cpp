#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spectrace/counterexamples.hpp"

using namespace spectrace::counterexamples;

namespace {

double dot(const PsiVector& a, const PsiVector& b) {
  const std::size_t len = std::min(a.coefficients.size(), b.coefficients.size());
  double s = 0.0;
  for (std::size_t i = 0; i < len; ++i) s += a.coefficients[i] * b.coefficients[i];
  return s;
}

}  // namespace

TEST_CASE("psi vectors by hand") {
  const auto one = psi_vector(1);
  REQUIRE(one.coefficients.size() == 2);
  CHECK(one.coefficients[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(one.coefficients[1] == doctest::Approx(-1.0 / std::sqrt(2.0)));
  const auto two = psi_vector(2);
  REQUIRE(two.coefficients.size() == 3);
  CHECK(two.coefficients[0] == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(two.coefficients[1] == doctest::Approx(1.0 / std::sqrt(6.0)));
  CHECK(two.coefficients[2] == doctest::Approx(-2.0 / std::sqrt(6.0)));
  CHECK_THROWS_AS(psi_vector(0), std::invalid_argument);
}

TEST_CASE("psi vectors are orthonormal") {
  std::vector<PsiVector> psi;
  for (std::int64_t n = 1; n <= 200; ++n) psi.push_back(psi_vector(n));
  double worst = 0.0;
  for (std::size_t i = 0; i < psi.size(); ++i)
    for (std::size_t j = i; j < psi.size(); ++j)
      worst = std::max(worst, std::abs(dot(psi[i], psi[j]) - (i == j ? 1.0 : 0.0)));
  CHECK(worst <= 1e-12);
}

TEST_CASE("left shift diagonal in the psi basis") {
  for (std::int64_t j = 1; j <= 50; ++j) {
    const double jd = static_cast<double>(j);
    CHECK(left_shift_psi_diagonal(j) == doctest::Approx(-1.0 / (jd * (jd + 1.0))).epsilon(1e-12));
  }
}

TEST_CASE("trajectories") {
  const auto id = diag_partial_sums(Example::Identity, 10);
  for (std::size_t j = 0; j < id.size(); ++j) CHECK(id[j] == static_cast<double>(j + 1));

  const auto alt = diag_partial_sums(Example::Alternating, 10);
  for (std::size_t j = 0; j < alt.size(); ++j) CHECK(alt[j] == (j % 2 == 0 ? -1.0 : 0.0));

  const auto shift = diag_partial_sums(Example::LeftShiftStandard, 100);
  for (double s : shift) CHECK(s == 0.0);

  CHECK_THROWS_AS(diag_partial_sums(Example::Identity, 0), std::invalid_argument);
}

TEST_CASE("left shift in the psi basis converges to -1") {
  const std::int64_t count = 2000;
  const auto sums = diag_partial_sums(Example::LeftShiftPsi, count);
  for (std::int64_t n : {1, 10, 100, 1000, 2000}) {
    CAPTURE(n);
    const double gap = std::abs(sums[static_cast<std::size_t>(n - 1)] + 1.0);
    CHECK(gap == doctest::Approx(1.0 / static_cast<double>(n + 1)).epsilon(1e-10));
  }
  CHECK(sums.front() == doctest::Approx(-0.5));
}

TEST_CASE("example names round-trip") {
  for (auto e : {Example::Identity, Example::Alternating, Example::LeftShiftStandard, Example::LeftShiftPsi})
    CHECK(parse_example(example_name(e)) == e);
  CHECK_FALSE(parse_example("right-shift").has_value());
}

TEST_CASE("trajectory CSV") {
  std::ostringstream os;
  write_trajectory_csv(os, {-0.5, -2.0 / 3.0});
  CHECK(os.str() == "j,partial_sum\n1,-0.5\n2,-0.66666666666666663\n");
}
