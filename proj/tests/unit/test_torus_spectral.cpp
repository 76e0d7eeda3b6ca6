#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "spectrace/torus_spectral.hpp"

using namespace spectrace::torus;
using cd = std::complex<double>;

namespace {

const cd I(0.0, 1.0);

const TraceClass& as_trace_class(const TraceClassification& c) {
  REQUIRE(std::holds_alternative<TraceClass>(c.status));
  return std::get<TraceClass>(c.status);
}

}  // namespace

TEST_CASE("eigenrule hand values") {
  CHECK(eigenrule_eval({OperatorKind::InvLaplaceS1, 1}, Mode::circle(2)) == cd(-0.25));
  CHECK(eigenrule_eval({OperatorKind::InvLaplaceS1, 2}, Mode::circle(-3)) == cd(1.0 / 81.0));
  CHECK(eigenrule_eval({OperatorKind::InvLaplaceT2, 1}, Mode::torus(1, 1)) == cd(-0.5));
  CHECK(eigenrule_eval({OperatorKind::InvLaplaceT2, 2}, Mode::torus(1, 2)) == cd(1.0 / 25.0));
  CHECK(eigenrule_eval({OperatorKind::PPowerT2, 1}, Mode::torus(1, 0)) == -I);
  CHECK(eigenrule_eval({OperatorKind::PPowerT2, 2}, Mode::torus(1, 1)) == cd(-1.0));
  CHECK(eigenrule_eval({OperatorKind::PPowerT2, 3}, Mode::torus(1, -1)) == cd(0.0));
  CHECK(eigenrule_eval({OperatorKind::PPowerT2, 4}, Mode::torus(2, 1)) == cd(81.0 / 625.0));
}

TEST_CASE("constant mode is in the kernel") {
  for (int n = 1; n <= 4; ++n) {
    CHECK(eigenrule_eval({OperatorKind::InvLaplaceS1, n}, Mode::circle(0)) == cd(0.0));
    CHECK(eigenrule_eval({OperatorKind::InvLaplaceT2, n}, Mode::torus(0, 0)) == cd(0.0));
    CHECK(eigenrule_eval({OperatorKind::PPowerT2, n}, Mode::torus(0, 0)) == cd(0.0));
  }
}

TEST_CASE("eigenrule rejects mismatched modes") {
  CHECK_THROWS_AS(eigenrule_eval({OperatorKind::InvLaplaceS1, 1}, Mode::torus(1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(eigenrule_eval({OperatorKind::PPowerT2, 1}, Mode::circle(1)), std::invalid_argument);
  CHECK_THROWS_AS(eigenrule_eval({OperatorKind::InvLaplaceT2, 0}, Mode::torus(1, 1)), std::invalid_argument);
}

TEST_CASE("Laplacian eigenvalues alternate in sign with the power") {
  for (int n = 1; n <= 6; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    for (std::int64_t k = 1; k <= 5; ++k) {
      CHECK(eigenrule_eval({OperatorKind::InvLaplaceS1, n}, Mode::circle(k)).real() * sign > 0.0);
      CHECK(eigenrule_eval({OperatorKind::InvLaplaceT2, n}, Mode::torus(k, 2)).real() * sign > 0.0);
    }
  }
}

TEST_CASE("P eigenvalues: antipodal symmetry and the binomial bound") {
  for (int n = 1; n <= 6; ++n) {
    const double parity = n % 2 == 0 ? 1.0 : -1.0;
    for (std::int64_t k = -12; k <= 12; ++k) {
      for (std::int64_t m = -12; m <= 12; ++m) {
        if (k == 0 && m == 0) continue;
        const cd a = eigenrule_eval({OperatorKind::PPowerT2, n}, Mode::torus(k, m));
        const cd b = eigenrule_eval({OperatorKind::PPowerT2, n}, Mode::torus(-k, -m));
        CHECK(std::abs(b - parity * a) <= 1e-15 * std::abs(a));
        // |k+m|^n <= 2^{n/2} (k^2+m^2)^{n/2}
        const double q = static_cast<double>(k * k + m * m);
        CHECK(std::abs(a) <= std::pow(2.0, 0.5 * n) * std::pow(q, -0.5 * n) * (1.0 + 1e-14));
        if (k >= 0 && m >= 0) {
          const double s = static_cast<double>((k + m) * (k + m));
          CHECK(s >= q);
        }
      }
    }
  }
}

TEST_CASE("circle traces") {
  const auto one = trace_inv_laplacian_s1(1, 1e-10);
  const auto& tc = as_trace_class(one);
  CHECK(tc.value.real() == doctest::Approx(-std::numbers::pi * std::numbers::pi / 3.0).epsilon(1e-14));
  CHECK(tc.error_bound <= 1e-10);
  REQUIRE(tc.cross_check.has_value());
  CHECK(tc.cross_check->agrees);
  CHECK(std::abs(tc.cross_check->value - tc.value) <= tc.cross_check->bound + 1e-10);

  const auto two = as_trace_class(trace_inv_laplacian_s1(2, 1e-12));
  CHECK(std::abs(two.value.real() - std::pow(std::numbers::pi, 4) / 45.0) <= 1e-12);
  REQUIRE(two.cross_check.has_value());
  CHECK(two.cross_check->agrees);
  CHECK(std::abs(two.cross_check->value - two.value) <= two.cross_check->bound + 1e-12);

  for (int n = 1; n <= 6; ++n) {
    const double sign = n % 2 == 0 ? 1.0 : -1.0;
    CHECK(as_trace_class(trace_inv_laplacian_s1(n, 1e-10)).value.real() * sign > 0.0);
  }
  CHECK_THROWS_AS(trace_inv_laplacian_s1(0, 1e-10), std::invalid_argument);
  CHECK_THROWS_AS(trace_inv_laplacian_s1(1, 1e-20), std::invalid_argument);
}

TEST_CASE("torus Laplacian traces") {
  const auto two = as_trace_class(trace_inv_laplacian_t2(2, 1e-10));
  CHECK(std::abs(two.value.real() - 6.02681203969194012) <= 1e-10);
  REQUIRE(two.cross_check.has_value());
  CHECK(two.cross_check->agrees);
  const auto three = as_trace_class(trace_inv_laplacian_t2(3, 1e-10));
  CHECK(std::abs(three.value.real() + 4.65891361560384344) <= 1e-10);

  const auto one = trace_inv_laplacian_t2(1, 1e-10);
  CHECK(one.status_name() == "NotTraceClass");
  CHECK(one.extension);
  const auto& cert = std::get<GrowthCertificate>(std::get<NotTraceClass>(one.status).certificate);
  CHECK(cert.strictly_increasing());
  CHECK(cert.dominates_lower_bounds());
}

TEST_CASE("P^4 against a row-major square sum") {
  const auto c = trace_p_power_t2(4, 1e-6, 2000);
  const auto& tc = as_trace_class(c);
  CHECK(tc.error_bound <= 1e-5);
  const std::int64_t radius = 300;
  const double brute = oracle::square_sum(radius, [](auto k, auto m) {
    const double q = static_cast<double>(k * k + m * m);
    return std::pow(static_cast<double>(k + m), 4) / (q * q * q * q);
  });
  // every term is nonnegative, so the truncated square sits below the full sum
  CHECK(brute <= tc.value.real() + tc.error_bound);
  CHECK(tc.value.real() - brute <= p_power_tail_bound(4, radius) + tc.error_bound);
  CHECK(std::abs(tc.value.imag()) <= 1e-15);
}

TEST_CASE("odd powers of P vanish") {
  for (int n : {3, 5, 7}) {
    const auto c = trace_p_power_t2(n, 1e-10);
    const auto& tc = as_trace_class(c);
    CHECK(c.extension);
    CHECK(tc.value == cd(0.0));
    REQUIRE(tc.cross_check.has_value());
    CHECK(tc.cross_check->agrees);
  }
}

TEST_CASE("P^1 and P^2 are not trace class") {
  const auto one = trace_p_power_t2(1, 1e-10);
  CHECK(one.status_name() == "NotTraceClass");
  const auto& growth = std::get<GrowthCertificate>(std::get<NotTraceClass>(one.status).certificate);
  CHECK(growth.dominates_lower_bounds());
  CHECK(growth.strictly_increasing());

  const auto two = trace_p_power_t2(2, 1e-10);
  CHECK(two.status_name() == "NotTraceClass");
  const auto& dyadic = std::get<DivergenceCertificate>(std::get<NotTraceClass>(two.status).certificate);
  CHECK(dyadic.floors_hold());
  CHECK(dyadic.target == 5);
}

TEST_CASE("dyadic certificate block sums") {
  const auto cert = p2_divergence_certificate(11);
  REQUIRE(cert.block_sums.size() == 11);
  const double expected[] = {0.65697, 0.54271, 0.49581, 0.47449, 0.46432, 0.45934,
                             0.45689, 0.45567, 0.45506, 0.45475, 0.45460};
  for (std::size_t j = 0; j < 11; ++j) CHECK(cert.block_sums[j] == doctest::Approx(expected[j]).epsilon(1e-4));
  CHECK(cert.floors_hold());
  CHECK(cert.radius == 4095);
  CHECK(cert.terms == ((std::int64_t{1} << 24) - 4) / 3);

  // block 1 by hand: k, m in {2, 3}
  const double block1 = 16.0 / 64.0 + 2.0 * 25.0 / 169.0 + 36.0 / 324.0;
  CHECK(p2_divergence_certificate(1).block_sums[0] == doctest::Approx(block1).epsilon(1e-15));

  const auto ten = p2_divergence_certificate(10);
  CHECK(ten.attained == doctest::Approx(4.9160).epsilon(1e-4));
  CHECK_FALSE(ten.meets_target());
  CHECK(block_floor(3) == 0.125);
  CHECK_THROWS_AS(p2_divergence_certificate(0), std::invalid_argument);
  CHECK_THROWS_AS(p2_divergence_certificate(13), std::invalid_argument);
}

TEST_CASE("block trajectory CSV") {
  const auto rows = p2_block_trajectory(4);
  REQUIRE(rows.size() == 4);
  for (std::size_t j = 1; j < rows.size(); ++j) CHECK(rows[j].partial_sum > rows[j - 1].partial_sum);
  std::ostringstream os;
  write_partial_sum_csv(os, rows, "block");
  CHECK(os.str().rfind("block,partial_sum\n1,", 0) == 0);
}
