#include "spectrace/counterexamples.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "spectrace/summation.hpp"

namespace spectrace::counterexamples {

namespace {

// Standard basis vector phi_j (1-based) truncated to length len.
std::vector<double> unit_vector(std::int64_t j, std::size_t len) {
  std::vector<double> v(len, 0.0);
  v[static_cast<std::size_t>(j - 1)] = 1.0;
  return v;
}

// (L a)_i = a_{i+1}
std::vector<double> left_shift(const std::vector<double>& a) {
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t i = 0; i + 1 < a.size(); ++i) out[i] = a[i + 1];
  return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
  return s.value();
}

}  // namespace

PsiVector psi_vector(std::int64_t n) {
  if (n < 1) throw std::invalid_argument("psi_vector: n must be at least 1");
  const double nd = static_cast<double>(n);
  const double scale = 1.0 / std::sqrt(nd * (nd + 1.0));
  PsiVector psi;
  psi.index = n;
  psi.coefficients.assign(static_cast<std::size_t>(n + 1), scale);
  psi.coefficients.back() = -nd * scale;
  return psi;
}

std::optional<Example> parse_example(std::string_view name) {
  if (name == "identity") return Example::Identity;
  if (name == "alternating") return Example::Alternating;
  if (name == "left-shift-standard") return Example::LeftShiftStandard;
  if (name == "left-shift-psi") return Example::LeftShiftPsi;
  return std::nullopt;
}

std::string_view example_name(Example example) {
  switch (example) {
    case Example::Identity: return "identity";
    case Example::Alternating: return "alternating";
    case Example::LeftShiftStandard: return "left-shift-standard";
    case Example::LeftShiftPsi: return "left-shift-psi";
  }
  return "unknown";
}

double left_shift_psi_diagonal(std::int64_t j) {
  auto psi = psi_vector(j).coefficients;
  psi.resize(psi.size() + 1, 0.0);
  return dot(psi, left_shift(psi));
}

std::vector<double> diag_partial_sums(Example example, std::int64_t count) {
  if (count < 1) throw std::invalid_argument("diag_partial_sums: count must be at least 1");
  std::vector<double> sums;
  sums.reserve(static_cast<std::size_t>(count));
  CompensatedSum running;
  for (std::int64_t j = 1; j <= count; ++j) {
    double diagonal = 0.0;
    switch (example) {
      case Example::Identity: {
        const auto phi = unit_vector(j, static_cast<std::size_t>(j + 1));
        diagonal = dot(phi, phi);
        break;
      }
      case Example::Alternating: {
        // A phi_j = (-1)^j phi_j
        auto phi = unit_vector(j, static_cast<std::size_t>(j + 1));
        auto image = phi;
        for (auto& x : image) x *= (j % 2 == 0 ? 1.0 : -1.0);
        diagonal = dot(phi, image);
        break;
      }
      case Example::LeftShiftStandard: {
        const auto phi = unit_vector(j, static_cast<std::size_t>(j + 2));
        diagonal = dot(phi, left_shift(phi));
        break;
      }
      case Example::LeftShiftPsi:
        diagonal = left_shift_psi_diagonal(j);
        break;
    }
    running.add(diagonal);
    sums.push_back(running.value());
  }
  return sums;
}

void write_trajectory_csv(std::ostream& os, const std::vector<double>& partial_sums) {
  os << "j,partial_sum\n";
  char buf[96];
  for (std::size_t i = 0; i < partial_sums.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g\n", i + 1, partial_sums[i]);
    os << buf;
  }
}

}  // namespace spectrace::counterexamples
