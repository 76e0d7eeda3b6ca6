#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

namespace spectrace::counterexamples {

/// psi_n = (phi_1 + ... + phi_n - n phi_{n+1}) / sqrt(n(n+1)), stored as its
/// first n+1 standard coordinates (the rest are zero).
struct PsiVector {
  std::int64_t index = 0;
  std::vector<double> coefficients;
};

PsiVector psi_vector(std::int64_t n);

enum class Example { Identity, Alternating, LeftShiftStandard, LeftShiftPsi };

/// Parses "identity", "alternating", "left-shift-standard", "left-shift-psi".
std::optional<Example> parse_example(std::string_view name);
std::string_view example_name(Example example);

/// <psi_j, L psi_j> by explicit shift-and-dot on the truncated vector.
double left_shift_psi_diagonal(std::int64_t j);

/// The first count partial sums of sum_j <b_j, A b_j> for the chosen example.
std::vector<double> diag_partial_sums(Example example, std::int64_t count);

void write_trajectory_csv(std::ostream& os, const std::vector<double>& partial_sums);

}  // namespace spectrace::counterexamples
