#pragma once

// Alternative algebraic forms kept only for side-by-side comparison against
// the canonical implementations. Nothing in the planner calls these.

#include <cstddef>
#include <cstdint>

#include "activesense/metrics.hpp"

namespace activesense::comparison {

// H(b | j) rewritten as a sum of p * log[1 + ...] terms.
double conditional_entropy_log1p_form(double p, double p_d, double p_fa);

// I(b; j) assembled from the log[1 + ...] conditional-entropy rewrite.
double detection_mi_log1p_form(double p, double p_d, double p_fa);

// Similarity normalized by the product of squared Frobenius norms.
double rho_squared_norms(const DistributionSet& t, const DistributionSet& e);

struct FormGap {
  double max_abs_gap = 0.0;
  double mean_abs_gap = 0.0;
  double worst_p = 0.0;
  double worst_p_d = 0.0;
  double worst_p_fa = 0.0;
  std::size_t samples = 0;
};

// Sweeps random (p, p_d, p_fa) in the open unit cube and reports the gap
// between detection_mi and detection_mi_log1p_form.
FormGap detection_form_gap(std::size_t samples, std::uint64_t seed);

}  // namespace activesense::comparison
