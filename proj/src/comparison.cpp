#include "activesense/comparison.hpp"

#include <cmath>
#include <stdexcept>

#include "activesense/infogain.hpp"
#include "activesense/random.hpp"

namespace activesense::comparison {

double conditional_entropy_log1p_form(double p, double p_d, double p_fa) {
  const double q = 1.0 - p;
  return (1.0 - p_fa) * q * std::log(1.0 + (1.0 - p_d) * p) +
         p_fa * q * std::log(1.0 + p_d * p) +
         (1.0 - p_d) * p * std::log(1.0 + (1.0 - p_fa) * q) +
         p_d * p * std::log(1.0 + p_fa * q);
}

double detection_mi_log1p_form(double p, double p_d, double p_fa) {
  const double q = 1.0 - p;
  return p * ((1.0 - p_d) * std::log(1.0 + (1.0 - p_fa) * q) +
              p_d * std::log(1.0 + p_fa * q) - std::log(p)) +
         q * ((1.0 - p_fa) * std::log(1.0 + (1.0 - p_d) * p) +
              p_fa * std::log(1.0 + p_d * p) - std::log(q));
}

double rho_squared_norms(const DistributionSet& t, const DistributionSet& e) {
  if (t.width != e.width || t.values.size() != e.values.size()) {
    throw std::invalid_argument("rho_squared_norms: shape mismatch");
  }
  double inner = 0.0;
  double tt = 0.0;
  double ee = 0.0;
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    inner += t.values[i] * e.values[i];
    tt += t.values[i] * t.values[i];
    ee += e.values[i] * e.values[i];
  }
  if (tt == 0.0 || ee == 0.0) {
    throw std::invalid_argument("rho_squared_norms: zero-norm input");
  }
  return inner / (tt * ee);
}

FormGap detection_form_gap(std::size_t samples, std::uint64_t seed) {
  RandomStream rng(seed);
  FormGap gap;
  gap.samples = samples;
  double sum = 0.0;
  for (std::size_t n = 0; n < samples; ++n) {
    // Open interval: the rewrite takes log p and log(1 - p) directly.
    const double p = rng.uniform(1e-9, 1.0 - 1e-9);
    const double pd = rng.uniform();
    const double pfa = rng.uniform();
    const double diff = std::abs(detection_mi_log1p_form(p, pd, pfa) - detection_mi(p, pd, pfa));
    sum += diff;
    if (diff > gap.max_abs_gap) {
      gap.max_abs_gap = diff;
      gap.worst_p = p;
      gap.worst_p_d = pd;
      gap.worst_p_fa = pfa;
    }
  }
  gap.mean_abs_gap = samples ? sum / static_cast<double>(samples) : 0.0;
  return gap;
}

}  // namespace activesense::comparison
