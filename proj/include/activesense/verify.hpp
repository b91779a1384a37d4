#pragma once

// Slow reference computations behind the `oracle` CLI subcommand.

#include <cstddef>
#include <cstdint>
#include <span>

#include "activesense/random.hpp"

namespace activesense::verify {

// I(b; j) as sum over the four joint cells of p(b,j) log[p(b,j) / (p(b) p(j))].
double detection_mi_enumerated(double p, double p_d, double p_fa);

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

// I(lambda; c) estimated as the mean of log lambda_c - log(alpha_c / alpha_0)
// over lambda ~ Dir(alpha), c | lambda ~ Cat(lambda).
McEstimate classification_mi_monte_carlo(std::span<const double> alpha, std::size_t samples,
                                         RandomStream& rng);

struct DetectionSweep {
  std::size_t samples = 0;
  double max_abs_diff = 0.0;
  double seconds = 0.0;
};

// detection_mi against the enumeration over random (p, p_d > p_fa) triples.
DetectionSweep detection_sweep(std::size_t samples, std::uint64_t seed);

}  // namespace activesense::verify
