#include "activesense/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "activesense/infogain.hpp"

namespace activesense::verify {

double detection_mi_enumerated(double p, double p_d, double p_fa) {
  // joint[b][j]
  const double joint[2][2] = {{(1.0 - p) * (1.0 - p_fa), (1.0 - p) * p_fa},
                              {p * (1.0 - p_d), p * p_d}};
  const double pb[2] = {1.0 - p, p};
  const double pj[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
  double mi = 0.0;
  for (int b = 0; b < 2; ++b) {
    for (int j = 0; j < 2; ++j) {
      if (joint[b][j] > 0.0) {
        mi += joint[b][j] * std::log(joint[b][j] / (pb[b] * pj[j]));
      }
    }
  }
  return mi;
}

McEstimate classification_mi_monte_carlo(std::span<const double> alpha, std::size_t samples,
                                         RandomStream& rng) {
  if (alpha.empty() || samples < 2) {
    throw std::invalid_argument("classification_mi_monte_carlo: need alpha and >= 2 samples");
  }
  double a0 = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) throw std::invalid_argument("classification_mi_monte_carlo: alpha must be > 0");
    a0 += a;
  }
  std::vector<double> lam(alpha.size());
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t n = 1; n <= samples; ++n) {
    double s = 0.0;
    for (std::size_t l = 0; l < alpha.size(); ++l) {
      lam[l] = rng.gamma(alpha[l]);
      s += lam[l];
    }
    for (double& v : lam) v /= s;
    const std::size_t c = rng.categorical(lam);
    // A draw of exactly 0 cannot be selected, so the log is finite.
    const double x = std::log(lam[c]) - std::log(alpha[c] / a0);
    const double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  const double var = m2 / static_cast<double>(samples - 1);
  return {mean, std::sqrt(var / static_cast<double>(samples)), samples};
}

DetectionSweep detection_sweep(std::size_t samples, std::uint64_t seed) {
  RandomStream rng(seed);
  DetectionSweep out;
  out.samples = samples;
  const auto t0 = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < samples; ++i) {
    const double p = rng.uniform();
    const double a = rng.uniform();
    const double b = rng.uniform();
    const double pd = std::max(a, b);
    const double pfa = std::min(a, b);
    out.max_abs_diff = std::max(
        out.max_abs_diff, std::abs(detection_mi(p, pd, pfa) - detection_mi_enumerated(p, pd, pfa)));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace activesense::verify
