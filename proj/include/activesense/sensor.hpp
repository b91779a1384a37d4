#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "activesense/grid.hpp"
#include "activesense/random.hpp"
#include "activesense/scene.hpp"

namespace activesense {

// How detection performance degrades with the distance d between a cell and
// the bin sample point.
//   none:              p(j=1|b=1) = p_d,  p(j=1|b=0) = p_fa
//   floor_decay:       p(j=1|b=1) = p_fa + (p_d - p_fa) / (1+d)^a,  p(j=1|b=0) = p_fa
//   scaled_transition: p00 = (1-p_d)/(1+d)^a, p01 = (1-p_fa)/(1+d)^a, i.e. both
//                      non-detection probabilities scaled directly;
//                      p(j=1|b) = 1 - p0b. Kept for comparison only.
enum class AttenuationMode { none, floor_decay, scaled_transition };

AttenuationMode attenuation_from_string(const std::string& s);
std::string to_string(AttenuationMode mode);

struct DetectorParams {
  double p_d = 0.95;
  double p_fa = 0.05;
  double atten_exponent = 1.0;
  AttenuationMode mode = AttenuationMode::floor_decay;

  void validate() const;
};

// Per-cell binary channel b -> virtual detection.
struct CellChannel {
  double p_detect_occupied = 0.0;  // p(~b = 1 | b = 1)
  double p_detect_empty = 0.0;     // p(~b = 1 | b = 0)

  double p00() const { return 1.0 - p_detect_empty; }     // true non-detection
  double p01() const { return 1.0 - p_detect_occupied; }  // missed detection
};

CellChannel channel_at(const DetectorParams& params, double d);
double effective_pd(const DetectorParams& params, double d);

struct Measurement {
  std::size_t time_index = 0;
  Pose pose;
  std::vector<std::uint8_t> bins;                     // j_{s,k}
  std::vector<std::vector<std::size_t>> associations;  // cells per bin
};

// One ping. Every associated cell consumes exactly one uniform draw (and an
// empty bin one draw), fired iff u < p, so detections are monotone in p_d for
// a fixed stream.
Measurement sample_measurement(const Scene& scene, const Pose& pose,
                               const SensorFootprint& fp, const DetectorParams& params,
                               RandomStream& rng, std::size_t time_index = 0);

}  // namespace activesense
