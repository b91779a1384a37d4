#include "activesense/sensor.hpp"

#include <cmath>
#include <stdexcept>

namespace activesense {

AttenuationMode attenuation_from_string(const std::string& s) {
  if (s == "none") return AttenuationMode::none;
  if (s == "floor_decay") return AttenuationMode::floor_decay;
  if (s == "scaled_transition") return AttenuationMode::scaled_transition;
  throw std::invalid_argument("unknown attenuation mode '" + s + "'");
}

std::string to_string(AttenuationMode mode) {
  switch (mode) {
    case AttenuationMode::none:
      return "none";
    case AttenuationMode::floor_decay:
      return "floor_decay";
    case AttenuationMode::scaled_transition:
      return "scaled_transition";
  }
  return "unknown";
}

void DetectorParams::validate() const {
  if (!(p_fa >= 0.0 && p_fa < p_d && p_d <= 1.0)) {
    throw std::invalid_argument("DetectorParams: require 0 <= p_fa < p_d <= 1");
  }
  if (!(atten_exponent >= 1.0)) {
    throw std::invalid_argument("DetectorParams: atten_exponent must be >= 1");
  }
}

CellChannel channel_at(const DetectorParams& params, double d) {
  if (d < 0.0 || std::isnan(d)) {
    throw std::invalid_argument("channel_at: distance must be >= 0");
  }
  switch (params.mode) {
    case AttenuationMode::none:
      return {params.p_d, params.p_fa};
    case AttenuationMode::floor_decay: {
      const double decay = std::pow(1.0 + d, -params.atten_exponent);
      return {params.p_fa + (params.p_d - params.p_fa) * decay, params.p_fa};
    }
    case AttenuationMode::scaled_transition: {
      const double decay = std::pow(1.0 + d, -params.atten_exponent);
      const double p00 = (1.0 - params.p_d) * decay;
      const double p01 = (1.0 - params.p_fa) * decay;
      return {1.0 - p01, 1.0 - p00};
    }
  }
  throw std::logic_error("channel_at: unhandled mode");
}

double effective_pd(const DetectorParams& params, double d) {
  return channel_at(params, d).p_detect_occupied;
}

Measurement sample_measurement(const Scene& scene, const Pose& pose,
                               const SensorFootprint& fp, const DetectorParams& params,
                               RandomStream& rng, std::size_t time_index) {
  const GridGeometry& g = scene.geometry();
  Measurement m;
  m.time_index = time_index;
  m.pose = pose;
  m.associations = footprint_bins(g, pose, fp);
  m.bins.assign(fp.num_bins, 0);
  for (std::size_t k = 0; k < fp.num_bins; ++k) {
    const auto& cells = m.associations[k];
    if (cells.empty()) {
      m.bins[k] = rng.uniform() < params.p_fa ? 1 : 0;
      continue;
    }
    bool fired = false;
    for (std::size_t cell : cells) {
      const CellChannel ch = channel_at(params, dist(g, cell, pose, fp, k));
      const double p = scene.occupied(cell) ? ch.p_detect_occupied : ch.p_detect_empty;
      const bool hit = rng.uniform() < p;
      fired = fired || hit;
    }
    m.bins[k] = fired ? 1 : 0;
  }
  return m;
}

}  // namespace activesense
