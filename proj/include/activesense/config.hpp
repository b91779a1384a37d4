#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "activesense/classify.hpp"
#include "activesense/grid.hpp"
#include "activesense/infogain.hpp"
#include "activesense/planning.hpp"
#include "activesense/scenario.hpp"
#include "activesense/sensor.hpp"

namespace activesense {

enum class PolicyKind { lawnmower, greedy, rollout };

PolicyKind policy_from_string(const std::string& s);
std::string to_string(PolicyKind p);

struct ExperimentConfig {
  // Exactly one scene source: a scene file, or a generator spec.
  std::optional<std::filesystem::path> scene_path;
  ScenarioSpec scenario;

  PolicyKind policy = PolicyKind::rollout;
  RolloutConfig rollout;
  DetectorParams detector;

  std::size_t num_bins = 5;
  double bin_spacing = 1.0;
  double beamwidth_deg = 7.0;

  double step_length = 1.0;
  double turn_deg = 90.0;

  WeightSchedule weight_schedule = WeightSchedule::coverage_linked;
  double w_d = 1.0;  // used by the fixed schedule

  double classifier_accuracy = 0.7;
  std::vector<std::vector<double>> confusion;  // overrides accuracy when non-empty
  NoTargetBehavior no_target = NoTargetBehavior::uniform_label;
  int no_target_label = 1;

  double track_spacing = 0.0;  // 0 = match the sensor swath
  SweepCorner sweep_corner = SweepCorner::south_west;
  std::optional<double> standoff;  // unset = half a cell

  // Start pose; random (snapped to a cell center and a reachable heading) when unset.
  std::optional<Pose> start_pose;

  double prior_occupancy = 0.5;
  double prior_alpha = 1.0;

  std::size_t n_actions = 500;
  std::uint64_t seed = 1;
  std::size_t snapshot_every = 0;
  std::filesystem::path output_dir = "out/run";

  void validate() const;

  SensorFootprint footprint() const;
  SensingModel sensing() const;
  ConfusionClassifier classifier(int num_classes) const;
  DynamicsConfig dynamics(const GridGeometry& geometry) const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& path);

// FNV-1a over the canonical JSON dump.
std::string config_hash(const ExperimentConfig& cfg);

// Applies "dotted.path=value" to a JSON document. The value is parsed as
// JSON when possible, otherwise taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);

}  // namespace activesense
