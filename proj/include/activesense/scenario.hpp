#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "activesense/scene.hpp"

namespace activesense {

// Target footprint in cells (rows x cols before a random quarter turn).
struct TargetShape {
  std::size_t rows = 1;
  std::size_t cols = 1;
};

struct ScenarioSpec {
  double field_width = 50.0;
  double field_height = 50.0;
  double cell_size = 1.0;
  std::size_t clusters = 3;
  std::size_t targets_per_cluster = 3;
  int num_classes = 3;
  double cluster_radius = 4.0;
  double min_cluster_separation = 12.0;
  double edge_margin = 2.0;
  // Per-class footprint; class l uses shapes[(l-1) % shapes.size()].
  std::vector<TargetShape> shapes{{1, 2}, {1, 1}, {2, 2}};
  std::uint64_t seed = 1;
  std::size_t max_attempts = 2000;

  void validate() const;
};

ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

// Clusters placed uniformly with a minimum center separation; within a cluster
// target t has class (t mod L) + 1 and targets never touch. Throws if no
// placement is found within max_attempts.
Scene generate_scenario(const ScenarioSpec& spec);

}  // namespace activesense
