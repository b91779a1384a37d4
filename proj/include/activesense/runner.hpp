#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "activesense/classify.hpp"
#include "activesense/config.hpp"
#include "activesense/metrics.hpp"
#include "activesense/planning.hpp"
#include "activesense/scene.hpp"

namespace activesense {

// What was sent to the update at one step; enough to replay a run.
struct LoggedPing {
  std::size_t step = 0;
  Pose pose;
  std::vector<std::uint8_t> bins;
  std::vector<int> labels;  // per bin, 0 when the bin did not fire

  bool operator==(const LoggedPing&) const = default;
};

class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual void on_step(const PolicyState& /*state*/, const LoggedPing& /*ping*/,
                       const MetricsRow& /*row*/) {}
};

struct RunResult {
  PolicyState state;
  Pose start;
  std::vector<MetricsRow> metrics;  // one per action, steps 1..n
  std::vector<LoggedPing> log;
};

Scene resolve_scene(const ExperimentConfig& cfg);

PolicyState initial_state(const ExperimentConfig& cfg, const Scene& scene, const Pose& start);

// Start pose: the configured one, else a uniformly drawn cell center with a
// heading drawn from the lattice reachable by the turn set.
Pose draw_start_pose(const ExperimentConfig& cfg, const GridGeometry& geometry,
                     RandomStream& rng);

// Labels for one live ping: for each fired bin, one draw from the confusion
// row of the first occupied cell in the bin, or a no-target label.
std::vector<int> draw_bin_labels(const Scene& scene, const Measurement& meas,
                                 const ConfusionClassifier& classifier, RandomStream& rng);

// Runs the closed loop. `forced_poses`, when non-empty, replaces the policy
// (entry s-1 is the pose of action s) and must cover n_actions.
RunResult run_experiment(const ExperimentConfig& cfg, const Scene& scene,
                         RunObserver* observer = nullptr,
                         const std::vector<Pose>& forced_poses = {});

// Recomputes the metrics trace from a measurement log.
std::vector<MetricsRow> replay(const ExperimentConfig& cfg, const Scene& scene, const Pose& start,
                               const std::vector<LoggedPing>& log);

void write_measurement_header(std::ostream& out);
void write_measurement_row(std::ostream& out, const LoggedPing& ping);
std::vector<LoggedPing> read_measurements(std::istream& in);

struct RunOutcome {
  bool ok = false;
  std::string error;
  std::size_t steps_completed = 0;
  double wall_seconds = 0.0;
  std::filesystem::path directory;
  std::vector<MetricsRow> metrics;
};

// Runs one experiment into `directory` (manifest.json, config.json,
// scene.json, metrics.csv, measurements.csv, final/, snapshots/). Files are
// flushed as the run goes; on failure the manifest records status "error"
// and the message, and the outcome carries it instead of throwing.
RunOutcome run_to_directory(const ExperimentConfig& cfg, const std::filesystem::path& directory);

// Re-reads a run directory and recomputes its metrics from measurements.csv.
std::vector<MetricsRow> replay_directory(const std::filesystem::path& directory);

std::string code_version();

}  // namespace activesense
