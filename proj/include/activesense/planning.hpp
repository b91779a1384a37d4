#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "activesense/classify.hpp"
#include "activesense/grid.hpp"
#include "activesense/infogain.hpp"
#include "activesense/occupancy.hpp"
#include "activesense/random.hpp"
#include "activesense/sensor.hpp"

namespace activesense {

struct SensingModel {
  SensorFootprint footprint;
  DetectorParams detector;
};

// Discrete unicycle: each action turns by one entry of turn_set, then moves
// step_length forward. Poses must stay inside [x_min, x_max] x [y_min, y_max].
struct DynamicsConfig {
  double step_length = 1.0;
  std::vector<double> turn_set{-kPi / 2.0, 0.0, kPi / 2.0};
  double x_min = 0.0;
  double x_max = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;

  static DynamicsConfig for_grid(const GridGeometry& geometry, double step_length,
                                 double turn_delta);
  void validate() const;
  bool in_bounds(Point2 p) const;
  double boundary_violation(Point2 p) const;
};

struct Candidate {
  Pose pose;
  double turn = 0.0;
};

// Never empty: if every move leaves the bounds, the least-violating one is kept.
std::vector<Candidate> feasible_actions(const Pose& pose, const DynamicsConfig& dyn);

struct PolicyState {
  OccupancyGrid grid;
  ClassificationMap cmap;
  Pose pose;
  IgWeights weights;
  std::size_t step = 0;

  bool operator==(const PolicyState&) const = default;
};

// Expected one-step reward IG_T of pinging from `candidate`.
double score_action(const PolicyState& state, const Pose& candidate, const SensingModel& sensing);

struct Decision {
  std::size_t index = 0;
  Pose pose;
  std::vector<Candidate> candidates;
  std::vector<double> immediate;  // one-step reward per candidate
  std::vector<double> scores;     // immediate + estimated reward-to-go
};

// Argmax over scores; near-ties (1e-12 relative) go to the smallest |turn|,
// then to the earliest candidate.
std::size_t select_best(const std::vector<Candidate>& candidates,
                        const std::vector<double>& scores);

Decision greedy_step(const PolicyState& state, const DynamicsConfig& dyn,
                     const SensingModel& sensing);

struct RolloutConfig {
  std::size_t horizon = 10;
  std::size_t rollouts_per_action = 10;
  std::size_t threads = 1;

  void validate() const;
};

// One-step reward plus the Monte-Carlo mean of the next `horizon` rewards
// collected by the greedy base policy along futures simulated from the
// agent's own beliefs. Candidate c, rollout r draws from stream.child({c, r}),
// so the result does not depend on evaluation order or thread count.
Decision rollout_step(const PolicyState& state, const DynamicsConfig& dyn,
                      const SensingModel& sensing, const RolloutConfig& cfg,
                      const RandomStream& stream);

// The update applied after every ping, live or simulated: factored occupancy
// update, the bin's label ingested into every cell of each fired bin
// (label 0 = none), pose/step advance and weight refresh.
void apply_observation(PolicyState& state, const Measurement& meas,
                       const std::vector<int>& bin_labels, const SensingModel& sensing);

// A hypothetical ping drawn from the state's beliefs: b_i ~ Bern(p_i), the
// detection through the cell channel, and for each fired bin a label drawn
// from the predictive of its first believed-occupied cell (or its first cell).
struct SimulatedPing {
  Measurement meas;
  std::vector<int> labels;
};
SimulatedPing simulate_ping(const PolicyState& state, const Pose& pose,
                            const SensingModel& sensing, RandomStream& rng);

enum class SweepCorner { south_west, north_east };
SweepCorner corner_from_string(const std::string& s);

// Boustrophedon survey for a starboard-looking sensor. Legs run north/south;
// strip i covers [i*S, (i+1)*S] across track: northbound legs sit on the
// strip's west edge, southbound legs on its east edge, so consecutive swaths
// tile the field. Poses are spaced step_length apart. A positive standoff
// moves every leg that far outward from its strip, e.g. half a cell so the
// legs sit on cell centers like the lattice the other policies move on.
std::vector<Pose> lawnmower_path(const GridGeometry& geometry, double track_spacing,
                                 SweepCorner start = SweepCorner::south_west,
                                 double step_length = 1.0, double standoff = 0.0);

// Sum of straight-line distances between consecutive poses.
double path_length(const std::vector<Pose>& path);

}  // namespace activesense
