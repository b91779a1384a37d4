#include "activesense/planning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace activesense {

DynamicsConfig DynamicsConfig::for_grid(const GridGeometry& geometry, double step_length,
                                        double turn_delta) {
  DynamicsConfig d;
  d.step_length = step_length;
  d.turn_set = {-turn_delta, 0.0, turn_delta};
  d.x_min = geometry.origin().x;
  d.x_max = geometry.origin().x + geometry.width();
  d.y_min = geometry.origin().y;
  d.y_max = geometry.origin().y + geometry.height();
  d.validate();
  return d;
}

void DynamicsConfig::validate() const {
  if (!(step_length > 0.0)) {
    throw std::invalid_argument("DynamicsConfig: step_length must be > 0");
  }
  if (turn_set.empty()) {
    throw std::invalid_argument("DynamicsConfig: turn_set must not be empty");
  }
  if (!(x_max > x_min && y_max > y_min)) {
    throw std::invalid_argument("DynamicsConfig: empty bounds");
  }
}

bool DynamicsConfig::in_bounds(Point2 p) const {
  return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
}

double DynamicsConfig::boundary_violation(Point2 p) const {
  const double dx = std::max({x_min - p.x, 0.0, p.x - x_max});
  const double dy = std::max({y_min - p.y, 0.0, p.y - y_max});
  return std::hypot(dx, dy);
}

std::vector<Candidate> feasible_actions(const Pose& pose, const DynamicsConfig& dyn) {
  std::vector<Candidate> out;
  std::vector<Candidate> all;
  for (double turn : dyn.turn_set) {
    const double heading = normalize_heading(pose.heading + turn);
    const Point2 d = heading_direction(heading);
    Candidate c{Pose(pose.x + dyn.step_length * d.x, pose.y + dyn.step_length * d.y, heading),
                turn};
    all.push_back(c);
    if (dyn.in_bounds(c.pose.position())) {
      out.push_back(c);
    }
  }
  if (out.empty()) {
    const auto best = std::min_element(all.begin(), all.end(), [&](const auto& a, const auto& b) {
      return dyn.boundary_violation(a.pose.position()) < dyn.boundary_violation(b.pose.position());
    });
    out.push_back(*best);
  }
  return out;
}

double score_action(const PolicyState& state, const Pose& candidate,
                    const SensingModel& sensing) {
  const auto cells = observe(state.grid.geometry, candidate, sensing.footprint);
  return total_ig(state.grid, state.cmap, cells, sensing.detector, state.weights).ig_total;
}

std::size_t select_best(const std::vector<Candidate>& candidates,
                        const std::vector<double>& scores) {
  if (candidates.empty() || candidates.size() != scores.size()) {
    throw std::invalid_argument("select_best: candidates and scores must be non-empty and aligned");
  }
  const double top = *std::max_element(scores.begin(), scores.end());
  const double tol = 1e-12 * std::max(1.0, std::abs(top));
  std::size_t best = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (scores[i] < top - tol) {
      continue;
    }
    if (best == candidates.size() ||
        std::abs(candidates[i].turn) < std::abs(candidates[best].turn)) {
      best = i;
    }
  }
  return best;
}

Decision greedy_step(const PolicyState& state, const DynamicsConfig& dyn,
                     const SensingModel& sensing) {
  Decision d;
  d.candidates = feasible_actions(state.pose, dyn);
  for (const Candidate& c : d.candidates) {
    d.immediate.push_back(score_action(state, c.pose, sensing));
  }
  d.scores = d.immediate;
  d.index = select_best(d.candidates, d.scores);
  d.pose = d.candidates[d.index].pose;
  return d;
}

void RolloutConfig::validate() const {
  if (rollouts_per_action == 0) {
    throw std::invalid_argument("RolloutConfig: rollouts_per_action must be >= 1");
  }
}

void apply_observation(PolicyState& state, const Measurement& meas,
                       const std::vector<int>& bin_labels, const SensingModel& sensing) {
  const BacModel model =
      BacModel::build(state.grid.geometry, meas, sensing.footprint, sensing.detector);
  factored_update(state.grid, meas, model);
  for (std::size_t k = 0; k < meas.bins.size(); ++k) {
    if (!meas.bins[k] || k >= bin_labels.size() || bin_labels[k] == 0) {
      continue;
    }
    for (std::size_t cell : meas.associations[k]) {
      state.cmap.ingest(cell, bin_labels[k]);
    }
  }
  state.pose = meas.pose;
  state.step += 1;
  state.weights = state.weights.refreshed(state.grid);
}

SimulatedPing simulate_ping(const PolicyState& state, const Pose& pose,
                            const SensingModel& sensing, RandomStream& rng) {
  const GridGeometry& g = state.grid.geometry;
  SimulatedPing out;
  out.meas.time_index = state.step + 1;
  out.meas.pose = pose;
  out.meas.associations = footprint_bins(g, pose, sensing.footprint);
  const std::size_t K = sensing.footprint.num_bins;
  out.meas.bins.assign(K, 0);
  out.labels.assign(K, 0);
  std::vector<double> weights(state.cmap.num_classes());
  for (std::size_t k = 0; k < K; ++k) {
    const auto& cells = out.meas.associations[k];
    if (cells.empty()) {
      out.meas.bins[k] = rng.uniform() < sensing.detector.p_fa ? 1 : 0;
      continue;
    }
    bool fired = false;
    std::size_t source = cells.front();
    bool have_source = false;
    for (std::size_t cell : cells) {
      const bool occupied = rng.uniform() < state.grid.p[cell];
      const CellChannel ch = channel_at(sensing.detector, dist(g, cell, pose, sensing.footprint, k));
      const bool hit = rng.uniform() < (occupied ? ch.p_detect_occupied : ch.p_detect_empty);
      fired = fired || hit;
      if (occupied && !have_source) {
        source = cell;
        have_source = true;
      }
    }
    out.meas.bins[k] = fired ? 1 : 0;
    if (fired) {
      const auto a = state.cmap.alpha(source);
      weights.assign(a.begin(), a.end());
      out.labels[k] = static_cast<int>(rng.categorical(weights)) + 1;
    }
  }
  return out;
}

namespace {

double rollout_return(const PolicyState& state, const Pose& first, const DynamicsConfig& dyn,
                      const SensingModel& sensing, std::size_t horizon, RandomStream rng) {
  PolicyState scratch = state;
  SimulatedPing ping = simulate_ping(scratch, first, sensing, rng);
  apply_observation(scratch, ping.meas, ping.labels, sensing);
  double total = 0.0;
  for (std::size_t i = 0; i < horizon; ++i) {
    const Decision d = greedy_step(scratch, dyn, sensing);
    total += d.immediate[d.index];
    if (i + 1 == horizon) {
      break;  // the last state is never scored again
    }
    ping = simulate_ping(scratch, d.pose, sensing, rng);
    apply_observation(scratch, ping.meas, ping.labels, sensing);
  }
  return total;
}

}  // namespace

Decision rollout_step(const PolicyState& state, const DynamicsConfig& dyn,
                      const SensingModel& sensing, const RolloutConfig& cfg,
                      const RandomStream& stream) {
  cfg.validate();
  Decision d;
  d.candidates = feasible_actions(state.pose, dyn);
  const std::size_t n = d.candidates.size();
  d.immediate.assign(n, 0.0);
  d.scores.assign(n, 0.0);

  auto evaluate = [&](std::size_t c) {
    d.immediate[c] = score_action(state, d.candidates[c].pose, sensing);
    double future = 0.0;
    if (cfg.horizon > 0) {
      double sum = 0.0;
      for (std::size_t r = 0; r < cfg.rollouts_per_action; ++r) {
        sum += rollout_return(state, d.candidates[c].pose, dyn, sensing, cfg.horizon,
                              stream.child({c, r}));
      }
      future = sum / static_cast<double>(cfg.rollouts_per_action);
    }
    d.scores[c] = d.immediate[c] + future;
  };

  if (cfg.threads > 1 && n > 1) {
    std::vector<std::thread> workers;
    workers.reserve(n);
    for (std::size_t c = 0; c < n; ++c) {
      workers.emplace_back(evaluate, c);
    }
    for (auto& w : workers) {
      w.join();
    }
  } else {
    for (std::size_t c = 0; c < n; ++c) {
      evaluate(c);
    }
  }
  d.index = select_best(d.candidates, d.scores);
  d.pose = d.candidates[d.index].pose;
  return d;
}

SweepCorner corner_from_string(const std::string& s) {
  if (s == "south_west") return SweepCorner::south_west;
  if (s == "north_east") return SweepCorner::north_east;
  throw std::invalid_argument("unknown sweep corner '" + s + "'");
}

std::vector<Pose> lawnmower_path(const GridGeometry& geometry, double track_spacing,
                                 SweepCorner start, double step_length, double standoff) {
  if (!(track_spacing > 0.0)) {
    throw std::invalid_argument("lawnmower_path: track_spacing must be > 0");
  }
  if (!(step_length > 0.0)) {
    throw std::invalid_argument("lawnmower_path: step_length must be > 0");
  }
  if (!(standoff >= 0.0)) {
    throw std::invalid_argument("lawnmower_path: standoff must be >= 0");
  }
  constexpr double kEps = 1e-9;
  const double W = geometry.width();
  const double H = geometry.height();
  const double north = kPi / 2.0;
  const double south = 3.0 * kPi / 2.0;

  // Along-track stations, local frame with the origin at the start corner.
  std::vector<double> stations;
  for (double y = 0.5 * step_length; y < H - kEps; y += step_length) {
    stations.push_back(y);
  }
  if (stations.empty()) {
    stations.push_back(0.5 * H);
  }

  std::vector<Pose> local;
  double x_prev = 0.0;
  for (std::size_t strip = 0; static_cast<double>(strip) * track_spacing < W - kEps; ++strip) {
    const bool northbound = strip % 2 == 0;
    const double x = northbound ? static_cast<double>(strip) * track_spacing - standoff
                                : std::min(static_cast<double>(strip + 1) * track_spacing, W) + standoff;
    if (!local.empty()) {
      const double y_turn = local.back().y;
      for (double xt = x_prev + step_length; xt < x - kEps; xt += step_length) {
        local.emplace_back(xt, y_turn, 0.0);
      }
    }
    if (northbound) {
      for (double y : stations) local.emplace_back(x, y, north);
    } else {
      for (auto it = stations.rbegin(); it != stations.rend(); ++it) local.emplace_back(x, *it, south);
    }
    x_prev = x;
  }

  const Point2 o = geometry.origin();
  std::vector<Pose> path;
  path.reserve(local.size());
  for (const Pose& p : local) {
    if (start == SweepCorner::south_west) {
      path.emplace_back(o.x + p.x, o.y + p.y, p.heading);
    } else {
      // Half-turn about the field center keeps the starboard side consistent.
      path.emplace_back(o.x + W - p.x, o.y + H - p.y, p.heading + kPi);
    }
  }
  return path;
}

double path_length(const std::vector<Pose>& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += std::hypot(path[i].x - path[i - 1].x, path[i].y - path[i - 1].y);
  }
  return total;
}

}  // namespace activesense
