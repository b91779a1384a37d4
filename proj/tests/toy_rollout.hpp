#pragma once

// 6x6 toy for checking rollout against an exhaustive expectation over the
// full action/outcome tree. The three first moves see equally fresh cells;
// only the right turn leads on into a fresh 2x2 block.

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "activesense/planning.hpp"

namespace toy {

using namespace activesense;

inline SensingModel sensing() {
  DetectorParams det;
  det.p_d = 0.9;
  det.p_fa = 0.1;
  det.mode = AttenuationMode::none;
  return {SensorFootprint::make(2, 1.0, 7.0 * kPi / 180.0), det};
}

inline GridGeometry geometry() { return GridGeometry(6, 6, 1.0); }

inline DynamicsConfig dynamics() { return DynamicsConfig::for_grid(geometry(), 1.0, kPi / 2.0); }

inline PolicyState state() {
  const GridGeometry g = geometry();
  OccupancyGrid grid = OccupancyGrid::uniform(g, 0.0);
  auto fresh = [&](std::size_t r, std::size_t c) { grid.p[g.index(r, c)] = 0.5; };
  // Immediate footprints of the three candidates from (2.5, 2.5) heading north.
  fresh(1, 3);
  fresh(0, 3);  // right turn (east)
  fresh(3, 3);
  fresh(3, 4);  // straight
  fresh(3, 1);
  fresh(4, 1);  // left turn (west)
  // Fresh block two moves beyond the right turn.
  fresh(0, 4);
  fresh(1, 4);
  fresh(0, 5);
  fresh(1, 5);
  return PolicyState{grid, ClassificationMap(g, 2), Pose(2.5, 2.5, kPi / 2.0),
                     IgWeights::fixed(1.0), 0};
}

struct Outcome {
  std::vector<std::uint8_t> bins;
  std::vector<int> labels;
  double prob = 1.0;
};

// Exact distribution of a belief-sampled ping: per bin, cell occupancies
// drawn from p, each cell's detection through its channel, the label from
// the predictive of the first occupied cell (else the first cell).
inline std::vector<Outcome> ping_outcomes(const PolicyState& s, const Pose& pose,
                                          const SensingModel& sm) {
  const GridGeometry& g = s.grid.geometry;
  const auto assoc = footprint_bins(g, pose, sm.footprint);
  std::vector<Outcome> out{Outcome{{}, {}, 1.0}};
  for (std::size_t k = 0; k < assoc.size(); ++k) {
    std::map<std::pair<int, int>, double> bin_dist;  // (j, label) -> prob
    const auto& cells = assoc[k];
    if (cells.empty()) {
      bin_dist[{0, 0}] = 1.0 - sm.detector.p_fa;
      bin_dist[{1, 0}] = sm.detector.p_fa;
    } else {
      const std::size_t n = cells.size();
      for (std::size_t occ = 0; occ < (std::size_t{1} << n); ++occ) {
        double p_occ = 1.0;
        double p_silent = 1.0;
        std::size_t source = cells.front();
        bool have = false;
        for (std::size_t i = 0; i < n; ++i) {
          const bool b = (occ >> i) & 1u;
          const std::size_t cell = cells[i];
          p_occ *= b ? s.grid.p[cell] : 1.0 - s.grid.p[cell];
          const CellChannel ch = channel_at(sm.detector, dist(g, cell, pose, sm.footprint, k));
          p_silent *= 1.0 - (b ? ch.p_detect_occupied : ch.p_detect_empty);
          if (b && !have) {
            source = cell;
            have = true;
          }
        }
        if (p_occ == 0.0) continue;
        bin_dist[{0, 0}] += p_occ * p_silent;
        const auto pred = s.cmap.predictive(source);
        for (std::size_t l = 0; l < pred.size(); ++l) {
          bin_dist[{1, static_cast<int>(l) + 1}] += p_occ * (1.0 - p_silent) * pred[l];
        }
      }
    }
    std::vector<Outcome> next;
    for (const Outcome& o : out) {
      for (const auto& [key, p] : bin_dist) {
        if (p == 0.0) continue;
        Outcome e = o;
        e.bins.push_back(static_cast<std::uint8_t>(key.first));
        e.labels.push_back(key.second);
        e.prob *= p;
        next.push_back(std::move(e));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline PolicyState after(const PolicyState& s, const Pose& pose, const Outcome& o,
                         const SensingModel& sm) {
  PolicyState n = s;
  Measurement m;
  m.time_index = s.step + 1;
  m.pose = pose;
  m.bins = o.bins;
  m.associations = footprint_bins(s.grid.geometry, pose, sm.footprint);
  apply_observation(n, m, o.labels, sm);
  return n;
}

// Expected sum of the next `depth` greedy rewards after pinging at `pose`.
inline double expected_future(const PolicyState& s, const Pose& pose, std::size_t depth,
                              const DynamicsConfig& dyn, const SensingModel& sm) {
  if (depth == 0) return 0.0;
  double v = 0.0;
  for (const Outcome& o : ping_outcomes(s, pose, sm)) {
    const PolicyState n = after(s, pose, o, sm);
    const Decision d = greedy_step(n, dyn, sm);
    v += o.prob * (d.immediate[d.index] + expected_future(n, d.pose, depth - 1, dyn, sm));
  }
  return v;
}

struct OracleDecision {
  std::size_t index = 0;
  std::vector<Candidate> candidates;
  std::vector<double> values;
};

inline OracleDecision exhaustive(const PolicyState& s, std::size_t horizon,
                                 const DynamicsConfig& dyn, const SensingModel& sm) {
  OracleDecision od;
  od.candidates = feasible_actions(s.pose, dyn);
  for (const Candidate& c : od.candidates) {
    od.values.push_back(score_action(s, c.pose, sm) + expected_future(s, c.pose, horizon, dyn, sm));
  }
  od.index = select_best(od.candidates, od.values);
  return od;
}

}  // namespace toy
