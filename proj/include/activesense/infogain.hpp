#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "activesense/classify.hpp"
#include "activesense/grid.hpp"
#include "activesense/occupancy.hpp"
#include "activesense/sensor.hpp"

namespace activesense {

// All entropies and informations are in nats.

double binary_entropy(double p);

// I(b; j) for one cell with prior occupancy p through a binary channel with
// detection probability p_d and false-alarm probability p_fa, computed as
// H(b) - H(b | j) from the joint p(j | b) p(b). Zero-probability terms
// contribute nothing.
double detection_mi(double p, double p_d, double p_fa);

// Sum of detection_mi over the observed cells, each through its own channel.
double detection_ig(const OccupancyGrid& grid, std::span<const ObservedCell> cells,
                    const DetectorParams& params);

// Differential entropy of Dir(alpha):
//   log B(alpha) + (alpha_0 - L) psi(alpha_0) - sum_l (alpha_l - 1) psi(alpha_l)
double dirichlet_entropy(std::span<const double> alpha);
inline double dirichlet_entropy(const DirichletParams& params) {
  return dirichlet_entropy(params.alpha());
}

// I(lambda; c) = h(Dir(alpha)) - sum_c (alpha_c / alpha_0) h(Dir(alpha + e_c)).
double classification_mi(std::span<const double> alpha);
inline double classification_mi(const DirichletParams& params) {
  return classification_mi(params.alpha());
}

double classification_ig(const ClassificationMap& cmap, std::span<const ObservedCell> cells);

enum class WeightSchedule { fixed, coverage_linked };

WeightSchedule schedule_from_string(const std::string& s);
std::string to_string(WeightSchedule s);

// Convex weights of the two normalized gains. Under coverage_linked,
// w_d tracks the unseen fraction of the grid.
struct IgWeights {
  double w_d = 1.0;
  double w_c = 0.0;
  WeightSchedule schedule = WeightSchedule::coverage_linked;

  static IgWeights fixed(double w_d);
  static IgWeights coverage_linked(const OccupancyGrid& grid);

  void validate() const;
  IgWeights refreshed(const OccupancyGrid& grid) const;

  bool operator==(const IgWeights&) const = default;
};

struct CellGain {
  std::size_t cell = 0;
  double detection = 0.0;
  double classification = 0.0;
};

struct IgReport {
  double ig_d = 0.0;
  double ig_c = 0.0;
  double ig_total = 0.0;
  std::vector<CellGain> per_cell;
};

// w_d * IG_D / (|G| log 2) + w_c * IG_C / (|G| log L); 0 for an empty view.
// With L == 1 the classification term is identically 0.
IgReport total_ig(const OccupancyGrid& grid, const ClassificationMap& cmap,
                  std::span<const ObservedCell> cells, const DetectorParams& params,
                  const IgWeights& weights, bool with_per_cell = false);

}  // namespace activesense
