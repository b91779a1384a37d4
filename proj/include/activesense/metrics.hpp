#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "activesense/classify.hpp"
#include "activesense/occupancy.hpp"
#include "activesense/scene.hpp"

namespace activesense {

// One probability vector per cell, stored row-major (rows x width).
struct DistributionSet {
  std::size_t width = 0;
  std::vector<double> values;

  std::size_t rows() const { return width ? values.size() / width : 0; }
  const double* row(std::size_t i) const { return values.data() + i * width; }
  void validate(double tol = 1e-9) const;
};

// Occupancy rows are (p(b=1), p(b=0)).
DistributionSet occupancy_truth(const Scene& scene);
DistributionSet occupancy_estimate(const OccupancyGrid& grid);
// Target cells: one-hot on their class. Empty cells: uniform.
DistributionSet class_truth(const Scene& scene);
DistributionSet class_estimate(const ClassificationMap& cmap);

// Cosine similarity <t, e>_F / (|t|_F |e|_F).
double rho(const DistributionSet& t, const DistributionSet& e);

// Sum over cells of the Jensen-Shannon divergence, in nats.
double sjsd(const DistributionSet& t, const DistributionSet& e);

double pct_seen(const OccupancyGrid& grid);

struct MetricsRow {
  std::size_t step = 0;
  double pct_seen = 0.0;
  double rho_det = 0.0;
  double rho_class = 0.0;
  double sjsd_det = 0.0;
  double sjsd_class = 0.0;

  bool operator==(const MetricsRow&) const = default;
};

MetricsRow evaluate(std::size_t step, const Scene& scene, const OccupancyGrid& grid,
                    const ClassificationMap& cmap);

inline constexpr const char* kMetricsHeader = "step,pct_seen,rho_det,rho_class,sjsd_det,sjsd_class";
void write_metrics_row(std::ostream& out, const MetricsRow& row);
// Parses a metrics file, skipping '#' comment lines and the column header.
std::vector<MetricsRow> read_metrics(std::istream& in);

}  // namespace activesense
