#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "activesense/grid.hpp"
#include "activesense/sensor.hpp"

namespace activesense {

// Marginal occupancy posteriors p_i = p(b_i = 1 | J) plus ever-observed flags.
struct OccupancyGrid {
  GridGeometry geometry;
  std::vector<double> p;
  std::vector<std::uint8_t> seen;

  static OccupancyGrid uniform(const GridGeometry& geometry, double prior = 0.5);

  std::size_t size() const { return p.size(); }
  std::size_t seen_count() const;
  bool operator==(const OccupancyGrid&) const = default;
};

// One cell's binary asymmetric channel into a bin.
struct BacLink {
  std::size_t cell = 0;
  double p00 = 1.0;  // p(~b = 0 | b = 0)
  double p01 = 1.0;  // p(~b = 0 | b = 1)
};

// Channel transition probabilities for every (bin, cell) pair of one ping.
struct BacModel {
  std::vector<std::vector<BacLink>> bins;
  double empty_bin_pfa = 0.0;  // false-alarm rate of a bin that covers no cell

  static BacModel build(const GridGeometry& geometry, const Pose& pose,
                        const SensorFootprint& fp, const DetectorParams& params,
                        const std::vector<std::vector<std::size_t>>& associations);
  static BacModel build(const GridGeometry& geometry, const Measurement& meas,
                        const SensorFootprint& fp, const DetectorParams& params) {
    return build(geometry, meas.pose, fp, params, meas.associations);
  }
};

// p(j_k | b) for the cells of one bin; occupancy[i] is the state of links[i].
// An empty bin is a pure false-alarm channel.
double bin_likelihood(std::span<const BacLink> links, std::span<const std::uint8_t> occupancy,
                      int j, double empty_bin_pfa);

// Full joint posterior over all 2^B maps; bit i of a map index is b_i.
class MapPosterior {
 public:
  static constexpr std::size_t kMaxCells = 16;

  static MapPosterior uniform(const GridGeometry& geometry);
  // Product prior from independent marginals.
  static MapPosterior from_marginals(const GridGeometry& geometry, std::span<const double> p);
  MapPosterior(const GridGeometry& geometry, std::vector<double> table);

  const GridGeometry& geometry() const { return geometry_; }
  std::size_t num_cells() const { return geometry_.size(); }
  const std::vector<double>& table() const { return table_; }
  double total() const;

 private:
  GridGeometry geometry_;
  std::vector<double> table_;
};

MapPosterior exact_update(const MapPosterior& post, const Measurement& meas,
                          const BacModel& model);
double exact_marginal(const MapPosterior& post, std::size_t cell);

// Independent per-cell Bayes update through each cell's own channel. Exact
// when every bin covers at most one cell.
void factored_update(OccupancyGrid& grid, const Measurement& meas, const BacModel& model);

// Dense row-major matrix (row 0 first), one comment header line.
void write_occupancy_csv(std::ostream& out, const OccupancyGrid& grid,
                         const std::string& header_extra = {});

}  // namespace activesense
