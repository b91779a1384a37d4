#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace activesense {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

struct CellCoord {
  std::size_t row = 0;
  std::size_t col = 0;
  bool operator==(const CellCoord&) const = default;
};

// Rectangular grid of square cells. Row 0 is the southern edge, column 0 the
// western edge; flat index = row * n_cols + col.
class GridGeometry {
 public:
  GridGeometry(std::size_t n_rows, std::size_t n_cols, double cell_size,
               Point2 origin = {});

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return n_cols_; }
  double cell_size() const { return cell_size_; }
  Point2 origin() const { return origin_; }
  std::size_t size() const { return n_rows_ * n_cols_; }

  double width() const { return static_cast<double>(n_cols_) * cell_size_; }
  double height() const { return static_cast<double>(n_rows_) * cell_size_; }

  std::size_t index(std::size_t row, std::size_t col) const;
  std::size_t index(CellCoord c) const { return index(c.row, c.col); }
  CellCoord coord(std::size_t idx) const;
  Point2 center(std::size_t idx) const;

  bool contains(Point2 p) const;
  // Cell containing p, if any (right/top edges belong to the last cell).
  std::optional<std::size_t> cell_at(Point2 p) const;

  bool operator==(const GridGeometry&) const = default;

 private:
  std::size_t n_rows_;
  std::size_t n_cols_;
  double cell_size_;
  Point2 origin_;
};

// Heading is measured counter-clockwise from +x and kept in [0, 2*pi).
// Values within 1e-12 of a multiple of pi/2 are snapped onto it so that
// axis-aligned motion stays exact.
double normalize_heading(double heading);
Point2 heading_direction(double heading);

struct Pose {
  double x = 0.0;
  double y = 0.0;
  double heading = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double heading_)
      : x(x_), y(y_), heading(normalize_heading(heading_)) {}

  Point2 position() const { return {x, y}; }
  // Unit vector pointing to starboard (heading rotated by -pi/2).
  Point2 starboard() const;

  bool operator==(const Pose&) const = default;
};

// Side-looking sensor: num_bins annular-sector range bins on the starboard
// side, each bin_spacing deep, sharing one angular beamwidth.
struct SensorFootprint {
  std::size_t num_bins = 5;
  double bin_spacing = 1.0;
  double max_range = 5.0;
  double beamwidth = 7.0 * kPi / 180.0;

  static SensorFootprint make(std::size_t num_bins, double bin_spacing, double beamwidth);
  void validate() const;
  double swath() const { return static_cast<double>(num_bins) * bin_spacing; }
};

// A cell seen from a pose: which bin it falls in and its distance to that
// bin's sample point.
struct ObservedCell {
  std::size_t cell = 0;
  std::size_t bin = 0;
  double dist = 0.0;
};

// Bin (0-based) whose sector contains point p, if any.
std::optional<std::size_t> bin_containing(const Pose& pose, const SensorFootprint& fp,
                                          Point2 p);

// Sample point of bin k: the sector midpoint at range (k + 1/2) * bin_spacing.
Point2 bin_sample_point(const Pose& pose, const SensorFootprint& fp, std::size_t k);

// Per-bin cell lists (ascending cell index) for the footprint at pose.
std::vector<std::vector<std::size_t>> footprint_bins(const GridGeometry& geometry,
                                                     const Pose& pose,
                                                     const SensorFootprint& fp);

std::vector<std::size_t> cells_in_bin(const GridGeometry& geometry, const Pose& pose,
                                      const SensorFootprint& fp, std::size_t k);

double dist(const GridGeometry& geometry, std::size_t cell, const Pose& pose,
            const SensorFootprint& fp, std::size_t k);

// Union of all bins, ascending cell index.
std::vector<std::size_t> observed_cells(const GridGeometry& geometry, const Pose& pose,
                                        const SensorFootprint& fp);

// Observed cells with bin membership and sample-point distance, ascending cell index.
std::vector<ObservedCell> observe(const GridGeometry& geometry, const Pose& pose,
                                  const SensorFootprint& fp);

}  // namespace activesense
