#include "activesense/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace activesense {
namespace {

constexpr double kSnapTol = 1e-12;
constexpr double kHalfPi = kPi / 2.0;
// Range comparisons tolerate rounding so cell centers sitting exactly on a
// bin's outer edge stay in that bin.
constexpr double kRangeTol = 1e-9;

}  // namespace

GridGeometry::GridGeometry(std::size_t n_rows, std::size_t n_cols, double cell_size,
                           Point2 origin)
    : n_rows_(n_rows), n_cols_(n_cols), cell_size_(cell_size), origin_(origin) {
  if (n_rows == 0 || n_cols == 0) {
    throw std::invalid_argument("GridGeometry: n_rows and n_cols must be >= 1");
  }
  if (!(cell_size > 0.0)) {
    throw std::invalid_argument("GridGeometry: cell_size must be > 0");
  }
}

std::size_t GridGeometry::index(std::size_t row, std::size_t col) const {
  if (row >= n_rows_ || col >= n_cols_) {
    throw std::out_of_range("GridGeometry::index: cell outside grid");
  }
  return row * n_cols_ + col;
}

CellCoord GridGeometry::coord(std::size_t idx) const {
  if (idx >= size()) {
    throw std::out_of_range("GridGeometry::coord: index outside grid");
  }
  return {idx / n_cols_, idx % n_cols_};
}

Point2 GridGeometry::center(std::size_t idx) const {
  const CellCoord c = coord(idx);
  return {origin_.x + (static_cast<double>(c.col) + 0.5) * cell_size_,
          origin_.y + (static_cast<double>(c.row) + 0.5) * cell_size_};
}

bool GridGeometry::contains(Point2 p) const {
  return p.x >= origin_.x && p.x <= origin_.x + width() && p.y >= origin_.y &&
         p.y <= origin_.y + height();
}

std::optional<std::size_t> GridGeometry::cell_at(Point2 p) const {
  if (!contains(p)) {
    return std::nullopt;
  }
  auto col = static_cast<std::size_t>((p.x - origin_.x) / cell_size_);
  auto row = static_cast<std::size_t>((p.y - origin_.y) / cell_size_);
  col = std::min(col, n_cols_ - 1);
  row = std::min(row, n_rows_ - 1);
  return index(row, col);
}

double normalize_heading(double heading) {
  double h = std::fmod(heading, kTwoPi);
  if (h < 0.0) {
    h += kTwoPi;
  }
  const double quarter = std::round(h / kHalfPi);
  if (std::abs(h - quarter * kHalfPi) < kSnapTol) {
    h = std::fmod(quarter, 4.0) * kHalfPi;
  }
  if (h >= kTwoPi) {
    h = 0.0;
  }
  return h;
}

Point2 heading_direction(double heading) {
  const double h = normalize_heading(heading);
  if (h == 0.0) return {1.0, 0.0};
  if (h == kHalfPi) return {0.0, 1.0};
  if (h == kPi) return {-1.0, 0.0};
  if (h == 3.0 * kHalfPi) return {0.0, -1.0};
  return {std::cos(h), std::sin(h)};
}

Point2 Pose::starboard() const {
  const Point2 d = heading_direction(heading);
  return {d.y, -d.x};
}

SensorFootprint SensorFootprint::make(std::size_t num_bins, double bin_spacing,
                                      double beamwidth) {
  SensorFootprint fp;
  fp.num_bins = num_bins;
  fp.bin_spacing = bin_spacing;
  fp.max_range = static_cast<double>(num_bins) * bin_spacing;
  fp.beamwidth = beamwidth;
  fp.validate();
  return fp;
}

void SensorFootprint::validate() const {
  if (num_bins == 0) {
    throw std::invalid_argument("SensorFootprint: num_bins must be >= 1");
  }
  if (!(bin_spacing > 0.0)) {
    throw std::invalid_argument("SensorFootprint: bin_spacing must be > 0");
  }
  if (!(beamwidth > 0.0)) {
    throw std::invalid_argument("SensorFootprint: beamwidth must be > 0");
  }
  if (static_cast<double>(num_bins) * bin_spacing > max_range + kRangeTol) {
    throw std::invalid_argument("SensorFootprint: num_bins * bin_spacing exceeds max_range");
  }
}

std::optional<std::size_t> bin_containing(const Pose& pose, const SensorFootprint& fp,
                                          Point2 p) {
  const double dx = p.x - pose.x;
  const double dy = p.y - pose.y;
  const double range = std::hypot(dx, dy);
  if (range <= kRangeTol || range > fp.swath() + kRangeTol) {
    return std::nullopt;
  }
  const Point2 sb = pose.starboard();
  const double along = (dx * sb.x + dy * sb.y) / range;
  const double across = (dx * sb.y - dy * sb.x) / range;
  const double off_axis = std::abs(std::atan2(across, along));
  if (off_axis > 0.5 * fp.beamwidth) {
    return std::nullopt;
  }
  auto k = static_cast<std::size_t>(std::ceil((range - kRangeTol) / fp.bin_spacing));
  k = k == 0 ? 0 : k - 1;
  return std::min(k, fp.num_bins - 1);
}

Point2 bin_sample_point(const Pose& pose, const SensorFootprint& fp, std::size_t k) {
  const Point2 sb = pose.starboard();
  const double r = (static_cast<double>(k) + 0.5) * fp.bin_spacing;
  return {pose.x + r * sb.x, pose.y + r * sb.y};
}

std::vector<ObservedCell> observe(const GridGeometry& geometry, const Pose& pose,
                                  const SensorFootprint& fp) {
  std::vector<ObservedCell> out;
  // Only cells within the bounding box of the sensing disc can be in range.
  const double reach = fp.swath() + geometry.cell_size();
  const Point2 o = geometry.origin();
  const double cs = geometry.cell_size();
  const auto clamp_lo = [](double v) { return v < 0.0 ? 0.0 : v; };
  const double col_lo = clamp_lo(std::floor((pose.x - reach - o.x) / cs));
  const double col_hi = std::ceil((pose.x + reach - o.x) / cs);
  const double row_lo = clamp_lo(std::floor((pose.y - reach - o.y) / cs));
  const double row_hi = std::ceil((pose.y + reach - o.y) / cs);
  if (col_hi < 0.0 || row_hi < 0.0) {
    return out;
  }
  const auto c0 = static_cast<std::size_t>(col_lo);
  const auto r0 = static_cast<std::size_t>(row_lo);
  const auto c1 = std::min(static_cast<std::size_t>(col_hi), geometry.n_cols() - 1);
  const auto r1 = std::min(static_cast<std::size_t>(row_hi), geometry.n_rows() - 1);
  if (c0 >= geometry.n_cols() || r0 >= geometry.n_rows()) {
    return out;
  }
  for (std::size_t r = r0; r <= r1; ++r) {
    for (std::size_t c = c0; c <= c1; ++c) {
      const std::size_t idx = geometry.index(r, c);
      const Point2 ctr = geometry.center(idx);
      if (auto k = bin_containing(pose, fp, ctr)) {
        const Point2 s = bin_sample_point(pose, fp, *k);
        out.push_back({idx, *k, std::hypot(ctr.x - s.x, ctr.y - s.y)});
      }
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> footprint_bins(const GridGeometry& geometry,
                                                     const Pose& pose,
                                                     const SensorFootprint& fp) {
  std::vector<std::vector<std::size_t>> bins(fp.num_bins);
  for (const ObservedCell& oc : observe(geometry, pose, fp)) {
    bins[oc.bin].push_back(oc.cell);
  }
  return bins;
}

std::vector<std::size_t> cells_in_bin(const GridGeometry& geometry, const Pose& pose,
                                      const SensorFootprint& fp, std::size_t k) {
  if (k >= fp.num_bins) {
    throw std::out_of_range("cells_in_bin: bin index out of range");
  }
  return footprint_bins(geometry, pose, fp)[k];
}

double dist(const GridGeometry& geometry, std::size_t cell, const Pose& pose,
            const SensorFootprint& fp, std::size_t k) {
  const Point2 c = geometry.center(cell);
  const Point2 s = bin_sample_point(pose, fp, k);
  return std::hypot(c.x - s.x, c.y - s.y);
}

std::vector<std::size_t> observed_cells(const GridGeometry& geometry, const Pose& pose,
                                        const SensorFootprint& fp) {
  std::vector<std::size_t> out;
  for (const ObservedCell& oc : observe(geometry, pose, fp)) {
    out.push_back(oc.cell);
  }
  return out;
}

}  // namespace activesense
