#include "activesense/occupancy.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace activesense {

OccupancyGrid OccupancyGrid::uniform(const GridGeometry& geometry, double prior) {
  if (!(prior >= 0.0 && prior <= 1.0)) {
    throw std::invalid_argument("OccupancyGrid: prior outside [0, 1]");
  }
  return {geometry, std::vector<double>(geometry.size(), prior),
          std::vector<std::uint8_t>(geometry.size(), 0)};
}

std::size_t OccupancyGrid::seen_count() const {
  std::size_t n = 0;
  for (auto s : seen) {
    n += s ? 1 : 0;
  }
  return n;
}

BacModel BacModel::build(const GridGeometry& geometry, const Pose& pose,
                         const SensorFootprint& fp, const DetectorParams& params,
                         const std::vector<std::vector<std::size_t>>& associations) {
  BacModel model;
  model.empty_bin_pfa = params.p_fa;
  model.bins.resize(associations.size());
  for (std::size_t k = 0; k < associations.size(); ++k) {
    for (std::size_t cell : associations[k]) {
      const CellChannel ch = channel_at(params, dist(geometry, cell, pose, fp, k));
      model.bins[k].push_back({cell, ch.p00(), ch.p01()});
    }
  }
  return model;
}

double bin_likelihood(std::span<const BacLink> links, std::span<const std::uint8_t> occupancy,
                      int j, double empty_bin_pfa) {
  if (links.size() != occupancy.size()) {
    throw std::invalid_argument("bin_likelihood: occupancy does not match links");
  }
  double p_zero = 1.0;
  if (links.empty()) {
    p_zero = 1.0 - empty_bin_pfa;
  } else {
    for (std::size_t i = 0; i < links.size(); ++i) {
      p_zero *= occupancy[i] ? links[i].p01 : links[i].p00;
    }
  }
  return j == 0 ? p_zero : 1.0 - p_zero;
}

namespace {

void check_exact_size(const GridGeometry& geometry) {
  if (geometry.size() > MapPosterior::kMaxCells) {
    throw std::invalid_argument("MapPosterior: grid exceeds exact-engine cell limit");
  }
}

}  // namespace

MapPosterior::MapPosterior(const GridGeometry& geometry, std::vector<double> table)
    : geometry_(geometry), table_(std::move(table)) {
  check_exact_size(geometry_);
  if (table_.size() != (std::size_t{1} << geometry_.size())) {
    throw std::invalid_argument("MapPosterior: table size must be 2^B");
  }
}

MapPosterior MapPosterior::uniform(const GridGeometry& geometry) {
  check_exact_size(geometry);
  const std::size_t n = std::size_t{1} << geometry.size();
  return MapPosterior(geometry, std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

MapPosterior MapPosterior::from_marginals(const GridGeometry& geometry,
                                          std::span<const double> p) {
  check_exact_size(geometry);
  if (p.size() != geometry.size()) {
    throw std::invalid_argument("MapPosterior: marginal vector size mismatch");
  }
  const std::size_t n = std::size_t{1} << geometry.size();
  std::vector<double> table(n, 1.0);
  for (std::size_t m = 0; m < n; ++m) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      table[m] *= ((m >> i) & 1U) ? p[i] : 1.0 - p[i];
    }
  }
  return MapPosterior(geometry, std::move(table));
}

double MapPosterior::total() const {
  double s = 0.0;
  for (double v : table_) {
    s += v;
  }
  return s;
}

MapPosterior exact_update(const MapPosterior& post, const Measurement& meas,
                          const BacModel& model) {
  if (model.bins.size() != meas.bins.size()) {
    throw std::invalid_argument("exact_update: model and measurement bin counts differ");
  }
  std::vector<double> table = post.table();
  std::vector<std::uint8_t> bits;
  for (std::size_t m = 0; m < table.size(); ++m) {
    if (table[m] == 0.0) {
      continue;
    }
    double like = 1.0;
    for (std::size_t k = 0; k < model.bins.size(); ++k) {
      const auto& links = model.bins[k];
      bits.resize(links.size());
      for (std::size_t i = 0; i < links.size(); ++i) {
        bits[i] = static_cast<std::uint8_t>((m >> links[i].cell) & 1U);
      }
      like *= bin_likelihood(links, bits, meas.bins[k], model.empty_bin_pfa);
    }
    table[m] *= like;
  }
  double z = 0.0;
  for (double v : table) {
    z += v;
  }
  if (!(z > 0.0)) {
    throw std::runtime_error("exact_update: measurement has zero probability under the prior");
  }
  for (double& v : table) {
    v /= z;
  }
  return MapPosterior(post.geometry(), std::move(table));
}

double exact_marginal(const MapPosterior& post, std::size_t cell) {
  if (cell >= post.num_cells()) {
    throw std::out_of_range("exact_marginal: cell outside grid");
  }
  double s = 0.0;
  const auto& t = post.table();
  for (std::size_t m = 0; m < t.size(); ++m) {
    if ((m >> cell) & 1U) {
      s += t[m];
    }
  }
  return s;
}

void factored_update(OccupancyGrid& grid, const Measurement& meas, const BacModel& model) {
  if (model.bins.size() != meas.bins.size()) {
    throw std::invalid_argument("factored_update: model and measurement bin counts differ");
  }
  for (std::size_t k = 0; k < model.bins.size(); ++k) {
    const bool detected = meas.bins[k] != 0;
    for (const BacLink& link : model.bins[k]) {
      const double like_occ = detected ? 1.0 - link.p01 : link.p01;
      const double like_emp = detected ? 1.0 - link.p00 : link.p00;
      const double prior = grid.p[link.cell];
      const double num = like_occ * prior;
      const double den = num + like_emp * (1.0 - prior);
      if (den > 0.0) {
        grid.p[link.cell] = num / den;
      }
      grid.seen[link.cell] = 1;
    }
  }
}

void write_occupancy_csv(std::ostream& out, const OccupancyGrid& grid,
                         const std::string& header_extra) {
  const GridGeometry& g = grid.geometry;
  out << "# n_rows=" << g.n_rows() << ",n_cols=" << g.n_cols()
      << ",cell_size=" << g.cell_size() << ",origin_x=" << g.origin().x
      << ",origin_y=" << g.origin().y;
  if (!header_extra.empty()) {
    out << ',' << header_extra;
  }
  out << '\n';
  char buf[32];
  for (std::size_t r = 0; r < g.n_rows(); ++r) {
    for (std::size_t c = 0; c < g.n_cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", grid.p[g.index(r, c)]);
      out << (c == 0 ? "" : ",") << buf;
    }
    out << '\n';
  }
}

}  // namespace activesense
