#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "activesense/occupancy.hpp"
#include "oracles.hpp"

using namespace activesense;

namespace {

std::vector<oracle::Ping> as_oracle(const std::vector<Measurement>& ms, const BacModel& unused,
                                    const GridGeometry& g, const SensorFootprint& fp,
                                    const DetectorParams& det) {
  (void)unused;
  std::vector<oracle::Ping> out;
  for (const Measurement& m : ms) {
    oracle::Ping p;
    p.empty_pfa = det.p_fa;
    for (std::size_t k = 0; k < m.associations.size(); ++k) {
      std::vector<oracle::Link> links;
      for (std::size_t cell : m.associations[k]) {
        const CellChannel ch = channel_at(det, dist(g, cell, m.pose, fp, k));
        links.push_back({cell, ch.p_detect_occupied, ch.p_detect_empty});
      }
      p.bins.push_back(links);
      p.j.push_back(m.bins[k]);
    }
    out.push_back(p);
  }
  return out;
}

Pose lattice_pose(const GridGeometry& g, std::mt19937_64& eng) {
  std::uniform_int_distribution<std::size_t> cell(0, g.size() - 1);
  std::uniform_int_distribution<int> quarter(0, 3);
  const Point2 c = g.center(cell(eng));
  return Pose(c.x, c.y, quarter(eng) * kPi / 2.0);
}

}  // namespace

TEST_CASE("factored and exact engines agree when bins hold one cell") {
  std::mt19937_64 eng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int seq = 0; seq < 100; ++seq) {
    const GridGeometry g(3, 4, 1.0);
    const SensorFootprint fp = SensorFootprint::make(1 + seq % 3, 1.0, 5.0 * kPi / 180.0);
    DetectorParams det{0.6 + 0.39 * u(eng), 0.3 * u(eng), 1.0 + u(eng),
                       seq % 2 ? AttenuationMode::floor_decay : AttenuationMode::none};
    std::vector<SceneObject> objs;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (u(eng) < 0.3) objs.push_back({{g.coord(i)}, 1});
    }
    const Scene scene(g, 1, objs);
    std::vector<double> prior(g.size());
    for (double& v : prior) v = 0.05 + 0.9 * u(eng);

    OccupancyGrid grid = OccupancyGrid::uniform(g);
    grid.p = prior;
    MapPosterior post = MapPosterior::from_marginals(g, prior);
    RandomStream rng(static_cast<std::uint64_t>(seq));
    std::vector<Measurement> history;
    for (int step = 0; step < 8; ++step) {
      const Measurement m = sample_measurement(scene, lattice_pose(g, eng), fp, det, rng, step);
      for (const auto& b : m.associations) REQUIRE(b.size() <= 1);
      const BacModel model = BacModel::build(g, m, fp, det);
      factored_update(grid, m, model);
      post = exact_update(post, m, model);
      CHECK(std::abs(post.total() - 1.0) <= 1e-12);
      history.push_back(m);
      for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(grid.p[i] - exact_marginal(post, i)) <= 1e-12);
      }
    }
    const auto ref = oracle::enumerate_posterior(g.size(), prior,
                                                 as_oracle(history, {}, g, fp, det));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(exact_marginal(post, i) - ref[i]) <= 1e-12);
    }
  }
}

TEST_CASE("exact engine matches enumeration with multi-cell bins") {
  std::mt19937_64 eng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridGeometry g(3, 3, 1.0);
  const SensorFootprint fp = SensorFootprint::make(3, 1.0, 80.0 * kPi / 180.0);
  const DetectorParams det{0.85, 0.15, 1.0, AttenuationMode::floor_decay};
  const Scene scene(g, 1, {{{{1, 1}}, 1}});
  std::size_t multi = 0;
  for (int seq = 0; seq < 30; ++seq) {
    std::vector<double> prior(g.size());
    for (double& v : prior) v = 0.1 + 0.8 * u(eng);
    MapPosterior post = MapPosterior::from_marginals(g, prior);
    RandomStream rng(static_cast<std::uint64_t>(seq) + 1000);
    std::vector<Measurement> history;
    for (int step = 0; step < 4; ++step) {
      const Pose pose(3.0 * u(eng), 3.0 * u(eng), kTwoPi * u(eng));
      const Measurement m = sample_measurement(scene, pose, fp, det, rng, step);
      for (const auto& b : m.associations) multi += b.size() > 1;
      post = exact_update(post, m, BacModel::build(g, m, fp, det));
      CHECK(std::abs(post.total() - 1.0) <= 1e-12);
      history.push_back(m);
    }
    const auto ref = oracle::enumerate_posterior(g.size(), prior,
                                                 as_oracle(history, {}, g, fp, det));
    for (std::size_t i = 0; i < g.size(); ++i) {
      CHECK(std::abs(exact_marginal(post, i) - ref[i]) <= 1e-12);
    }
  }
  CHECK(multi > 0);
}

TEST_CASE("bin likelihood is the OR of the cell channels") {
  const std::vector<BacLink> links{{0, 0.9, 0.2}, {1, 0.8, 0.3}};
  const std::vector<std::uint8_t> occ{1, 0};
  CHECK(bin_likelihood(links, occ, 0, 0.1) == doctest::Approx(0.2 * 0.8));
  CHECK(bin_likelihood(links, occ, 1, 0.1) == doctest::Approx(1.0 - 0.2 * 0.8));
  CHECK(bin_likelihood({}, {}, 1, 0.1) == doctest::Approx(0.1));
  CHECK_THROWS(bin_likelihood(links, std::vector<std::uint8_t>{1}, 0, 0.1));
}

TEST_CASE("factored update touches only observed cells and marks them seen") {
  const GridGeometry g(6, 6, 1.0);
  const SensorFootprint fp = SensorFootprint::make(2, 1.0, 5.0 * kPi / 180.0);
  const DetectorParams det{0.9, 0.1, 1.0, AttenuationMode::none};
  OccupancyGrid grid = OccupancyGrid::uniform(g);
  Measurement m;
  m.pose = Pose(2.5, 2.5, 0.0);
  m.associations = footprint_bins(g, m.pose, fp);
  m.bins = {1, 0};
  factored_update(grid, m, BacModel::build(g, m, fp, det));
  const std::size_t hit = g.index(1, 2), miss = g.index(0, 2);
  CHECK(grid.p[hit] == doctest::Approx(0.9));
  CHECK(grid.p[miss] == doctest::Approx(0.1));
  CHECK(grid.seen_count() == 2);
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i != hit && i != miss) {
      CHECK(grid.p[i] == 0.5);
      CHECK(grid.seen[i] == 0);
    }
  }
}

TEST_CASE("exact engine limits and zero-evidence measurements") {
  CHECK_THROWS(MapPosterior::uniform(GridGeometry(5, 4, 1.0)));
  const GridGeometry g(1, 2, 1.0);
  const SensorFootprint fp = SensorFootprint::make(2, 1.0, 5.0 * kPi / 180.0);
  const DetectorParams det{1.0, 0.0, 1.0, AttenuationMode::none};
  const MapPosterior empty_map(g, {1.0, 0.0, 0.0, 0.0});
  Measurement m;
  m.pose = Pose(0.0, 0.5, kPi / 2.0);  // starboard east along the row
  m.associations = footprint_bins(g, m.pose, fp);
  REQUIRE(m.associations[0].size() == 1);
  m.bins = {1, 0};
  CHECK_THROWS_AS(exact_update(empty_map, m, BacModel::build(g, m, fp, det)), std::runtime_error);
}

TEST_CASE("occupancy CSV layout") {
  const GridGeometry g(2, 3, 0.5, {1.0, 2.0});
  OccupancyGrid grid = OccupancyGrid::uniform(g);
  grid.p[g.index(1, 2)] = 0.25;
  std::ostringstream os;
  write_occupancy_csv(os, grid, "step=4");
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "# n_rows=2,n_cols=3,cell_size=0.5,origin_x=1,origin_y=2,step=4");
  std::getline(is, line);
  CHECK(line == "0.5,0.5,0.5");
  std::getline(is, line);
  CHECK(line == "0.5,0.5,0.25");
}
