#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "activesense/grid.hpp"
#include "oracles.hpp"

using namespace activesense;

TEST_CASE("grid indexing round-trips and centers") {
  const GridGeometry g(3, 4, 2.0, {10.0, -4.0});
  CHECK(g.size() == 12);
  CHECK(g.index(2, 1) == 9);
  CHECK(g.coord(9) == CellCoord{2, 1});
  const Point2 c = g.center(g.index(0, 0));
  CHECK(c.x == 11.0);
  CHECK(c.y == -3.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.index(g.coord(i)) == i);
    CHECK(g.cell_at(g.center(i)).value() == i);
  }
  CHECK_FALSE(g.cell_at({9.9, 0.0}).has_value());
  // Right and top edges belong to the last cell.
  CHECK(g.cell_at({18.0, 2.0}).value() == g.index(2, 3));
  CHECK_THROWS(g.index(3, 0));
  CHECK_THROWS(GridGeometry(0, 3, 1.0));
  CHECK_THROWS(GridGeometry(3, 3, 0.0));
}

TEST_CASE("headings normalize and snap onto the axes") {
  CHECK(normalize_heading(-kPi / 2.0) == doctest::Approx(3.0 * kPi / 2.0));
  CHECK(normalize_heading(5.0 * kTwoPi + 0.25) == doctest::Approx(0.25));
  CHECK(normalize_heading(kTwoPi) == 0.0);
  // Accumulated turns land exactly on the axis.
  double h = 0.0;
  for (int i = 0; i < 7; ++i) h = normalize_heading(h + kPi / 2.0);
  CHECK(h == normalize_heading(3.0 * kPi / 2.0));
  const Point2 n = heading_direction(kPi / 2.0);
  CHECK(n.x == 0.0);
  CHECK(n.y == 1.0);
  const Point2 sb = Pose(0, 0, 0).starboard();
  CHECK(sb.x == 0.0);
  CHECK(sb.y == -1.0);
}

TEST_CASE("footprint validation") {
  CHECK_THROWS(SensorFootprint::make(0, 1.0, 0.1));
  CHECK_THROWS(SensorFootprint::make(3, 0.0, 0.1));
  CHECK_THROWS(SensorFootprint::make(3, 1.0, 0.0));
  SensorFootprint fp = SensorFootprint::make(3, 1.0, 0.1);
  fp.max_range = 2.0;
  CHECK_THROWS(fp.validate());
  CHECK(SensorFootprint::make(5, 1.0, 0.1).swath() == 5.0);
}

TEST_CASE("bin membership on the starboard axis") {
  const Pose pose(0.0, 0.0, 0.0);  // heading east, starboard south
  const SensorFootprint fp = SensorFootprint::make(3, 1.0, 10.0 * kPi / 180.0);
  CHECK(bin_containing(pose, fp, {0.0, -0.5}).value() == 0);
  CHECK(bin_containing(pose, fp, {0.0, -1.0}).value() == 0);  // closed far edge
  CHECK(bin_containing(pose, fp, {0.0, -1.001}).value() == 1);
  CHECK(bin_containing(pose, fp, {0.0, -3.0}).value() == 2);
  CHECK_FALSE(bin_containing(pose, fp, {0.0, -3.01}).has_value());
  CHECK_FALSE(bin_containing(pose, fp, {0.0, 0.5}).has_value());  // port
  CHECK_FALSE(bin_containing(pose, fp, {0.0, 0.0}).has_value());
  const Point2 sp = bin_sample_point(pose, fp, 1);
  CHECK(sp.x == 0.0);
  CHECK(sp.y == -1.5);
}

TEST_CASE("lattice pose at a cell center sees one cell per bin at distance 0.5") {
  const GridGeometry g(10, 10, 1.0);
  const SensorFootprint fp = SensorFootprint::make(5, 1.0, 7.0 * kPi / 180.0);
  const Pose pose(2.5, 7.5, 0.0);
  const auto bins = footprint_bins(g, pose, fp);
  REQUIRE(bins.size() == 5);
  for (std::size_t k = 0; k < 5; ++k) {
    REQUIRE(bins[k].size() == 1);
    CHECK(bins[k][0] == g.index(6 - k, 2));
    CHECK(dist(g, bins[k][0], pose, fp, k) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("observe matches a brute-force polar sector test over every cell") {
  std::mt19937_64 eng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const GridGeometry g(20, 20, 1.0, {-3.0, 2.0});
  std::size_t nonempty = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t K = 1 + static_cast<std::size_t>(u(eng) * 6);
    const double bs = 0.5 + u(eng) * 1.5;
    const double bw = (5.0 + u(eng) * 55.0) * kPi / 180.0;
    const SensorFootprint fp = SensorFootprint::make(K, bs, bw);
    const Pose pose(-3.0 + 20.0 * u(eng), 2.0 + 20.0 * u(eng), kTwoPi * u(eng));
    const auto seen = observe(g, pose, fp);
    std::set<std::pair<std::size_t, std::size_t>> expect;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Point2 c = g.center(i);
      for (std::size_t k = 0; k < K; ++k) {
        if (oracle::in_sector(c.x, c.y, pose.x, pose.y, pose.heading, bs, bw, k)) {
          expect.insert({i, k});
        }
      }
    }
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (std::size_t n = 0; n < seen.size(); ++n) {
      got.insert({seen[n].cell, seen[n].bin});
      if (n > 0) CHECK(seen[n - 1].cell < seen[n].cell);
      const Point2 sp = bin_sample_point(pose, fp, seen[n].bin);
      const Point2 c = g.center(seen[n].cell);
      CHECK(seen[n].dist == doctest::Approx(std::hypot(c.x - sp.x, c.y - sp.y)).epsilon(1e-12));
    }
    CHECK(got == expect);
    nonempty += seen.empty() ? 0 : 1;
  }
  CHECK(nonempty > 100);
}
