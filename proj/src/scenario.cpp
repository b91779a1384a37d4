#include "activesense/scenario.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>

#include "activesense/random.hpp"

namespace activesense {

void ScenarioSpec::validate() const {
  if (!(field_width > 0.0 && field_height > 0.0 && cell_size > 0.0)) {
    throw std::invalid_argument("ScenarioSpec: field and cell sizes must be positive");
  }
  if (num_classes < 1) {
    throw std::invalid_argument("ScenarioSpec: num_classes must be >= 1");
  }
  if (shapes.empty()) {
    throw std::invalid_argument("ScenarioSpec: need at least one target shape");
  }
  for (const TargetShape& s : shapes) {
    if (s.rows == 0 || s.cols == 0) {
      throw std::invalid_argument("ScenarioSpec: empty target shape");
    }
  }
  if (cluster_radius < 0.0 || min_cluster_separation < 0.0 || edge_margin < 0.0) {
    throw std::invalid_argument("ScenarioSpec: negative distance");
  }
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
  ScenarioSpec s;
  s.field_width = j.value("field_width", s.field_width);
  s.field_height = j.value("field_height", s.field_height);
  s.cell_size = j.value("cell_size", s.cell_size);
  s.clusters = j.value("clusters", s.clusters);
  s.targets_per_cluster = j.value("targets_per_cluster", s.targets_per_cluster);
  s.num_classes = j.value("num_classes", s.num_classes);
  s.cluster_radius = j.value("cluster_radius", s.cluster_radius);
  s.min_cluster_separation = j.value("min_cluster_separation", s.min_cluster_separation);
  s.edge_margin = j.value("edge_margin", s.edge_margin);
  s.seed = j.value("seed", s.seed);
  s.max_attempts = j.value("max_attempts", s.max_attempts);
  if (j.contains("shapes")) {
    s.shapes.clear();
    for (const auto& sh : j.at("shapes")) {
      s.shapes.push_back({sh.at(0).get<std::size_t>(), sh.at(1).get<std::size_t>()});
    }
  }
  s.validate();
  return s;
}

nlohmann::json scenario_to_json(const ScenarioSpec& s) {
  nlohmann::json shapes = nlohmann::json::array();
  for (const TargetShape& sh : s.shapes) {
    shapes.push_back({sh.rows, sh.cols});
  }
  return {{"field_width", s.field_width},
          {"field_height", s.field_height},
          {"cell_size", s.cell_size},
          {"clusters", s.clusters},
          {"targets_per_cluster", s.targets_per_cluster},
          {"num_classes", s.num_classes},
          {"cluster_radius", s.cluster_radius},
          {"min_cluster_separation", s.min_cluster_separation},
          {"edge_margin", s.edge_margin},
          {"shapes", shapes},
          {"seed", s.seed},
          {"max_attempts", s.max_attempts}};
}

namespace {

struct Placement {
  std::vector<SceneObject> objects;
  std::vector<int> taken;  // per cell: 1 if occupied or adjacent to an object
};

bool try_place(const GridGeometry& g, const ScenarioSpec& spec, RandomStream& rng,
               Point2 center, int label, Placement& pl) {
  const TargetShape& base = spec.shapes[static_cast<std::size_t>(label - 1) % spec.shapes.size()];
  const bool rotate = base.rows != base.cols && rng.bernoulli(0.5);
  const std::size_t rows = rotate ? base.cols : base.rows;
  const std::size_t cols = rotate ? base.rows : base.cols;
  const double cs = g.cell_size();
  const auto margin_cells = static_cast<std::size_t>(std::ceil(spec.edge_margin / cs));

  for (int attempt = 0; attempt < 50; ++attempt) {
    // Uniform point in the cluster disc.
    double dx = 0.0;
    double dy = 0.0;
    do {
      dx = rng.uniform(-1.0, 1.0);
      dy = rng.uniform(-1.0, 1.0);
    } while (dx * dx + dy * dy > 1.0);
    const double px = center.x + dx * spec.cluster_radius - g.origin().x;
    const double py = center.y + dy * spec.cluster_radius - g.origin().y;
    if (px < 0.0 || py < 0.0) {
      continue;
    }
    const auto col0 = static_cast<std::size_t>(px / cs);
    const auto row0 = static_cast<std::size_t>(py / cs);
    if (col0 < margin_cells || row0 < margin_cells || col0 + cols + margin_cells > g.n_cols() ||
        row0 + rows + margin_cells > g.n_rows()) {
      continue;
    }
    bool clear = true;
    for (std::size_t r = row0; r < row0 + rows && clear; ++r) {
      for (std::size_t c = col0; c < col0 + cols && clear; ++c) {
        clear = pl.taken[g.index(r, c)] == 0;
      }
    }
    if (!clear) {
      continue;
    }
    SceneObject obj;
    obj.label = label;
    for (std::size_t r = row0; r < row0 + rows; ++r) {
      for (std::size_t c = col0; c < col0 + cols; ++c) {
        obj.cells.push_back({r, c});
      }
    }
    // Reserve the object plus a one-cell ring so targets never touch.
    const std::size_t r_lo = row0 > 0 ? row0 - 1 : 0;
    const std::size_t c_lo = col0 > 0 ? col0 - 1 : 0;
    const std::size_t r_hi = std::min(row0 + rows, g.n_rows() - 1);
    const std::size_t c_hi = std::min(col0 + cols, g.n_cols() - 1);
    for (std::size_t r = r_lo; r <= r_hi; ++r) {
      for (std::size_t c = c_lo; c <= c_hi; ++c) {
        pl.taken[g.index(r, c)] = 1;
      }
    }
    pl.objects.push_back(std::move(obj));
    return true;
  }
  return false;
}

std::optional<Placement> attempt(const GridGeometry& g, const ScenarioSpec& spec,
                                 RandomStream& rng) {
  Placement pl;
  pl.taken.assign(g.size(), 0);
  std::vector<Point2> centers;
  const double m = spec.edge_margin + spec.cluster_radius;
  const Point2 o = g.origin();
  for (std::size_t k = 0; k < spec.clusters; ++k) {
    bool placed = false;
    for (int tries = 0; tries < 100 && !placed; ++tries) {
      const double lo_x = o.x + std::min(m, 0.5 * g.width());
      const double hi_x = o.x + std::max(g.width() - m, 0.5 * g.width());
      const double lo_y = o.y + std::min(m, 0.5 * g.height());
      const double hi_y = o.y + std::max(g.height() - m, 0.5 * g.height());
      const Point2 c{rng.uniform(lo_x, hi_x), rng.uniform(lo_y, hi_y)};
      bool separated = true;
      for (const Point2& other : centers) {
        separated = separated &&
                    std::hypot(c.x - other.x, c.y - other.y) >= spec.min_cluster_separation;
      }
      if (separated) {
        centers.push_back(c);
        placed = true;
      }
    }
    if (!placed) {
      return std::nullopt;
    }
    for (std::size_t t = 0; t < spec.targets_per_cluster; ++t) {
      const int label = static_cast<int>(t % static_cast<std::size_t>(spec.num_classes)) + 1;
      if (!try_place(g, spec, rng, centers.back(), label, pl)) {
        return std::nullopt;
      }
    }
  }
  return pl;
}

}  // namespace

Scene generate_scenario(const ScenarioSpec& spec) {
  spec.validate();
  const auto cols = static_cast<std::size_t>(std::llround(spec.field_width / spec.cell_size));
  const auto rows = static_cast<std::size_t>(std::llround(spec.field_height / spec.cell_size));
  const GridGeometry g(rows, cols, spec.cell_size);
  RandomStream rng(spec.seed);
  for (std::size_t a = 0; a < spec.max_attempts; ++a) {
    if (auto pl = attempt(g, spec, rng)) {
      return Scene(g, spec.num_classes, std::move(pl->objects));
    }
  }
  throw std::runtime_error("generate_scenario: could not place targets; field too small for the spec");
}

}  // namespace activesense
