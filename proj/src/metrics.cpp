#include "activesense/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace activesense {

void DistributionSet::validate(double tol) const {
  if (width == 0 || values.size() % width != 0) {
    throw std::invalid_argument("DistributionSet: bad shape");
  }
  for (std::size_t i = 0; i < rows(); ++i) {
    double s = 0.0;
    for (std::size_t x = 0; x < width; ++x) {
      s += row(i)[x];
    }
    if (std::abs(s - 1.0) > tol) {
      throw std::invalid_argument("DistributionSet: row does not sum to 1");
    }
  }
}

DistributionSet occupancy_truth(const Scene& scene) {
  DistributionSet d{2, {}};
  d.values.reserve(2 * scene.geometry().size());
  for (std::size_t i = 0; i < scene.geometry().size(); ++i) {
    const bool occ = scene.occupied(i);
    d.values.push_back(occ ? 1.0 : 0.0);
    d.values.push_back(occ ? 0.0 : 1.0);
  }
  return d;
}

DistributionSet occupancy_estimate(const OccupancyGrid& grid) {
  DistributionSet d{2, {}};
  d.values.reserve(2 * grid.size());
  for (double p : grid.p) {
    d.values.push_back(p);
    d.values.push_back(1.0 - p);
  }
  return d;
}

DistributionSet class_truth(const Scene& scene) {
  const auto L = static_cast<std::size_t>(scene.num_classes());
  DistributionSet d{L, std::vector<double>(L * scene.geometry().size(), 1.0 / static_cast<double>(L))};
  for (std::size_t i = 0; i < scene.geometry().size(); ++i) {
    if (!scene.occupied(i)) {
      continue;
    }
    for (std::size_t l = 0; l < L; ++l) {
      d.values[i * L + l] = static_cast<int>(l) + 1 == scene.class_of(i) ? 1.0 : 0.0;
    }
  }
  return d;
}

DistributionSet class_estimate(const ClassificationMap& cmap) {
  const std::size_t L = cmap.num_classes();
  DistributionSet d{L, {}};
  d.values.reserve(L * cmap.size());
  for (std::size_t i = 0; i < cmap.size(); ++i) {
    const auto a = cmap.alpha(i);
    double a0 = 0.0;
    for (double v : a) {
      a0 += v;
    }
    for (double v : a) {
      d.values.push_back(v / a0);
    }
  }
  return d;
}

namespace {

void check_shapes(const DistributionSet& t, const DistributionSet& e, const char* what) {
  if (t.width != e.width || t.values.size() != e.values.size()) {
    throw std::invalid_argument(std::string(what) + ": distribution sets differ in shape");
  }
}

// a * log(a / m) with the 0 log 0 = 0 convention.
double kl_term(double a, double m) { return a > 0.0 ? a * std::log(a / m) : 0.0; }

// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace

double rho(const DistributionSet& t, const DistributionSet& e) {
  check_shapes(t, e, "rho");
  CompensatedSum inner;
  CompensatedSum tt;
  CompensatedSum ee;
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    inner.add(t.values[i] * e.values[i]);
    tt.add(t.values[i] * t.values[i]);
    ee.add(e.values[i] * e.values[i]);
  }
  if (tt.value() == 0.0 || ee.value() == 0.0) {
    throw std::invalid_argument("rho: zero-norm input");
  }
  // sqrt(x * x) == x exactly, so rho(t, t) == 1 exactly.
  return inner.value() / std::sqrt(tt.value() * ee.value());
}

double sjsd(const DistributionSet& t, const DistributionSet& e) {
  check_shapes(t, e, "sjsd");
  CompensatedSum total;
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double* tr = t.row(i);
    const double* er = e.row(i);
    double js = 0.0;
    for (std::size_t x = 0; x < t.width; ++x) {
      const double m = 0.5 * (tr[x] + er[x]);
      // Symmetric in (t, e) term by term, so sjsd(t, e) == sjsd(e, t) exactly.
      js += 0.5 * kl_term(tr[x], m) + 0.5 * kl_term(er[x], m);
    }
    total.add(js);
  }
  return total.value();
}

double pct_seen(const OccupancyGrid& grid) {
  return static_cast<double>(grid.seen_count()) / static_cast<double>(grid.size());
}

MetricsRow evaluate(std::size_t step, const Scene& scene, const OccupancyGrid& grid,
                    const ClassificationMap& cmap) {
  const DistributionSet ot = occupancy_truth(scene);
  const DistributionSet oe = occupancy_estimate(grid);
  const DistributionSet ct = class_truth(scene);
  const DistributionSet ce = class_estimate(cmap);
  return {step, pct_seen(grid), rho(ot, oe), rho(ct, ce), sjsd(ot, oe), sjsd(ct, ce)};
}

void write_metrics_row(std::ostream& out, const MetricsRow& row) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g", row.step, row.pct_seen,
                row.rho_det, row.rho_class, row.sjsd_det, row.sjsd_class);
  out << buf << '\n';
}

std::vector<MetricsRow> read_metrics(std::istream& in) {
  std::vector<MetricsRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("step,", 0) == 0) {
      continue;
    }
    MetricsRow r;
    std::istringstream ss(line);
    char comma = 0;
    if (!(ss >> r.step >> comma >> r.pct_seen >> comma >> r.rho_det >> comma >> r.rho_class >>
          comma >> r.sjsd_det >> comma >> r.sjsd_class)) {
      throw std::runtime_error("metrics: malformed row '" + line + "'");
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace activesense
