#include "activesense/infogain.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/digamma.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace activesense {
namespace {

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

// -p(b,j) log p(b|j) with p(b|j) = p(b,j) / p(j).
double cond_term(double joint, double marginal) {
  return joint > 0.0 ? -joint * std::log(joint / marginal) : 0.0;
}

constexpr double kLn2 = 0.69314718055994530942;

}  // namespace

double binary_entropy(double p) { return -(xlogx(p) + xlogx(1.0 - p)); }

double detection_mi(double p, double p_d, double p_fa) {
  const double h_prior = binary_entropy(p);
  // Joint p(b, j).
  const double j11 = p_d * p;
  const double j10 = (1.0 - p_d) * p;
  const double j01 = p_fa * (1.0 - p);
  const double j00 = (1.0 - p_fa) * (1.0 - p);
  const double pj1 = j11 + j01;
  const double pj0 = j10 + j00;
  const double h_cond =
      cond_term(j11, pj1) + cond_term(j01, pj1) + cond_term(j10, pj0) + cond_term(j00, pj0);
  return std::max(0.0, h_prior - h_cond);
}

double detection_ig(const OccupancyGrid& grid, std::span<const ObservedCell> cells,
                    const DetectorParams& params) {
  double total = 0.0;
  for (const ObservedCell& oc : cells) {
    const CellChannel ch = channel_at(params, oc.dist);
    total += detection_mi(grid.p[oc.cell], ch.p_detect_occupied, ch.p_detect_empty);
  }
  return total;
}

double dirichlet_entropy(std::span<const double> alpha) {
  if (alpha.empty()) {
    throw std::invalid_argument("dirichlet_entropy: empty alpha");
  }
  double a0 = 0.0;
  double log_beta = 0.0;
  double psi_sum = 0.0;
  for (double a : alpha) {
    if (!(a > 0.0)) {
      throw std::invalid_argument("dirichlet_entropy: alpha must be positive");
    }
    a0 += a;
    log_beta += boost::math::lgamma(a);
    psi_sum += (a - 1.0) * boost::math::digamma(a);
  }
  log_beta -= boost::math::lgamma(a0);
  const auto L = static_cast<double>(alpha.size());
  return log_beta + (a0 - L) * boost::math::digamma(a0) - psi_sum;
}

double classification_mi(std::span<const double> alpha) {
  if (alpha.size() <= 1) {
    return 0.0;
  }
  const double h_prior = dirichlet_entropy(alpha);
  double a0 = 0.0;
  for (double a : alpha) {
    a0 += a;
  }
  std::vector<double> bumped(alpha.begin(), alpha.end());
  double h_cond = 0.0;
  for (std::size_t c = 0; c < alpha.size(); ++c) {
    bumped[c] += 1.0;
    h_cond += (alpha[c] / a0) * dirichlet_entropy(bumped);
    bumped[c] -= 1.0;
  }
  // The difference can dip a few ulps below zero for very concentrated alpha.
  return std::max(0.0, h_prior - h_cond);
}

double classification_ig(const ClassificationMap& cmap, std::span<const ObservedCell> cells) {
  double total = 0.0;
  for (const ObservedCell& oc : cells) {
    total += classification_mi(cmap.alpha(oc.cell));
  }
  return total;
}

WeightSchedule schedule_from_string(const std::string& s) {
  if (s == "fixed") return WeightSchedule::fixed;
  if (s == "coverage_linked") return WeightSchedule::coverage_linked;
  throw std::invalid_argument("unknown weight schedule '" + s + "'");
}

std::string to_string(WeightSchedule s) {
  return s == WeightSchedule::fixed ? "fixed" : "coverage_linked";
}

IgWeights IgWeights::fixed(double w_d) {
  IgWeights w{w_d, 1.0 - w_d, WeightSchedule::fixed};
  w.validate();
  return w;
}

IgWeights IgWeights::coverage_linked(const OccupancyGrid& grid) {
  return IgWeights{1.0, 0.0, WeightSchedule::coverage_linked}.refreshed(grid);
}

void IgWeights::validate() const {
  if (!(w_d >= 0.0 && w_c >= 0.0) || std::abs(w_d + w_c - 1.0) > 1e-12) {
    throw std::invalid_argument("IgWeights: need w_d, w_c >= 0 with w_d + w_c = 1");
  }
}

IgWeights IgWeights::refreshed(const OccupancyGrid& grid) const {
  if (schedule == WeightSchedule::fixed) {
    return *this;
  }
  const auto b = static_cast<double>(grid.size());
  const double unseen = b - static_cast<double>(grid.seen_count());
  const double w = unseen / b;
  return IgWeights{w, 1.0 - w, schedule};
}

IgReport total_ig(const OccupancyGrid& grid, const ClassificationMap& cmap,
                  std::span<const ObservedCell> cells, const DetectorParams& params,
                  const IgWeights& weights, bool with_per_cell) {
  weights.validate();
  IgReport r;
  if (cells.empty()) {
    return r;
  }
  if (with_per_cell) {
    r.per_cell.reserve(cells.size());
  }
  for (const ObservedCell& oc : cells) {
    const CellChannel ch = channel_at(params, oc.dist);
    const double d = detection_mi(grid.p[oc.cell], ch.p_detect_occupied, ch.p_detect_empty);
    const double c = classification_mi(cmap.alpha(oc.cell));
    r.ig_d += d;
    r.ig_c += c;
    if (with_per_cell) {
      r.per_cell.push_back({oc.cell, d, c});
    }
  }
  const auto n = static_cast<double>(cells.size());
  const double d_max = n * kLn2;
  const double c_max = n * std::log(static_cast<double>(cmap.num_classes()));
  double total = weights.w_d * r.ig_d / d_max;
  if (c_max > 0.0) {
    total += weights.w_c * r.ig_c / c_max;
  }
  r.ig_total = total;
  return r;
}

}  // namespace activesense
