#include "activesense/classify.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace activesense {

DirichletParams::DirichletParams(std::vector<double> alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) {
    throw std::invalid_argument("DirichletParams: need at least one class");
  }
  for (double a : alpha_) {
    if (!(a > 0.0) || !std::isfinite(a)) {
      throw std::invalid_argument("DirichletParams: every alpha must be positive and finite");
    }
  }
}

double DirichletParams::total() const {
  double s = 0.0;
  for (double a : alpha_) {
    s += a;
  }
  return s;
}

namespace {

void check_label(int label, std::size_t num_classes) {
  if (label < 1 || static_cast<std::size_t>(label) > num_classes) {
    throw std::out_of_range("label outside [1, L]");
  }
}

}  // namespace

DirichletParams dcm_update(const DirichletParams& params, int label) {
  check_label(label, params.size());
  std::vector<double> a = params.alpha();
  a[static_cast<std::size_t>(label - 1)] += 1.0;
  return DirichletParams(std::move(a));
}

std::vector<double> predictive(const DirichletParams& params) {
  const double a0 = params.total();
  std::vector<double> out(params.size());
  for (std::size_t l = 0; l < params.size(); ++l) {
    out[l] = params[l] / a0;
  }
  return out;
}

ConfusionClassifier ConfusionClassifier::symmetric(std::size_t num_classes, double accuracy) {
  if (num_classes == 0 || !(accuracy >= 0.0 && accuracy <= 1.0)) {
    throw std::invalid_argument("ConfusionClassifier::symmetric: bad arguments");
  }
  ConfusionClassifier c;
  const double off = num_classes > 1 ? (1.0 - accuracy) / static_cast<double>(num_classes - 1)
                                     : 0.0;
  c.confusion.assign(num_classes, std::vector<double>(num_classes, off));
  for (std::size_t i = 0; i < num_classes; ++i) {
    c.confusion[i][i] = num_classes > 1 ? accuracy : 1.0;
  }
  return c;
}

void ConfusionClassifier::validate() const {
  const std::size_t n = confusion.size();
  if (n == 0) {
    throw std::invalid_argument("ConfusionClassifier: empty confusion matrix");
  }
  for (const auto& row : confusion) {
    if (row.size() != n) {
      throw std::invalid_argument("ConfusionClassifier: confusion matrix must be square");
    }
    double s = 0.0;
    for (double v : row) {
      if (v < 0.0) {
        throw std::invalid_argument("ConfusionClassifier: negative confusion entry");
      }
      s += v;
    }
    if (std::abs(s - 1.0) > 1e-12) {
      throw std::invalid_argument("ConfusionClassifier: rows must sum to 1");
    }
  }
  if (no_target == NoTargetBehavior::fixed_label) {
    check_label(no_target_fixed_label, n);
  }
}

int one_step_label(const ConfusionClassifier& spec, int true_class, RandomStream& rng) {
  check_label(true_class, spec.num_classes());
  const auto& row = spec.confusion[static_cast<std::size_t>(true_class - 1)];
  return static_cast<int>(rng.categorical(row)) + 1;
}

int no_target_label(const ConfusionClassifier& spec, RandomStream& rng) {
  if (spec.no_target == NoTargetBehavior::fixed_label) {
    return spec.no_target_fixed_label;
  }
  return static_cast<int>(rng.uniform_index(spec.num_classes())) + 1;
}

ClassificationMap::ClassificationMap(const GridGeometry& geometry, std::size_t num_classes,
                                     double prior_alpha)
    : geometry_(geometry),
      num_classes_(num_classes),
      prior_alpha_(prior_alpha),
      alpha_(geometry.size() * num_classes, prior_alpha),
      counts_(geometry.size() * num_classes, 0) {
  if (num_classes == 0) {
    throw std::invalid_argument("ClassificationMap: need at least one class");
  }
  if (!(prior_alpha > 0.0)) {
    throw std::invalid_argument("ClassificationMap: prior alpha must be positive");
  }
}

std::span<const double> ClassificationMap::alpha(std::size_t cell) const {
  return std::span<const double>(alpha_).subspan(cell * num_classes_, num_classes_);
}

DirichletParams ClassificationMap::params(std::size_t cell) const {
  const auto first = alpha_.begin() + static_cast<std::ptrdiff_t>(cell * num_classes_);
  return DirichletParams(std::vector<double>(first, first + static_cast<std::ptrdiff_t>(num_classes_)));
}

std::vector<double> ClassificationMap::predictive(std::size_t cell) const {
  return activesense::predictive(params(cell));
}

double ClassificationMap::predictive(std::size_t cell, int label) const {
  check_label(label, num_classes_);
  double a0 = 0.0;
  for (std::size_t l = 0; l < num_classes_; ++l) {
    a0 += alpha_[cell * num_classes_ + l];
  }
  return alpha_[cell * num_classes_ + static_cast<std::size_t>(label - 1)] / a0;
}

std::vector<std::size_t> ClassificationMap::counts(std::size_t cell) const {
  const auto first = counts_.begin() + static_cast<std::ptrdiff_t>(cell * num_classes_);
  return {first, first + static_cast<std::ptrdiff_t>(num_classes_)};
}

std::size_t ClassificationMap::label_count(std::size_t cell) const {
  std::size_t n = 0;
  for (std::size_t l = 0; l < num_classes_; ++l) {
    n += counts_[cell * num_classes_ + l];
  }
  return n;
}

int ClassificationMap::argmax(std::size_t cell) const {
  std::size_t best = 0;
  for (std::size_t l = 1; l < num_classes_; ++l) {
    if (alpha_[cell * num_classes_ + l] > alpha_[cell * num_classes_ + best]) {
      best = l;
    }
  }
  return static_cast<int>(best) + 1;
}

void ClassificationMap::ingest(std::size_t cell, int label) {
  if (cell >= size()) {
    throw std::out_of_range("ClassificationMap::ingest: cell outside grid");
  }
  check_label(label, num_classes_);
  const std::size_t slot = cell * num_classes_ + static_cast<std::size_t>(label - 1);
  alpha_[slot] += 1.0;
  counts_[slot] += 1;
}

ClassificationMap ingest(ClassificationMap cmap, std::size_t cell, int label) {
  cmap.ingest(cell, label);
  return cmap;
}

namespace {

void write_header(std::ostream& out, const GridGeometry& g, const std::string& what,
                  const std::string& extra) {
  out << "# " << what << ",n_rows=" << g.n_rows() << ",n_cols=" << g.n_cols()
      << ",cell_size=" << g.cell_size() << ",origin_x=" << g.origin().x
      << ",origin_y=" << g.origin().y;
  if (!extra.empty()) {
    out << ',' << extra;
  }
  out << '\n';
}

}  // namespace

void write_classification_csv(std::ostream& out, const ClassificationMap& cmap, int label,
                              const std::string& header_extra) {
  check_label(label, cmap.num_classes());
  const GridGeometry& g = cmap.geometry();
  write_header(out, g, "class=" + std::to_string(label), header_extra);
  char buf[32];
  for (std::size_t r = 0; r < g.n_rows(); ++r) {
    for (std::size_t c = 0; c < g.n_cols(); ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", cmap.predictive(g.index(r, c), label));
      out << (c == 0 ? "" : ",") << buf;
    }
    out << '\n';
  }
}

void write_argmax_csv(std::ostream& out, const ClassificationMap& cmap,
                      const std::string& header_extra) {
  const GridGeometry& g = cmap.geometry();
  write_header(out, g, "argmax,unlabeled=0", header_extra);
  for (std::size_t r = 0; r < g.n_rows(); ++r) {
    for (std::size_t c = 0; c < g.n_cols(); ++c) {
      const std::size_t idx = g.index(r, c);
      out << (c == 0 ? "" : ",") << (cmap.label_count(idx) == 0 ? 0 : cmap.argmax(idx));
    }
    out << '\n';
  }
}

}  // namespace activesense
