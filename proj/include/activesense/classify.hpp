#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "activesense/grid.hpp"
#include "activesense/random.hpp"

namespace activesense {

// Dirichlet concentration vector; labels are 1-based (label l <-> alpha[l-1]).
class DirichletParams {
 public:
  explicit DirichletParams(std::vector<double> alpha);
  static DirichletParams uniform(std::size_t num_classes) {
    return DirichletParams(std::vector<double>(num_classes, 1.0));
  }

  std::size_t size() const { return alpha_.size(); }
  double operator[](std::size_t i) const { return alpha_[i]; }
  const std::vector<double>& alpha() const { return alpha_; }
  double total() const;

  bool operator==(const DirichletParams&) const = default;

 private:
  std::vector<double> alpha_;
};

// Conjugate increment alpha_l += 1 for the observed label.
DirichletParams dcm_update(const DirichletParams& params, int label);

// Posterior predictive class distribution alpha / alpha_0.
std::vector<double> predictive(const DirichletParams& params);

enum class NoTargetBehavior { uniform_label, fixed_label };

// Confusion-matrix stand-in for a one-step classifier. Row = true class,
// column = emitted label, both 1-based in the public calls.
struct ConfusionClassifier {
  std::vector<std::vector<double>> confusion;
  NoTargetBehavior no_target = NoTargetBehavior::uniform_label;
  int no_target_fixed_label = 1;

  static ConfusionClassifier symmetric(std::size_t num_classes, double accuracy);
  std::size_t num_classes() const { return confusion.size(); }
  void validate() const;
};

int one_step_label(const ConfusionClassifier& spec, int true_class, RandomStream& rng);
// Label emitted for a return that contains no target.
int no_target_label(const ConfusionClassifier& spec, RandomStream& rng);

// Per-cell Dirichlet state plus label counts.
class ClassificationMap {
 public:
  ClassificationMap(const GridGeometry& geometry, std::size_t num_classes,
                    double prior_alpha = 1.0);

  const GridGeometry& geometry() const { return geometry_; }
  std::size_t num_classes() const { return num_classes_; }
  std::size_t size() const { return geometry_.size(); }

  DirichletParams params(std::size_t cell) const;
  std::span<const double> alpha(std::size_t cell) const;
  std::vector<double> predictive(std::size_t cell) const;
  double predictive(std::size_t cell, int label) const;
  std::vector<std::size_t> counts(std::size_t cell) const;
  std::size_t label_count(std::size_t cell) const;
  // Most probable label (lowest label wins ties).
  int argmax(std::size_t cell) const;
  double prior_alpha() const { return prior_alpha_; }

  void ingest(std::size_t cell, int label);

  bool operator==(const ClassificationMap&) const = default;

 private:
  GridGeometry geometry_;
  std::size_t num_classes_;
  double prior_alpha_;
  std::vector<double> alpha_;         // size() * num_classes_
  std::vector<std::size_t> counts_;   // size() * num_classes_
};

// Value-returning form of ClassificationMap::ingest.
ClassificationMap ingest(ClassificationMap cmap, std::size_t cell, int label);

// One matrix per class predictive component, and the argmax label matrix
// (0 marks cells that never received a label).
void write_classification_csv(std::ostream& out, const ClassificationMap& cmap, int label,
                              const std::string& header_extra = {});
void write_argmax_csv(std::ostream& out, const ClassificationMap& cmap,
                      const std::string& header_extra = {});

}  // namespace activesense
