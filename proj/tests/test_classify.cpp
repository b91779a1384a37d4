#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "activesense/classify.hpp"
#include "oracles.hpp"

using namespace activesense;

TEST_CASE("conjugate update and predictive") {
  const DirichletParams a = DirichletParams::uniform(3);
  CHECK(dcm_update(a, 2).alpha() == std::vector<double>{1, 2, 1});
  CHECK(predictive(a) == std::vector<double>{1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(predictive(DirichletParams({1, 2, 1})) == std::vector<double>{0.25, 0.5, 0.25});
  DirichletParams b = a;
  for (int i = 0; i < 10; ++i) b = dcm_update(b, 3);
  CHECK(b.alpha() == std::vector<double>{1, 1, 11});
  CHECK_THROWS(dcm_update(a, 0));
  CHECK_THROWS(dcm_update(a, 4));
  CHECK_THROWS(DirichletParams({1.0, 0.0}));
}

TEST_CASE("predictive equals the Monte-Carlo Dirichlet mean") {
  std::mt19937_64 eng(5);
  std::uniform_real_distribution<double> u(0.2, 6.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> alpha(2 + t % 3);
    for (double& a : alpha) a = u(eng);
    const auto pred = predictive(DirichletParams(alpha));
    const std::size_t n = 100000;
    std::vector<double> s(alpha.size(), 0.0), s2(alpha.size(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      const auto x = oracle::dirichlet_draw(alpha, eng);
      for (std::size_t l = 0; l < x.size(); ++l) {
        s[l] += x[l];
        s2[l] += x[l] * x[l];
      }
    }
    for (std::size_t l = 0; l < alpha.size(); ++l) {
      const double m = s[l] / n;
      const double se = std::sqrt((s2[l] / n - m * m) / n);
      CHECK(std::abs(m - pred[l]) <= 3.0 * se);
    }
  }
}

TEST_CASE("label order does not matter") {
  const GridGeometry g(1, 1, 1.0);
  std::mt19937_64 eng(17);
  std::uniform_int_distribution<int> lab(1, 4);
  for (int t = 0; t < 1000; ++t) {
    std::vector<int> seq(1 + t % 25);
    for (int& l : seq) l = lab(eng);
    ClassificationMap a(g, 4), b(g, 4);
    for (int l : seq) a.ingest(0, l);
    std::shuffle(seq.begin(), seq.end(), eng);
    for (int l : seq) b = ingest(b, 0, l);
    CHECK(a == b);
    CHECK(a.predictive(0) == b.predictive(0));
    // alpha_0 grows by one per label; alpha = prior + counts.
    double a0 = 0.0;
    const auto alpha = a.alpha(0);
    const auto counts = a.counts(0);
    for (std::size_t l = 0; l < 4; ++l) {
      a0 += alpha[l];
      CHECK(alpha[l] == 1.0 + static_cast<double>(counts[l]));
    }
    CHECK(a0 == 4.0 + static_cast<double>(seq.size()));
    CHECK(a.label_count(0) == seq.size());
  }
}

TEST_CASE("ingest is exact to machine precision") {
  const GridGeometry g(2, 2, 1.0);
  ClassificationMap m(g, 3);
  m.ingest(3, 2);
  CHECK(m.predictive(3) == std::vector<double>{0.25, 0.5, 0.25});
  CHECK(m.predictive(3, 2) == 0.5);
  CHECK(m.argmax(3) == 2);
  CHECK(m.argmax(0) == 1);  // ties go to the lowest label
  CHECK(m.predictive(0) == std::vector<double>(3, 1.0 / 3));
  const ClassificationMap before = m;
  const ClassificationMap after = ingest(m, 1, 3);
  CHECK(m == before);
  CHECK_FALSE(after == before);
  CHECK_THROWS(m.ingest(4, 1));
  CHECK_THROWS(m.ingest(0, 0));
}

TEST_CASE("one-step classifier draws from the confusion row") {
  RandomStream rng(8);
  ConfusionClassifier id = ConfusionClassifier::symmetric(3, 1.0);
  for (int i = 0; i < 200; ++i) CHECK(one_step_label(id, 2, rng) == 2);

  ConfusionClassifier flat = ConfusionClassifier::symmetric(4, 0.25);
  const int n = 10000;
  std::vector<double> count(4, 0.0);
  for (int i = 0; i < n; ++i) count[one_step_label(flat, 3, rng) - 1] += 1.0;
  const double sigma = std::sqrt(0.25 * 0.75 / n);
  for (double c : count) CHECK(std::abs(c / n - 0.25) <= 3.0 * sigma);

  ConfusionClassifier row{{{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}, {0.1, 0.1, 0.8}}};
  row.validate();
  int ones = 0;
  for (int i = 0; i < n; ++i) ones += one_step_label(row, 1, rng) == 1;
  CHECK(std::abs(ones / static_cast<double>(n) - 0.8) <= 0.012);

  CHECK_THROWS(one_step_label(row, 0, rng));
  CHECK_THROWS((ConfusionClassifier{{{0.5, 0.4}, {0.5, 0.5}}}.validate()));
  const auto sym = ConfusionClassifier::symmetric(3, 0.7);
  CHECK(sym.confusion[0][0] == 0.7);
  CHECK(sym.confusion[0][2] == doctest::Approx(0.15));

  ConfusionClassifier fixed = sym;
  fixed.no_target = NoTargetBehavior::fixed_label;
  fixed.no_target_fixed_label = 3;
  CHECK(no_target_label(fixed, rng) == 3);
}

TEST_CASE("classification map CSV") {
  const GridGeometry g(1, 2, 1.0);
  ClassificationMap m(g, 2);
  m.ingest(1, 2);
  std::ostringstream p, a;
  write_classification_csv(p, m, 2);
  write_argmax_csv(a, m);
  CHECK(p.str().find("\n0.5,0.66666666666666663\n") != std::string::npos);
  CHECK(a.str().find("\n0,2\n") != std::string::npos);
}
