#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace activesense {

// Stateless 64-bit mixer used to derive child seeds.
std::uint64_t splitmix64(std::uint64_t x);

// Seeded random stream. Children are derived from the seed (never from the
// current engine state), so a child's sequence does not depend on how much
// of the parent has been consumed.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  RandomStream child(std::uint64_t id) const;
  RandomStream child(std::initializer_list<std::uint64_t> path) const;

  std::uint64_t seed() const { return seed_; }

  // Uniform in [0, 1) built from the top 53 bits of one engine draw.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t uniform_index(std::size_t n);
  bool bernoulli(double p) { return uniform() < p; }

  // Inverse-CDF draw over unnormalized non-negative weights.
  std::size_t categorical(std::span<const double> weights);

  double gamma(double shape);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace activesense
