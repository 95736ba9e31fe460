#pragma once

#include <cstdint>
#include <limits>
#include <vector>

namespace ssvrp {

// SplitMix64: state advances by a fixed odd constant and each output is a
// xor-shift/multiply finalization of the state. Streams derived with
// Rng::stream(seed, i) are independent of how work is split across threads.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0) : state_(seed) {}
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next();
  result_type operator()() { return next(); }
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [lo, hi], rejection sampled to avoid modulo bias.
  int uniform_int(int lo, int hi);
  // Marsaglia polar method.
  double normal(double mean, double sd);
  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) std::swap(v[i], v[uniform_int(0, i)]);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t mix64(std::uint64_t z);

}  // namespace ssvrp
