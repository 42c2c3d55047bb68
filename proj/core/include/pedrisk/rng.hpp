#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

namespace pedrisk {

// Deterministic 64-bit generator (splitmix64). Every random choice in the
// library flows through this class instead of <random> distributions, whose
// output is implementation-defined; this keeps artifacts byte-identical for
// a given seed across compilers and platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform in [0, 1) with 53 random bits.
  double uniform();

  // Uniform in [lo, hi).
  double uniform(double lo, double hi);

  // Uniform integer in [0, n). n must be > 0.
  std::uint64_t uniform_int(std::uint64_t n);

  // Standard normal via Box-Muller; the paired deviate is cached.
  double normal();
  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    if (v.size() < 2) return;
    for (std::size_t i = v.size() - 1; i > 0; --i) {
      std::size_t j = static_cast<std::size_t>(uniform_int(i + 1));
      std::swap(v[i], v[j]);
    }
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent stream for (seed, purpose tag, index). Used so that
// parallel and serial execution orders draw identical numbers: worker i
// always seeds from derive_seed(seed, tag, i).
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag,
                          std::uint64_t index);

}  // namespace pedrisk
