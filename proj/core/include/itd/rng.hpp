#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <utility>

namespace itd {

/// SplitMix64 finalizer; used to derive independent substream seeds.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Derives a substream seed from a base seed and a path of stream ids, so
/// that e.g. (seed, employee, day) always maps to the same generator state
/// regardless of the order in which streams are consumed.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> path) noexcept;

/// Portable random source. The engine is std::mt19937_64, whose output
/// sequence is fixed by the standard; all distributions are implemented here
/// because the standard library's are implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }
  /// Uniform on [0, 1) with 53 bits of precision.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer on [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Uniform integer on [lo, hi] inclusive.
  std::int64_t between(std::int64_t lo, std::int64_t hi);
  bool bernoulli(double p) { return uniform() < p; }
  double normal();
  double lognormal(double mu, double sigma);
  std::uint32_t poisson(double lambda);

  template <class T> void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      auto j = static_cast<std::size_t>(below(i));
      using std::swap;
      swap(items[i - 1], items[j]);
    }
  }

private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

} // namespace itd
