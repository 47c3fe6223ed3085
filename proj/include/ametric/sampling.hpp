#pragma once

#include <cstddef>
#include <cstdint>

#include "ametric/core.hpp"

namespace ametric {

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t z) noexcept;

/// Independent seed for a named substream of a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Counter-based generator: the k-th draw is mix64(seed + k * golden_gamma).
/// Output depends only on (seed, k), so draws are bit-reproducible on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  std::uint64_t next() noexcept;
  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;
  /// Uniform index in [0, n); n must be > 0.
  std::size_t index(std::size_t n) noexcept;
  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

struct SamplingOptions {
  /// Box coordinates are drawn from [max(lo, -window), min(hi, window)].
  double window = 10.0;
  /// Finite carriers with at most this many points ...
  std::size_t exhaustive_max_points = 12;
  /// ... and tuples at most this wide are enumerated exhaustively.
  std::size_t exhaustive_max_width = 5;
  /// Inject all-equal, two-equal and near-equal tuples ahead of the random draws.
  bool inject_degenerate = true;
  /// Coordinate offset used for near-equal tuples.
  double near_offset = 1e-6;
};

Point random_point(const AMetricSpace& space, CounterRng& rng, const SamplingOptions& opts = {});

/// Tuples of `width` carrier points. Exhaustive for small finite carriers (count is
/// then ignored); otherwise `count` seeded draws plus injected degenerate tuples.
SampleSet sample_tuples(const AMetricSpace& space, std::size_t width, std::size_t count,
                        std::uint64_t seed, const SamplingOptions& opts = {});

inline SampleSet sample_pairs(const AMetricSpace& space, std::size_t count, std::uint64_t seed,
                              const SamplingOptions& opts = {}) {
  return sample_tuples(space, 2, count, seed, opts);
}

inline SampleSet sample_triples(const AMetricSpace& space, std::size_t count, std::uint64_t seed,
                                const SamplingOptions& opts = {}) {
  return sample_tuples(space, 3, count, seed, opts);
}

/// (t + 1)-tuples for check_axioms: a t-tuple followed by a pivot.
inline SampleSet sample_axiom_tuples(const AMetricSpace& space, std::size_t count,
                                     std::uint64_t seed, const SamplingOptions& opts = {}) {
  return sample_tuples(space, space.arity().size() + 1, count, seed, opts);
}

}  // namespace ametric
