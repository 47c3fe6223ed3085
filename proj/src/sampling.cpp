#include "ametric/sampling.hpp"

#include <algorithm>
#include <cmath>

namespace ametric {

namespace {
constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;
constexpr std::size_t kInjectedPerKind = 4;
}  // namespace

std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ mix64(stream * kGoldenGamma + 1));
}

std::uint64_t CounterRng::next() noexcept {
  ++counter_;
  return mix64(seed_ + counter_ * kGoldenGamma);
}

double CounterRng::uniform() noexcept {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi) noexcept {
  return lo + (hi - lo) * uniform();
}

std::size_t CounterRng::index(std::size_t n) noexcept {
  // Multiply-shift; the bias is negligible for the carrier sizes used here.
  return static_cast<std::size_t>((static_cast<unsigned __int128>(next()) * n) >> 64);
}

Point random_point(const AMetricSpace& space, CounterRng& rng, const SamplingOptions& opts) {
  if (space.is_finite()) return {static_cast<double>(rng.index(space.finite_size()))};
  const auto& box = std::get<BoxCarrier>(space.carrier());
  Point p(box.lo.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double lo = std::max(box.lo[i], -opts.window);
    const double hi = std::min(box.hi[i], opts.window);
    p[i] = lo < hi ? rng.uniform(lo, hi) : lo;
  }
  return p;
}

namespace {

std::size_t checked_power(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

SampleSet enumerate_finite(std::size_t n, std::size_t width, std::uint64_t seed) {
  SampleSet set{.width = width, .exhaustive = true, .seed = seed};
  const std::size_t total = checked_power(n, width);
  set.tuples.reserve(total);
  std::vector<std::size_t> digits(width, 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<Point> tuple(width);
    for (std::size_t i = 0; i < width; ++i) tuple[i] = {static_cast<double>(digits[i])};
    set.tuples.push_back(std::move(tuple));
    for (std::size_t i = width; i-- > 0;) {
      if (++digits[i] < n) break;
      digits[i] = 0;
    }
  }
  return set;
}

// Moves p by `offset` in its first coordinate, staying inside the carrier.
Point nudge(const AMetricSpace& space, Point p, double offset) {
  if (space.is_finite()) {
    const auto n = space.finite_size();
    if (n > 1) p[0] = p[0] + 1.0 < static_cast<double>(n) ? p[0] + 1.0 : p[0] - 1.0;
    return p;
  }
  Point q = p;
  q[0] += offset;
  if (space.contains(q)) return q;
  q[0] = p[0] - offset;
  return space.contains(q) ? q : p;
}

}  // namespace

SampleSet sample_tuples(const AMetricSpace& space, std::size_t width, std::size_t count,
                        std::uint64_t seed, const SamplingOptions& opts) {
  if (width == 0) throw UsageError("sample width must be positive");
  if (space.is_finite() && space.finite_size() <= opts.exhaustive_max_points &&
      width <= opts.exhaustive_max_width) {
    return enumerate_finite(space.finite_size(), width, seed);
  }

  SampleSet set{.width = width, .exhaustive = false, .seed = seed};
  CounterRng rng(seed);
  if (opts.inject_degenerate) {
    for (std::size_t k = 0; k < kInjectedPerKind; ++k) {
      const Point p = random_point(space, rng, opts);
      set.tuples.emplace_back(width, p);
    }
    if (width >= 2) {
      for (std::size_t k = 0; k < kInjectedPerKind; ++k) {
        std::vector<Point> tuple(width);
        for (auto& p : tuple) p = random_point(space, rng, opts);
        tuple[1] = tuple[0];
        set.tuples.push_back(std::move(tuple));
      }
      for (std::size_t k = 0; k < kInjectedPerKind; ++k) {
        const Point p = random_point(space, rng, opts);
        std::vector<Point> tuple(width, p);
        tuple[width - 1] = nudge(space, p, opts.near_offset);
        set.tuples.push_back(std::move(tuple));
      }
    }
  }
  for (std::size_t k = 0; k < count; ++k) {
    std::vector<Point> tuple(width);
    for (auto& p : tuple) p = random_point(space, rng, opts);
    set.tuples.push_back(std::move(tuple));
  }
  return set;
}

}  // namespace ametric
