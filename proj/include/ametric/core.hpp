#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "ametric/errors.hpp"

namespace ametric {

/// A point of a carrier. Box carriers use real coordinates; finite carriers
/// use a single coordinate holding the point's index.
using Point = std::vector<double>;

/// Number of arguments of the distance function. Always >= 2.
class Arity {
 public:
  explicit Arity(int t) : t_(t) {
    if (t < 2) throw UsageError("arity must be >= 2, got " + std::to_string(t));
  }
  int value() const noexcept { return t_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(t_); }
  friend bool operator==(Arity, Arity) = default;

 private:
  int t_;
};

/// Closed axis-aligned box in R^d. Bounds may be infinite.
struct BoxCarrier {
  Point lo;
  Point hi;
};

/// The index set {0, 1, ..., size - 1}.
struct FiniteCarrier {
  std::size_t size = 0;
};

using Carrier = std::variant<BoxCarrier, FiniteCarrier>;

/// An arity-t distance oracle over a carrier set. The distance function is
/// assumed pure; axioms A1-A3 are contracts verified by the check_* family,
/// not enforced here.
class AMetricSpace {
 public:
  using DistanceFn = std::function<double(std::span<const Point>)>;

  AMetricSpace(std::string name, Arity t, Carrier carrier, DistanceFn distance,
               double eq_tol = 1e-12);

  const std::string& name() const noexcept { return name_; }
  Arity arity() const noexcept { return arity_; }
  int t() const noexcept { return arity_.value(); }
  const Carrier& carrier() const noexcept { return carrier_; }
  double eq_tol() const noexcept { return eq_tol_; }

  bool is_finite() const noexcept { return std::holds_alternative<FiniteCarrier>(carrier_); }
  /// Number of points of a finite carrier; 0 for box carriers.
  std::size_t finite_size() const noexcept;
  /// Coordinate count of points (1 for finite carriers).
  std::size_t dimension() const noexcept;

  bool contains(const Point& p) const noexcept;
  /// Coordinate-wise comparison within eq_tol.
  bool points_equal(const Point& a, const Point& b) const noexcept;

  /// Raw distance call; no arity or carrier validation.
  double raw(std::span<const Point> points) const { return distance_(points); }

 private:
  std::string name_;
  Arity arity_;
  Carrier carrier_;
  DistanceFn distance_;
  double eq_tol_;
};

/// Evaluate the distance on exactly t points of the carrier.
/// Throws UsageError on arity mismatch and DomainError for points outside the carrier.
double eval(const AMetricSpace& space, std::span<const Point> points);

/// A(x, x, ..., x, y) with x repeated t - 1 times.
double rep_distance(const AMetricSpace& space, const Point& x, const Point& y);

/// Largest absolute coordinate difference between any two of the points.
double coordinate_spread(std::span<const Point> points);

/// Absolute tolerance scaled by (1 + magnitude) of the values being compared.
struct Tolerance {
  double abs = 1e-9;
  double at(double magnitude) const noexcept;
};

/// A seeded, reproducible collection of equal-width point tuples.
struct SampleSet {
  std::size_t width = 0;
  std::vector<std::vector<Point>> tuples;
  bool exhaustive = false;
  std::uint64_t seed = 0;

  bool empty() const noexcept { return tuples.empty(); }
  std::size_t size() const noexcept { return tuples.size(); }
};

struct Violation {
  std::string check;
  std::vector<Point> witness;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double tol = 0.0;
};

/// Outcome of checking an inequality family on a sample.
/// Invariant: passed() iff violations is empty, and every recorded violation has gap > tol.
struct CheckReport {
  std::string name;
  std::size_t checked = 0;
  std::vector<Violation> violations;
  /// Worst lhs - rhs seen across all instances (may be negative).
  double max_gap = 0.0;

  bool passed() const noexcept { return violations.empty(); }

  /// Count an instance; records a violation when gap exceeds tol.
  void record(const std::string& check, std::span<const Point> witness, double lhs, double rhs,
              double gap, double tol);
  void merge(const CheckReport& other);
};

/// Axioms A1-A3 over (t + 1)-tuples: the first t entries form the tuple, the last is the pivot y.
CheckReport check_axioms(const AMetricSpace& space, const SampleSet& samples, Tolerance tol = {});

/// rep(x, y) == rep(y, x) on pairs.
CheckReport check_symmetry(const AMetricSpace& space, const SampleSet& pairs, Tolerance tol = {});

/// Both triangle-type inequalities on triples (x, y, z):
///   rep(x, z) <= (t - 1) rep(x, y) + rep(z, y)
///   rep(x, z) <= (t - 1) rep(x, y) + rep(y, z)
CheckReport check_triangle_lemma(const AMetricSpace& space, const SampleSet& triples,
                                 Tolerance tol = {});

}  // namespace ametric
