#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ametric/core.hpp"
#include "ametric/sampling.hpp"

namespace ametric {

/// Sum over pairs i < j of the l1 distance between x_i and x_j, on the box
/// [lo, hi] in R^d. For d = 1 this is the sum of |x_i - x_j| over pairs.
AMetricSpace make_absdiff_space(Arity t, std::size_t d, Point lo, Point hi,
                                double eq_tol = 1e-12);

/// Same, over all of R^d.
AMetricSpace make_absdiff_space(Arity t, std::size_t d = 1, double eq_tol = 1e-12);

using MetricTable = std::vector<std::vector<double>>;
using BaseMetric = std::function<double(const Point&, const Point&)>;

/// Sample and tolerance used by the construction gate of lifted spaces.
struct LiftGate {
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;
  std::size_t samples = 1000;
  Tolerance tol{};
  SamplingOptions sampling{};
};

/// Ungated sum-over-pairs lift of a table: A(x_1..x_t) = sum_{i<j} table[x_i][x_j].
/// Used for negative controls and by the axioms command, which reports instead of throwing.
AMetricSpace lift_table(Arity t, MetricTable table, double eq_tol = 1e-12);

/// Ungated lift of a callable base metric on a box.
AMetricSpace lift_metric(Arity t, Point lo, Point hi, BaseMetric base, double eq_tol = 1e-12);

/// Gated lift of a finite metric table. The table must be square, finite,
/// nonnegative, symmetric, zero on the diagonal and satisfy the triangle
/// inequality; the lifted space must then pass check_axioms on the gate sample.
/// Throws ConstructionError carrying the witness otherwise.
AMetricSpace make_lifted_space(Arity t, MetricTable table, const LiftGate& gate = {});

/// Gated lift of a callable base metric; base properties are checked on samples.
AMetricSpace make_lifted_space(Arity t, Point lo, Point hi, BaseMetric base,
                               const LiftGate& gate = {});

enum class MapKind {
  kLinearScale,   // lambda * x
  kPaperExample,  // 2x / 7
  kAffine,        // alpha * x + beta
  kConstant,      // c0
  kIdentity,
  kShift,         // x + 1
  kPiecewise,     // affine pieces separated by breakpoints
  kFiniteTable,   // explicit image index per point
};

std::string to_string(MapKind kind);
/// Inverse of to_string; throws UsageError for unknown names.
MapKind map_kind_from_string(const std::string& name);

struct AffinePiece {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Description of a self-map. Real-valued kinds act on every coordinate independently.
struct MapSpec {
  MapKind kind = MapKind::kIdentity;
  double lambda = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double c0 = 0.0;
  /// Piece k applies on [breakpoints[k-1], breakpoints[k]); pieces.size() == breakpoints.size() + 1.
  std::vector<double> breakpoints;
  std::vector<AffinePiece> pieces;
  std::vector<std::size_t> table;

  static MapSpec linear_scale(double lambda);
  static MapSpec paper_example();
  static MapSpec affine(double alpha, double beta);
  static MapSpec constant(double c0);
  static MapSpec identity();
  static MapSpec shift();
  static MapSpec piecewise(std::vector<double> breakpoints, std::vector<AffinePiece> pieces);
  static MapSpec finite_table(std::vector<std::size_t> image);
};

/// A pure endomorphism of a carrier.
class SelfMap {
 public:
  using Fn = std::function<Point(const Point&)>;

  SelfMap(std::string name, Fn fn) : name_(std::move(name)), fn_(std::move(fn)) {}

  const std::string& name() const noexcept { return name_; }
  Point operator()(const Point& x) const { return fn_(x); }

 private:
  std::string name_;
  Fn fn_;
};

struct MapGate {
  std::uint64_t seed = 0xbb67ae8584caa73bULL;
  std::size_t samples = 1000;
  SamplingOptions sampling{};
};

/// Build the map described by `spec` on `space`. The image of every carrier point
/// (exhaustively on finite carriers, on seeded samples plus finite box corners
/// otherwise) must stay in the carrier; ConstructionError carries the escaping point.
SelfMap make_map(const MapSpec& spec, const AMetricSpace& space, const MapGate& gate = {});

}  // namespace ametric
