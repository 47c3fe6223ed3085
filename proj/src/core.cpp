#include "ametric/core.hpp"

#include <algorithm>
#include <cmath>

namespace ametric {

AMetricSpace::AMetricSpace(std::string name, Arity t, Carrier carrier, DistanceFn distance,
                           double eq_tol)
    : name_(std::move(name)),
      arity_(t),
      carrier_(std::move(carrier)),
      distance_(std::move(distance)),
      eq_tol_(eq_tol) {
  if (!distance_) throw UsageError("distance function is empty");
  if (!(eq_tol_ >= 0.0) || !std::isfinite(eq_tol_)) throw UsageError("eq_tol must be finite and >= 0");
  if (const auto* box = std::get_if<BoxCarrier>(&carrier_)) {
    if (box->lo.empty() || box->lo.size() != box->hi.size())
      throw UsageError("box bounds must be nonempty and of equal dimension");
    for (std::size_t i = 0; i < box->lo.size(); ++i) {
      if (std::isnan(box->lo[i]) || std::isnan(box->hi[i]) || !(box->lo[i] < box->hi[i]))
        throw UsageError("box requires lo < hi in every coordinate");
    }
  } else if (std::get<FiniteCarrier>(carrier_).size == 0) {
    throw UsageError("finite carrier must have at least one point");
  }
}

std::size_t AMetricSpace::finite_size() const noexcept {
  if (const auto* fin = std::get_if<FiniteCarrier>(&carrier_)) return fin->size;
  return 0;
}

std::size_t AMetricSpace::dimension() const noexcept {
  if (const auto* box = std::get_if<BoxCarrier>(&carrier_)) return box->lo.size();
  return 1;
}

bool AMetricSpace::contains(const Point& p) const noexcept {
  if (const auto* box = std::get_if<BoxCarrier>(&carrier_)) {
    if (p.size() != box->lo.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (std::isnan(p[i]) || p[i] < box->lo[i] || p[i] > box->hi[i]) return false;
    }
    return true;
  }
  const auto n = std::get<FiniteCarrier>(carrier_).size;
  if (p.size() != 1) return false;
  const double v = p[0];
  return v >= 0.0 && v < static_cast<double>(n) && std::floor(v) == v;
}

bool AMetricSpace::points_equal(const Point& a, const Point& b) const noexcept {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= eq_tol_)) return false;
  }
  return true;
}

double eval(const AMetricSpace& space, std::span<const Point> points) {
  if (points.size() != space.arity().size()) {
    throw UsageError("expected " + std::to_string(space.t()) + " points, got " +
                     std::to_string(points.size()));
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!space.contains(points[i]))
      throw DomainError("point " + std::to_string(i) + " lies outside the carrier of " + space.name());
  }
  return space.raw(points);
}

double rep_distance(const AMetricSpace& space, const Point& x, const Point& y) {
  std::vector<Point> tuple(space.arity().size(), x);
  tuple.back() = y;
  return eval(space, tuple);
}

double coordinate_spread(std::span<const Point> points) {
  double spread = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const auto& a = points[i];
      const auto& b = points[j];
      const std::size_t d = std::min(a.size(), b.size());
      for (std::size_t k = 0; k < d; ++k) spread = std::max(spread, std::abs(a[k] - b[k]));
    }
  }
  return spread;
}

double Tolerance::at(double magnitude) const noexcept {
  return abs * (1.0 + std::abs(magnitude));
}

void CheckReport::record(const std::string& check, std::span<const Point> witness, double lhs,
                         double rhs, double gap, double tol) {
  if (checked == 0 || gap > max_gap || std::isnan(gap)) max_gap = gap;
  ++checked;
  if (gap > tol || std::isnan(gap)) {
    violations.push_back({check, {witness.begin(), witness.end()}, lhs, rhs, gap, tol});
  }
}

void CheckReport::merge(const CheckReport& other) {
  if (other.checked == 0) return;
  if (checked == 0 || other.max_gap > max_gap) max_gap = other.max_gap;
  checked += other.checked;
  violations.insert(violations.end(), other.violations.begin(), other.violations.end());
}

namespace {

void require_width(const SampleSet& samples, std::size_t width, const char* what) {
  if (samples.empty()) throw UsageError(std::string(what) + ": empty sample set");
  for (const auto& tuple : samples.tuples) {
    if (tuple.size() != width) {
      throw UsageError(std::string(what) + ": expected tuples of width " + std::to_string(width) +
                       ", got " + std::to_string(tuple.size()));
    }
  }
}

bool all_equal(const AMetricSpace& space, std::span<const Point> points) {
  for (std::size_t i = 1; i < points.size(); ++i) {
    if (!space.points_equal(points[0], points[i])) return false;
  }
  return true;
}

}  // namespace

CheckReport check_axioms(const AMetricSpace& space, const SampleSet& samples, Tolerance tol) {
  const std::size_t t = space.arity().size();
  require_width(samples, t + 1, "check_axioms");

  CheckReport report{.name = "axioms"};
  for (const auto& sample : samples.tuples) {
    const std::span<const Point> tuple(sample.data(), t);
    const Point& pivot = sample.back();
    const double value = eval(space, tuple);

    // A1
    report.record("A1", tuple, 0.0, value, -value, tol.at(value));

    // A2, both directions. The reverse direction is strict: distinct points must
    // have positive distance, so the gap is how far apart the points are.
    if (all_equal(space, tuple)) {
      report.record("A2", tuple, value, 0.0, value, tol.at(0.0));
    } else if (!(value > 0.0)) {
      const double spread = coordinate_spread(tuple);
      report.record("A2", tuple, spread, space.eq_tol(), spread - space.eq_tol(), 0.0);
    } else {
      ++report.checked;
    }

    // A3
    double rhs = 0.0;
    for (const auto& x : tuple) rhs += rep_distance(space, x, pivot);
    report.record("A3", sample, value, rhs, value - rhs, tol.at(std::max(value, rhs)));
  }
  return report;
}

CheckReport check_symmetry(const AMetricSpace& space, const SampleSet& pairs, Tolerance tol) {
  require_width(pairs, 2, "check_symmetry");
  CheckReport report{.name = "symmetry"};
  for (const auto& pair : pairs.tuples) {
    const double xy = rep_distance(space, pair[0], pair[1]);
    const double yx = rep_distance(space, pair[1], pair[0]);
    report.record("symmetry", pair, xy, yx, std::abs(xy - yx), tol.at(std::max(xy, yx)));
  }
  return report;
}

CheckReport check_triangle_lemma(const AMetricSpace& space, const SampleSet& triples,
                                 Tolerance tol) {
  require_width(triples, 3, "check_triangle_lemma");
  const double k = static_cast<double>(space.t() - 1);
  CheckReport report{.name = "triangle"};
  for (const auto& triple : triples.tuples) {
    const Point& x = triple[0];
    const Point& y = triple[1];
    const Point& z = triple[2];
    const double xz = rep_distance(space, x, z);
    const double xy = rep_distance(space, x, y);
    const double rhs1 = k * xy + rep_distance(space, z, y);
    const double rhs2 = k * xy + rep_distance(space, y, z);
    report.record("triangle.zy", triple, xz, rhs1, xz - rhs1, tol.at(std::max(xz, rhs1)));
    report.record("triangle.yz", triple, xz, rhs2, xz - rhs2, tol.at(std::max(xz, rhs2)));
  }
  return report;
}

}  // namespace ametric
