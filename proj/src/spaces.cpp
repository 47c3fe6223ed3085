#include "ametric/spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ametric {

namespace {

double l1(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::abs(a[k] - b[k]);
  return s;
}

std::string describe(const Violation& v) {
  return v.check + " violated (lhs " + std::to_string(v.lhs) + ", rhs " + std::to_string(v.rhs) +
         ")";
}

std::vector<std::vector<double>> flatten(const std::vector<Point>& pts) {
  return {pts.begin(), pts.end()};
}

void gate_axioms(const AMetricSpace& space, const LiftGate& gate) {
  const auto samples = sample_axiom_tuples(space, gate.samples, gate.seed, gate.sampling);
  const auto report = check_axioms(space, samples, gate.tol);
  if (!report.passed()) {
    const auto& v = report.violations.front();
    throw ConstructionError("lifted space failed axiom gate: " + describe(v), flatten(v.witness));
  }
}

}  // namespace

AMetricSpace make_absdiff_space(Arity t, std::size_t d, Point lo, Point hi, double eq_tol) {
  if (d == 0) throw UsageError("dimension must be >= 1");
  if (lo.size() != d || hi.size() != d) throw UsageError("box bounds must have dimension d");
  auto distance = [](std::span<const Point> xs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = i + 1; j < xs.size(); ++j) sum += l1(xs[i], xs[j]);
    }
    return sum;
  };
  return AMetricSpace("absdiff", t, BoxCarrier{std::move(lo), std::move(hi)}, distance, eq_tol);
}

AMetricSpace make_absdiff_space(Arity t, std::size_t d, double eq_tol) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return make_absdiff_space(t, d, Point(d, -inf), Point(d, inf), eq_tol);
}

AMetricSpace lift_table(Arity t, MetricTable table, double eq_tol) {
  const std::size_t n = table.size();
  for (const auto& row : table) {
    if (row.size() != n) throw UsageError("metric table must be square");
  }
  auto distance = [table = std::move(table)](std::span<const Point> xs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const auto a = static_cast<std::size_t>(xs[i][0]);
      for (std::size_t j = i + 1; j < xs.size(); ++j) {
        sum += table[a][static_cast<std::size_t>(xs[j][0])];
      }
    }
    return sum;
  };
  return AMetricSpace("lifted_table", t, FiniteCarrier{n}, distance, eq_tol);
}

AMetricSpace lift_metric(Arity t, Point lo, Point hi, BaseMetric base, double eq_tol) {
  if (!base) throw UsageError("base metric is empty");
  auto distance = [base = std::move(base)](std::span<const Point> xs) {
    double sum = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      for (std::size_t j = i + 1; j < xs.size(); ++j) sum += base(xs[i], xs[j]);
    }
    return sum;
  };
  return AMetricSpace("lifted_metric", t, BoxCarrier{std::move(lo), std::move(hi)}, distance,
                      eq_tol);
}

AMetricSpace make_lifted_space(Arity t, MetricTable table, const LiftGate& gate) {
  const std::size_t n = table.size();
  if (n == 0) throw UsageError("metric table is empty");
  for (const auto& row : table) {
    if (row.size() != n) throw UsageError("metric table must be square");
  }
  auto idx = [](std::size_t i) { return std::vector<double>{static_cast<double>(i)}; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = table[i][j];
      if (!std::isfinite(v) || v < 0.0)
        throw ConstructionError("base table entry is negative or not finite", {idx(i), idx(j)});
      if (v != table[j][i])
        throw ConstructionError("base table is not symmetric", {idx(i), idx(j)});
      if ((i == j) != (v == 0.0))
        throw ConstructionError("base table must vanish exactly on the diagonal", {idx(i), idx(j)});
    }
  }
  const double slack = gate.tol.abs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        const double rhs = table[i][k] + table[k][j];
        if (table[i][j] - rhs > slack * (1.0 + rhs))
          throw ConstructionError("base table violates the triangle inequality",
                                  {idx(i), idx(j), idx(k)});
      }
    }
  }
  auto space = lift_table(t, std::move(table));
  gate_axioms(space, gate);
  return space;
}

AMetricSpace make_lifted_space(Arity t, Point lo, Point hi, BaseMetric base,
                               const LiftGate& gate) {
  auto space = lift_metric(t, std::move(lo), std::move(hi), base);
  const auto triples = sample_triples(space, gate.samples, derive_seed(gate.seed, 1), gate.sampling);
  for (const auto& tr : triples.tuples) {
    const double xy = base(tr[0], tr[1]);
    const double yx = base(tr[1], tr[0]);
    if (!std::isfinite(xy) || xy < 0.0)
      throw ConstructionError("base metric is negative or not finite", flatten(tr));
    if (std::abs(xy - yx) > gate.tol.at(std::max(xy, yx)))
      throw ConstructionError("base metric is not symmetric", flatten(tr));
    if (base(tr[0], tr[0]) != 0.0)
      throw ConstructionError("base metric does not vanish on the diagonal", flatten(tr));
    const double rhs = base(tr[0], tr[2]) + base(tr[2], tr[1]);
    if (xy - rhs > gate.tol.at(rhs))
      throw ConstructionError("base metric violates the triangle inequality", flatten(tr));
  }
  gate_axioms(space, gate);
  return space;
}

std::string to_string(MapKind kind) {
  switch (kind) {
    case MapKind::kLinearScale: return "linear-scale";
    case MapKind::kPaperExample: return "paper-example";
    case MapKind::kAffine: return "affine";
    case MapKind::kConstant: return "constant";
    case MapKind::kIdentity: return "identity";
    case MapKind::kShift: return "shift";
    case MapKind::kPiecewise: return "piecewise";
    case MapKind::kFiniteTable: return "finite-table";
  }
  return "unknown";
}

MapKind map_kind_from_string(const std::string& name) {
  for (auto k : {MapKind::kLinearScale, MapKind::kPaperExample, MapKind::kAffine,
                 MapKind::kConstant, MapKind::kIdentity, MapKind::kShift, MapKind::kPiecewise,
                 MapKind::kFiniteTable}) {
    if (to_string(k) == name) return k;
  }
  throw UsageError("unknown map kind '" + name + "'");
}

MapSpec MapSpec::linear_scale(double lambda) {
  MapSpec s{.kind = MapKind::kLinearScale};
  s.lambda = lambda;
  return s;
}
MapSpec MapSpec::paper_example() { return {.kind = MapKind::kPaperExample}; }
MapSpec MapSpec::affine(double alpha, double beta) {
  MapSpec s{.kind = MapKind::kAffine};
  s.alpha = alpha;
  s.beta = beta;
  return s;
}
MapSpec MapSpec::constant(double c0) {
  MapSpec s{.kind = MapKind::kConstant};
  s.c0 = c0;
  return s;
}
MapSpec MapSpec::identity() { return {.kind = MapKind::kIdentity}; }
MapSpec MapSpec::shift() { return {.kind = MapKind::kShift}; }
MapSpec MapSpec::piecewise(std::vector<double> breakpoints, std::vector<AffinePiece> pieces) {
  MapSpec s{.kind = MapKind::kPiecewise};
  s.breakpoints = std::move(breakpoints);
  s.pieces = std::move(pieces);
  return s;
}
MapSpec MapSpec::finite_table(std::vector<std::size_t> image) {
  MapSpec s{.kind = MapKind::kFiniteTable};
  s.table = std::move(image);
  return s;
}

namespace {

template <typename F>
SelfMap::Fn coordinatewise(F f) {
  return [f](const Point& x) {
    Point y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = f(x[i]);
    return y;
  };
}

SelfMap::Fn build(const MapSpec& spec, const AMetricSpace& space) {
  const bool finite = space.is_finite();
  auto require_box = [&] {
    if (finite) throw UsageError("map kind '" + to_string(spec.kind) + "' needs a box carrier");
  };
  auto require_finite_param = [](double v, const char* what) {
    if (!std::isfinite(v)) throw UsageError(std::string(what) + " must be finite");
  };

  switch (spec.kind) {
    case MapKind::kIdentity:
      return [](const Point& x) { return x; };
    case MapKind::kConstant: {
      require_finite_param(spec.c0, "c0");
      if (finite && (spec.c0 < 0 || std::floor(spec.c0) != spec.c0))
        throw UsageError("constant map on a finite carrier needs an index");
      const double c = spec.c0;
      return [c](const Point& x) { return Point(x.size(), c); };
    }
    case MapKind::kFiniteTable: {
      if (!finite) throw UsageError("finite-table map needs a finite carrier");
      if (spec.table.size() != space.finite_size())
        throw UsageError("finite-table image must list one entry per carrier point");
      auto image = spec.table;
      return [image](const Point& x) {
        return Point{static_cast<double>(image.at(static_cast<std::size_t>(x[0])))};
      };
    }
    case MapKind::kLinearScale: {
      require_box();
      require_finite_param(spec.lambda, "lambda");
      const double lambda = spec.lambda;
      return coordinatewise([lambda](double v) { return lambda * v; });
    }
    case MapKind::kPaperExample:
      require_box();
      return coordinatewise([](double v) { return 2.0 * v / 7.0; });
    case MapKind::kAffine: {
      require_box();
      require_finite_param(spec.alpha, "alpha");
      require_finite_param(spec.beta, "beta");
      const double alpha = spec.alpha;
      const double beta = spec.beta;
      return coordinatewise([alpha, beta](double v) { return alpha * v + beta; });
    }
    case MapKind::kShift:
      require_box();
      return coordinatewise([](double v) { return v + 1.0; });
    case MapKind::kPiecewise: {
      require_box();
      if (spec.pieces.size() != spec.breakpoints.size() + 1)
        throw UsageError("piecewise map needs one more piece than breakpoints");
      for (std::size_t i = 0; i < spec.breakpoints.size(); ++i) {
        require_finite_param(spec.breakpoints[i], "breakpoint");
        if (i > 0 && !(spec.breakpoints[i - 1] < spec.breakpoints[i]))
          throw UsageError("piecewise breakpoints must be strictly increasing");
      }
      for (const auto& p : spec.pieces) {
        require_finite_param(p.slope, "piece slope");
        require_finite_param(p.intercept, "piece intercept");
      }
      auto bps = spec.breakpoints;
      auto pieces = spec.pieces;
      return coordinatewise([bps, pieces](double v) {
        const auto k = static_cast<std::size_t>(std::upper_bound(bps.begin(), bps.end(), v) - bps.begin());
        return pieces[k].slope * v + pieces[k].intercept;
      });
    }
  }
  throw UsageError("unknown map kind");
}

std::vector<Point> box_corners(const BoxCarrier& box) {
  const std::size_t d = box.lo.size();
  std::vector<Point> corners;
  if (d > 12) return corners;
  for (std::size_t mask = 0; mask < (std::size_t{1} << d); ++mask) {
    Point c(d);
    bool ok = true;
    for (std::size_t i = 0; i < d; ++i) {
      c[i] = (mask >> i) & 1 ? box.hi[i] : box.lo[i];
      ok = ok && std::isfinite(c[i]);
    }
    if (ok) corners.push_back(std::move(c));
  }
  return corners;
}

}  // namespace

SelfMap make_map(const MapSpec& spec, const AMetricSpace& space, const MapGate& gate) {
  SelfMap map(to_string(spec.kind), build(spec, space));

  std::vector<Point> probes;
  if (space.is_finite()) {
    for (std::size_t i = 0; i < space.finite_size(); ++i) probes.push_back({static_cast<double>(i)});
  } else {
    probes = box_corners(std::get<BoxCarrier>(space.carrier()));
    for (const auto& b : spec.breakpoints) {
      Point p(space.dimension(), b);
      if (space.contains(p)) probes.push_back(std::move(p));
    }
    CounterRng rng(gate.seed);
    for (std::size_t k = 0; k < gate.samples; ++k) probes.push_back(random_point(space, rng, gate.sampling));
  }
  for (const auto& x : probes) {
    const Point y = map(x);
    if (!space.contains(y)) {
      throw ConstructionError("map '" + map.name() + "' sends a point outside the carrier",
                              {x, y});
    }
  }
  return map;
}

}  // namespace ametric
