#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ametric/core.hpp"
#include "ametric/spaces.hpp"

namespace ametric {

struct StopRule {
  /// Stop once rep_distance(x_{n+1}, x_n) <= eps.
  double eps = 1e-12;
  std::size_t max_iter = 10'000;
  /// Optional a-priori target: stop once tail_bound(delta, t, d0, n) <= bound_eps.
  std::optional<double> bound_eps;
  /// A step counts as growth when it exceeds growth_factor times the previous one.
  double growth_factor = 1.0;
  /// Consecutive growth steps that mark a run as diverged.
  std::size_t growth_patience = 10;
};

enum class PicardStatus { kConverged, kMaxIter, kDiverged };

std::string to_string(PicardStatus status);

/// Picard iterates x_0, x_1, ..., x_N with step d_n = rep(x_{n+1}, x_n).
/// steps.size() == iterates.size() - 1. When delta >= 0, bound[n] = delta^n d_0.
struct PicardTrace {
  int t = 2;
  std::vector<Point> iterates;
  std::vector<double> steps;
  std::vector<double> bound;
  double delta = -1.0;
  PicardStatus status = PicardStatus::kMaxIter;
  std::optional<Point> limit;

  bool monitored() const noexcept { return delta >= 0.0; }
  std::size_t iterations() const noexcept { return steps.size(); }
};

/// x_{n+1} = f(x_n) from x0. Stops when f(x_n) equals x_n (x_n is then the limit and
/// no step is recorded), when a step drops to eps, when the a-priori tail bound
/// reaches bound_eps, on divergence, or after max_iter steps.
/// Pass delta < 0 to disable bound monitoring for maps without a certificate.
/// Throws DomainError (naming the iterate index) when an iterate leaves the carrier.
PicardTrace picard_run(const AMetricSpace& space, const SelfMap& f, const Point& x0, double delta,
                       const StopRule& rule = {});

/// (t - 1) delta^n d0 / (1 - delta): upper bound on rep(x_n, p) for the fixed point p.
double tail_bound(double delta, Arity t, double d0, std::size_t n);

/// Iteration count after which tail_bound drops to bound_eps (d0 > 0, 0 < delta < 1).
std::size_t iterations_for_bound(double delta, Arity t, double d0, double bound_eps);

/// d_n <= delta d_{n-1} and d_n <= delta^n d_0 for every recorded step.
CheckReport verify_decay(const PicardTrace& trace, Tolerance tol = {});

struct CauchyReport {
  /// rep(x_n, x_m) <= (t-1) delta^n d0 / (1-delta) for all n < m; asserted.
  CheckReport envelope;
  /// Satisfaction of the finite-m form (t-1) delta^n d0/(1-delta) + delta^(m-1) d0.
  double finite_form_rate = 1.0;
  /// Satisfaction of [(t-1) delta^(m+n)/(1-delta) + delta^(m-1)] d0, which undercounts
  /// the geometric sum and is not a valid bound; reported, never asserted.
  double naive_form_rate = 1.0;
  std::size_t pairs = 0;
};

CauchyReport verify_cauchy(const PicardTrace& trace, const AMetricSpace& space,
                           Tolerance tol = {});

struct UniquenessReport {
  CheckReport check;
  std::vector<PicardTrace> runs;
  std::optional<Point> consensus;
};

/// Run Picard from every start and require a common limit that is a fixed point.
/// Limits must agree within max(eq_tol, 10 eps) in rep distance and the consensus
/// limit must have residual rep(f(p), p) <= 10 eps.
UniquenessReport uniqueness_probe(const AMetricSpace& space, const SelfMap& f,
                                  const std::vector<Point>& starts, double delta,
                                  const StopRule& rule = {}, Tolerance tol = {});

/// Every x with f(x) = x, by enumeration of a finite carrier.
std::vector<Point> brute_force_fixed_points(const AMetricSpace& space, const SelfMap& f);

/// CSV with header n,step,bound,ratio,tail_bound; one row per recorded step,
/// floats with 17 significant digits; ratio is blank for n = 0, bound columns are
/// blank when the trace is unmonitored.
std::string trace_to_csv(const PicardTrace& trace);

}  // namespace ametric
