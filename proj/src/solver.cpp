#include "ametric/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace ametric {

std::string to_string(PicardStatus status) {
  switch (status) {
    case PicardStatus::kConverged: return "converged";
    case PicardStatus::kMaxIter: return "max_iter";
    case PicardStatus::kDiverged: return "diverged";
  }
  return "unknown";
}

PicardTrace picard_run(const AMetricSpace& space, const SelfMap& f, const Point& x0, double delta,
                       const StopRule& rule) {
  if (!(rule.eps > 0.0)) throw UsageError("eps must be > 0");
  if (rule.max_iter < 1) throw UsageError("max_iter must be >= 1");
  if (delta >= 1.0) throw UsageError("delta must be < 1 (or negative to disable monitoring)");
  if (!space.contains(x0)) throw DomainError("iterate 0 lies outside the carrier");

  PicardTrace trace;
  trace.t = space.t();
  trace.delta = delta < 0.0 ? -1.0 : delta;
  trace.iterates.push_back(x0);

  std::size_t growth_run = 0;
  for (;;) {
    if (trace.steps.size() >= rule.max_iter) {
      trace.status = PicardStatus::kMaxIter;
      break;
    }
    const std::size_t n = trace.steps.size();
    const Point& xn = trace.iterates.back();
    Point next = f(xn);
    if (!space.contains(next))
      throw DomainError("iterate " + std::to_string(n + 1) + " lies outside the carrier");
    if (space.points_equal(next, xn)) {
      trace.status = PicardStatus::kConverged;
      trace.limit = xn;
      break;
    }
    const double step = rep_distance(space, next, xn);
    trace.iterates.push_back(std::move(next));
    trace.steps.push_back(step);
    if (trace.monitored())
      trace.bound.push_back(std::pow(trace.delta, static_cast<double>(n)) * trace.steps.front());

    if (!std::isfinite(step)) {
      trace.status = PicardStatus::kDiverged;
      break;
    }
    if (step <= rule.eps) {
      trace.status = PicardStatus::kConverged;
      trace.limit = trace.iterates.back();
      break;
    }
    if (rule.bound_eps && trace.monitored() &&
        tail_bound(trace.delta, space.arity(), trace.steps.front(), n + 1) <= *rule.bound_eps) {
      trace.status = PicardStatus::kConverged;
      trace.limit = trace.iterates.back();
      break;
    }
    if (n > 0 && step > rule.growth_factor * trace.steps[n - 1]) {
      if (++growth_run >= rule.growth_patience) {
        trace.status = PicardStatus::kDiverged;
        break;
      }
    } else {
      growth_run = 0;
    }
  }
  return trace;
}

double tail_bound(double delta, Arity t, double d0, std::size_t n) {
  if (!(delta >= 0.0 && delta < 1.0)) throw UsageError("tail_bound needs 0 <= delta < 1");
  if (!(d0 >= 0.0)) throw UsageError("tail_bound needs d0 >= 0");
  const double k = static_cast<double>(t.value() - 1);
  return k * std::pow(delta, static_cast<double>(n)) * d0 / (1.0 - delta);
}

std::size_t iterations_for_bound(double delta, Arity t, double d0, double bound_eps) {
  if (!(delta > 0.0 && delta < 1.0) || !(d0 > 0.0) || !(bound_eps > 0.0))
    throw UsageError("iterations_for_bound needs 0 < delta < 1, d0 > 0, bound_eps > 0");
  const double k = static_cast<double>(t.value() - 1);
  const double n = std::ceil(std::log(bound_eps * (1.0 - delta) / (k * d0)) / std::log(delta));
  return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

CheckReport verify_decay(const PicardTrace& trace, Tolerance tol) {
  if (!trace.monitored()) throw UsageError("verify_decay needs a trace with a certified delta");
  CheckReport report{.name = "decay"};
  if (trace.steps.empty()) return report;
  const double d0 = trace.steps.front();
  for (std::size_t n = 0; n < trace.steps.size(); ++n) {
    const double dn = trace.steps[n];
    const std::span<const Point> witness(trace.iterates.data() + n, 2);
    if (n > 0) {
      const double rhs = trace.delta * trace.steps[n - 1];
      report.record("step_ratio", witness, dn, rhs, dn - rhs, tol.at(std::max(dn, rhs)));
    }
    const double envelope = std::pow(trace.delta, static_cast<double>(n)) * d0;
    report.record("geometric", witness, dn, envelope, dn - envelope, tol.at(std::max(dn, envelope)));
  }
  return report;
}

CauchyReport verify_cauchy(const PicardTrace& trace, const AMetricSpace& space, Tolerance tol) {
  if (!trace.monitored()) throw UsageError("verify_cauchy needs a trace with a certified delta");
  CauchyReport out;
  out.envelope.name = "cauchy";
  if (trace.steps.empty()) return out;

  const double delta = trace.delta;
  const double k = static_cast<double>(space.t() - 1);
  const double d0 = trace.steps.front();
  std::size_t finite_ok = 0;
  std::size_t naive_ok = 0;
  const std::size_t count = trace.iterates.size();
  for (std::size_t n = 0; n < count; ++n) {
    const double dn = std::pow(delta, static_cast<double>(n));
    const double envelope = k * dn * d0 / (1.0 - delta);
    for (std::size_t m = n + 1; m < count; ++m) {
      const double r = rep_distance(space, trace.iterates[n], trace.iterates[m]);
      const double tail = std::pow(delta, static_cast<double>(m - 1)) * d0;
      const double finite_form = envelope + tail;
      const double naive =
          (k * std::pow(delta, static_cast<double>(m + n)) / (1.0 - delta)) * d0 + tail;
      const std::vector<Point> witness{trace.iterates[n], trace.iterates[m]};
      out.envelope.record("envelope", witness, r, envelope, r - envelope,
                          tol.at(std::max(r, envelope)));
      if (r - finite_form <= tol.at(std::max(r, finite_form))) ++finite_ok;
      if (r - naive <= tol.at(std::max(r, naive))) ++naive_ok;
      ++out.pairs;
    }
  }
  if (out.pairs > 0) {
    out.finite_form_rate = static_cast<double>(finite_ok) / static_cast<double>(out.pairs);
    out.naive_form_rate = static_cast<double>(naive_ok) / static_cast<double>(out.pairs);
  }
  return out;
}

UniquenessReport uniqueness_probe(const AMetricSpace& space, const SelfMap& f,
                                  const std::vector<Point>& starts, double delta,
                                  const StopRule& rule, Tolerance tol) {
  if (starts.size() < 2) throw UsageError("uniqueness_probe needs at least two starts");
  UniquenessReport out;
  out.check.name = "uniqueness";
  for (const auto& s : starts) out.runs.push_back(picard_run(space, f, s, delta, rule));

  const double agree = std::max(space.eq_tol(), 10.0 * rule.eps);
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    const auto& run = out.runs[i];
    const std::vector<Point> start{starts[i]};
    if (!run.limit) {
      const double last = run.steps.empty() ? 0.0 : run.steps.back();
      out.check.record("converged", start, last, rule.eps, std::max(last - rule.eps, 1.0), 0.0);
      continue;
    }
    if (!out.consensus) {
      out.consensus = run.limit;
      continue;
    }
    const double r = rep_distance(space, *run.limit, *out.consensus);
    const std::vector<Point> witness{starts[i], *run.limit, *out.consensus};
    out.check.record("agreement", witness, r, agree, r - agree, tol.at(agree));
  }
  if (out.consensus) {
    const Point& p = *out.consensus;
    const double residual = rep_distance(space, f(p), p);
    const double cap = 10.0 * rule.eps;
    const std::vector<Point> witness{p};
    out.check.record("residual", witness, residual, cap, residual - cap, tol.at(cap));
  }
  return out;
}

std::vector<Point> brute_force_fixed_points(const AMetricSpace& space, const SelfMap& f) {
  if (!space.is_finite()) throw UsageError("brute force enumeration needs a finite carrier");
  std::vector<Point> fixed;
  for (std::size_t i = 0; i < space.finite_size(); ++i) {
    const Point x{static_cast<double>(i)};
    if (space.points_equal(f(x), x)) fixed.push_back(x);
  }
  return fixed;
}

namespace {

void append_number(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

}  // namespace

std::string trace_to_csv(const PicardTrace& trace) {
  std::string out = "n,step,bound,ratio,tail_bound\n";
  const bool monitored = trace.monitored();
  const Arity t(trace.t);
  for (std::size_t n = 0; n < trace.steps.size(); ++n) {
    out += std::to_string(n);
    out += ',';
    append_number(out, trace.steps[n]);
    out += ',';
    if (monitored) append_number(out, trace.bound[n]);
    out += ',';
    if (n > 0 && trace.steps[n - 1] > 0.0) append_number(out, trace.steps[n] / trace.steps[n - 1]);
    out += ',';
    if (monitored) append_number(out, tail_bound(trace.delta, t, trace.steps.front(), n + 1));
    out += '\n';
  }
  return out;
}

}  // namespace ametric
