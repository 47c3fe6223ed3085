#include "ametric/zamfirescu.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ametric {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double ratio(double num, double den) {
  if (den > 0.0) return num / den;
  return num > 0.0 ? kInf : 0.0;
}

// Numerator and the three branch denominators for one pair.
struct PairTerms {
  double lhs;
  double banach;
  double kannan;
  double chatterjea;
};

PairTerms pair_terms(const AMetricSpace& space, const SelfMap& f, const Point& x, const Point& y) {
  const Point fx = f(x);
  const Point fy = f(y);
  return {
      rep_distance(space, fx, fy),
      rep_distance(space, x, y),
      rep_distance(space, fx, x) + rep_distance(space, fy, y),
      rep_distance(space, fx, y) + rep_distance(space, fy, x),
  };
}

double max_abs(const Point& p) {
  double m = 0.0;
  for (double v : p) {
    if (std::isfinite(v)) m = std::max(m, std::abs(v));
  }
  return m;
}

}  // namespace

BranchConstants branch_constants(const AMetricSpace& space, const SelfMap& f, const Point& x,
                                 const Point& y) {
  const auto terms = pair_terms(space, f, x, y);
  return {x, y, ratio(terms.lhs, terms.banach), ratio(terms.lhs, terms.kannan),
          ratio(terms.lhs, terms.chatterjea)};
}

double compute_delta(double a, double b, double c, Arity t) {
  const double cap = 1.0 / t.value();
  if (!(a >= 0.0 && a < 1.0)) throw UsageError("a must lie in [0, 1)");
  if (!(b >= 0.0 && b < cap)) throw UsageError("b must lie in [0, 1/t)");
  if (!(c >= 0.0 && c < cap)) throw UsageError("c must lie in [0, 1/t)");
  const double k = static_cast<double>(t.value() - 1);
  return std::max({a, b / (1.0 - b * k), c / (1.0 - c * k)});
}

ZamfirescuCertificate classify(const AMetricSpace& space, const SelfMap& f,
                               const SampleSet& pairs, const ClassifyOptions& opts) {
  if (pairs.empty()) throw UsageError("classify: empty pair set");
  if (pairs.width != 2) throw UsageError("classify: expected pairs");

  const int t = space.t();
  const double td = static_cast<double>(t);
  const std::array<double, 3> scale{1.0, td, td};

  std::vector<BranchConstants> constants;
  std::vector<PairTerms> terms;
  std::vector<std::array<double, 3>> normalized;
  std::vector<char> determining;
  constants.reserve(pairs.size());
  normalized.reserve(pairs.size());
  for (const auto& pair : pairs.tuples) {
    const auto pt = pair_terms(space, f, pair[0], pair[1]);
    BranchConstants bc{pair[0], pair[1], ratio(pt.lhs, pt.banach), ratio(pt.lhs, pt.kannan),
                       ratio(pt.lhs, pt.chatterjea)};
    normalized.push_back({bc.a_req, td * bc.b_req, td * bc.c_req});
    determining.push_back(space.is_finite() ||
                          pt.banach >= opts.min_separation * (1.0 + coordinate_spread(pair) +
                                                              std::max(max_abs(pair[0]), max_abs(pair[1]))));
    constants.push_back(std::move(bc));
    terms.push_back(pt);
  }

  auto pair_min = [&](std::size_t p) { return *std::min_element(normalized[p].begin(), normalized[p].end()); };
  double level = 0.0;
  for (std::size_t p = 0; p < normalized.size(); ++p) {
    if (determining[p]) level = std::max(level, pair_min(p));
  }
  // Near-diagonal pairs only need to hold at the current level within tolerance;
  // those that do not are promoted and raise the level.
  const Tolerance tol{opts.check_tol};
  auto holds_at = [&](std::size_t p, double lvl) {
    const auto& pt = terms[p];
    const std::array<double, 3> den{pt.banach, pt.kannan, pt.chatterjea};
    for (std::size_t k = 0; k < 3; ++k) {
      const double rhs = lvl / scale[k] * den[k];
      if (pt.lhs - rhs <= tol.at(std::max(pt.lhs, rhs))) return static_cast<int>(k);
    }
    return -1;
  };
  for (std::size_t p = 0; p < normalized.size(); ++p) {
    if (!determining[p] && holds_at(p, std::min(level, 1.0)) < 0) {
      determining[p] = 1;
      level = std::max(level, pair_min(p));
    }
  }

  ZamfirescuCertificate cert;
  cert.t = t;
  cert.exhaustive = pairs.exhaustive;
  cert.n_pairs = pairs.size();
  cert.assignments.reserve(pairs.size());

  const bool feasible = level < 1.0;
  const double threshold = level + opts.assignment_slack * (1.0 + level);
  std::array<double, 3> worst{0.0, 0.0, 0.0};
  for (std::size_t p = 0; p < normalized.size(); ++p) {
    const auto& norm = normalized[p];
    std::size_t k = 0;
    if (!determining[p]) {
      k = static_cast<std::size_t>(holds_at(p, level));
      worst[k] = std::max(worst[k], std::min(norm[k], level));
      ++cert.near_diagonal;
    } else if (feasible) {
      while (k < 2 && !(norm[k] <= threshold && norm[k] < 1.0)) ++k;
      worst[k] = std::max(worst[k], norm[k]);
    } else {
      k = static_cast<std::size_t>(std::min_element(norm.begin(), norm.end()) - norm.begin());
      if (norm[k] >= 1.0 && cert.witnesses.size() < opts.max_witnesses)
        cert.witnesses.push_back(constants[p]);
      worst[k] = std::max(worst[k], norm[k]);
    }
    cert.assignments.push_back(static_cast<Branch>(k + 1));
    ++cert.branch_counts[k];
  }

  const double inflate = 1.0 + std::max(0.0, opts.safety_margin);
  cert.a = worst[0] * inflate;
  cert.b = worst[1] / td * inflate;
  cert.c = worst[2] / td * inflate;
  cert.valid = feasible && cert.a < 1.0 && cert.b < 1.0 / td && cert.c < 1.0 / td;
  cert.delta = cert.valid ? compute_delta(cert.a, cert.b, cert.c, space.arity())
                          : std::numeric_limits<double>::quiet_NaN();
  return cert;
}

CheckReport verify_lemma1(const AMetricSpace& space, const SelfMap& f, double delta,
                          const SampleSet& pairs, Tolerance tol) {
  if (pairs.empty()) throw UsageError("verify_lemma1: empty pair set");
  const double td = static_cast<double>(space.t());
  CheckReport report{.name = "lemma1"};
  for (const auto& pair : pairs.tuples) {
    const Point& x = pair[0];
    const Point& y = pair[1];
    const Point fx = f(x);
    const Point fy = f(y);
    const double lhs = rep_distance(space, fx, fy);
    const double base = delta * rep_distance(space, x, y);
    const double rhs1 = base + td * delta * rep_distance(space, fx, x);
    const double rhs2 = base + td * delta * rep_distance(space, fy, x);
    report.record("eq1", pair, lhs, rhs1, lhs - rhs1, tol.at(std::max(lhs, rhs1)));
    report.record("eq2", pair, lhs, rhs2, lhs - rhs2, tol.at(std::max(lhs, rhs2)));
  }
  return report;
}

CheckReport recheck_certificate(const AMetricSpace& space, const SelfMap& f,
                                const ZamfirescuCertificate& cert, const SampleSet& pairs,
                                Tolerance tol) {
  if (pairs.empty()) throw UsageError("recheck_certificate: empty pair set");
  CheckReport report{.name = "az_branches"};
  for (const auto& pair : pairs.tuples) {
    const auto terms = pair_terms(space, f, pair[0], pair[1]);
    const std::array<double, 3> rhs{cert.a * terms.banach, cert.b * terms.kannan,
                                    cert.c * terms.chatterjea};
    const double best = *std::max_element(rhs.begin(), rhs.end());
    report.record("az_any", pair, terms.lhs, best, terms.lhs - best,
                  tol.at(std::max(terms.lhs, best)));
  }
  return report;
}

}  // namespace ametric
