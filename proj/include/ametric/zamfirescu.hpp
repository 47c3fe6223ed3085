#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "ametric/core.hpp"
#include "ametric/spaces.hpp"

namespace ametric {

enum class Branch : int {
  kBanach = 1,      // A(fx..fx,fy) <= a A(x..x,y)
  kKannan = 2,      // A(fx..fx,fy) <= b [A(fx..fx,x) + A(fy..fy,y)]
  kChatterjea = 3,  // A(fx..fx,fy) <= c [A(fx..fx,y) + A(fy..fy,x)]
};

/// Smallest constant that makes each branch hold for one pair.
/// numerator / denominator, with 0/0 -> 0 and k/0 -> +inf for k > 0.
struct BranchConstants {
  Point x;
  Point y;
  double a_req = 0.0;
  double b_req = 0.0;
  double c_req = 0.0;
};

BranchConstants branch_constants(const AMetricSpace& space, const SelfMap& f, const Point& x,
                                 const Point& y);

struct ClassifyOptions {
  /// Relative slack used when preferring a lower-index branch at the optimal level.
  double assignment_slack = 1e-9;
  /// When > 0, a, b, c are inflated by (1 + safety_margin) before delta is derived.
  double safety_margin = 0.0;
  /// Witness pairs kept in an invalid certificate.
  std::size_t max_witnesses = 16;
  /// On box carriers, pairs with rep(x, y) < min_separation * (1 + |x|, |y| scale) are
  /// near-diagonal: their ratios are dominated by rounding, so they do not set the
  /// constants and are only required to hold within check_tol.
  double min_separation = 1e-4;
  double check_tol = 1e-9;
};

/// Constants (a, b, c), per-pair branch assignment and the derived contraction
/// factor. Admissible ranges are closed at zero: 0 <= a < 1 and 0 <= b, c < 1/t.
struct ZamfirescuCertificate {
  int t = 2;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
  /// max{a, b/(1-b(t-1)), c/(1-c(t-1))}; NaN when the certificate is invalid.
  double delta = 0.0;
  bool valid = false;
  bool exhaustive = false;
  std::size_t n_pairs = 0;
  /// Pairs checked within tolerance rather than used to set constants.
  std::size_t near_diagonal = 0;
  std::vector<Branch> assignments;
  std::array<std::size_t, 3> branch_counts{};
  /// Pairs for which no branch is satisfiable with an admissible constant.
  std::vector<BranchConstants> witnesses;
};

/// Classify f on the given pairs.
///
/// Each pair contributes normalized requirements (a_req, t*b_req, t*c_req); the
/// certificate is valid iff every pair has one below 1. The optimal level is the
/// largest per-pair minimum; each pair is then assigned to the first branch in
/// Banach, Kannan, Chatterjea order whose normalized requirement reaches that level.
/// This attains the same optimal max-normalized constant as a per-pair argmin while
/// leaving unused branches at exactly zero.
ZamfirescuCertificate classify(const AMetricSpace& space, const SelfMap& f,
                               const SampleSet& pairs, const ClassifyOptions& opts = {});

/// max{a, b/(1-b(t-1)), c/(1-c(t-1))}. Throws UsageError outside 0<=a<1, 0<=b,c<1/t.
double compute_delta(double a, double b, double c, Arity t);

/// The two derived contraction inequalities with the given delta on every pair:
///   A(fx..fx,fy) <= delta A(x..x,y) + t delta A(fx..fx,x)
///   A(fx..fx,fy) <= delta A(x..x,y) + t delta A(fy..fy,x)
CheckReport verify_lemma1(const AMetricSpace& space, const SelfMap& f, double delta,
                          const SampleSet& pairs, Tolerance tol = {});

/// Every pair satisfies at least one of the three branches with the certificate's
/// constants, re-derived from scratch (independent of the stored assignment).
CheckReport recheck_certificate(const AMetricSpace& space, const SelfMap& f,
                                const ZamfirescuCertificate& cert, const SampleSet& pairs,
                                Tolerance tol = {});

}  // namespace ametric
