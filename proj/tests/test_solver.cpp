#include "ametric/solver.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "ametric/zamfirescu.hpp"
#include "test_support.hpp"

using namespace ametric;
using ametric::testing::pt;

namespace {

StopRule rule(double eps, std::size_t max_iter = 10'000) {
  StopRule r;
  r.eps = eps;
  r.max_iter = max_iter;
  return r;
}

}  // namespace

TEST(PicardRun, PaperExampleFromSeven) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::paper_example(), space);
  const auto trace = picard_run(space, f, pt(7), 2.0 / 7.0, rule(1e-12));
  ASSERT_EQ(trace.status, PicardStatus::kConverged);
  EXPECT_EQ(trace.iterates[1][0], 2.0);
  EXPECT_DOUBLE_EQ(trace.iterates[2][0], 4.0 / 7.0);
  // d_0 = rep(2, 7) = 10
  EXPECT_EQ(trace.steps[0], 10.0);
  ASSERT_TRUE(trace.limit);
  EXPECT_LE(std::abs((*trace.limit)[0]), 1e-11);
  for (std::size_t n = 1; n < trace.steps.size(); ++n)
    EXPECT_NEAR(trace.steps[n] / trace.steps[n - 1], 2.0 / 7.0, 1e-12);
  for (std::size_t n = 0; n + 1 < trace.iterates.size(); ++n)
    EXPECT_EQ(trace.iterates[n + 1], f(trace.iterates[n]));
}

TEST(PicardRun, FixedStartConvergesImmediately) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::paper_example(), space);
  const auto trace = picard_run(space, f, pt(0), 2.0 / 7.0, rule(1e-12));
  EXPECT_EQ(trace.status, PicardStatus::kConverged);
  EXPECT_TRUE(trace.steps.empty());
  EXPECT_EQ(trace.iterates.size(), 1u);
  EXPECT_EQ(*trace.limit, pt(0));
}

TEST(PicardRun, ShiftHitsIterationCap) {
  const auto space = make_absdiff_space(Arity(2));
  const auto f = make_map(MapSpec::shift(), space);
  const auto trace = picard_run(space, f, pt(0), -1.0, rule(1e-9, 50));
  EXPECT_EQ(trace.status, PicardStatus::kMaxIter);
  EXPECT_FALSE(trace.limit);
  EXPECT_EQ(trace.steps.size(), 50u);
  EXPECT_TRUE(trace.bound.empty());
}

TEST(PicardRun, ExpansionIsFlaggedDiverged) {
  const auto space = make_absdiff_space(Arity(2));
  const auto f = make_map(MapSpec::linear_scale(2.0), space);
  const auto trace = picard_run(space, f, pt(1), -1.0, rule(1e-9, 1000));
  EXPECT_EQ(trace.status, PicardStatus::kDiverged);
  EXPECT_EQ(trace.steps.size(), 11u);
}

TEST(PicardRun, EscapeNamesTheIterate) {
  const auto space = make_absdiff_space(Arity(2), 1, {0.0}, {3.5});
  const SelfMap unchecked("shift", [](const Point& x) { return Point{x[0] + 1.0}; });
  try {
    picard_run(space, unchecked, pt(0), -1.0, rule(1e-9));
    FAIL() << "escape not detected";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("iterate 4"), std::string::npos) << e.what();
  }
}

TEST(PicardRun, RejectsBadArguments) {
  const auto space = make_absdiff_space(Arity(2), 1, {0.0}, {1.0});
  const auto f = make_map(MapSpec::identity(), space);
  EXPECT_THROW(picard_run(space, f, pt(2), -1, rule(1e-9)), DomainError);
  EXPECT_THROW(picard_run(space, f, pt(0.5), 1.0, rule(1e-9)), UsageError);
  EXPECT_THROW(picard_run(space, f, pt(0.5), 0.5, rule(0.0)), UsageError);
}

TEST(PicardRun, BoundEpsTerminatesWithinPredictedCount) {
  const auto space = make_absdiff_space(Arity(4));
  const auto f = make_map(MapSpec::affine(0.6, 1.0), space);  // fixed point 2.5
  for (double bound_eps : {1e-2, 1e-5, 1e-9}) {
    StopRule r = rule(1e-300);
    r.bound_eps = bound_eps;
    const auto trace = picard_run(space, f, pt(-3), 0.6, r);
    ASSERT_EQ(trace.status, PicardStatus::kConverged);
    const auto predicted = iterations_for_bound(0.6, Arity(4), trace.steps.front(), bound_eps);
    EXPECT_LE(trace.iterations(), predicted);
    EXPECT_LE(rep_distance(space, *trace.limit, pt(2.5)), bound_eps * (1 + 1e-9));
  }
}

TEST(TailBound, HandValues) {
  EXPECT_EQ(tail_bound(0.0, Arity(3), 5.0, 1), 0.0);
  // 1 * (1/8) / (1/2)
  EXPECT_DOUBLE_EQ(tail_bound(0.5, Arity(2), 1.0, 3), 0.25);
  // 2 * (2/7) * 10 / (5/7)
  EXPECT_DOUBLE_EQ(tail_bound(2.0 / 7.0, Arity(3), 10.0, 1), 8.0);
  EXPECT_THROW(tail_bound(1.0, Arity(2), 1.0, 0), UsageError);
  EXPECT_THROW(tail_bound(0.5, Arity(2), -1.0, 0), UsageError);
}

TEST(TailBound, CoversObservedErrorInPaperRun) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::paper_example(), space);
  const auto trace = picard_run(space, f, pt(7), 2.0 / 7.0, rule(1e-13));
  for (std::size_t n = 0; n < trace.iterates.size(); ++n) {
    const double err = rep_distance(space, trace.iterates[n], pt(0));
    EXPECT_LE(err, tail_bound(2.0 / 7.0, Arity(3), trace.steps.front(), n) * (1 + 1e-12));
  }
  EXPECT_LE(rep_distance(space, trace.iterates[1], pt(0)), 8.0);
}

TEST(TailBound, DecreasesToZero) {
  double prev = tail_bound(0.9, Arity(5), 3.0, 0);
  for (std::size_t n = 1; n < 400; ++n) {
    const double cur = tail_bound(0.9, Arity(5), 3.0, n);
    ASSERT_LT(cur, prev);
    prev = cur;
  }
  EXPECT_LT(prev, 1e-15);
}

TEST(VerifyDecay, PaperTraceHasExactRatio) {
  const auto space = make_absdiff_space(Arity(5));
  const auto f = make_map(MapSpec::paper_example(), space);
  const auto trace = picard_run(space, f, pt(7), 2.0 / 7.0, rule(1e-12));
  const auto report = verify_decay(trace);
  EXPECT_TRUE(report.passed());
  EXPECT_EQ(report.checked, 2 * trace.steps.size() - 1);
}

TEST(VerifyDecay, ConstantMapTrace) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::constant(4.0), space);
  const auto trace = picard_run(space, f, pt(-2), 0.0, rule(1e-12));
  EXPECT_EQ(trace.status, PicardStatus::kConverged);
  ASSERT_EQ(trace.steps.size(), 1u);
  EXPECT_TRUE(verify_decay(trace).passed());
}

TEST(VerifyDecay, ForgedDeltaFails) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::linear_scale(0.9), space);
  const auto trace = picard_run(space, f, pt(5), 0.5, rule(1e-6));
  const auto report = verify_decay(trace);
  ASSERT_FALSE(report.passed());
  EXPECT_EQ(report.violations.front().check, "step_ratio");
  EXPECT_EQ(report.violations.front().witness.front(), trace.iterates[1]);
}

TEST(VerifyDecay, UnmonitoredTraceIsUsageError) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::linear_scale(0.5), space);
  EXPECT_THROW(verify_decay(picard_run(space, f, pt(1), -1, rule(1e-6))), UsageError);
}

TEST(VerifyCauchy, PaperTrace) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::paper_example(), space);
  const auto trace = picard_run(space, f, pt(7), 2.0 / 7.0, rule(1e-15));
  // 7 (2/7)^n drops below eq_tol before the step reaches 1e-15: n = 24.
  ASSERT_EQ(trace.iterates.size(), 25u);
  const auto report = verify_cauchy(trace, space);
  EXPECT_TRUE(report.envelope.passed());
  const std::size_t n = trace.iterates.size();
  EXPECT_EQ(report.pairs, n * (n - 1) / 2);
  EXPECT_EQ(report.finite_form_rate, 1.0);
  EXPECT_GE(report.naive_form_rate, 0.0);
  EXPECT_LE(report.naive_form_rate, 1.0);
}

TEST(VerifyCauchy, NaiveFormIsNotAnUpperBound) {
  // With delta = 1/2 and t = 2: rep(x_0, x_2) = d_0 (1 + 1/2) here, while the naive
  // form gives (1/4)/(1/2) d_0 + (1/2) d_0 = d_0.
  const auto space = make_absdiff_space(Arity(2));
  const auto f = make_map(MapSpec::linear_scale(0.5), space);
  const auto trace = picard_run(space, f, pt(8), 0.5, rule(1e-9));
  const auto report = verify_cauchy(trace, space);
  EXPECT_TRUE(report.envelope.passed());
  EXPECT_LT(report.naive_form_rate, 1.0);
}

TEST(VerifyCauchy, SinglePointSpace) {
  const auto space = lift_table(Arity(3), {{0.0}});
  const auto f = make_map(MapSpec::identity(), space);
  const auto trace = picard_run(space, f, pt(0), 0.0, rule(1e-12));
  const auto report = verify_cauchy(trace, space);
  EXPECT_TRUE(report.envelope.passed());
  EXPECT_EQ(report.pairs, 0u);
}

TEST(UniquenessProbe, PaperExampleStarts) {
  const auto space = make_absdiff_space(Arity(3));
  const auto f = make_map(MapSpec::paper_example(), space);
  const auto probe = uniqueness_probe(space, f, {pt(-5), pt(0.1), pt(7)}, 2.0 / 7.0, rule(1e-12));
  EXPECT_TRUE(probe.check.passed());
  ASSERT_TRUE(probe.consensus);
  EXPECT_LE(std::abs((*probe.consensus)[0]), 1e-11);
}

TEST(UniquenessProbe, ConstantMap) {
  const auto space = make_absdiff_space(Arity(4));
  const auto f = make_map(MapSpec::constant(1.5), space);
  const auto probe = uniqueness_probe(space, f, {pt(-5), pt(0.1), pt(7)}, 0.0, rule(1e-12));
  EXPECT_TRUE(probe.check.passed());
  EXPECT_EQ(*probe.consensus, pt(1.5));
  for (const auto& run : probe.runs) EXPECT_LE(run.steps.size(), 1u);
}

TEST(UniquenessProbe, NonConvergingStartIsReported) {
  const auto space = make_absdiff_space(Arity(2));
  const auto f = make_map(MapSpec::shift(), space);
  const auto probe = uniqueness_probe(space, f, {pt(0), pt(1)}, -1.0, rule(1e-9, 20));
  EXPECT_FALSE(probe.check.passed());
  EXPECT_EQ(probe.check.violations.front().check, "converged");
}

TEST(UniquenessProbe, NeedsTwoStarts) {
  const auto space = make_absdiff_space(Arity(2));
  const auto f = make_map(MapSpec::paper_example(), space);
  EXPECT_THROW(uniqueness_probe(space, f, {pt(0)}, 0.5), UsageError);
}

TEST(BruteForce, SmallFiniteMaps) {
  const auto space = make_lifted_space(Arity(3), MetricTable{{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  EXPECT_EQ(brute_force_fixed_points(space, make_map(MapSpec::constant(1), space)),
            std::vector<Point>{pt(1)});
  EXPECT_EQ(brute_force_fixed_points(space, make_map(MapSpec::identity(), space)).size(), 3u);
  EXPECT_THROW(brute_force_fixed_points(make_absdiff_space(Arity(2)),
                                        make_map(MapSpec::identity(), make_absdiff_space(Arity(2)))),
               UsageError);
}

TEST(BruteForce, CertifiedFiniteMapHasOneFixedPointReachedByPicard) {
  // Points 0, 1, 2, 4 on a line; f sends 0, 1, 2 to 0 and 4 to 1.
  const std::vector<double> xs{0, 1, 2, 4};
  MetricTable table(4, std::vector<double>(4));
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) table[i][j] = std::abs(xs[i] - xs[j]);
  const auto space = make_lifted_space(Arity(3), table);
  const auto f = make_map(MapSpec::finite_table({0, 0, 0, 1}), space);
  const auto cert = classify(space, f, sample_pairs(space, 0, 0));
  ASSERT_TRUE(cert.valid);
  EXPECT_TRUE(cert.exhaustive);
  const auto fixed = brute_force_fixed_points(space, f);
  ASSERT_EQ(fixed.size(), 1u);
  for (std::size_t s = 0; s < 4; ++s) {
    const auto trace = picard_run(space, f, pt(double(s)), cert.delta, rule(1e-12));
    ASSERT_EQ(trace.status, PicardStatus::kConverged);
    EXPECT_EQ(*trace.limit, fixed.front());
    EXPECT_TRUE(verify_decay(trace).passed());
  }
}

TEST(TraceCsv, FixedColumnsAndPrecision) {
  const auto space = make_absdiff_space(Arity(2));
  const auto f = make_map(MapSpec::linear_scale(0.5), space);
  const auto trace = picard_run(space, f, pt(1), 0.5, rule(0.2));
  const auto csv = trace_to_csv(trace);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "n,step,bound,ratio,tail_bound");
  std::getline(in, line);
  EXPECT_EQ(line, "0,0.5,0.5,,0.5");
  std::getline(in, line);
  EXPECT_EQ(line, "1,0.25,0.25,0.5,0.25");
  const auto third = picard_run(space, make_map(MapSpec::paper_example(), space), pt(1), 2.0 / 7.0, rule(0.3));
  EXPECT_NE(trace_to_csv(third).find("0,0.714285714285714"), std::string::npos) << trace_to_csv(third);
}

TEST(TraceCsv, UnmonitoredLeavesBoundsBlank) {
  const auto space = make_absdiff_space(Arity(2));
  const auto f = make_map(MapSpec::shift(), space);
  const auto csv = trace_to_csv(picard_run(space, f, pt(0), -1.0, rule(1e-9, 2)));
  EXPECT_EQ(csv, "n,step,bound,ratio,tail_bound\n0,1,,,\n1,1,,1,\n");
}
