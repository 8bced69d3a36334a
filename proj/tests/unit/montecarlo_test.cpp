#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "ncrw/correlations.hpp"
#include "ncrw/montecarlo.hpp"
#include "ncrw/validation/oracles.hpp"

namespace ncrw {
namespace {

const Configuration kPair({0, 2});

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

TEST(WalkPath, Validation) {
  EXPECT_THROW(WalkPath(0, -1.0, {}, {}), std::invalid_argument);
  EXPECT_THROW(WalkPath(0, 1.0, {0.5}, {}), std::invalid_argument);
  EXPECT_THROW(WalkPath(0, 1.0, {0.5, 0.4}, {1, 1}), std::invalid_argument);
  EXPECT_THROW(WalkPath(0, 1.0, {1.5}, {1}), std::invalid_argument);
  EXPECT_THROW(WalkPath(0, 1.0, {0.5}, {2}), std::invalid_argument);
}

TEST(WalkPath, RightContinuousPosition) {
  const WalkPath path(3, 2.0, {0.5, 1.0, 1.5}, {1, 1, -1});
  EXPECT_EQ(path.position(0.0), 3);
  EXPECT_EQ(path.position(0.49), 3);
  EXPECT_EQ(path.position(0.5), 4);
  EXPECT_EQ(path.position(1.2), 5);
  EXPECT_EQ(path.position(2.0), 4);
  EXPECT_EQ(path.end_position(), 4);
  EXPECT_THROW(path.position(2.1), std::out_of_range);
  EXPECT_THROW(path.position(-0.1), std::out_of_range);
}

TEST(SampleWalk, ZeroHorizon) {
  Rng rng = sample_rng(1, 0);
  const auto path = sample_walk(7, 0.0, rng);
  EXPECT_TRUE(path.jump_times().empty());
  EXPECT_EQ(path.end_position(), 7);
}

TEST(SampleWalk, PoissonJumpCount) {
  const double horizon = 3.0;
  const int n = 20000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    Rng rng = sample_rng(5, i);
    const double k = static_cast<double>(sample_walk(0, horizon, rng).jump_times().size());
    sum += k;
    sum2 += k * k;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_NEAR(mean, horizon, 3.0 * std::sqrt(horizon / n));
  EXPECT_NEAR(var, horizon, 0.15);
}

TEST(SampleWalk, EndpointLaw) {
  const double t = 1.5;
  const int n = 40000;
  std::vector<int> counts(21, 0);
  for (int i = 0; i < n; ++i) {
    Rng rng = sample_rng(9, i);
    const Site y = sample_walk(0, t, rng).end_position();
    if (y >= -10 && y <= 10) ++counts[static_cast<std::size_t>(y + 10)];
  }
  for (Site y = -3; y <= 3; ++y) {
    const double p = transition_probability(t, 0, y);
    const double hat = counts[static_cast<std::size_t>(y + 10)] / double(n);
    EXPECT_LE(std::fabs(hat - p), 3.0 * std::sqrt(p * (1 - p) / n)) << "y=" << y;
  }
}

TEST(Ensemble, OccupationCounts) {
  Rng rng = sample_rng(3, 0);
  const auto e = sample_ensemble(Configuration({-2, 0, 1, 5}), 2.0, rng);
  for (double t : {0.0, 0.7, 2.0}) {
    int total = 0;
    for (Site x = -40; x <= 40; ++x) {
      const int c = e.occupation(t, x);
      EXPECT_GE(c, 0);
      EXPECT_LE(c, 4);
      total += c;
    }
    EXPECT_EQ(total, 4);
  }
  EXPECT_EQ(e.initial(), Configuration({-2, 0, 1, 5}));
}

TEST(ExitTime, HandBuiltPaths) {
  // Walk 0 steps right at 0.3, meeting walk 1 at site 1.
  std::vector<WalkPath> meet{WalkPath(0, 1.0, {0.3}, {1}), WalkPath(1, 1.0, {}, {})};
  EXPECT_EQ(exit_time(WalkEnsemble(std::move(meet))), 0.3);
  std::vector<WalkPath> apart{WalkPath(0, 1.0, {0.3}, {-1}), WalkPath(2, 1.0, {0.6}, {1})};
  EXPECT_EQ(exit_time(WalkEnsemble(std::move(apart))), kNeverExited);
  // Simultaneous jumps: walk 0 moves first and lands on walk 1's old site.
  std::vector<WalkPath> tie{WalkPath(0, 1.0, {0.5}, {1}), WalkPath(1, 1.0, {0.5}, {1})};
  EXPECT_EQ(exit_time(WalkEnsemble(std::move(tie))), 0.5);
  std::vector<WalkPath> single{WalkPath(0, 1.0, {0.2, 0.4}, {1, 1})};
  EXPECT_EQ(exit_time(WalkEnsemble(std::move(single))), kNeverExited);
}

TEST(ExitTime, SurvivalMatchesJumpChain) {
  const double horizon = 1.0;
  const std::size_t n = 40000;
  std::size_t alive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rng rng = sample_rng(21, i);
    alive += exit_time(sample_ensemble(kPair, horizon, rng)) > horizon ? 1 : 0;
  }
  const double p = alive / double(n);
  const auto ref = validation::survival_jump_chain(kPair, horizon, n, 22);
  const double se = std::hypot(std::sqrt(p * (1 - p) / n), ref.std_error);
  EXPECT_LE(std::fabs(p - ref.p), 3.0 * se);
}

TEST(Estimators, ConstantFunctional) {
  SimulationOptions opts;
  opts.n_samples = 40000;
  opts.seed = 4;
  const auto h = h_transform_estimator(kPair, OccupationFunctional(), 1.0, opts);
  const auto d = dmr_estimator(kPair, OccupationFunctional(), 1.0, opts);
  EXPECT_LE(std::fabs(h.mean - 1.0), 3.0 * h.std_error);
  EXPECT_LE(std::fabs(d.mean - 1.0), 3.0 * d.std_error);
  EXPECT_GE(d.effective_samples, 1000.0);
  EXPECT_LE(d.effective_samples, double(opts.n_samples));
  const auto c = exit_cancellation_estimator(kPair, 1.0, opts);
  EXPECT_LE(std::fabs(c.mean), 3.0 * c.std_error);
}

TEST(Estimators, HorizonBeyondLastTime) {
  SimulationOptions opts;
  opts.n_samples = 40000;
  opts.seed = 12;
  const OccupationFunctional f(MultiTimePointSet::single_time(0.5, {0}));
  const double exact =
      correlation_function({kPair, Gauge::Probability}, MultiTimePointSet::single_time(0.5, {0}));
  for (double horizon : {0.5, 1.0, 1.5}) {
    const auto d = dmr_estimator(kPair, f, horizon, opts);
    EXPECT_LE(std::fabs(d.mean - exact), 3.0 * d.std_error) << horizon;
  }
  EXPECT_THROW(dmr_estimator(kPair, f, 0.4, opts), std::invalid_argument);
}

TEST(Estimators, IndependentOfThreadCount) {
  SimulationOptions opts;
  opts.n_samples = 5000;
  opts.seed = 99;
  const OccupationFunctional f(MultiTimePointSet::single_time(0.7, {0, 2}));
  opts.threads = 1;
  const auto a = dmr_estimator(kPair, f, 1.0, opts);
  const auto ha = h_transform_estimator(kPair, f, 1.0, opts);
  opts.threads = 3;
  const auto b = dmr_estimator(kPair, f, 1.0, opts);
  const auto hb = h_transform_estimator(kPair, f, 1.0, opts);
  EXPECT_TRUE(same_bits(a.mean, b.mean));
  EXPECT_TRUE(same_bits(a.std_error, b.std_error));
  EXPECT_TRUE(same_bits(a.effective_samples, b.effective_samples));
  EXPECT_TRUE(same_bits(ha.mean, hb.mean));
}

TEST(EmpiricalCorrelation, TimeZeroIsExact) {
  const std::vector<MultiTimePointSet> sets{MultiTimePointSet::single_time(0.0, {0, 2})};
  SimulationOptions opts;
  opts.n_samples = 100;
  for (auto est : {Estimator::HTransform, Estimator::Dmr}) {
    const auto table = empirical_correlation(kPair, sets, est, opts);
    ASSERT_EQ(table.size(), 1u);
    EXPECT_NEAR(table[0].value, 1.0, 1e-12);
  }
}

TEST(EmpiricalCorrelation, TwoTimeDeterminant) {
  const MultiTimePointSet pts(std::vector<TimeGroup>{{0.4, {0}}, {1.0, {2}}});
  const std::vector<MultiTimePointSet> sets{pts};
  SimulationOptions opts;
  opts.n_samples = 60000;
  opts.seed = 31;
  const auto k = make_kernel({kPair, Gauge::Probability});
  const SpaceTimePoint p{0.4, 0}, q{1.0, 2};
  const double det2 = k(p, p) * k(q, q) - k(p, q) * k(q, p);
  EXPECT_NEAR(correlation_function({kPair, Gauge::Probability}, pts), det2, 1e-14);
  for (auto est : {Estimator::HTransform, Estimator::Dmr}) {
    const auto row = empirical_correlation(kPair, sets, est, opts)[0];
    EXPECT_LE(std::fabs(row.value - det2), 3.0 * row.std_error.value());
  }
}

}  // namespace
}  // namespace ncrw
