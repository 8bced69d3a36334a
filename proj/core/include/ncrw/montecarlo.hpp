#ifndef NCRW_MONTECARLO_HPP
#define NCRW_MONTECARLO_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "ncrw/bessel.hpp"
#include "ncrw/correlations.hpp"
#include "ncrw/types.hpp"

namespace ncrw {

using Rng = std::mt19937_64;

/// Independent generator for sample `index` of a run seeded with `seed`.
/// Streams depend only on (seed, index), never on scheduling.
Rng sample_rng(std::uint64_t seed, std::uint64_t index);

/// Uniform on [0, 1) with 53 random bits.
double uniform01(Rng& rng);

/// Path of one continuous-time walk on [0, horizon]: unit-rate Poisson jump
/// times, each with a +-1 step.
class WalkPath {
 public:
  WalkPath(Site start, double horizon, std::vector<double> jump_times, std::vector<int> steps);

  Site start() const noexcept { return start_; }
  double horizon() const noexcept { return horizon_; }
  std::span<const double> jump_times() const noexcept { return jump_times_; }
  std::span<const int> steps() const noexcept { return steps_; }

  /// Right-continuous position at time t in [0, horizon].
  Site position(double t) const;
  Site end_position() const noexcept;

 private:
  Site start_;
  double horizon_;
  std::vector<double> jump_times_;
  std::vector<int> steps_;
  std::vector<Site> after_;  // position right after each jump
};

WalkPath sample_walk(Site start, double horizon, Rng& rng);

/// N walks started from a strictly increasing configuration, sharing one
/// horizon.
class WalkEnsemble {
 public:
  WalkEnsemble(std::vector<WalkPath> paths, std::uint64_t seed = 0);

  std::span<const WalkPath> paths() const noexcept { return paths_; }
  std::size_t size() const noexcept { return paths_.size(); }
  double horizon() const noexcept { return paths_.front().horizon(); }
  std::uint64_t seed() const noexcept { return seed_; }
  Configuration initial() const;

  /// Number of walks at site x at time t.
  int occupation(double t, Site x) const;

 private:
  std::vector<WalkPath> paths_;
  std::uint64_t seed_;
};

WalkEnsemble sample_ensemble(const Configuration& u, double horizon, Rng& rng,
                             std::uint64_t seed = 0);

/// Returned by exit_time when the ensemble stays ordered up to its horizon.
inline constexpr double kNeverExited = std::numeric_limits<double>::infinity();

/// First jump time at which two neighbours meet, or kNeverExited.
/// Coincident jump times are applied in walk-index order.
double exit_time(const WalkEnsemble& ensemble);

/// Product of occupation numbers prod_i Xi(t_i)(x_i) over distinct
/// space-time points; the empty product is the constant 1.
class OccupationFunctional {
 public:
  OccupationFunctional() = default;
  explicit OccupationFunctional(std::vector<SpaceTimePoint> points);
  explicit OccupationFunctional(const MultiTimePointSet& points);

  std::span<const SpaceTimePoint> points() const noexcept { return points_; }
  double max_time() const noexcept;
  double operator()(const WalkEnsemble& ensemble) const;

 private:
  std::vector<SpaceTimePoint> points_;
};

struct EstimatorResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t n_samples = 0;
  /// Kish effective sample size (sum w)^2 / sum w^2 of the sample weights.
  double effective_samples = 0.0;
};

struct SimulationOptions {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  double tail_eps = kDefaultTailEps;
};

/// One draw: the weighted functional value and the weight alone.
struct WeightedSample {
  double value = 0.0;
  double weight = 0.0;
};

/// Runs `draw(index)` for index = 0..n_samples-1 on `threads` workers and
/// reduces in a fixed order, so the result is independent of the thread count.
EstimatorResult estimate(const SimulationOptions& options,
                         const std::function<WeightedSample(std::uint64_t)>& draw);

/// E_xi[F] = E_u[F 1(tau_u > T) h(V(T)) / h(u)], h the Vandermonde product.
EstimatorResult h_transform_estimator(const Configuration& xi, const OccupationFunctional& f,
                                      double horizon, const SimulationOptions& options = {});

/// E_xi[F] = E_u[F det[M_xi^{u_k}(T, V_j(T))]] over unconditioned walks.
EstimatorResult dmr_estimator(const Configuration& xi, const OccupationFunctional& f,
                              double horizon, const SimulationOptions& options = {});

/// Mean of 1(tau_u <= T) h(V(T)) / h(u); zero in expectation by antisymmetry.
EstimatorResult exit_cancellation_estimator(const Configuration& xi, double horizon,
                                            const SimulationOptions& options = {});

enum class Estimator { HTransform, Dmr };

/// Monte Carlo estimates of rho_xi at each point set. The horizon defaults to
/// the largest time among all point sets.
CorrelationTable empirical_correlation(const Configuration& xi,
                                       std::span<const MultiTimePointSet> point_sets,
                                       Estimator estimator, const SimulationOptions& options = {},
                                       double horizon = -1.0);

}  // namespace ncrw

#endif  // NCRW_MONTECARLO_HPP
