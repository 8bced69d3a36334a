#ifndef NCRW_CORRELATIONS_HPP
#define NCRW_CORRELATIONS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "ncrw/kernels.hpp"
#include "ncrw/types.hpp"

namespace ncrw {

inline constexpr std::size_t kMaxCorrelationPoints = 12;
inline constexpr std::size_t kMaxFredholmPoints = 14;

/// Sites observed at one time, strictly increasing.
struct TimeGroup {
  double t = 0.0;
  std::vector<Site> sites;
};

/// Groups of sites at strictly increasing times t_1 < ... < t_M.
class MultiTimePointSet {
 public:
  explicit MultiTimePointSet(std::vector<TimeGroup> groups);

  static MultiTimePointSet single_time(double t, std::vector<Site> sites);

  const std::vector<TimeGroup>& groups() const noexcept { return groups_; }
  /// All points, group by group.
  std::vector<SpaceTimePoint> points() const;
  std::size_t size() const noexcept;
  double max_time() const noexcept { return groups_.back().t; }

 private:
  std::vector<TimeGroup> groups_;
};

struct CorrelationEntry {
  MultiTimePointSet points;
  double value = 0.0;
  std::optional<double> std_error;
};

using CorrelationTable = std::vector<CorrelationEntry>;

/// det[K(p_i, p_j)] over an arbitrary list of points.
double correlation_determinant(const KernelFunction& kernel, std::span<const SpaceTimePoint> points);

/// Spatio-temporal correlation function rho(t_1, x^(1); ...; t_M, x^(M)).
/// At most kMaxCorrelationPoints points in total.
double correlation_function(const KernelSpec& spec, const MultiTimePointSet& points,
                            const KernelOptions& options = {});

/// rho(t, x) = K(t, x; t, x) for x in [lo, hi].
std::vector<double> density_profile(const KernelSpec& spec, double t, Site lo, Site hi,
                                    const KernelOptions& options = {});

/// Finitely supported test functions f_{t_m}, one per time, with
/// chi_{t_m} = e^{f_{t_m}} - 1.
class TestFunctionSet {
 public:
  struct Slice {
    double t = 0.0;
    std::map<Site, double> f;
  };

  explicit TestFunctionSet(std::vector<Slice> slices);

  /// Build directly from chi values (chi > -1 is not required; chi = -1
  /// corresponds to f = -infinity, i.e. a void constraint).
  static TestFunctionSet from_chi(std::vector<Slice> chi_slices);

  /// Support points, time by time, and chi at each of them.
  const std::vector<SpaceTimePoint>& support() const noexcept { return support_; }
  const std::vector<double>& chi() const noexcept { return chi_; }

 private:
  TestFunctionSet() = default;
  void append(double t, Site x, double chi);

  std::vector<SpaceTimePoint> support_;
  std::vector<double> chi_;
};

/// Det[delta + K chi] over the finite support index set.
double fredholm_determinant(const KernelFunction& kernel, std::span<const SpaceTimePoint> points,
                            std::span<const double> chi);

/// Moment generating function E[exp(sum_m sum_x f_{t_m}(x) Xi(t_m, x))] as a
/// Fredholm determinant. The support may hold at most kMaxFredholmPoints points.
double fredholm_generating_function(const KernelSpec& spec, const TestFunctionSet& tests,
                                    const KernelOptions& options = {});

}  // namespace ncrw

#endif  // NCRW_CORRELATIONS_HPP
