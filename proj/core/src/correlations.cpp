#include "ncrw/correlations.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "ncrw/linalg.hpp"

namespace ncrw {

MultiTimePointSet::MultiTimePointSet(std::vector<TimeGroup> groups) : groups_(std::move(groups)) {
  if (groups_.empty()) throw std::invalid_argument("MultiTimePointSet: no time groups");
  for (std::size_t m = 0; m < groups_.size(); ++m) {
    const auto& g = groups_[m];
    if (!std::isfinite(g.t) || g.t < 0.0) {
      throw std::invalid_argument("MultiTimePointSet: times must be finite and >= 0");
    }
    if (m > 0 && !(g.t > groups_[m - 1].t)) {
      throw std::invalid_argument("MultiTimePointSet: times must be strictly increasing");
    }
    if (g.sites.empty()) throw std::invalid_argument("MultiTimePointSet: empty time group");
    for (std::size_t i = 1; i < g.sites.size(); ++i) {
      if (g.sites[i] <= g.sites[i - 1]) {
        throw std::invalid_argument(
            "MultiTimePointSet: sites within a time group must be strictly increasing");
      }
    }
  }
}

MultiTimePointSet MultiTimePointSet::single_time(double t, std::vector<Site> sites) {
  return MultiTimePointSet({TimeGroup{t, std::move(sites)}});
}

std::vector<SpaceTimePoint> MultiTimePointSet::points() const {
  std::vector<SpaceTimePoint> out;
  out.reserve(size());
  for (const auto& g : groups_) {
    for (Site x : g.sites) out.push_back({g.t, x});
  }
  return out;
}

std::size_t MultiTimePointSet::size() const noexcept {
  std::size_t n = 0;
  for (const auto& g : groups_) n += g.sites.size();
  return n;
}

double correlation_determinant(const KernelFunction& kernel, std::span<const SpaceTimePoint> points) {
  const std::size_t n = points.size();
  std::vector<double> matrix(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) matrix[i * n + j] = kernel(points[i], points[j]);
  }
  return determinant(matrix, n);
}

double correlation_function(const KernelSpec& spec, const MultiTimePointSet& points,
                            const KernelOptions& options) {
  if (points.size() > kMaxCorrelationPoints) {
    throw std::invalid_argument("correlation_function: at most " +
                                std::to_string(kMaxCorrelationPoints) + " points");
  }
  const auto pts = points.points();
  return correlation_determinant(make_kernel(spec, options), pts);
}

std::vector<double> density_profile(const KernelSpec& spec, double t, Site lo, Site hi,
                                    const KernelOptions& options) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("density_profile: t must be finite and >= 0");
  }
  if (hi < lo) throw std::invalid_argument("density_profile: empty window");
  const auto kernel = make_kernel(spec, options);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (Site x = lo; x <= hi; ++x) out.push_back(kernel({t, x}, {t, x}));
  return out;
}

void TestFunctionSet::append(double t, Site x, double chi) {
  support_.push_back({t, x});
  chi_.push_back(chi);
}

TestFunctionSet::TestFunctionSet(std::vector<Slice> slices) {
  for (std::size_t m = 0; m < slices.size(); ++m) {
    if (m > 0 && !(slices[m].t > slices[m - 1].t)) {
      throw std::invalid_argument("TestFunctionSet: times must be strictly increasing");
    }
    for (const auto& [x, f] : slices[m].f) append(slices[m].t, x, std::expm1(f));
  }
}

TestFunctionSet TestFunctionSet::from_chi(std::vector<Slice> chi_slices) {
  TestFunctionSet out;
  for (std::size_t m = 0; m < chi_slices.size(); ++m) {
    if (m > 0 && !(chi_slices[m].t > chi_slices[m - 1].t)) {
      throw std::invalid_argument("TestFunctionSet: times must be strictly increasing");
    }
    for (const auto& [x, chi] : chi_slices[m].f) out.append(chi_slices[m].t, x, chi);
  }
  return out;
}

double fredholm_determinant(const KernelFunction& kernel, std::span<const SpaceTimePoint> points,
                            std::span<const double> chi) {
  if (points.size() != chi.size()) {
    throw std::invalid_argument("fredholm_determinant: points and chi differ in length");
  }
  const std::size_t n = points.size();
  std::vector<double> matrix(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      matrix[i * n + j] = (i == j ? 1.0 : 0.0) + kernel(points[i], points[j]) * chi[j];
    }
  }
  return determinant(matrix, n);
}

double fredholm_generating_function(const KernelSpec& spec, const TestFunctionSet& tests,
                                    const KernelOptions& options) {
  if (tests.support().size() > kMaxFredholmPoints) {
    throw std::invalid_argument("fredholm_generating_function: support exceeds " +
                                std::to_string(kMaxFredholmPoints) + " points");
  }
  return fredholm_determinant(make_kernel(spec, options), tests.support(), tests.chi());
}

}  // namespace ncrw
