#include "ncrw/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>

#include "ncrw/martingale.hpp"
#include "quadrature.hpp"
#include "summation.hpp"

namespace ncrw {
namespace {

// Above this value of t (1 - cos(pi/a)) the direct lattice sum cancels away
// more than ~exp(6) of its relative accuracy.
constexpr double kDirectRouteLimit = 6.0;

void check_point(SpaceTimePoint p, const char* op) {
  if (!std::isfinite(p.t) || p.t < 0.0) {
    throw std::invalid_argument(std::string(op) + ": times must be finite and >= 0");
  }
}

double gauge_factor(Gauge gauge, double s, double t) {
  return gauge == Gauge::Paper ? std::exp(s - t) : 1.0;
}

double backward_term(SpaceTimePoint p, SpaceTimePoint q) {
  return p.t > q.t ? transition_probability(p.t - q.t, p.x, q.x) : 0.0;
}

}  // namespace

StationarySpec::StationarySpec(double rho) : rho_(rho) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("StationarySpec: density must lie in (0, 1)");
  }
}

double kernel_finite(const Configuration& xi, SpaceTimePoint p, SpaceTimePoint q, Gauge gauge,
                     const KernelOptions& options) {
  check_point(p, "kernel_finite");
  check_point(q, "kernel_finite");
  const auto martingales = discrete_martingales(xi, q.t, q.x, options.tail_eps);
  detail::CompensatedSum sum;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    const double weight = transition_probability(p.t, p.x, xi[j]);
    if (weight != 0.0) sum += weight * martingales[j];
  }
  sum += -backward_term(p, q);
  return gauge_factor(gauge, p.t, q.t) * sum.value();
}

double kernel_lattice_direct(const LatticeSpec& a, SpaceTimePoint p, SpaceTimePoint q,
                             Gauge gauge, const KernelOptions& options) {
  check_point(p, "kernel_lattice");
  check_point(q, "kernel_lattice");
  const Site radius = bessel_tail_radius(p.t, options.tail_eps);
  const Site spacing = a.spacing();
  auto floor_div = [](Site n, Site d) { return n >= 0 ? n / d : -((-n + d - 1) / d); };
  const Site j_lo = -floor_div(-(p.x - radius), spacing);  // ceil
  const Site j_hi = floor_div(p.x + radius, spacing);
  detail::CompensatedSum sum;
  for (Site j = j_lo; j <= j_hi; ++j) {
    const double weight = transition_probability(p.t, p.x, spacing * j);
    if (weight == 0.0) continue;
    sum += weight * lattice_martingale(a, j, q.t, q.x, options.quad_tol);
  }
  sum += -backward_term(p, q);
  return gauge_factor(gauge, p.t, q.t) * sum.value();
}

double lattice_comb_term(const LatticeSpec& a, int shift, double s, Site x, double t, Site y,
                         double rel_tol, const CombNodeObserver& observer) {
  if (shift < 0) throw std::invalid_argument("lattice_comb_term: shift must be >= 0");
  const double pi = std::numbers::pi;
  const double spacing = a.spacing();
  const double lo = shift == 0 ? 0.0 : std::max(-pi, (2.0 * shift - spacing) * pi);
  if (lo >= pi) return 0.0;
  const double xd = static_cast<double>(x);
  const double yd = static_cast<double>(y);
  auto integrand = [&](double lambda) {
    const double theta = 2.0 * pi * shift - lambda;
    if (observer) observer(lambda, theta);
    const double phase = (theta * xd + lambda * yd) / spacing;
    const double exponent = t * (1.0 - std::cos(lambda / spacing)) -
                            s * (1.0 - std::cos(theta / spacing));
    return std::cos(phase) * std::exp(exponent);
  };
  const auto result = detail::integrate(integrand, lo, pi, rel_tol, "lattice_comb_term");
  return result.value / (pi * spacing);
}

double kernel_lattice_spectral(const LatticeSpec& a, SpaceTimePoint p, SpaceTimePoint q,
                               Gauge gauge, const KernelOptions& options) {
  check_point(p, "kernel_lattice");
  check_point(q, "kernel_lattice");
  detail::CompensatedSum sum;
  // Shifts with 2m - a >= 1 have an empty lambda range.
  const int max_shift = (a.spacing() + 1) / 2;
  for (int m = 0; m <= max_shift; ++m) {
    sum += lattice_comb_term(a, m, p.t, p.x, q.t, q.x, options.quad_tol);
  }
  sum += -backward_term(p, q);
  return gauge_factor(gauge, p.t, q.t) * sum.value();
}

double kernel_lattice(const LatticeSpec& a, SpaceTimePoint p, SpaceTimePoint q, Gauge gauge,
                      const KernelOptions& options) {
  const double amplification = q.t * (1.0 - std::cos(std::numbers::pi / a.spacing()));
  if (amplification <= kDirectRouteLimit) {
    return kernel_lattice_direct(a, p, q, gauge, options);
  }
  return kernel_lattice_spectral(a, p, q, gauge, options);
}

double sine_kernel(double rho, Site n) {
  if (n == 0) return rho;
  const double pn = std::numbers::pi * static_cast<double>(n);
  return std::sin(rho * pn) / pn;
}

double kernel_stationary(double rho, double dt, Site dx, Gauge gauge, double rel_tol) {
  if (!(rho > 0.0 && rho < 1.0)) {
    throw std::invalid_argument("kernel_stationary: density must lie in (0, 1)");
  }
  if (!std::isfinite(dt)) throw std::invalid_argument("kernel_stationary: non-finite time lag");
  if (dt == 0.0) return sine_kernel(rho, dx);

  const double pi = std::numbers::pi;
  const double n = static_cast<double>(dx);
  // Integrate the bounded Gauge::Paper form; Gauge::Probability is e^{dt} times it.
  auto integrand = [&](double u) {
    return std::cos(u * pi * n) * std::exp(-dt * std::cos(u * pi));
  };
  const double paper = dt > 0.0
                           ? detail::integrate(integrand, 0.0, rho, rel_tol, "kernel_stationary").value
                           : -detail::integrate(integrand, rho, 1.0, rel_tol, "kernel_stationary").value;
  if (gauge == Gauge::Paper) return paper;
  const double scale = std::exp(dt);
  if (!std::isfinite(scale)) {
    throw ConvergenceError("kernel_stationary", "overflow", "e^dt exceeds double range");
  }
  return scale * paper;
}

KernelFunction make_kernel(const KernelSpec& spec, const KernelOptions& options) {
  const Gauge gauge = spec.gauge;
  return std::visit(
      [gauge, options](const auto& v) -> KernelFunction {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Configuration>) {
          return [xi = v, gauge, options](SpaceTimePoint p, SpaceTimePoint q) {
            return kernel_finite(xi, p, q, gauge, options);
          };
        } else if constexpr (std::is_same_v<V, LatticeSpec>) {
          return [a = v, gauge, options](SpaceTimePoint p, SpaceTimePoint q) {
            return kernel_lattice(a, p, q, gauge, options);
          };
        } else {
          return [rho = v.density(), gauge, options](SpaceTimePoint p, SpaceTimePoint q) {
            return kernel_stationary(rho, q.t - p.t, q.x - p.x, gauge, options.quad_tol);
          };
        }
      },
      spec.variant);
}

KernelFunction gauge_transform(KernelFunction kernel,
                               std::function<double(SpaceTimePoint)> weight) {
  return [kernel = std::move(kernel), weight = std::move(weight)](SpaceTimePoint p,
                                                                  SpaceTimePoint q) {
    const double fp = weight(p);
    const double fq = weight(q);
    if (!(fp > 0.0) || !(fq > 0.0)) {
      throw std::invalid_argument("gauge_transform: weight must be strictly positive");
    }
    return fq / fp * kernel(p, q);
  };
}

}  // namespace ncrw
