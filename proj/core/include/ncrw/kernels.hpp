#ifndef NCRW_KERNELS_HPP
#define NCRW_KERNELS_HPP

#include <functional>
#include <variant>

#include "ncrw/bessel.hpp"
#include "ncrw/types.hpp"

namespace ncrw {

/// Density 0 < rho < 1 of the stationary sine-kernel process.
class StationarySpec {
 public:
  explicit StationarySpec(double rho);
  double density() const noexcept { return rho_; }

 private:
  double rho_;
};

/// Which process a kernel describes, plus its normalization convention.
struct KernelSpec {
  std::variant<Configuration, LatticeSpec, StationarySpec> variant;
  Gauge gauge = Gauge::Probability;
};

struct KernelOptions {
  double tail_eps = kDefaultTailEps;  ///< lattice-sum cutoff
  double quad_tol = 1e-13;            ///< quadrature tolerance relative to int |f|
};

using KernelFunction = std::function<double(SpaceTimePoint, SpaceTimePoint)>;

/// Correlation kernel of the noncolliding walk started from a finite
/// configuration:
///   sum_j p(s, x|u_j) M_xi^{u_j}(t, y) - 1(s > t) p(s - t, x|y)
/// in Gauge::Probability; Gauge::Paper multiplies by exp(s - t).
double kernel_finite(const Configuration& xi, SpaceTimePoint p, SpaceTimePoint q,
                     Gauge gauge = Gauge::Probability, const KernelOptions& options = {});

/// Correlation kernel for the equidistant start aZ. Uses the lattice sum
/// sum_j p(s, x|aj) hat M_j(t, y) while its cancellation is harmless and the
/// comb-collapsed single integrals otherwise (see kernel_lattice_spectral).
double kernel_lattice(const LatticeSpec& a, SpaceTimePoint p, SpaceTimePoint q,
                      Gauge gauge = Gauge::Probability, const KernelOptions& options = {});

/// Lattice sum over j, truncated where p(s, x|aj) falls below tail_eps.
/// Loses about exp(t (1 - cos(pi/a))) in relative accuracy to cancellation.
double kernel_lattice_direct(const LatticeSpec& a, SpaceTimePoint p, SpaceTimePoint q,
                             Gauge gauge = Gauge::Probability,
                             const KernelOptions& options = {});

/// The same kernel after summing over j analytically: the Dirac comb
/// sum_j e^{-i(theta + lambda) j} leaves one lambda-integral per 2pi shift m.
/// Shift 0 is the translation-invariant part, shifts m != 0 form the
/// remainder that decays as both times grow together.
double kernel_lattice_spectral(const LatticeSpec& a, SpaceTimePoint p, SpaceTimePoint q,
                               Gauge gauge = Gauge::Probability,
                               const KernelOptions& options = {});

/// Called with (lambda, theta) at every quadrature node of a comb term.
using CombNodeObserver = std::function<void(double, double)>;

/// Contribution of the 2pi shifts +-m (m >= 0) to the probability-gauge
/// lattice kernel without the indicator term:
///   (1/(pi a)) int cos((theta x + lambda y)/a)
///              exp(t (1 - cos(lambda/a)) - s (1 - cos(theta/a))) d lambda,
/// theta = 2 pi m - lambda, over lambda in [-pi, pi] with |theta| <= a pi
/// (lambda >= 0 only for m = 0, by symmetry). Zero when the range is empty.
double lattice_comb_term(const LatticeSpec& a, int shift, double s, Site x, double t, Site y,
                         double rel_tol = 1e-13, const CombNodeObserver& observer = {});

/// Stationary kernel K_rho(dt, dx) with dt = t - s, dx = y - x. In
/// Gauge::Paper this is
///   int_0^rho cos(u pi dx) e^{-dt cos(u pi)} du          (dt > 0)
///   sin(rho pi dx) / (pi dx)                              (dt = 0)
///   -int_rho^1 cos(u pi dx) e^{-dt cos(u pi)} du          (dt < 0)
/// and Gauge::Probability multiplies by e^{dt}.
double kernel_stationary(double rho, double dt, Site dx, Gauge gauge = Gauge::Probability,
                         double rel_tol = 1e-13);

/// Equal-time sine kernel sin(rho pi n) / (pi n), equal to rho at n = 0.
double sine_kernel(double rho, Site n);

/// Bind a spec into a callable kernel.
KernelFunction make_kernel(const KernelSpec& spec, const KernelOptions& options = {});

/// (p, q) -> f(q) / f(p) * K(p, q). The weight must be strictly positive
/// wherever it is evaluated.
KernelFunction gauge_transform(KernelFunction kernel,
                               std::function<double(SpaceTimePoint)> weight);

}  // namespace ncrw

#endif  // NCRW_KERNELS_HPP
