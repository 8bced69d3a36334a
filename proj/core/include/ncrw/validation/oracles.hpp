#ifndef NCRW_VALIDATION_ORACLES_HPP
#define NCRW_VALIDATION_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <span>

#include "ncrw/kernels.hpp"
#include "ncrw/types.hpp"

// Reference computations that share no numerical path with ncrw_core. Slow,
// straightforward, and only meant for testing.
namespace ncrw::validation {

/// I_n(t) by its power series in long double. Accurate for t up to ~40.
long double bessel_i_series(int n, long double t);

/// exp(-t) I_n(t) from bessel_i_series.
double scaled_bessel_i_series(int n, double t);

/// P(V(t) = y | V(0) = x) as a Poisson mixture of discrete-time walk
/// probabilities, sum_k e^{-t} t^k / k! * C(k, (k + d)/2) / 2^k.
double poissonized_transition(double t, Site x, Site y);

/// int_0^1 cos(u pi d) exp(-(1 - cos(u pi)) t) du by a fixed composite
/// Gauss-Kronrod rule, for |d| <= ~60 and moderate t.
double cosine_integral(double t, Site d);

/// Kernel of a finite configuration written as the unscaled Bessel split form
///   sum_j I_{|x-u_j|}(s) I_{|y-u_j|}(-t)
///   + sum_j sum_{w not in xi} I_{|x-u_j|}(s) I_{|y-w|}(-t) Phi_j(w)
///   - 1(s > t) I_{|x-y|}(s - t),
/// summed in long double, in Gauge::Paper.
double kernel_split_form(const Configuration& xi, SpaceTimePoint p, SpaceTimePoint q);

/// Det[delta + K chi] by the explicit expansion over all subsets S of the
/// index set: sum_S det[K]_S prod_{i in S} chi_i.
double fredholm_subset_sum(const KernelFunction& kernel, std::span<const SpaceTimePoint> points,
                           std::span<const double> chi);

/// Determinant by Gaussian elimination in long double.
double reference_determinant(std::span<const double> row_major, std::size_t n);

struct ProportionEstimate {
  double p = 0.0;
  double std_error = 0.0;
};

/// P(no two walks meet up to T) by simulating the embedded jump chain of the
/// whole system: total rate N, each event moves one uniformly chosen walk.
ProportionEstimate survival_jump_chain(const Configuration& u, double horizon,
                                       std::size_t n_samples, std::uint64_t seed);

}  // namespace ncrw::validation

#endif  // NCRW_VALIDATION_ORACLES_HPP
