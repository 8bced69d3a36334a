#ifndef NCRW_BESSEL_HPP
#define NCRW_BESSEL_HPP

#include <complex>
#include <vector>

#include "ncrw/types.hpp"

namespace ncrw {

/// Default cutoff for lattice sums: orders n with exp(-t) I_n(t) below this
/// value are dropped.
inline constexpr double kDefaultTailEps = 1e-16;

/// exp(-t) I_n(t) for integer order n >= 0 and t >= 0.
///
/// The result lies in [0, 1] and is computed without forming I_n(t) itself,
/// so it stays finite for t and n well beyond 1e4. Small arguments use the
/// power series; everything else uses Miller's backward recurrence normalized
/// by exp(-t) (I_0 + 2 sum_k I_k) = 1.
double scaled_bessel_i(int n, double t);

/// exp(-t) I_k(t) for k = 0..max_order, from one backward recurrence.
std::vector<double> scaled_bessel_i_table(double t, int max_order);

/// I_n(z) for any real z, using I_n(-z) = (-1)^n I_n(z).
double signed_bessel_i(int n, double z);

/// Largest n with exp(-t) I_n(t) >= eps; 0 at t = 0.
int bessel_tail_radius(double t, double eps = kDefaultTailEps);

/// p(t, y|x) = exp(-t) I_{|y-x|}(t), the transition probability of the
/// continuous-time simple symmetric random walk.
double transition_probability(double t, Site x, Site y);

struct TrapezoidOptions {
  int min_nodes = 16;
  double tol = 1e-13;
  int max_nodes = 1 << 22;
};

/// p(t, y|x) as (1/2pi) int_{-pi}^{pi} e^{ik(y-x)} e^{-(1-cos k)t} dk, by the
/// periodic trapezoidal rule with node doubling. Independent of the Bessel
/// recurrence.
double transition_probability_quadrature(double t, Site x, Site y,
                                         const TrapezoidOptions& options = {});

/// E[e^{izV(t)}] = exp(t(cos z - 1)).
std::complex<double> characteristic_function(double t, std::complex<double> z);

}  // namespace ncrw

#endif  // NCRW_BESSEL_HPP
