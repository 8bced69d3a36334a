#ifndef NCRW_SRC_QUADRATURE_HPP
#define NCRW_SRC_QUADRATURE_HPP

#include <functional>
#include <string_view>

namespace ncrw::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
  double l1 = 0.0;     // estimate of int |f|
  int panels = 0;
};

// Globally adaptive Gauss-Kronrod (61 point) integration. Panels are bisected
// until the summed error estimate is below rel_tol * int |f|; measuring the
// tolerance against the L1 norm keeps near-zero oscillatory integrals cheap.
// Throws ConvergenceError naming `operation` if the panel budget runs out.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, std::string_view operation,
                           int max_panels = 4096);

}  // namespace ncrw::detail

#endif  // NCRW_SRC_QUADRATURE_HPP
