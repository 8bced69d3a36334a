#ifndef NCRW_MARTINGALE_HPP
#define NCRW_MARTINGALE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ncrw/bessel.hpp"
#include "ncrw/types.hpp"

namespace ncrw {

/// G_alpha(t, x) = exp(alpha x - t (cosh alpha - 1)), the Esscher-tilted
/// exponential martingale of the walk.
double esscher_weight(double alpha, double t, double x);

/// Fundamental martingale polynomials m_n(t, x), defined by
/// G_alpha(t, x) = sum_n m_n(t, x) alpha^n / n!.
///
/// Coefficients are exact integers: c_n^{(j)}(t) = C(n, j) b_{n-j}(t) with
/// b_m(t) = sum_r (-t)^r E(m, r), where E(m, r) counts partitions of an
/// m-element set into r blocks of even size. The table is built once in the
/// constructor and is read-only afterwards.
class MartingalePolynomials {
 public:
  static constexpr int kMaxSupportedDegree = 20;

  explicit MartingalePolynomials(int max_degree = 12);

  /// Shared instance with the default maximal degree 12.
  static const MartingalePolynomials& standard();

  int max_degree() const noexcept { return max_degree_; }

  /// m_n(t, x).
  double operator()(int n, double t, double x) const;

  /// c_n^{(j)}(t), the coefficient of x^j in m_n(t, x).
  double coefficient(int n, int j, double t) const;

  /// Integer coefficients of c_n^{(j)} as a polynomial in t, lowest power first.
  std::span<const std::int64_t> coefficient_polynomial(int n, int j) const;

 private:
  int max_degree_;
  // coeffs_[n][j] holds the t-polynomial of c_n^{(j)}.
  std::vector<std::vector<std::vector<std::int64_t>>> coeffs_;
};

/// m_n(t, x) from the standard table (n <= 12).
double martingale_polynomial(int n, double t, double x);

/// S[f(W) | (t, x)] = e^t sum_w I_{|w-x|}(-t) f(w) for a polynomial f of the
/// given degree. The alternating weights are (-1)^d e^{2t} exp(-t) I_d(t);
/// the sum stops once |weight * f| drops below eps past the weight peak.
double s_transform(const std::function<double(Site)>& f, int degree, double t, Site x,
                   double eps = kDefaultTailEps);

/// S[e^{alpha (W - x)} | (t, x)], the exponential family, which equals
/// 1 / E[e^{alpha V(t)}] = exp(-t (cosh alpha - 1)).
double s_transform_exponential(double alpha, double t, Site x,
                               double eps = kDefaultTailEps);

/// Lagrange basis polynomial prod_{j != k} (z - u_j) / (u_k - u_j).
/// `k` is zero based.
double lagrange_basis(const Configuration& xi, std::size_t k, double z);

/// Power-basis coefficients (lowest degree first) of the Lagrange basis
/// polynomial for index k.
std::vector<double> lagrange_monomial_coefficients(const Configuration& xi, std::size_t k);

/// M_xi^{u_k}(t, y) = S[Phi_xi^{u_k}(W) | (t, y)] by direct truncated summation.
double discrete_martingale(const Configuration& xi, std::size_t k, double t, Site y,
                           double eps = kDefaultTailEps);

/// M_xi^{u_k}(t, y) for every k, sharing one pass over w.
std::vector<double> discrete_martingales(const Configuration& xi, double t, Site y,
                                         double eps = kDefaultTailEps);

/// M_xi^{u_k}(t, y) by expanding Phi in monomials and summing coefficient
/// times m_n(t, y). Requires N - 1 <= 12.
double discrete_martingale_polynomial(const Configuration& xi, std::size_t k, double t,
                                      Site y);

/// Vandermonde product prod_{j<k} (x_k - x_j).
double vandermonde(std::span<const double> x);

/// Normalized sinc sin(pi(z/a - k)) / (pi(z/a - k)), the infinite-lattice
/// analogue of the Lagrange basis.
double lattice_basis(const LatticeSpec& a, Site k, double z);

/// hat M_{aZ}^{ak}(t, y) = (1/2pi) int_{-pi}^{pi} e^{i lambda (y/a - k)}
/// exp(t (1 - cos(lambda/a))) d lambda.
double lattice_martingale(const LatticeSpec& a, Site k, double t, Site y,
                          double rel_tol = 1e-13);

}  // namespace ncrw

#endif  // NCRW_MARTINGALE_HPP
