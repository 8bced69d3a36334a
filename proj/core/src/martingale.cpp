#include "ncrw/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "quadrature.hpp"
#include "summation.hpp"

namespace ncrw {
namespace {

constexpr int kHardRadiusCap = 1 << 16;

// exp(-t) I_d(t) for growing d, recomputed in larger blocks on demand.
class ScaledBesselCache {
 public:
  explicit ScaledBesselCache(double t, int initial)
      : t_(t), table_(scaled_bessel_i_table(t, std::max(initial, 8))) {}

  double operator()(int d) {
    if (d >= static_cast<int>(table_.size())) {
      table_ = scaled_bessel_i_table(t_, std::max(2 * static_cast<int>(table_.size()), d + 1));
    }
    return table_[static_cast<std::size_t>(d)];
  }

 private:
  double t_;
  std::vector<double> table_;
};

// Shared driver for S-transforms of a vector of functions sampled on the
// lattice. `f(w, values)` writes every component at site w. Terms are added
// symmetrically in |w - x| = d; past `d_min` the weights decay
// super-exponentially and the loop ends once weight * (1 + |f|) < eps.
std::vector<double> s_transform_components(
    std::size_t dim, const std::function<void(Site, std::span<double>)>& f, int d_min,
    double t, Site x, double eps, const char* op) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument(std::string(op) + ": t must be finite and >= 0");
  }
  if (!(eps > 0.0)) throw std::invalid_argument(std::string(op) + ": eps must be > 0");

  const double gauge = std::exp(2.0 * t);
  if (d_min > kHardRadiusCap || !std::isfinite(gauge)) {
    throw ConvergenceError(op, "t", "time too large for the alternating lattice sum");
  }
  ScaledBesselCache bessel(t, d_min + 8);
  std::vector<detail::CompensatedSum> sums(dim);
  std::vector<double> plus(dim);
  std::vector<double> minus(dim);

  f(x, plus);
  const double w0 = gauge * bessel(0);
  for (std::size_t i = 0; i < dim; ++i) sums[i] += w0 * plus[i];

  for (int d = 1;; ++d) {
    if (d > kHardRadiusCap) {
      throw ConvergenceError(op, "eps", "terms did not decay within the hard radius cap");
    }
    const double w = gauge * bessel(d);
    const double sign = (d & 1) ? -1.0 : 1.0;
    f(x + d, plus);
    f(x - d, minus);
    double magnitude = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      sums[i] += sign * w * (plus[i] + minus[i]);
      magnitude = std::max(magnitude, std::abs(plus[i]) + std::abs(minus[i]));
    }
    if (!std::isfinite(magnitude) || !std::isfinite(w)) {
      throw ConvergenceError(op, "eps", "non-finite term in lattice sum");
    }
    if (d >= d_min && w * (1.0 + magnitude) < eps) break;
  }

  std::vector<double> out(dim);
  for (std::size_t i = 0; i < dim; ++i) out[i] = sums[i].value();
  return out;
}

int polynomial_d_min(double t, int degree) {
  return 2 * (static_cast<int>(std::ceil(t)) + degree) + 2;
}

void check_index(const Configuration& xi, std::size_t k, const char* op) {
  if (k >= xi.size()) {
    throw std::out_of_range(std::string(op) + ": index " + std::to_string(k) +
                            " out of range for N = " + std::to_string(xi.size()));
  }
}

}  // namespace

double esscher_weight(double alpha, double t, double x) {
  if (!std::isfinite(alpha)) throw std::invalid_argument("esscher_weight: non-finite alpha");
  if (t < 0.0) throw std::invalid_argument("esscher_weight: t must be >= 0");
  return std::exp(alpha * x - t * (std::cosh(alpha) - 1.0));
}

MartingalePolynomials::MartingalePolynomials(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0 || max_degree > kMaxSupportedDegree) {
    throw std::invalid_argument("MartingalePolynomials: max degree must lie in [0, 20]");
  }
  const int n_max = max_degree;
  std::vector<std::vector<std::int64_t>> binom(n_max + 1, std::vector<std::int64_t>(n_max + 1, 0));
  for (int n = 0; n <= n_max; ++n) {
    binom[n][0] = 1;
    for (int k = 1; k <= n; ++k) binom[n][k] = binom[n - 1][k - 1] + binom[n - 1][k];
  }
  // even_blocks[m][r]: partitions of {1..m} into r blocks of even size.
  std::vector<std::vector<std::int64_t>> even_blocks(n_max + 1,
                                                     std::vector<std::int64_t>(n_max / 2 + 1, 0));
  even_blocks[0][0] = 1;
  for (int m = 2; m <= n_max; ++m) {
    for (int r = 1; r <= m / 2; ++r) {
      std::int64_t total = 0;
      // The block holding element m has size 2k.
      for (int k = 1; 2 * k <= m; ++k) {
        total += binom[m - 1][2 * k - 1] * even_blocks[m - 2 * k][r - 1];
      }
      even_blocks[m][r] = total;
    }
  }
  coeffs_.resize(n_max + 1);
  for (int n = 0; n <= n_max; ++n) {
    coeffs_[n].resize(n + 1);
    for (int j = 0; j <= n; ++j) {
      const int m = n - j;
      auto& poly = coeffs_[n][j];
      poly.assign(m / 2 + 1, 0);
      for (int r = 0; r <= m / 2; ++r) {
        const std::int64_t sign = (r & 1) ? -1 : 1;
        poly[r] = sign * binom[n][j] * even_blocks[m][r];
      }
    }
  }
}

const MartingalePolynomials& MartingalePolynomials::standard() {
  static const MartingalePolynomials table(12);
  return table;
}

std::span<const std::int64_t> MartingalePolynomials::coefficient_polynomial(int n, int j) const {
  if (n < 0 || n > max_degree_) {
    throw std::out_of_range("martingale_polynomial: degree " + std::to_string(n) +
                            " exceeds the table maximum " + std::to_string(max_degree_));
  }
  if (j < 0 || j > n) throw std::out_of_range("martingale_polynomial: power out of range");
  return coeffs_[n][j];
}

double MartingalePolynomials::coefficient(int n, int j, double t) const {
  const auto poly = coefficient_polynomial(n, j);
  double value = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) value = value * t + static_cast<double>(*it);
  return value;
}

double MartingalePolynomials::operator()(int n, double t, double x) const {
  if (n < 0 || n > max_degree_) {
    throw std::out_of_range("martingale_polynomial: degree " + std::to_string(n) +
                            " exceeds the table maximum " + std::to_string(max_degree_));
  }
  double value = 0.0;
  for (int j = n; j >= 0; --j) value = value * x + coefficient(n, j, t);
  return value;
}

double martingale_polynomial(int n, double t, double x) {
  return MartingalePolynomials::standard()(n, t, x);
}

double s_transform(const std::function<double(Site)>& f, int degree, double t, Site x,
                   double eps) {
  if (degree < 0) throw std::invalid_argument("s_transform: degree must be >= 0");
  auto eval = [&f](Site w, std::span<double> out) { out[0] = f(w); };
  return s_transform_components(1, eval, polynomial_d_min(t, degree), t, x, eps,
                                "s_transform")[0];
}

double s_transform_exponential(double alpha, double t, Site x, double eps) {
  if (!std::isfinite(alpha)) {
    throw std::invalid_argument("s_transform_exponential: non-finite alpha");
  }
  // Weight ratio ~ t / (2d) against growth e^{|alpha|} per step.
  const int d_min = static_cast<int>(std::ceil(2.0 * t * std::exp(std::abs(alpha)))) + 2;
  auto eval = [alpha, x](Site w, std::span<double> out) {
    out[0] = std::exp(alpha * static_cast<double>(w - x));
  };
  return s_transform_components(1, eval, d_min, t, x, eps, "s_transform_exponential")[0];
}

double lagrange_basis(const Configuration& xi, std::size_t k, double z) {
  check_index(xi, k, "lagrange_basis");
  const double uk = static_cast<double>(xi[k]);
  double value = 1.0;
  for (std::size_t j = 0; j < xi.size(); ++j) {
    if (j == k) continue;
    const double uj = static_cast<double>(xi[j]);
    value *= (z - uj) / (uk - uj);
  }
  return value;
}

std::vector<double> lagrange_monomial_coefficients(const Configuration& xi, std::size_t k) {
  check_index(xi, k, "lagrange_monomial_coefficients");
  std::vector<double> poly{1.0};
  double denominator = 1.0;
  const double uk = static_cast<double>(xi[k]);
  for (std::size_t j = 0; j < xi.size(); ++j) {
    if (j == k) continue;
    const double uj = static_cast<double>(xi[j]);
    denominator *= uk - uj;
    // poly *= (z - uj)
    poly.push_back(0.0);
    for (std::size_t i = poly.size() - 1; i > 0; --i) poly[i] = poly[i - 1] - uj * poly[i];
    poly[0] *= -uj;
  }
  for (auto& c : poly) c /= denominator;
  return poly;
}

double discrete_martingale(const Configuration& xi, std::size_t k, double t, Site y,
                           double eps) {
  check_index(xi, k, "discrete_martingale");
  const int degree = static_cast<int>(xi.size()) - 1;
  auto eval = [&xi, k](Site w, std::span<double> out) {
    out[0] = lagrange_basis(xi, k, static_cast<double>(w));
  };
  return s_transform_components(1, eval, polynomial_d_min(t, degree), t, y, eps,
                                "discrete_martingale")[0];
}

std::vector<double> discrete_martingales(const Configuration& xi, double t, Site y, double eps) {
  const std::size_t n = xi.size();
  const int degree = static_cast<int>(n) - 1;
  auto eval = [&xi, n](Site w, std::span<double> out) {
    for (std::size_t k = 0; k < n; ++k) out[k] = lagrange_basis(xi, k, static_cast<double>(w));
  };
  return s_transform_components(n, eval, polynomial_d_min(t, degree), t, y, eps,
                                "discrete_martingales");
}

double discrete_martingale_polynomial(const Configuration& xi, std::size_t k, double t, Site y) {
  const auto& table = MartingalePolynomials::standard();
  if (static_cast<int>(xi.size()) - 1 > table.max_degree()) {
    throw std::out_of_range("discrete_martingale_polynomial: N - 1 exceeds the polynomial table");
  }
  const auto coeffs = lagrange_monomial_coefficients(xi, k);
  detail::CompensatedSum sum;
  for (std::size_t n = 0; n < coeffs.size(); ++n) {
    sum += coeffs[n] * table(static_cast<int>(n), t, static_cast<double>(y));
  }
  return sum.value();
}

double vandermonde(std::span<const double> x) {
  double value = 1.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) value *= x[k] - x[j];
  }
  return value;
}

double lattice_basis(const LatticeSpec& a, Site k, double z) {
  const double arg = std::numbers::pi * ((z - static_cast<double>(a.spacing() * k)) / a.spacing());
  if (std::abs(arg) < 1e-4) {
    const double a2 = arg * arg;
    return 1.0 - a2 / 6.0 * (1.0 - a2 / 20.0 * (1.0 - a2 / 42.0));
  }
  return std::sin(arg) / arg;
}

double lattice_martingale(const LatticeSpec& a, Site k, double t, Site y, double rel_tol) {
  if (!std::isfinite(t) || t < 0.0) {
    throw std::invalid_argument("lattice_martingale: t must be finite and >= 0");
  }
  const double spacing = a.spacing();
  const double c = static_cast<double>(y - a.spacing() * k) / spacing;
  auto envelope = [t, spacing](double lambda) {
    return std::exp(t * (1.0 - std::cos(lambda / spacing)));
  };
  const auto re = detail::integrate(
      [&](double lambda) { return std::cos(lambda * c) * envelope(lambda); },
      -std::numbers::pi, std::numbers::pi, rel_tol, "lattice_martingale");
  const auto im = detail::integrate(
      [&](double lambda) { return std::sin(lambda * c) * envelope(lambda); },
      -std::numbers::pi, std::numbers::pi, rel_tol, "lattice_martingale");
  if (std::abs(im.value) > 1e-12 * std::max(1.0, re.l1)) {
    throw ConvergenceError("lattice_martingale", "quadrature",
                           "imaginary part failed to cancel");
  }
  return re.value / (2.0 * std::numbers::pi);
}

}  // namespace ncrw
