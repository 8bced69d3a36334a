#include "ncrw/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "summation.hpp"

namespace ncrw {
namespace {

void check_order(int n, const char* op) {
  if (n < 0) throw std::invalid_argument(std::string(op) + ": order must be >= 0");
}

void check_time(double t, const char* op) {
  if (!std::isfinite(t)) throw std::invalid_argument(std::string(op) + ": non-finite argument");
  if (t < 0.0) throw std::invalid_argument(std::string(op) + ": argument must be >= 0");
}

// The series terms decrease monotonically from the first one when
// (t/2)^2 <= n + 1, so the sum is at most e times its leading term.
bool series_preferred(int n, double t) { return t * t <= 4.0 * (n + 1.0); }

double scaled_series(int n, double t) {
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const double log_lead = -t + n * std::log(0.5 * t) - std::lgamma(n + 1.0);
  if (log_lead < -745.0) return 0.0;
  const double q = 0.25 * t * t;
  double term = 1.0;
  double sum = 1.0;
  for (int l = 0; l < 10000; ++l) {
    term *= q / ((l + 1.0) * (n + l + 1.0));
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(log_lead) * sum;
}

// Start index for the backward recurrence. Errors in the starting values are
// damped by roughly exp(-(M^2 - n^2)/t); the normalization sum additionally
// needs exp(-M^2/(2t)) to be negligible.
int miller_start(int n, double t) {
  const double by_damping = std::sqrt(double(n) * n + 100.0 * t);
  int m = std::max(n + 20, static_cast<int>(std::ceil(by_damping))) + 20;
  return m + (m & 1);
}

std::vector<double> miller_table(double t, int max_order) {
  std::vector<double> out(static_cast<std::size_t>(max_order) + 1, 0.0);
  const int start = miller_start(max_order, t);
  constexpr double kBig = 1e250;
  constexpr double kShrink = 1e-250;

  double f_next = 0.0;  // f_{k+1}
  double f = 1.0;       // f_k
  double total = 0.0;   // f_0 + 2 sum_{k>=1} f_k, accumulated from the small end
  for (int k = start; k >= 1; --k) {
    total += 2.0 * f;
    if (k <= max_order) out[k] = f;
    const double f_prev = f_next + (2.0 * k / t) * f;
    f_next = f;
    f = f_prev;
    if (std::abs(f) > kBig) {
      f *= kShrink;
      f_next *= kShrink;
      total *= kShrink;
      for (int j = std::min(k, max_order); j <= max_order; ++j) out[j] *= kShrink;
    }
  }
  total += f;
  out[0] = f;
  for (auto& v : out) v /= total;
  return out;
}

}  // namespace

double scaled_bessel_i(int n, double t) {
  check_order(n, "scaled_bessel_i");
  check_time(t, "scaled_bessel_i");
  if (series_preferred(n, t)) return scaled_series(n, t);
  return miller_table(t, n)[static_cast<std::size_t>(n)];
}

std::vector<double> scaled_bessel_i_table(double t, int max_order) {
  check_order(max_order, "scaled_bessel_i_table");
  check_time(t, "scaled_bessel_i_table");
  if (series_preferred(0, t)) {
    std::vector<double> out(static_cast<std::size_t>(max_order) + 1);
    for (int k = 0; k <= max_order; ++k) {
      out[k] = scaled_series(k, t);
      if (out[k] == 0.0) break;  // everything beyond underflows as well
    }
    return out;
  }
  return miller_table(t, max_order);
}

double signed_bessel_i(int n, double z) {
  check_order(n, "signed_bessel_i");
  if (!std::isfinite(z)) throw std::invalid_argument("signed_bessel_i: non-finite argument");
  const double r = std::abs(z);
  const double magnitude = std::exp(r) * scaled_bessel_i(n, r);
  return (z < 0.0 && (n & 1)) ? -magnitude : magnitude;
}

int bessel_tail_radius(double t, double eps) {
  check_time(t, "bessel_tail_radius");
  if (!(eps > 0.0)) throw std::invalid_argument("bessel_tail_radius: eps must be > 0");
  if (t == 0.0) return 0;
  int k = static_cast<int>(std::ceil(t)) + 10;
  for (;;) {
    const auto table = scaled_bessel_i_table(t, k);
    if (table.back() < eps) {
      // exp(-t) I_n(t) is strictly decreasing in n for t > 0.
      const auto it = std::find_if(table.begin(), table.end(),
                                   [eps](double v) { return v < eps; });
      return std::max(0, static_cast<int>(it - table.begin()) - 1);
    }
    if (k > (1 << 26)) {
      throw ConvergenceError("bessel_tail_radius", "eps", "tail radius exceeds cap");
    }
    k *= 2;
  }
}

double transition_probability(double t, Site x, Site y) {
  check_time(t, "transition_probability");
  const Site d = y > x ? y - x : x - y;
  if (d > 1'000'000'000) return 0.0;
  return scaled_bessel_i(static_cast<int>(d), t);
}

double transition_probability_quadrature(double t, Site x, Site y,
                                         const TrapezoidOptions& options) {
  check_time(t, "transition_probability_quadrature");
  if (options.min_nodes < 4) {
    throw std::invalid_argument("transition_probability_quadrature: node count must be >= 4");
  }
  const double d = static_cast<double>(y - x);
  // With M nodes the rule returns sum_m p(t, d + mM); the first pass must
  // already push the aliased orders past the point where they matter.
  const double reach = std::abs(d) + std::ceil(t) + 10.0 * std::ceil(std::sqrt(t)) + 40.0;
  int nodes = options.min_nodes;
  while (nodes < 2.0 * reach) nodes *= 2;

  auto rule = [&](int m) {
    detail::CompensatedSum sum;
    const double h = 2.0 * std::numbers::pi / m;
    for (int j = 0; j < m; ++j) {
      const double k = -std::numbers::pi + j * h;
      sum += std::cos(k * d) * std::exp(-(1.0 - std::cos(k)) * t);
    }
    return sum.value() / m;
  };

  double previous = rule(nodes);
  while (nodes < options.max_nodes) {
    nodes *= 2;
    const double current = rule(nodes);
    if (std::abs(current - previous) < options.tol) return current;
    previous = current;
  }
  throw ConvergenceError("transition_probability_quadrature", "max_nodes",
                         "trapezoidal rule did not settle");
}

std::complex<double> characteristic_function(double t, std::complex<double> z) {
  if (!std::isfinite(t) || !std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw std::invalid_argument("characteristic_function: non-finite input");
  }
  if (t < 0.0) throw std::invalid_argument("characteristic_function: t must be >= 0");
  return std::exp(t * (std::cos(z) - 1.0));
}

}  // namespace ncrw
