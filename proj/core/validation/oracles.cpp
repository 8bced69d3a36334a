#include "ncrw/validation/oracles.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace ncrw::validation {
namespace {

long double signed_series(int n, long double z) {
  const long double v = bessel_i_series(n, std::fabs(z));
  return (z < 0 && (n % 2 != 0)) ? -v : v;
}

long double gauss_det(std::vector<long double> a, std::size_t n) {
  long double det = 1.0L;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (std::fabs(a[r * n + c]) > std::fabs(a[piv * n + c])) piv = r;
    }
    if (a[piv * n + c] == 0.0L) return 0.0L;
    if (piv != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[c * n + k], a[piv * n + k]);
      det = -det;
    }
    det *= a[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double f = a[r * n + c] / a[c * n + c];
      for (std::size_t k = c; k < n; ++k) a[r * n + k] -= f * a[c * n + k];
    }
  }
  return det;
}

}  // namespace

long double bessel_i_series(int n, long double t) {
  if (n < 0) n = -n;
  if (t < 0) throw std::invalid_argument("bessel_i_series: t must be >= 0");
  if (t == 0) return n == 0 ? 1.0L : 0.0L;
  const long double half = t / 2;
  long double term = 1.0L;
  for (int k = 1; k <= n; ++k) term *= half / k;
  long double sum = term;
  for (int k = 1; k < 100000; ++k) {
    term *= half * half / (static_cast<long double>(k) * (k + n));
    sum += term;
    if (term < sum * 1e-22L) break;
  }
  return sum;
}

double scaled_bessel_i_series(int n, double t) {
  return static_cast<double>(std::exp(-static_cast<long double>(t)) * bessel_i_series(n, t));
}

double poissonized_transition(double t, Site x, Site y) {
  if (t < 0.0) throw std::invalid_argument("poissonized_transition: t must be >= 0");
  const Site d = y > x ? y - x : x - y;
  if (t == 0.0) return d == 0 ? 1.0 : 0.0;
  const long double lt = std::log(static_cast<long double>(t));
  long double sum = 0.0L;
  for (Site k = d;; k += 2) {
    const long double kk = static_cast<long double>(k);
    const long double up = static_cast<long double>((k + d) / 2);
    const long double log_poisson = -t + kk * lt - std::lgamma(kk + 1);
    const long double log_walk =
        std::lgamma(kk + 1) - std::lgamma(up + 1) - std::lgamma(kk - up + 1) - kk * std::log(2.0L);
    const long double term = std::exp(log_poisson + log_walk);
    sum += term;
    if (kk > t && term < 1e-30L * (sum + 1e-300L)) break;
    if (k > d + 100000) throw std::runtime_error("poissonized_transition: no convergence");
  }
  return static_cast<double>(sum);
}

double cosine_integral(double t, Site d) {
  const double pi = std::numbers::pi;
  const double dd = static_cast<double>(d);
  auto f = [&](double u) { return std::cos(u * pi * dd) * std::exp(-(1.0 - std::cos(u * pi)) * t); };
  // Fixed composite rule: 64 panels of 61-point Gauss-Kronrod resolve up to
  // ~30 oscillations far below 1e-15 without any adaptivity.
  constexpr int kPanels = 64;
  long double sum = 0.0L;
  for (int i = 0; i < kPanels; ++i) {
    const double a = static_cast<double>(i) / kPanels;
    const double b = static_cast<double>(i + 1) / kPanels;
    sum += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 0);
  }
  return static_cast<double>(sum);
}

double kernel_split_form(const Configuration& xi, SpaceTimePoint p, SpaceTimePoint q) {
  const auto u = xi.sites();
  const std::size_t n = u.size();
  const long double s = p.t;
  const long double t = q.t;
  auto phi = [&](std::size_t j, long double w) {
    long double v = 1.0L;
    for (std::size_t l = 0; l < n; ++l) {
      if (l != j) v *= (w - u[l]) / static_cast<long double>(u[j] - u[l]);
    }
    return v;
  };
  auto order = [](Site a, Site b) { return static_cast<int>(a > b ? a - b : b - a); };

  long double sum = 0.0L;
  const Site reach = 40 + static_cast<Site>(std::ceil(4.0 * q.t));
  for (std::size_t j = 0; j < n; ++j) {
    const long double left = bessel_i_series(order(p.x, u[j]), s);
    sum += left * signed_series(order(q.x, u[j]), -t);
    for (Site w = q.x - reach; w <= q.x + reach; ++w) {
      if (xi.contains(w)) continue;
      sum += left * signed_series(order(q.x, w), -t) * phi(j, static_cast<long double>(w));
    }
  }
  if (p.t > q.t) sum -= bessel_i_series(order(p.x, q.x), s - t);
  return static_cast<double>(sum);
}

double reference_determinant(std::span<const double> row_major, std::size_t n) {
  if (row_major.size() != n * n) throw std::invalid_argument("reference_determinant: bad size");
  return static_cast<double>(gauss_det({row_major.begin(), row_major.end()}, n));
}

double fredholm_subset_sum(const KernelFunction& kernel, std::span<const SpaceTimePoint> points,
                           std::span<const double> chi) {
  const std::size_t n = points.size();
  if (chi.size() != n) throw std::invalid_argument("fredholm_subset_sum: size mismatch");
  if (n > 20) throw std::invalid_argument("fredholm_subset_sum: too many points");
  std::vector<double> full(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) full[i * n + j] = kernel(points[i], points[j]);
  }
  long double total = 0.0L;
  std::vector<std::size_t> idx;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    idx.clear();
    long double weight = 1.0L;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        idx.push_back(i);
        weight *= chi[i];
      }
    }
    if (weight == 0.0L) continue;
    const std::size_t k = idx.size();
    std::vector<long double> sub(k * k);
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) sub[a * k + b] = full[idx[a] * n + idx[b]];
    }
    total += weight * gauss_det(std::move(sub), k);
  }
  return static_cast<double>(total);
}

ProportionEstimate survival_jump_chain(const Configuration& u, double horizon,
                                       std::size_t n_samples, std::uint64_t seed) {
  if (n_samples < 2) throw std::invalid_argument("survival_jump_chain: need two samples");
  const std::size_t n = u.size();
  std::mt19937 gen(static_cast<std::uint32_t>(seed ^ (seed >> 32)));
  std::exponential_distribution<double> clock(static_cast<double>(n));
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::bernoulli_distribution up(0.5);
  std::size_t survived = 0;
  std::vector<Site> pos;
  for (std::size_t i = 0; i < n_samples; ++i) {
    pos.assign(u.sites().begin(), u.sites().end());
    bool alive = true;
    for (double t = clock(gen); alive && t <= horizon; t += clock(gen)) {
      const std::size_t w = pick(gen);
      pos[w] += up(gen) ? 1 : -1;
      if ((w > 0 && pos[w - 1] == pos[w]) || (w + 1 < n && pos[w] == pos[w + 1])) alive = false;
    }
    survived += alive ? 1 : 0;
  }
  ProportionEstimate r;
  r.p = static_cast<double>(survived) / static_cast<double>(n_samples);
  r.std_error = std::sqrt(r.p * (1.0 - r.p) / static_cast<double>(n_samples - 1));
  return r;
}

}  // namespace ncrw::validation
