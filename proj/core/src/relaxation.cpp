#include "ncrw/relaxation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <utility>

#include "summation.hpp"

namespace ncrw {
namespace {

// Gaps closer than this count as equal when judging monotone trends.
constexpr double kTrendSlack = 1e-12;

bool non_increasing(const std::vector<double>& values, const std::vector<double>& taus,
                    double from) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (taus[k] < from) continue;
    if (values[k] > prev + kTrendSlack) return false;
    prev = values[k];
  }
  return true;
}

}  // namespace

double relaxation_gap(const LatticeSpec& a, double s, Site x, double t, Site y, double tau,
                      const KernelOptions& options) {
  if (!(s >= 0.0) || !(t >= 0.0) || !(tau >= 0.0)) {
    throw std::invalid_argument("relaxation_gap: s, t and tau must be >= 0");
  }
  const double lattice = kernel_lattice(a, {s + tau, x}, {t + tau, y}, Gauge::Probability, options);
  const double stationary =
      kernel_stationary(a.density(), t - s, y - x, Gauge::Probability, options.quad_tol);
  return std::abs(lattice - stationary);
}

double stationary_part(const LatticeSpec& a, double dt, Site dx, double rel_tol) {
  return lattice_comb_term(a, 0, std::max(0.0, -dt), 0, std::max(0.0, dt), dx, rel_tol);
}

RemainderEvaluation remainder_term_detailed(const LatticeSpec& a, double s, Site x, double t,
                                            Site y, double rel_tol) {
  if (!(s >= 0.0) || !(t >= 0.0)) throw std::invalid_argument("remainder_term: times must be >= 0");
  RemainderEvaluation out;
  const double spacing = a.spacing();
  auto observer = [&](double lambda, double theta) {
    const double damping = std::exp(std::cos(theta / spacing) - std::cos(lambda / spacing));
    out.max_damping = std::max(out.max_damping, damping);
    ++out.nodes;
  };
  detail::CompensatedSum sum;
  const int max_shift = (a.spacing() + 1) / 2;
  for (int m = 1; m <= max_shift; ++m) {
    sum += lattice_comb_term(a, m, s, x, t, y, rel_tol, observer);
  }
  out.value = sum.value();
  return out;
}

double remainder_term(const LatticeSpec& a, double s, Site x, double t, Site y, double rel_tol) {
  return remainder_term_detailed(a, s, x, t, y, rel_tol).value;
}

RelaxationReport relaxation_sweep(const LatticeSpec& a, std::vector<Displacement> displacements,
                                  std::vector<double> tau_grid, const RelaxationOptions& options) {
  if (displacements.empty()) throw std::invalid_argument("relaxation_sweep: no displacements");
  if (tau_grid.empty()) throw std::invalid_argument("relaxation_sweep: empty tau grid");
  for (std::size_t k = 0; k < tau_grid.size(); ++k) {
    if (!(tau_grid[k] >= 0.0) || (k > 0 && !(tau_grid[k] > tau_grid[k - 1]))) {
      throw std::invalid_argument("relaxation_sweep: tau grid must be increasing and >= 0");
    }
  }
  if (options.base_sites.empty()) throw std::invalid_argument("relaxation_sweep: no base sites");
  if (options.threads < 1) throw std::invalid_argument("relaxation_sweep: need at least one thread");

  RelaxationReport report;
  report.a = a;
  report.displacements = std::move(displacements);
  report.tau_grid = std::move(tau_grid);

  const std::size_t n_d = report.displacements.size();
  const std::size_t n_tau = report.tau_grid.size();
  const std::size_t n_cells = options.base_sites.size() * n_d * n_tau;
  report.rows.resize(n_cells);

  auto evaluate = [&](std::size_t cell) {
    const std::size_t k = cell % n_tau;
    const std::size_t d = (cell / n_tau) % n_d;
    const std::size_t b = cell / (n_tau * n_d);
    const Displacement disp = report.displacements[d];
    const double tau = report.tau_grid[k];
    const Site x = options.base_sites[b];
    const Site y = x + disp.dx;
    // Both times at or after tau, for either sign of dt.
    const double s = tau + std::max(0.0, -disp.dt);
    const double t = s + disp.dt;
    RelaxationRow row;
    row.tau = tau;
    row.dt = disp.dt;
    row.dx = disp.dx;
    row.x = x;
    row.lattice_value = kernel_lattice(a, {s, x}, {t, y}, Gauge::Probability, options.kernel);
    row.stationary_value = kernel_stationary(a.density(), disp.dt, disp.dx, Gauge::Probability,
                                             options.kernel.quad_tol);
    row.gap = std::abs(row.lattice_value - row.stationary_value);
    report.rows[cell] = row;
  };

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < n_cells; c = next++) evaluate(c);
  };
  const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(options.threads, n_cells));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) {
      pool.emplace_back([&, i] {
        try {
          worker();
        } catch (...) {
          errors[i] = std::current_exception();
          next = n_cells;
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  report.gaps.assign(n_d, std::vector<double>(n_tau, 0.0));
  for (std::size_t c = 0; c < n_cells; ++c) {
    const std::size_t k = c % n_tau;
    const std::size_t d = (c / n_tau) % n_d;
    report.gaps[d][k] = std::max(report.gaps[d][k], report.rows[c].gap);
  }
  report.max_gap.assign(n_tau, 0.0);
  for (std::size_t d = 0; d < n_d; ++d) {
    report.monotone.push_back(non_increasing(report.gaps[d], report.tau_grid, options.monotone_from));
    for (std::size_t k = 0; k < n_tau; ++k) {
      report.max_gap[k] = std::max(report.max_gap[k], report.gaps[d][k]);
    }
  }
  report.max_gap_monotone = non_increasing(report.max_gap, report.tau_grid, options.monotone_from);
  return report;
}

}  // namespace ncrw
