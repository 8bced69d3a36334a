#include "ncrw/validation/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <utility>
#include <variant>
#include <vector>

#include "ncrw/bessel.hpp"
#include "ncrw/correlations.hpp"
#include "ncrw/kernels.hpp"
#include "ncrw/linalg.hpp"
#include "ncrw/martingale.hpp"
#include "ncrw/montecarlo.hpp"
#include "ncrw/relaxation.hpp"
#include "ncrw/validation/oracles.hpp"

namespace ncrw::validation {
namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok) { passed = passed && ok; }
};

template <class Body>
CriterionResult timed(int id, std::string name, double limit_seconds, Body&& body) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  Outcome out;
  out.detail << std::setprecision(3) << std::scientific;
  const auto start = std::chrono::steady_clock::now();
  try {
    body(out);
  } catch (const std::exception& e) {
    out.passed = false;
    out.detail << " exception: " << e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  r.passed = out.passed;
  if (limit_seconds > 0.0 && r.seconds >= limit_seconds) {
    r.passed = false;
    out.detail << " runtime limit " << std::defaultfloat << limit_seconds << " s exceeded";
  }
  r.detail = out.detail.str();
  return r;
}

bool within_3se(double estimate, double se, double exact) {
  return std::abs(estimate - exact) <= 3.0 * se;
}

}  // namespace

CriterionResult check_transition_probability() {
  return timed(1, "transition probability: Bessel, quadrature, Poissonization", 1.0, [](Outcome& o) {
    double max_bq = 0.0;
    double max_bp = 0.0;
    double max_qp = 0.0;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      for (Site d = 0; d <= 30; ++d) {
        const double b = transition_probability(t, 0, d);
        const double q = transition_probability_quadrature(t, 0, d);
        const double p = poissonized_transition(t, 0, d);
        max_bq = std::max(max_bq, std::abs(b - q));
        max_bp = std::max(max_bp, std::abs(b - p));
        max_qp = std::max(max_qp, std::abs(q - p));
      }
    }
    o.require(max_bq <= 1e-12 && max_bp <= 1e-12 && max_qp <= 1e-12);
    o.detail << "max |bessel-quad| " << max_bq << ", |bessel-poisson| " << max_bp
             << ", |quad-poisson| " << max_qp << " (tol 1e-12)";
  });
}

CriterionResult check_martingale_identities() {
  return timed(2, "martingale polynomials and S-transform identity", 5.0, [](Outcome& o) {
    double max_poly = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
      for (Site u = -2; u <= 2; ++u) {
        for (int n = 0; n <= 8; ++n) {
          long double sum = 0.0L;
          for (Site y = u - 80; y <= u + 80; ++y) {
            sum += transition_probability(t, u, y) * martingale_polynomial(n, t, static_cast<double>(y));
          }
          max_poly = std::max(max_poly, std::abs(static_cast<double>(sum) - std::pow(static_cast<double>(u), n)));
        }
      }
    }
    double max_s = 0.0;
    for (double t : {0.5, 1.0, 2.0}) {
      for (double alpha = -1.0; alpha <= 1.0 + 1e-12; alpha += 0.25) {
        for (Site x : {-3, 0, 4}) {
          const double exact = std::exp(-t * (std::cosh(alpha) - 1.0));
          max_s = std::max(max_s, std::abs(s_transform_exponential(alpha, t, x) - exact));
        }
      }
    }
    o.require(max_poly <= 1e-8 && max_s <= 1e-10);
    o.detail << "max |E m_n - u^n| " << max_poly << " (tol 1e-8), max S-transform error " << max_s
             << " (tol 1e-10)";
  });
}

CriterionResult check_determinant_identity() {
  return timed(3, "h(z)/h(u) = det[Phi^{u_k}(z_j)]", 0.0, [](Outcome& o) {
    std::mt19937_64 gen(20190519);
    std::uniform_int_distribution<int> size(1, 5);
    std::uniform_int_distribution<Site> site(-8, 8);
    // z ranges over distinct lattice points in random order, the arguments at
    // which the identity enters the martingale representation.
    std::uniform_int_distribution<Site> point(-12, 12);
    double worst = 0.0;
    for (int instance = 0; instance < 100; ++instance) {
      const int n = size(gen);
      std::set<Site> chosen;
      while (static_cast<int>(chosen.size()) < n) chosen.insert(site(gen));
      const Configuration xi(std::vector<Site>(chosen.begin(), chosen.end()));
      std::vector<double> z;
      while (static_cast<int>(z.size()) < n) {
        const auto v = static_cast<double>(point(gen));
        if (std::find(z.begin(), z.end(), v) == z.end()) z.push_back(v);
      }
      std::vector<double> u(xi.sites().begin(), xi.sites().end());
      const double lhs = vandermonde(z) / vandermonde(u);
      std::vector<double> phi(z.size() * z.size());
      for (std::size_t j = 0; j < z.size(); ++j) {
        for (std::size_t k = 0; k < z.size(); ++k) phi[j * z.size() + k] = lagrange_basis(xi, k, z[j]);
      }
      const double rhs = determinant(phi, z.size());
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    o.require(worst <= 1e-10);
    o.detail << "max relative error " << worst << " over 100 instances (tol 1e-10)";
  });
}

CriterionResult check_projection() {
  return timed(4, "equal-time kernel is a rank-N projection", 10.0, [](Outcome& o) {
    constexpr Site kMargin = 25;
    double worst_proj = 0.0;
    double worst_trace = 0.0;
    for (const auto& sites : {std::vector<Site>{0, 2}, std::vector<Site>{-2, 0, 3}}) {
      const Configuration xi(sites);
      for (double t : {0.5, 1.0, 2.0}) {
        const Site lo = xi.front() - kMargin;
        const Site hi = xi.back() + kMargin;
        const auto n = static_cast<std::size_t>(hi - lo + 1);
        std::vector<double> k(n * n);
        for (std::size_t i = 0; i < n; ++i) {
          for (std::size_t j = 0; j < n; ++j) {
            k[i * n + j] = kernel_finite(xi, {t, lo + static_cast<Site>(i)}, {t, lo + static_cast<Site>(j)});
          }
        }
        double trace = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          trace += k[i * n + i];
          for (std::size_t j = 0; j < n; ++j) {
            double kk = 0.0;
            for (std::size_t l = 0; l < n; ++l) kk += k[i * n + l] * k[l * n + j];
            worst_proj = std::max(worst_proj, std::abs(kk - k[i * n + j]));
          }
        }
        worst_trace = std::max(worst_trace, std::abs(trace - static_cast<double>(xi.size())));
      }
    }
    o.require(worst_proj <= 1e-8 && worst_trace <= 1e-8);
    o.detail << "max |K K - K| " << worst_proj << ", max |trace - N| " << worst_trace
             << " (tol 1e-8)";
  });
}

CriterionResult check_gauge_invariance() {
  return timed(5, "correlation determinants are gauge invariant", 0.0, [](Outcome& o) {
    const std::vector<std::vector<SpaceTimePoint>> sets{
        {{0.5, 0}},
        {{0.5, 0}, {1.0, 1}},
        {{0.3, -1}, {0.7, 0}, {1.2, 2}},
        {{0.2, 0}, {0.5, 1}, {0.9, -1}, {1.4, 2}},
        {{1.0, 0}, {1.0, 2}, {0.4, 1}, {1.6, 0}},
    };
    std::vector<std::variant<Configuration, LatticeSpec, StationarySpec>> specs{
        Configuration({0, 2}), Configuration({-2, 0, 3}), LatticeSpec(2), LatticeSpec(3),
        StationarySpec(0.5), StationarySpec(1.0 / 3.0)};
    double worst = 0.0;
    for (const auto& v : specs) {
      const auto prob = make_kernel({v, Gauge::Probability});
      const auto paper = make_kernel({v, Gauge::Paper});
      for (const auto& pts : sets) {
        const double a = correlation_determinant(prob, pts);
        const double b = correlation_determinant(paper, pts);
        const double scale = std::max(std::abs(a), std::abs(b));
        if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
      }
    }
    o.require(worst <= 1e-10);
    o.detail << "max relative difference " << worst << " over 6 specs x 5 point sets (tol 1e-10)";
  });
}

CriterionResult check_monte_carlo(unsigned threads) {
  return timed(6, "Monte Carlo estimators vs analytic kernel", 120.0, [threads](Outcome& o) {
    const Configuration xi({0, 2});
    constexpr double kHorizon = 1.0;
    SimulationOptions opt;
    opt.n_samples = 100000;
    opt.seed = 20240601;
    opt.threads = threads;
    o.detail << std::fixed << std::setprecision(4);

    const auto norm = dmr_estimator(xi, OccupationFunctional{}, kHorizon, opt);
    const bool a = within_3se(norm.mean, norm.std_error, 1.0) && norm.effective_samples >= 1e3;
    o.require(a);
    o.detail << "(a) DMR mean " << norm.mean << " +- " << norm.std_error << ", ESS "
             << std::setprecision(0) << norm.effective_samples << std::setprecision(4);

    const auto cancel = exit_cancellation_estimator(xi, kHorizon, opt);
    o.require(within_3se(cancel.mean, cancel.std_error, 0.0));
    o.detail << "; (b) cancellation " << cancel.mean << " +- " << cancel.std_error;

    const KernelSpec spec{xi, Gauge::Probability};
    const std::vector<std::pair<const char*, MultiTimePointSet>> cases{
        {"rho(0.5,0)", MultiTimePointSet::single_time(0.5, {0})},
        {"rho(0.5,1)", MultiTimePointSet::single_time(0.5, {1})},
        {"rho(0.5;0,2)", MultiTimePointSet::single_time(0.5, {0, 2})},
    };
    o.detail << "; (c)";
    for (const auto& [label, pts] : cases) {
      const double exact = correlation_function(spec, pts);
      const OccupationFunctional f(pts);
      const auto h = h_transform_estimator(xi, f, kHorizon, opt);
      const auto d = dmr_estimator(xi, f, kHorizon, opt);
      const bool ok = within_3se(h.mean, h.std_error, exact) && within_3se(d.mean, d.std_error, exact);
      o.require(ok);
      o.detail << " " << label << "=" << exact << " h " << (h.mean - exact) / h.std_error << "se dmr "
               << (d.mean - exact) / d.std_error << "se";
    }
  });
}

CriterionResult check_finite_to_lattice() {
  return timed(7, "finite window kernel converges to the lattice kernel", 0.0, [](Outcome& o) {
    const LatticeSpec a(2);
    const std::vector<Site> windows{10, 20, 40};
    double worst_at_40 = 0.0;
    bool monotone = true;
    for (Site x = 0; x <= 1; ++x) {
      for (Site y = 0; y <= 1; ++y) {
        const double lattice = kernel_lattice(a, {0.5, x}, {0.5, y});
        double prev = std::numeric_limits<double>::infinity();
        o.detail << "(" << x << "," << y << "):";
        for (Site L : windows) {
          const double err =
              std::abs(kernel_finite(Configuration::lattice_window(2, L), {0.5, x}, {0.5, y}) - lattice);
          monotone = monotone && err < prev;
          prev = err;
          o.detail << " " << err;
        }
        worst_at_40 = std::max(worst_at_40, prev);
        o.detail << "; ";
      }
    }
    o.require(monotone && worst_at_40 <= 1e-6);
    o.detail << "monotone " << (monotone ? "yes" : "no") << ", max error at L=40 " << worst_at_40
             << " (tol 1e-6)";
  });
}

CriterionResult check_relaxation() {
  return timed(8, "relaxation of the 2Z kernel to the sine kernel", 30.0, [](Outcome& o) {
    const LatticeSpec a(2);
    std::vector<Displacement> disp;
    for (Site dx = -5; dx <= 5; ++dx) disp.push_back({0.0, dx});
    RelaxationOptions opt;
    opt.base_sites = {0, 1};
    opt.monotone_from = 4.0;
    const auto report = relaxation_sweep(a, disp, {4.0, 8.0, 16.0, 32.0}, opt);

    double max_damping = 0.0;
    std::size_t nodes = 0;
    for (const auto& row : report.rows) {
      const auto r = remainder_term_detailed(a, row.tau, row.x, row.tau + row.dt, row.x + row.dx);
      max_damping = std::max(max_damping, r.max_damping);
      nodes += r.nodes;
    }
    const double g32 = report.max_gap.back();
    const bool fixture = std::abs(g32 - kRelaxationGapTau32) <= 1e-9 * kRelaxationGapTau32;
    o.require(report.max_gap_monotone && fixture && max_damping < 1.0 && nodes > 0);
    o.detail << "gaps";
    for (double g : report.max_gap) o.detail << " " << g;
    o.detail << "; non-increasing " << (report.max_gap_monotone ? "yes" : "no") << "; tau=32 gap "
             << std::setprecision(16) << g32 << " vs fixture " << kRelaxationGapTau32
             << std::setprecision(3) << "; max damping " << max_damping << " over " << nodes
             << " nodes";
  });
}

CriterionResult check_stationary_identities() {
  return timed(9, "stationary kernel identities", 0.0, [](Outcome& o) {
    double worst_rewrite = 0.0;
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      for (Site d = -30; d <= 30; ++d) {
        worst_rewrite = std::max(worst_rewrite, std::abs(transition_probability_quadrature(t, 0, d) -
                                                         cosine_integral(t, d)));
      }
    }
    bool exact = true;
    double worst_route = 0.0;
    for (int spacing : {2, 3}) {
      const double rho = 1.0 / spacing;
      for (Site n = -10; n <= 10; ++n) {
        exact = exact && kernel_stationary(rho, 0.0, n) == sine_kernel(rho, n) &&
                kernel_stationary(rho, 0.0, n, Gauge::Paper) == sine_kernel(rho, n);
        worst_route = std::max(worst_route,
                               std::abs(stationary_part(LatticeSpec(spacing), 0.0, n) - sine_kernel(rho, n)));
      }
    }
    o.require(worst_rewrite <= 1e-12 && exact && worst_route <= 1e-12);
    o.detail << "max rewrite error " << worst_rewrite << " (tol 1e-12); dt=0 equals sine kernel "
             << (exact ? "exactly" : "NOT exactly") << "; lambda-integral route " << worst_route
             << " (tol 1e-12)";
  });
}

std::vector<CriterionResult> run_selftest(
    const std::function<void(const CriterionResult&)>& on_result) {
  using Check = CriterionResult (*)();
  const Check checks[] = {check_transition_probability, check_martingale_identities,
                          check_determinant_identity,   check_projection,
                          check_gauge_invariance,       check_finite_to_lattice,
                          check_relaxation,             check_stationary_identities};
  std::vector<CriterionResult> out;
  for (Check c : checks) {
    out.push_back(c());
    if (on_result) on_result(out.back());
  }
  return out;
}

std::string format_result(const CriterionResult& r) {
  std::ostringstream s;
  s << (r.passed ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " (" << std::fixed
    << std::setprecision(2) << r.seconds << " s): " << r.detail;
  return s.str();
}

}  // namespace ncrw::validation
