#include "app.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "format.hpp"
#include "ncrw/correlations.hpp"
#include "ncrw/kernels.hpp"
#include "ncrw/montecarlo.hpp"
#include "ncrw/relaxation.hpp"
#include "ncrw/types.hpp"
#include "ncrw/validation/acceptance.hpp"

namespace ncrw::cli {
namespace {

struct Globals {
  double tol_tail = kDefaultTailEps;
  double tol_quad = 1e-13;
  unsigned threads = 1;
  std::uint64_t seed = 0;
  std::string output;
  std::string out_path;
  std::string gauge = "probability";

  KernelOptions kernel_options() const { return {tol_tail, tol_quad}; }
  bool json(bool default_json) const { return output.empty() ? default_json : output == "json"; }
};

// Flag error raised after parsing; reported like a CLI11 usage error.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

const CLI::Validator kTolerance(
    [](std::string& s) -> std::string {
      try {
        const double v = std::stod(s);
        if (v > 0.0 && v <= 1e-4) return {};
      } catch (const std::exception&) {
      }
      return "tolerance must lie in (0, 1e-4], got " + s;
    },
    "TOL in (0,1e-4]");

struct KernelArgs {
  std::string spec;
  std::vector<std::string> points;
  double dt = std::nan("");
  Site dx = 0;
  bool grid = false;
  std::string times = "0";
  std::string window = "0:0";
};

struct DensityArgs {
  std::string spec;
  double t = 0.0;
  std::string window;
};

struct PointArgs {
  std::string spec;
  std::vector<std::string> at;
};

struct SimulateArgs {
  std::string config;
  double horizon = -1.0;
  std::size_t samples = 100000;
  std::string estimator = "h";
  std::vector<std::string> at;
};

struct RelaxationArgs {
  int a = 2;
  double dt = 0.0;
  Site dx_max = 5;
  std::string tau = "1,2,4,8,16,32";
  Site x = 0;
};

void run_kernel(const KernelArgs& k, const Globals& g, std::ostream& out) {
  const KernelSpec spec = parse_spec(k.spec, parse_gauge(g.gauge));
  const auto kernel = make_kernel(spec, g.kernel_options());
  const bool stationary = std::holds_alternative<StationarySpec>(spec.variant);
  if (!std::isnan(k.dt) && !stationary) throw UsageError("--dt/--dx apply to stationary specs only");

  if (k.grid) {
    const auto times = parse_reals(k.times);
    const auto [lo, hi] = parse_window(k.window);
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "s,x,t,y,value\n";
    for (double s : times) {
      for (Site x = lo; x <= hi; ++x) {
        for (double t : times) {
          for (Site y = lo; y <= hi; ++y) {
            const double v = kernel({s, x}, {t, y});
            rows.push_back({{"s", s}, {"x", x}, {"t", t}, {"y", y}, {"value", v}});
            csv << format_real(s) << ',' << x << ',' << format_real(t) << ',' << y << ','
                << format_real(v) << '\n';
          }
        }
      }
    }
    if (g.json(false)) {
      write_json(out, {{"spec", k.spec}, {"gauge", g.gauge}, {"rows", rows}});
    } else {
      out << csv.str();
    }
    return;
  }

  SpaceTimePoint p{};
  SpaceTimePoint q{};
  if (std::isnan(k.dt)) {
    if (k.points.size() != 2) throw UsageError("--point must be given twice: s,x then t,y");
    p = parse_space_time_point(k.points[0]);
    q = parse_space_time_point(k.points[1]);
  } else {
    if (!k.points.empty()) throw UsageError("--point and --dt/--dx are mutually exclusive");
    p = {k.dt < 0.0 ? -k.dt : 0.0, 0};
    q = {p.t + k.dt, k.dx};
  }
  const double v = kernel(p, q);
  if (g.json(false)) {
    write_json(out, {{"spec", k.spec},
                     {"gauge", g.gauge},
                     {"s", p.t},
                     {"x", p.x},
                     {"t", q.t},
                     {"y", q.x},
                     {"value", v}});
  } else {
    out << format_real(v) << '\n';
  }
}

void run_density(const DensityArgs& d, const Globals& g, std::ostream& out) {
  const KernelSpec spec = parse_spec(d.spec, parse_gauge(g.gauge));
  const auto [lo, hi] = parse_window(d.window);
  const auto rho = density_profile(spec, d.t, lo, hi, g.kernel_options());
  if (g.json(false)) {
    Json rows = Json::array();
    for (Site x = lo; x <= hi; ++x) {
      rows.push_back({{"x", x}, {"rho", rho[static_cast<std::size_t>(x - lo)]}});
    }
    write_json(out, {{"spec", d.spec}, {"t", d.t}, {"rows", rows}});
    return;
  }
  out << "t,x,rho\n";
  for (Site x = lo; x <= hi; ++x) {
    out << format_real(d.t) << ',' << x << ',' << format_real(rho[static_cast<std::size_t>(x - lo)])
        << '\n';
  }
}

void run_correlation(const PointArgs& c, const Globals& g, std::ostream& out) {
  const KernelSpec spec = parse_spec(c.spec, parse_gauge(g.gauge));
  const auto points = parse_point_set(c.at);
  const double value = correlation_function(spec, points, g.kernel_options());
  if (g.json(true)) {
    write_json(out, {{"spec", c.spec}, {"points", point_set_json(points)}, {"value", value}});
  } else {
    out << "value\n" << format_real(value) << '\n';
  }
}

void run_simulate(const SimulateArgs& a, const Globals& g, std::ostream& out) {
  const Configuration xi(parse_sites(a.config));
  const auto points = parse_point_set(a.at);
  const double horizon = a.horizon < 0.0 ? points.max_time() : a.horizon;
  if (points.max_time() > horizon) throw UsageError("--at times must not exceed --T");
  if (a.samples < 2) throw UsageError("--samples must be at least 2");
  SimulationOptions opt;
  opt.n_samples = a.samples;
  opt.seed = g.seed;
  opt.threads = g.threads;
  opt.tail_eps = g.tol_tail;

  const OccupationFunctional f(points);
  const auto r = a.estimator == "h" ? h_transform_estimator(xi, f, horizon, opt)
                                    : dmr_estimator(xi, f, horizon, opt);
  Json analytic = nullptr;
  Json z = nullptr;
  if (points.size() <= kMaxCorrelationPoints) {
    const double exact = correlation_function({xi, Gauge::Probability}, points, g.kernel_options());
    analytic = exact;
    if (r.std_error > 0.0) {
      z = (r.mean - exact) / r.std_error;
    } else if (r.mean == exact) {
      z = 0.0;
    }
  }
  if (g.json(true)) {
    write_json(out, {{"config", xi.sites()},
                     {"T", horizon},
                     {"estimator", a.estimator},
                     {"seed", g.seed},
                     {"points", point_set_json(points)},
                     {"n_samples", r.n_samples},
                     {"estimate", r.mean},
                     {"std_error", r.std_error},
                     {"ess", r.effective_samples},
                     {"analytic_value", analytic},
                     {"z_score", z}});
    return;
  }
  auto field = [](const Json& j) { return j.is_null() ? std::string() : format_real(j.get<double>()); };
  out << "estimate,std_error,ess,n_samples,analytic_value,z_score\n"
      << format_real(r.mean) << ',' << format_real(r.std_error) << ','
      << format_real(r.effective_samples) << ',' << r.n_samples << ',' << field(analytic) << ','
      << field(z) << '\n';
}

void run_relaxation(const RelaxationArgs& a, const Globals& g, std::ostream& out) {
  const LatticeSpec spec(a.a);
  if (a.dx_max < 0) throw UsageError("--dx-max must be >= 0");
  std::vector<Displacement> disp;
  for (Site dx = 0; dx <= a.dx_max; ++dx) disp.push_back({a.dt, dx});
  RelaxationOptions opt;
  opt.base_sites = {a.x};
  opt.threads = g.threads;
  opt.kernel = g.kernel_options();
  const auto report = relaxation_sweep(spec, disp, parse_reals(a.tau), opt);
  if (g.json(false)) {
    Json rows = Json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"tau", r.tau},
                      {"dt", r.dt},
                      {"dx", r.dx},
                      {"lattice_value", r.lattice_value},
                      {"stationary_value", r.stationary_value},
                      {"gap", r.gap}});
    }
    std::vector<bool> monotone(report.monotone.begin(), report.monotone.end());
    write_json(out, {{"a", a.a},
                     {"x", a.x},
                     {"rows", rows},
                     {"monotone_from_tau_4", monotone},
                     {"max_gap", report.max_gap}});
    return;
  }
  out << "tau,dt,dx,lattice_value,stationary_value,gap\n";
  for (const auto& r : report.rows) {
    out << format_real(r.tau) << ',' << format_real(r.dt) << ',' << r.dx << ','
        << format_real(r.lattice_value) << ',' << format_real(r.stationary_value) << ','
        << format_real(r.gap) << '\n';
  }
}

int run_selftest(const Globals& g, std::ostream& out) {
  const bool json = g.json(false);
  const auto results = validation::run_selftest([&](const validation::CriterionResult& r) {
    if (!json) out << validation::format_result(r) << std::endl;
  });
  const bool all = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  if (json) {
    Json arr = Json::array();
    for (const auto& r : results) {
      arr.push_back({{"id", r.id},
                     {"name", r.name},
                     {"passed", r.passed},
                     {"seconds", r.seconds},
                     {"detail", r.detail}});
    }
    write_json(out, {{"passed", all}, {"results", arr}});
  } else {
    out << (all ? "selftest passed" : "selftest FAILED") << '\n';
  }
  return all ? 0 : 1;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Noncolliding random walks: kernels, correlations, simulation", "ncrw"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config-file", "", "key=value configuration file (also NCRW_CONFIG)")
      ->envname("NCRW_CONFIG");

  Globals g;
  app.add_option("--tol-tail", g.tol_tail, "cutoff for truncated lattice sums")
      ->check(kTolerance)
      ->capture_default_str();
  app.add_option("--tol-quad", g.tol_quad, "quadrature tolerance relative to int |f|")
      ->check(kTolerance)
      ->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::Range(1u, 1024u))
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Monte Carlo seed")->capture_default_str();
  app.add_option("--output", g.output, "output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", g.out_path, "write results to this file instead of stdout");
  app.add_option("--gauge", g.gauge, "kernel normalization")
      ->transform(CLI::Transformer(std::map<std::string, std::string>{{"prob", "probability"}}))
      ->check(CLI::IsMember({"probability", "paper"}))
      ->capture_default_str();

  KernelArgs k;
  auto* kernel = app.add_subcommand("kernel", "evaluate a correlation kernel");
  kernel->add_option("--spec", k.spec, "finite:u1,u2,... | lattice:a | stationary:rho")->required();
  kernel->add_option("--point", k.points, "s,x then t,y (give twice)");
  kernel->add_option("--dt", k.dt, "time lag t - s (stationary spec)");
  kernel->add_option("--dx", k.dx, "displacement y - x (stationary spec)")->needs("--dt");
  kernel->add_flag("--grid", k.grid, "tabulate over --times x --window squared");
  kernel->add_option("--times", k.times, "comma separated times for --grid")->capture_default_str();
  kernel->add_option("--window", k.window, "site range lo:hi for --grid")->capture_default_str();

  DensityArgs d;
  auto* density = app.add_subcommand("density", "one-point density over a window");
  density->add_option("--spec", d.spec, "kernel spec")->required();
  density->add_option("--t", d.t, "time")->required();
  density->add_option("--window", d.window, "site range lo:hi")->required();

  PointArgs c;
  auto* correlation = app.add_subcommand("correlation", "multi-time correlation function");
  correlation->add_option("--spec", c.spec, "kernel spec")->required();
  correlation->add_option("--at", c.at, "t:x1,x2,... (repeatable)")->required();

  SimulateArgs s;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of a correlation");
  simulate->add_option("--config", s.config, "initial sites u1,u2,...")->required();
  simulate->add_option("--T", s.horizon, "simulation horizon (default: last --at time)");
  simulate->add_option("--samples", s.samples, "number of samples")->capture_default_str();
  simulate->add_option("--estimator", s.estimator, "h or dmr")
      ->check(CLI::IsMember({"h", "dmr"}))
      ->capture_default_str();
  simulate->add_option("--at", s.at, "t:x1,x2,... (repeatable)")->required();

  RelaxationArgs r;
  auto* relaxation = app.add_subcommand("relaxation", "lattice kernel vs stationary kernel over tau");
  relaxation->add_option("--a", r.a, "lattice spacing")->capture_default_str();
  relaxation->add_option("--dt", r.dt, "time lag")->capture_default_str();
  relaxation->add_option("--dx-max", r.dx_max, "displacements 0..dx-max")->capture_default_str();
  relaxation->add_option("--tau", r.tau, "comma separated shifts")->capture_default_str();
  relaxation->add_option("--x", r.x, "base site")->capture_default_str();

  auto* selftest = app.add_subcommand("selftest", "run the built-in verification suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  std::ofstream file;
  std::ostringstream buffer;
  try {
    int code = 0;
    if (*kernel) run_kernel(k, g, buffer);
    if (*density) run_density(d, g, buffer);
    if (*correlation) run_correlation(c, g, buffer);
    if (*simulate) run_simulate(s, g, buffer);
    if (*relaxation) run_relaxation(r, g, buffer);
    if (*selftest) code = run_selftest(g, g.out_path.empty() ? out : buffer);

    if (g.out_path.empty()) {
      out << buffer.str();
    } else {
      file.open(g.out_path);
      if (!file) {
        err << "error: cannot open --out " << g.out_path << '\n';
        return 2;
      }
      file << buffer.str();
    }
    return code;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.operation() << " did not converge (" << e.parameter() << "): " << e.what()
        << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace ncrw::cli
