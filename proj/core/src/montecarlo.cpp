#include "ncrw/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <utility>

#include "ncrw/linalg.hpp"
#include "ncrw/martingale.hpp"

namespace ncrw {
namespace {

constexpr std::size_t kChunkSize = 1024;

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double exponential(Rng& rng) { return -std::log1p(-uniform01(rng)); }

// Running statistics of one chunk, merged with Chan's pairwise update.
struct Moments {
  std::size_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;
  double sum_w = 0.0;
  double sum_w2 = 0.0;

  void add(const WeightedSample& s) {
    ++n;
    const double delta = s.value - mean;
    mean += delta / static_cast<double>(n);
    m2 += delta * (s.value - mean);
    sum_w += s.weight;
    sum_w2 += s.weight * s.weight;
  }

  void merge(const Moments& o) {
    if (o.n == 0) return;
    const double na = static_cast<double>(n);
    const double nb = static_cast<double>(o.n);
    const double delta = o.mean - mean;
    const double total = na + nb;
    mean += delta * nb / total;
    m2 += o.m2 + delta * delta * na * nb / total;
    n += o.n;
    sum_w += o.sum_w;
    sum_w2 += o.sum_w2;
  }
};

void check_horizon(const OccupationFunctional& f, double horizon, const char* op) {
  if (!std::isfinite(horizon) || horizon < 0.0) {
    throw std::invalid_argument(std::string(op) + ": horizon must be finite and >= 0");
  }
  if (f.max_time() > horizon) {
    throw std::invalid_argument(std::string(op) + ": functional looks past the horizon");
  }
}

std::vector<double> end_positions(const WalkEnsemble& ensemble) {
  std::vector<double> out;
  out.reserve(ensemble.size());
  for (const auto& p : ensemble.paths()) out.push_back(static_cast<double>(p.end_position()));
  return out;
}

double vandermonde_of(const Configuration& u) {
  std::vector<double> x(u.sites().begin(), u.sites().end());
  return vandermonde(x);
}

// M_xi^{u_k}(T, y) for every k over the window of likely end points; values
// outside the window are computed on demand.
class MartingaleTable {
 public:
  MartingaleTable(const Configuration& xi, double horizon, double eps)
      : xi_(xi), horizon_(horizon), eps_(eps) {
    const auto reach = static_cast<Site>(std::ceil(horizon + 10.0 * std::sqrt(horizon) + 20.0));
    lo_ = xi.front() - reach;
    hi_ = xi.back() + reach;
    rows_.reserve(static_cast<std::size_t>(hi_ - lo_ + 1));
    for (Site y = lo_; y <= hi_; ++y) rows_.push_back(discrete_martingales(xi, horizon, y, eps));
  }

  std::vector<double> row(Site y) const {
    if (y >= lo_ && y <= hi_) return rows_[static_cast<std::size_t>(y - lo_)];
    return discrete_martingales(xi_, horizon_, y, eps_);
  }

 private:
  Configuration xi_;
  double horizon_;
  double eps_;
  Site lo_ = 0;
  Site hi_ = -1;
  std::vector<std::vector<double>> rows_;
};

}  // namespace

Rng sample_rng(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= index * 0xd1b54a32d192ed03ULL;
  const std::uint64_t b = splitmix64(state);
  const std::uint64_t c = splitmix64(state);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  return Rng(seq);
}

double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

WalkPath::WalkPath(Site start, double horizon, std::vector<double> jump_times,
                   std::vector<int> steps)
    : start_(start), horizon_(horizon), jump_times_(std::move(jump_times)),
      steps_(std::move(steps)) {
  if (!std::isfinite(horizon_) || horizon_ < 0.0) {
    throw std::invalid_argument("WalkPath: horizon must be finite and >= 0");
  }
  if (jump_times_.size() != steps_.size()) {
    throw std::invalid_argument("WalkPath: jump times and steps differ in length");
  }
  after_.reserve(steps_.size());
  Site pos = start_;
  for (std::size_t i = 0; i < steps_.size(); ++i) {
    const double tau = jump_times_[i];
    if (!(tau > 0.0) || tau > horizon_ || (i > 0 && !(tau > jump_times_[i - 1]))) {
      throw std::invalid_argument("WalkPath: jump times must increase strictly within (0, horizon]");
    }
    if (steps_[i] != 1 && steps_[i] != -1) throw std::invalid_argument("WalkPath: steps must be +-1");
    pos += steps_[i];
    after_.push_back(pos);
  }
}

Site WalkPath::position(double t) const {
  if (!(t >= 0.0) || t > horizon_) {
    throw std::out_of_range("WalkPath::position: time outside [0, horizon]");
  }
  const auto it = std::upper_bound(jump_times_.begin(), jump_times_.end(), t);
  if (it == jump_times_.begin()) return start_;
  return after_[static_cast<std::size_t>(it - jump_times_.begin()) - 1];
}

Site WalkPath::end_position() const noexcept { return after_.empty() ? start_ : after_.back(); }

WalkPath sample_walk(Site start, double horizon, Rng& rng) {
  if (!std::isfinite(horizon) || horizon < 0.0) {
    throw std::invalid_argument("sample_walk: horizon must be finite and >= 0");
  }
  std::vector<double> times;
  std::vector<int> steps;
  double t = exponential(rng);
  while (t <= horizon) {
    // Two exponentials can round to the same double only in pathological cases.
    if (times.empty() || t > times.back()) {
      times.push_back(t);
      steps.push_back((rng() >> 63) != 0 ? 1 : -1);
    }
    t += exponential(rng);
  }
  return WalkPath(start, horizon, std::move(times), std::move(steps));
}

WalkEnsemble::WalkEnsemble(std::vector<WalkPath> paths, std::uint64_t seed)
    : paths_(std::move(paths)), seed_(seed) {
  if (paths_.empty()) throw std::invalid_argument("WalkEnsemble: no walks");
  for (std::size_t i = 1; i < paths_.size(); ++i) {
    if (paths_[i].horizon() != paths_[0].horizon()) {
      throw std::invalid_argument("WalkEnsemble: walks have different horizons");
    }
    if (paths_[i].start() <= paths_[i - 1].start()) {
      throw std::invalid_argument("WalkEnsemble: starting sites must be strictly increasing");
    }
  }
}

Configuration WalkEnsemble::initial() const {
  std::vector<Site> u;
  u.reserve(paths_.size());
  for (const auto& p : paths_) u.push_back(p.start());
  return Configuration(std::move(u));
}

int WalkEnsemble::occupation(double t, Site x) const {
  int count = 0;
  for (const auto& p : paths_) count += p.position(t) == x ? 1 : 0;
  return count;
}

WalkEnsemble sample_ensemble(const Configuration& u, double horizon, Rng& rng,
                             std::uint64_t seed) {
  std::vector<WalkPath> paths;
  paths.reserve(u.size());
  for (Site start : u.sites()) paths.push_back(sample_walk(start, horizon, rng));
  return WalkEnsemble(std::move(paths), seed);
}

double exit_time(const WalkEnsemble& ensemble) {
  const auto paths = ensemble.paths();
  const std::size_t n = paths.size();
  if (n < 2) return kNeverExited;

  std::vector<std::tuple<double, std::size_t, int>> events;
  for (std::size_t w = 0; w < n; ++w) {
    const auto times = paths[w].jump_times();
    const auto steps = paths[w].steps();
    for (std::size_t i = 0; i < times.size(); ++i) events.emplace_back(times[i], w, steps[i]);
  }
  std::sort(events.begin(), events.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) < std::tie(std::get<0>(b), std::get<1>(b));
  });

  std::vector<Site> pos;
  pos.reserve(n);
  for (const auto& p : paths) pos.push_back(p.start());
  for (const auto& [time, w, step] : events) {
    pos[w] += step;
    if ((w > 0 && pos[w - 1] >= pos[w]) || (w + 1 < n && pos[w] >= pos[w + 1])) return time;
  }
  return kNeverExited;
}

OccupationFunctional::OccupationFunctional(std::vector<SpaceTimePoint> points)
    : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].t) || points_[i].t < 0.0) {
      throw std::invalid_argument("OccupationFunctional: times must be finite and >= 0");
    }
    for (std::size_t j = 0; j < i; ++j) {
      if (points_[j] == points_[i]) {
        throw std::invalid_argument("OccupationFunctional: points must be distinct");
      }
    }
  }
}

OccupationFunctional::OccupationFunctional(const MultiTimePointSet& points)
    : OccupationFunctional(points.points()) {}

double OccupationFunctional::max_time() const noexcept {
  double t = 0.0;
  for (const auto& p : points_) t = std::max(t, p.t);
  return t;
}

double OccupationFunctional::operator()(const WalkEnsemble& ensemble) const {
  double value = 1.0;
  for (const auto& p : points_) {
    value *= ensemble.occupation(p.t, p.x);
    if (value == 0.0) break;
  }
  return value;
}

EstimatorResult estimate(const SimulationOptions& options,
                         const std::function<WeightedSample(std::uint64_t)>& draw) {
  if (options.n_samples < 1) throw std::invalid_argument("estimate: need at least one sample");
  if (options.threads < 1) throw std::invalid_argument("estimate: need at least one thread");

  const std::size_t n_chunks = (options.n_samples + kChunkSize - 1) / kChunkSize;
  std::vector<Moments> chunks(n_chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < n_chunks; c = next++) {
      const std::size_t begin = c * kChunkSize;
      const std::size_t end = std::min(options.n_samples, begin + kChunkSize);
      Moments m;
      for (std::size_t i = begin; i < end; ++i) m.add(draw(i));
      chunks[c] = m;
    }
  };

  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(options.threads, n_chunks));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_threads);
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) {
      pool.emplace_back([&, i] {
        try {
          worker();
        } catch (...) {
          errors[i] = std::current_exception();
          next = n_chunks;
        }
      });
    }
    for (auto& th : pool) th.join();
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  Moments total;
  for (const auto& m : chunks) total.merge(m);

  EstimatorResult r;
  r.n_samples = total.n;
  r.mean = total.mean;
  const double n = static_cast<double>(total.n);
  r.std_error = total.n > 1 ? std::sqrt(total.m2 / (n - 1.0) / n) : 0.0;
  r.effective_samples = total.sum_w2 > 0.0 ? total.sum_w * total.sum_w / total.sum_w2 : 0.0;
  return r;
}

EstimatorResult h_transform_estimator(const Configuration& xi, const OccupationFunctional& f,
                                      double horizon, const SimulationOptions& options) {
  check_horizon(f, horizon, "h_transform_estimator");
  const double h0 = vandermonde_of(xi);
  return estimate(options, [&](std::uint64_t i) {
    Rng rng = sample_rng(options.seed, i);
    const auto ensemble = sample_ensemble(xi, horizon, rng, options.seed);
    if (exit_time(ensemble) != kNeverExited) return WeightedSample{0.0, 0.0};
    const double w = vandermonde(end_positions(ensemble)) / h0;
    return WeightedSample{w == 0.0 ? 0.0 : w * f(ensemble), w};
  });
}

EstimatorResult dmr_estimator(const Configuration& xi, const OccupationFunctional& f,
                              double horizon, const SimulationOptions& options) {
  check_horizon(f, horizon, "dmr_estimator");
  const MartingaleTable table(xi, horizon, options.tail_eps);
  const std::size_t n = xi.size();
  return estimate(options, [&](std::uint64_t i) {
    Rng rng = sample_rng(options.seed, i);
    const auto ensemble = sample_ensemble(xi, horizon, rng, options.seed);
    std::vector<double> matrix;
    matrix.reserve(n * n);
    for (const auto& p : ensemble.paths()) {
      const auto row = table.row(p.end_position());
      matrix.insert(matrix.end(), row.begin(), row.end());
    }
    const double w = determinant(matrix, n);
    return WeightedSample{w == 0.0 ? 0.0 : w * f(ensemble), w};
  });
}

EstimatorResult exit_cancellation_estimator(const Configuration& xi, double horizon,
                                            const SimulationOptions& options) {
  check_horizon(OccupationFunctional{}, horizon, "exit_cancellation_estimator");
  const double h0 = vandermonde_of(xi);
  return estimate(options, [&](std::uint64_t i) {
    Rng rng = sample_rng(options.seed, i);
    const auto ensemble = sample_ensemble(xi, horizon, rng, options.seed);
    if (exit_time(ensemble) == kNeverExited) return WeightedSample{0.0, 0.0};
    const double w = vandermonde(end_positions(ensemble)) / h0;
    return WeightedSample{w, w};
  });
}

CorrelationTable empirical_correlation(const Configuration& xi,
                                       std::span<const MultiTimePointSet> point_sets,
                                       Estimator estimator, const SimulationOptions& options,
                                       double horizon) {
  if (horizon < 0.0) {
    horizon = 0.0;
    for (const auto& pts : point_sets) horizon = std::max(horizon, pts.max_time());
  }
  CorrelationTable table;
  table.reserve(point_sets.size());
  for (const auto& pts : point_sets) {
    const OccupationFunctional f(pts);
    const auto r = estimator == Estimator::HTransform
                       ? h_transform_estimator(xi, f, horizon, options)
                       : dmr_estimator(xi, f, horizon, options);
    table.push_back(CorrelationEntry{pts, r.mean, r.std_error});
  }
  return table;
}

}  // namespace ncrw
