#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <queue>
#include <string>
#include <vector>

#include "ncrw/types.hpp"
#include "summation.hpp"

namespace ncrw::detail {
namespace {

struct Panel {
  double a;
  double b;
  double value;
  double error;
  double l1;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, 61>;
  // Rule applied on [-1, 1]; the Jacobian goes into the integrand.
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  auto g = [&](double u) { return half * f(mid + half * u); };
  double error = 0.0;
  double l1 = 0.0;
  const double value = Rule::integrate(g, -1.0, 1.0, 0, 0.0, &error, &l1);
  return {a, b, value, error, l1};
}

}  // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, std::string_view operation, int max_panels) {
  if (a == b) return {};
  std::priority_queue<Panel> panels;
  panels.push(evaluate_panel(f, a, b));
  double error = panels.top().error;
  double l1 = panels.top().l1;
  int count = 1;
  if (!std::isfinite(l1) || !std::isfinite(panels.top().value)) {
    throw ConvergenceError(std::string(operation), "overflow",
                           "integrand overflows double range");
  }

  while (error > std::max(rel_tol * l1, 1e-300)) {
    if (count >= max_panels) {
      throw ConvergenceError(std::string(operation), "quadrature panels",
                             "adaptive quadrature did not reach tolerance (error " +
                                 std::to_string(error) + ")");
    }
    const Panel worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const Panel left = evaluate_panel(f, worst.a, mid);
    const Panel right = evaluate_panel(f, mid, worst.b);
    error += left.error + right.error - worst.error;
    l1 += left.l1 + right.l1 - worst.l1;
    panels.push(left);
    panels.push(right);
    ++count;
  }

  // Re-sum so the result does not carry drift from the running updates.
  std::vector<Panel> all;
  all.reserve(panels.size());
  while (!panels.empty()) {
    all.push_back(panels.top());
    panels.pop();
  }
  std::sort(all.begin(), all.end(), [](const Panel& p, const Panel& q) { return p.a < q.a; });
  CompensatedSum value;
  CompensatedSum err;
  CompensatedSum norm;
  for (const auto& p : all) {
    value += p.value;
    err += p.error;
    norm += p.l1;
  }
  return {value.value(), err.value(), norm.value(), count};
}

}  // namespace ncrw::detail
