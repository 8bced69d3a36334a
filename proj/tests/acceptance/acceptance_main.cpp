// Runs every acceptance criterion and prints one PASS/FAIL line for each.
// Usage: ncrw_acceptance [path-to-ncrw-cli]
// With a CLI path, criterion 10 runs `ncrw selftest` end to end.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ncrw/validation/acceptance.hpp"

namespace {

using ncrw::validation::CriterionResult;

CriterionResult selftest_end_to_end(const std::string& cli) {
  CriterionResult r;
  r.id = 10;
  r.name = "ncrw selftest exits 0 within 2 min single-threaded";
  const std::string command = "\"" + cli + "\" --threads 1 selftest > /dev/null 2>&1";
  const auto start = std::chrono::steady_clock::now();
  const int status = std::system(command.c_str());
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.passed = code == 0 && r.seconds < 120.0;
  std::ostringstream d;
  d << "exit code " << code << " after " << r.seconds << " s";
  r.detail = d.str();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  namespace v = ncrw::validation;
  const unsigned threads = std::max(1u, std::thread::hardware_concurrency());

  std::vector<CriterionResult> results;
  auto report = [&](CriterionResult r) {
    std::cout << v::format_result(r) << std::endl;
    results.push_back(std::move(r));
  };
  report(v::check_transition_probability());
  report(v::check_martingale_identities());
  report(v::check_determinant_identity());
  report(v::check_projection());
  report(v::check_gauge_invariance());
  report(v::check_monte_carlo(threads));
  report(v::check_finite_to_lattice());
  report(v::check_relaxation());
  report(v::check_stationary_identities());
  if (argc > 1) {
    report(selftest_end_to_end(argv[1]));
  } else {
    CriterionResult r;
    r.id = 10;
    r.name = "ncrw selftest exits 0 within 2 min single-threaded";
    r.detail = "no CLI path given";
    report(r);
  }

  int failed = 0;
  for (const auto& r : results) failed += r.passed ? 0 : 1;
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed")
            << std::endl;
  return failed == 0 ? 0 : 1;
}
