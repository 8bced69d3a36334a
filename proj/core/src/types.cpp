#include "ncrw/types.hpp"

#include <algorithm>
#include <utility>

namespace ncrw {

ConvergenceError::ConvergenceError(std::string operation, std::string parameter,
                                   const std::string& detail)
    : std::runtime_error(operation + ": " + detail + " (parameter " + parameter +
                         ")"),
      operation_(std::move(operation)),
      parameter_(std::move(parameter)) {}

Configuration::Configuration(std::vector<Site> sites) : sites_(std::move(sites)) {
  if (sites_.empty()) {
    throw std::invalid_argument("Configuration: at least one site is required");
  }
  for (std::size_t i = 1; i < sites_.size(); ++i) {
    if (sites_[i] <= sites_[i - 1]) {
      throw std::invalid_argument(
          "Configuration: sites must be strictly increasing (no multiple points)");
    }
  }
}

Configuration Configuration::lattice_window(int spacing, Site half_width) {
  if (spacing < 1) throw std::invalid_argument("lattice_window: spacing must be >= 1");
  if (half_width < 0) throw std::invalid_argument("lattice_window: negative half width");
  std::vector<Site> sites;
  const Site kmax = half_width / spacing;
  for (Site k = -kmax; k <= kmax; ++k) sites.push_back(k * spacing);
  return Configuration(std::move(sites));
}

bool Configuration::contains(Site x) const noexcept {
  return std::binary_search(sites_.begin(), sites_.end(), x);
}

LatticeSpec::LatticeSpec(int spacing) : a_(spacing) {
  if (spacing < 2) {
    // a = 1 is the fully packed configuration, which never moves.
    throw std::invalid_argument("LatticeSpec: spacing a must be >= 2");
  }
}

}  // namespace ncrw
