#ifndef NCRW_TYPES_HPP
#define NCRW_TYPES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncrw {

/// Lattice coordinate on Z.
using Site = std::int64_t;

/// Argument of every kernel: a time t >= 0 and a lattice site.
struct SpaceTimePoint {
  double t = 0.0;
  Site x = 0;

  friend bool operator==(const SpaceTimePoint&, const SpaceTimePoint&) = default;
};

/// Raised when a truncated sum or a quadrature fails to meet its tolerance.
/// Carries the operation name and the truncation parameter that gave out.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(std::string operation, std::string parameter,
                   const std::string& detail);

  const std::string& operation() const noexcept { return operation_; }
  const std::string& parameter() const noexcept { return parameter_; }

 private:
  std::string operation_;
  std::string parameter_;
};

/// A finite initial configuration without multiple points:
/// u_1 < u_2 < ... < u_N, N >= 1.
class Configuration {
 public:
  explicit Configuration(std::vector<Site> sites);

  /// aZ intersected with [-half_width, half_width].
  static Configuration lattice_window(int spacing, Site half_width);

  std::span<const Site> sites() const noexcept { return sites_; }
  std::size_t size() const noexcept { return sites_.size(); }
  Site operator[](std::size_t i) const { return sites_[i]; }
  Site front() const noexcept { return sites_.front(); }
  Site back() const noexcept { return sites_.back(); }
  bool contains(Site x) const noexcept;

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Site> sites_;
};

/// Equidistant infinite configuration aZ with spacing a >= 2.
class LatticeSpec {
 public:
  explicit LatticeSpec(int spacing);

  int spacing() const noexcept { return a_; }
  /// Particle density 1/a.
  double density() const noexcept { return 1.0 / a_; }

 private:
  int a_;
};

/// Normalization convention of a correlation kernel. The two differ by the
/// factor exp(s - t), which cancels in every correlation determinant.
enum class Gauge {
  Probability,  ///< every term built from genuine transition probabilities
  Paper,        ///< literal closed forms, Probability * exp(s - t)
};

}  // namespace ncrw

#endif  // NCRW_TYPES_HPP
