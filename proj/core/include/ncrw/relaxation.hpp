#ifndef NCRW_RELAXATION_HPP
#define NCRW_RELAXATION_HPP

#include <cstddef>
#include <vector>

#include "ncrw/kernels.hpp"
#include "ncrw/types.hpp"

namespace ncrw {

/// |K_{aZ}(s + tau, x; t + tau, y) - K_{1/a}(t - s, y - x)|, both kernels in
/// the probability gauge.
double relaxation_gap(const LatticeSpec& a, double s, Site x, double t, Site y, double tau,
                      const KernelOptions& options = {});

/// Translation-invariant part of the lattice kernel,
///   (1/(2 pi a)) int_{-pi}^{pi} e^{i lambda dx / a + dt (1 - cos(lambda/a))} d lambda.
double stationary_part(const LatticeSpec& a, double dt, Site dx, double rel_tol = 1e-13);

struct RemainderEvaluation {
  double value = 0.0;
  /// Largest e^{cos(theta/a) - cos(lambda/a)} over every quadrature node.
  double max_damping = 0.0;
  std::size_t nodes = 0;
};

/// Remainder R(s, x; t, y): the comb shifts m >= 1, whose frequencies theta
/// lie in pi < |theta| <= a pi.
double remainder_term(const LatticeSpec& a, double s, Site x, double t, Site y,
                      double rel_tol = 1e-13);

/// remainder_term plus the damping factor seen at the quadrature nodes.
RemainderEvaluation remainder_term_detailed(const LatticeSpec& a, double s, Site x, double t,
                                            Site y, double rel_tol = 1e-13);

struct Displacement {
  double dt = 0.0;
  Site dx = 0;
};

struct RelaxationRow {
  double tau = 0.0;
  double dt = 0.0;
  Site dx = 0;
  Site x = 0;
  double lattice_value = 0.0;
  double stationary_value = 0.0;
  double gap = 0.0;
};

struct RelaxationOptions {
  /// Sites x where each displacement is anchored, (s, x) = (tau, x).
  std::vector<Site> base_sites{0};
  /// Trend flags consider taus >= this value.
  double monotone_from = 4.0;
  unsigned threads = 1;
  KernelOptions kernel;
};

struct RelaxationReport {
  LatticeSpec a{2};
  std::vector<Displacement> displacements;
  std::vector<double> tau_grid;
  /// gaps[d][k]: max over base sites for displacement d at tau_grid[k].
  std::vector<std::vector<double>> gaps;
  /// Non-increasing from monotone_from onward, per displacement.
  std::vector<bool> monotone;
  /// Column-wise maxima over all displacements.
  std::vector<double> max_gap;
  bool max_gap_monotone = true;
  /// Every evaluated cell, ordered by base site, displacement, tau.
  std::vector<RelaxationRow> rows;
};

RelaxationReport relaxation_sweep(const LatticeSpec& a, std::vector<Displacement> displacements,
                                  std::vector<double> tau_grid,
                                  const RelaxationOptions& options = {});

}  // namespace ncrw

#endif  // NCRW_RELAXATION_HPP
