#pragma once

// Closed forms for nearest-neighbour walks on the free group F_d.
//
// Notation follows the usual one for these walks: z_i = F(e, i) is the
// probability of ever reaching the letter i, q_i = nu([i]) is the harmonic
// measure of the one-letter cylinder. All vectors are indexed by Letter slot.

#include <cstddef>
#include <span>
#include <vector>

#include "rwdrift/group.hpp"

namespace rwdrift {

struct TrafficOptions {
  double tol = 1e-14;
  std::size_t max_iterations = 1'000'000;
  bool newton_polish = true;
};

struct TrafficSolution {
  int d = 0;
  std::vector<double> z;
  std::vector<double> q;
  double y = 0.0;  // sum_j p_j z_{-j}
  double a = 0.0;  // 1 / (1 - y)
  double b = 0.0;  // drift = b / a
  double residual = 0.0;
  std::size_t iterations = 0;
  std::size_t newton_steps = 0;

  double z_of(Letter x) const { return z[x.slot()]; }
  double q_of(Letter x) const { return q[x.slot()]; }
};

struct DriftEntropyReport {
  double drift = 0.0;
  double entropy = 0.0;
  double volume_entropy = 0.0;
  double fundamental_slack = 0.0;  // drift * volume_entropy - entropy
};

// Minimal nonnegative solution of z_i = p_i + z_i sum_{j != i} p_j z_{-j}.
// For d = 1 the quadratic is solved directly; the symmetric point is rejected
// with kRecurrentWalk.
TrafficSolution solve_traffic(const StepDistribution& p, const TrafficOptions& opts = {});

// max_i |z_i - p_i - z_i sum_{j != i} p_j z_{-j}|
double traffic_residual(const StepDistribution& p, std::span<const double> z);

// 1 - 2 sum_i p_i q_{-i}, cross-checked against B/A (throws kFormulaMismatch).
double drift_exact(const TrafficSolution& sol, const StepDistribution& p);
// sum_i p_i [q_{-i} ln z_{-i} - (1 - q_{-i}) ln z_i]; requires d >= 2.
double entropy_exact(const TrafficSolution& sol, const StepDistribution& p);
// -sum_g p(g) * integral of ln(d g^{-1}nu / d nu) d nu, assembled from
// rn_derivative and the one-letter cylinder masses.
double entropy_from_rn(const TrafficSolution& sol, const StepDistribution& p);

// Inverse map q -> p. Throws kDomainViolation outside the open domain.
StepDistribution p_from_q(std::span<const double> q);

// Symmetric laws parametrised by q_1..q_d with sum 1/2.
DriftEntropyReport symmetric_report(std::span<const double> q_half);
std::vector<double> symmetric_p_from_q(std::span<const double> q_half);

// Whole pipeline for one law. d = 1 reports drift |p_1 - p_{-1}| and zero
// entropy; the recurrent point gives drift 0.
DriftEntropyReport free_report(const StepDistribution& p, const TrafficOptions& opts = {});

// nu([w]) = z_{w_1} ... z_{w_k} (1 - q_{-w_k}).
double cylinder_mass(const TrafficSolution& sol, const ReducedWord& w);
// d g^{-1}nu / d nu at a boundary point whose first letter is `first`.
double rn_derivative(const TrafficSolution& sol, Letter g, Letter first);
// -ln F(e, w) = -sum_j ln z_{w_j}.
double green_distance(const TrafficSolution& sol, const ReducedWord& w);

double volume_entropy_free(int d);

}  // namespace rwdrift
