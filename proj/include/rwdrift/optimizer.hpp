#pragma once

// Optimisation and smoothness diagnostics over laws on F_d.

#include <cstdint>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwdrift/group.hpp"

namespace rwdrift {

enum class Objective { kDrift, kEntropy };
Objective parse_objective(std::string_view name);

// Drift or entropy of the symmetric law with p_i = p_{-i} = half[i].
double symmetric_objective(Objective obj, std::span<const double> half);

struct OptimizationResult {
  std::vector<double> argmax;  // half-vector, sums to 1/2
  double value = 0.0;
  double gradient_norm = 0.0;
  std::size_t iterations = 0;  // summed over starts
  bool starts_agree = true;
  double start_spread = 0.0;   // max distance between start results
  // min over all iterates of l * v - h (entropy runs only; 0 otherwise)
  double min_fundamental_slack = 0.0;
  std::vector<std::vector<double>> start_results;

  nlohmann::json to_json() const;
};

struct OptimizerOptions {
  double tol = 1e-6;
  int starts = 8;
  std::uint64_t seed = 7;
  std::size_t max_iterations = 20'000;
  double fd_step = 1e-5;
  double barrier = 1e-10;
};

// Projected gradient ascent on {half > 0, sum = 1/2}. Throws
// kMultiStartDisagreement if the starts do not agree within tol.
OptimizationResult maximize_symmetric(Objective obj, int d, const OptimizerOptions& opts = {});

// Central-difference gradient of the objective restricted to the symmetric
// simplex (tangent projection), with one Richardson step.
std::vector<double> symmetric_gradient(Objective obj, std::span<const double> half, double h);

// 16 A q^3 + 4 q^2 (lambda A^2 - 4A - B) + 4 q (-lambda A^2 + A + B) + lambda A^2
double lagrange_cubic(double a, double b, double lambda, double q);
double lagrange_cubic_dq(double a, double b, double lambda, double q);
// Number of roots of the cubic in [0, 1/2). Requires 0 < B < 1 < A.
int root_count(double a, double b, double lambda);

struct ConcavityViolation {
  std::vector<double> pa;
  std::vector<double> pb;
  double t = 0.5;
  double gap = 0.0;  // f(mix) - mix of f; negative means a violation
};

struct ConcavityReport {
  int d = 0;
  std::size_t chords = 0;
  std::size_t evaluations = 0;
  std::vector<ConcavityViolation> violations;     // gap < -tol
  std::vector<ConcavityViolation> indeterminate;  // -tol <= gap < 0
  double min_gap = 0.0;

  nlohmann::json to_json() const;
};

struct ConcavityOptions {
  std::size_t chords = 1000;
  int grid = 0;  // extra interior points per chord besides the midpoint
  double tol = 1e-9;
  std::uint64_t seed = 11;
  Objective objective = Objective::kDrift;
};

ConcavityReport concavity_probe(int d, const ConcavityOptions& opts = {});

struct SweepRow {
  double t = 0.0;
  double drift = 0.0;
  double entropy = 0.0;
  double d1_drift = 0.0;
  double d2_drift = 0.0;
  bool kink = false;
};

// Evaluates the segment (1 - t) pa + t pb on grid_size points and flags
// isolated spikes of the scaled second difference of the drift.
std::vector<SweepRow> sweep_line(const StepDistribution& pa, const StepDistribution& pb,
                                 int grid_size);
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);
std::size_t kink_count(const std::vector<SweepRow>& rows);

}  // namespace rwdrift
