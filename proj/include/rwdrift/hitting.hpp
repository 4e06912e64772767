#pragma once

// Two-sided bounds on first-passage probabilities F(start, T) for walks on
// free groups and free products, from absorbing problems on word-length balls.
//
// Every element outside the ball of radius R around `start` lies in a branch
// that can only be re-entered through the ball state x it was left from. So
// leaving x by a step s and later hitting T has probability rho(s) * v(x),
// where rho(s) = F(s, e) is the one-level return probability. The lower bound
// uses rho = 0 (exit is a miss); the upper bound uses a certified
// supersolution u >= rho of the return-probability system.

#include <cstddef>
#include <vector>

#include "rwdrift/group.hpp"
#include "rwdrift/walk.hpp"

namespace rwdrift {

struct HittingBracket {
  double lower = 0.0;
  double upper = 1.0;
  int radius = 0;
  double width() const { return upper - lower; }
};

// Return probabilities rho(s) = F(s, e), one entry per walk step index.
struct ReturnBounds {
  std::vector<double> lower;  // monotone iterate from 0, a true lower bound
  std::vector<double> upper;  // satisfies Phi(upper) <= upper componentwise
  double epsilon = 0.0;       // inflation used for the certificate
  std::size_t iterations = 0;
};

ReturnBounds certify_return_bounds(const Walk& walk, double tol = 1e-15,
                                   std::size_t max_iterations = 1'000'000);

// Exact tree elimination of the two ball problems. Targets must lie within
// distance `radius` of `start`.
HittingBracket hitting_bracket(const Walk& walk, const std::vector<NormalFormWord>& targets,
                               const NormalFormWord& start, int radius);
HittingBracket hitting_bracket(const Walk& walk, const ReturnBounds& rho,
                               const std::vector<NormalFormWord>& targets,
                               const NormalFormWord& start, int radius);
HittingBracket hitting_bracket(const StepDistribution& p, const std::vector<ReducedWord>& targets,
                               const ReducedWord& start, int radius);

struct SweepOptions {
  double damping = 1.0;  // over-relaxation factor in (0, 2)
  double tol = 1e-14;
  std::size_t max_sweeps = 100'000;
  std::size_t state_cap = 5'000'000;
};

// Same bracket from damped Gauss-Seidel sweeps over the enumerated ball.
// Slower; used to cross-check the elimination at small radii.
HittingBracket hitting_bracket_sweep(const Walk& walk, const std::vector<NormalFormWord>& targets,
                                     const NormalFormWord& start, int radius,
                                     const SweepOptions& opts = {});

// Radius doubles from `initial_radius` until the width is below tol.
// Targets must lie within the initial radius. Throws kNoConvergence.
HittingBracket hitting_bracket_adaptive(const Walk& walk,
                                        const std::vector<NormalFormWord>& targets,
                                        const NormalFormWord& start, double tol,
                                        int initial_radius = 10, int max_radius = 5120);

}  // namespace rwdrift
