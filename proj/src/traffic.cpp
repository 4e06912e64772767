#include "rwdrift/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "rwdrift/error.hpp"

namespace rwdrift {
namespace {

constexpr double kRecurrenceGuard = 1e-9;
constexpr double kFormulaTolerance = 1e-10;
constexpr double kNewtonStart = 1e-6;

inline std::size_t inv(std::size_t slot) { return slot ^ 1U; }

// One Jacobi sweep of the traffic map. Monotone in z with nonnegative
// coefficients, so iterates from 0 increase to the minimal fixed point.
void traffic_map(const std::vector<double>& p, const std::vector<double>& z,
                 std::vector<double>& out) {
  const std::size_t n = p.size();
  double y = 0.0;
  for (std::size_t j = 0; j < n; ++j) y += p[j] * z[inv(j)];
  for (std::size_t i = 0; i < n; ++i) {
    const double s = y - p[i] * z[inv(i)];
    out[i] = p[i] + z[i] * s;
  }
}

double residual_raw(const std::vector<double>& p, std::span<const double> z) {
  const std::size_t n = p.size();
  double y = 0.0;
  for (std::size_t j = 0; j < n; ++j) y += p[j] * z[inv(j)];
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double s = y - p[i] * z[inv(i)];
    worst = std::max(worst, std::abs(z[i] - p[i] - z[i] * s));
  }
  return worst;
}

bool newton_polish(const std::vector<double>& p, std::vector<double>& z, double tol,
                   std::size_t& steps) {
  const std::size_t n = p.size();
  std::vector<double> candidate = z;
  double best = residual_raw(p, z);
  for (int it = 0; it < 30 && best > tol; ++it) {
    double y = 0.0;
    for (std::size_t j = 0; j < n; ++j) y += p[j] * candidate[inv(j)];
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd f(n);
    for (std::size_t i = 0; i < n; ++i) {
      const double s = y - p[i] * candidate[inv(i)];
      f(i) = candidate[i] - p[i] - candidate[i] * s;
      jac(i, i) += 1.0 - s;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == inv(i)) continue;
        jac(i, k) -= candidate[i] * p[inv(k)];
      }
    }
    const Eigen::VectorXd delta = jac.partialPivLu().solve(f);
    for (std::size_t i = 0; i < n; ++i) candidate[i] -= delta(i);
    ++steps;
    if (std::any_of(candidate.begin(), candidate.end(),
                    [](double v) { return !(v > 0.0 && v < 1.0); })) {
      return false;
    }
    const double r = residual_raw(p, candidate);
    if (!(r < best)) break;
    best = r;
    z = candidate;
  }
  return best <= tol;
}

void finish_solution(const StepDistribution& p, TrafficSolution& sol) {
  const std::size_t n = p.probs().size();
  sol.q.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = sol.z[i];
    const double zm = sol.z[inv(i)];
    sol.q[i] = zi * (1.0 - zm) / (1.0 - zi * zm);
  }
  sol.y = 0.0;
  for (std::size_t j = 0; j < n; ++j) sol.y += p[j] * sol.z[inv(j)];
  sol.a = 1.0 / (1.0 - sol.y);
  if (sol.d == 1) {
    // 1 - q_i - q_{-i} vanishes here; keep drift = B/A by extension.
    sol.b = sol.a * std::abs(p[0] - p[1]);
  } else {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double qi = sol.q[i];
      const double qm = sol.q[inv(i)];
      s += qi * qm * (1.0 - 2.0 * qi) / (1.0 - qi - qm);
    }
    sol.b = 1.0 - s;
  }
  sol.residual = traffic_residual(p, sol.z);
}

}  // namespace

double traffic_residual(const StepDistribution& p, std::span<const double> z) {
  return residual_raw(p.probs(), z);
}

TrafficSolution solve_traffic(const StepDistribution& p, const TrafficOptions& opts) {
  TrafficSolution sol;
  sol.d = p.d();
  const std::size_t n = p.probs().size();

  if (p.d() == 1) {
    if (std::abs(p[0] - p[1]) <= kRecurrenceGuard) {
      throw Error(ErrorCode::kRecurrentWalk, "d = 1 with p_1 = p_{-1}");
    }
    // z = p_i + p_{-i} z^2 has roots 1 and p_i / p_{-i}; take the smaller.
    sol.z = {std::min(1.0, p[0] / p[1]), std::min(1.0, p[1] / p[0])};
    finish_solution(p, sol);
    return sol;
  }

  std::vector<double> z(n, 0.0), next(n, 0.0);
  double residual = 1.0;
  std::size_t it = 0;
  bool polished = false;
  while (it < opts.max_iterations) {
    traffic_map(p.probs(), z, next);
    ++it;
    z.swap(next);
    residual = traffic_residual(p, z);
    if (residual <= opts.tol) break;
    if (std::any_of(z.begin(), z.end(), [](double v) { return v >= 1.0; })) {
      throw Error(ErrorCode::kRecurrentWalk, "first-passage iterate reached 1");
    }
    if (opts.newton_polish && !polished && residual < kNewtonStart) {
      polished = true;
      std::vector<double> trial = z;
      if (newton_polish(p.probs(), trial, opts.tol, sol.newton_steps)) {
        z = trial;
        residual = traffic_residual(p, z);
        break;
      }
    }
  }
  sol.iterations = it;
  if (residual > opts.tol) {
    throw Error(ErrorCode::kNoConvergence,
                "traffic residual " + std::to_string(residual) + " after " +
                    std::to_string(it) + " iterations");
  }
  sol.z = std::move(z);
  for (double v : sol.z) {
    if (!(v > 0.0 && v < 1.0)) {
      throw Error(ErrorCode::kRecurrentWalk, "first-passage probability outside (0,1)");
    }
  }
  finish_solution(p, sol);
  return sol;
}

double drift_exact(const TrafficSolution& sol, const StepDistribution& p) {
  const std::size_t n = p.probs().size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += p[i] * sol.q[inv(i)];
  const double drift = 1.0 - 2.0 * s;
  const double check = sol.d == 1 ? std::abs(p[0] - p[1]) : sol.b / sol.a;
  if (std::abs(drift - check) > kFormulaTolerance) {
    throw Error(ErrorCode::kFormulaMismatch,
                "escape formula " + std::to_string(drift) + " vs B/A " + std::to_string(check));
  }
  return drift;
}

double entropy_exact(const TrafficSolution& sol, const StepDistribution& p) {
  if (sol.d < 2) throw Error(ErrorCode::kDomainViolation, "entropy formula needs d >= 2");
  const std::size_t n = p.probs().size();
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double qm = sol.q[inv(i)];
    h += p[i] * (qm * std::log(sol.z[inv(i)]) - (1.0 - qm) * std::log(sol.z[i]));
  }
  return h;
}

double entropy_from_rn(const TrafficSolution& sol, const StepDistribution& p) {
  if (sol.d < 2) throw Error(ErrorCode::kDomainViolation, "entropy formula needs d >= 2");
  double h = 0.0;
  for (std::size_t s = 0; s < p.probs().size(); ++s) {
    const Letter g = Letter::from_slot(s);
    double integral = 0.0;
    // Integrate over the boundary by first letter.
    for (std::size_t f = 0; f < p.probs().size(); ++f) {
      const Letter first = Letter::from_slot(f);
      integral += sol.q[f] * std::log(rn_derivative(sol, g, first));
    }
    h -= p[s] * integral;
  }
  return h;
}

StepDistribution p_from_q(std::span<const double> q) {
  const std::size_t n = q.size();
  if (n < 2 || n % 2 != 0) throw Error(ErrorCode::kDomainViolation, "q needs 2d entries");
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(q[i] > 0.0)) throw Error(ErrorCode::kDomainViolation, "q_i must be positive");
    if (!(q[i] + q[inv(i)] < 1.0)) {
      throw Error(ErrorCode::kDomainViolation, "q_i + q_{-i} must be < 1");
    }
    sum += q[i];
  }
  if (std::abs(sum - 1.0) > 1e-10) throw Error(ErrorCode::kDomainViolation, "q must sum to 1");

  double a = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    a += q[i] * q[inv(i)] / (1.0 - q[i] - q[inv(i)]);
  }
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double zi = q[i] / (1.0 - q[inv(i)]);
    const double zm = q[inv(i)] / (1.0 - q[i]);
    p[i] = zi / (a * (1.0 - zi * zm));
  }
  return StepDistribution::validate(p);
}

std::vector<double> symmetric_p_from_q(std::span<const double> q_half) {
  const DriftEntropyReport unused = symmetric_report(q_half);  // validates
  (void)unused;
  double a = 1.0;
  for (double qi : q_half) a += 2.0 * qi * qi / (1.0 - 2.0 * qi);
  std::vector<double> p;
  for (double qi : q_half) p.push_back(qi * (1.0 - qi) / (a * (1.0 - 2.0 * qi)));
  return p;
}

DriftEntropyReport symmetric_report(std::span<const double> q_half) {
  if (q_half.empty()) throw Error(ErrorCode::kDomainViolation, "empty q");
  double sum = 0.0;
  for (double qi : q_half) {
    if (!(qi > 0.0 && qi < 0.5)) {
      throw Error(ErrorCode::kDomainViolation, "symmetric q_i must lie in (0, 1/2)");
    }
    sum += qi;
  }
  if (std::abs(sum - 0.5) > 1e-12) {
    throw Error(ErrorCode::kDomainViolation, "symmetric q must sum to 1/2");
  }
  double a = 1.0, b = 1.0, s = 0.0;
  for (double qi : q_half) {
    a += 2.0 * qi * qi / (1.0 - 2.0 * qi);
    b -= 2.0 * qi * qi;
    s += qi * (1.0 - qi) * std::log(qi / (1.0 - qi));
  }
  DriftEntropyReport r;
  r.drift = b / a;
  r.entropy = -2.0 / a * s;
  r.volume_entropy = volume_entropy_free(static_cast<int>(q_half.size()));
  r.fundamental_slack = r.drift * r.volume_entropy - r.entropy;
  return r;
}

DriftEntropyReport free_report(const StepDistribution& p, const TrafficOptions& opts) {
  DriftEntropyReport r;
  r.volume_entropy = volume_entropy_free(p.d());
  if (p.d() == 1) {
    r.drift = std::abs(p[0] - p[1]);
    r.entropy = 0.0;
  } else {
    const TrafficSolution sol = solve_traffic(p, opts);
    r.drift = drift_exact(sol, p);
    r.entropy = entropy_exact(sol, p);
  }
  r.fundamental_slack = r.drift * r.volume_entropy - r.entropy;
  return r;
}

double cylinder_mass(const TrafficSolution& sol, const ReducedWord& w) {
  if (w.empty()) return 1.0;
  double m = 1.0;
  for (Letter x : w.letters()) m *= sol.z_of(x);
  return m * (1.0 - sol.q_of(w.back().inverse()));
}

double rn_derivative(const TrafficSolution& sol, Letter g, Letter first) {
  if (first == g.inverse()) return 1.0 / sol.z_of(g.inverse());
  return sol.z_of(g);
}

double green_distance(const TrafficSolution& sol, const ReducedWord& w) {
  double d = 0.0;
  for (Letter x : w.letters()) d -= std::log(sol.z_of(x));
  return d;
}

double volume_entropy_free(int d) {
  if (d < 1) throw Error(ErrorCode::kDomainViolation, "d must be >= 1");
  return std::log(2.0 * d - 1.0);
}

}  // namespace rwdrift
