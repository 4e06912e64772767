#include "rwdrift/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>

#include "rwdrift/error.hpp"
#include "rwdrift/traffic.hpp"

namespace rwdrift {

Objective parse_objective(std::string_view name) {
  if (name == "drift") return Objective::kDrift;
  if (name == "entropy") return Objective::kEntropy;
  throw Error(ErrorCode::kConfigError, "unknown objective '" + std::string(name) + "'");
}

namespace {

std::vector<double> renormalised_half(std::span<const double> half) {
  std::vector<double> x(half.begin(), half.end());
  const double s = std::accumulate(x.begin(), x.end(), 0.0);
  for (double& v : x) v *= 0.5 / s;
  return x;
}

DriftEntropyReport symmetric_eval(std::span<const double> half) {
  const auto x = renormalised_half(half);
  return free_report(StepDistribution::symmetric(x));
}

double pick(Objective obj, const DriftEntropyReport& r) {
  return obj == Objective::kDrift ? r.drift : r.entropy;
}

double norm(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

double max_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

std::vector<double> random_half(int d, std::mt19937_64& rng, double floor_mix) {
  std::exponential_distribution<double> ex(1.0);
  std::vector<double> x(d);
  double s = 0.0;
  for (double& v : x) s += (v = ex(rng));
  for (double& v : x) v = (1.0 - floor_mix) * 0.5 * v / s + floor_mix * 0.5 / d;
  return x;
}

}  // namespace

double symmetric_objective(Objective obj, std::span<const double> half) {
  return pick(obj, symmetric_eval(half));
}

std::vector<double> symmetric_gradient(Objective obj, std::span<const double> half, double h) {
  const std::size_t d = half.size();
  auto central = [&](std::size_t i, double step) {
    // Tangent direction e_i - (1/d) 1 keeps the sum at 1/2.
    std::vector<double> up(half.begin(), half.end()), dn(half.begin(), half.end());
    for (std::size_t k = 0; k < d; ++k) {
      const double u = (k == i ? 1.0 : 0.0) - 1.0 / static_cast<double>(d);
      up[k] += step * u;
      dn[k] -= step * u;
    }
    return (symmetric_objective(obj, up) - symmetric_objective(obj, dn)) / (2.0 * step);
  };
  std::vector<double> g(d);
  for (std::size_t i = 0; i < d; ++i) {
    g[i] = (4.0 * central(i, h / 2.0) - central(i, h)) / 3.0;
  }
  const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(d);
  for (double& v : g) v -= mean;
  return g;
}

OptimizationResult maximize_symmetric(Objective obj, int d, const OptimizerOptions& opts) {
  if (d < 2) throw Error(ErrorCode::kDomainViolation, "maximisation needs d >= 2");
  OptimizationResult res;
  res.min_fundamental_slack = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opts.seed);

  auto barrier_value = [&](const std::vector<double>& x, DriftEntropyReport* rep) {
    const DriftEntropyReport r = symmetric_eval(x);
    if (rep) *rep = r;
    double b = 0.0;
    for (double v : x) b += std::log(v);
    return pick(obj, r) + opts.barrier * b;
  };
  auto barrier_grad = [&](const std::vector<double>& x) {
    auto g = symmetric_gradient(obj, x, opts.fd_step);
    std::vector<double> bg(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) bg[i] = opts.barrier / x[i];
    const double mean = std::accumulate(bg.begin(), bg.end(), 0.0) / static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) g[i] += bg[i] - mean;
    return g;
  };

  for (int s = 0; s < opts.starts; ++s) {
    std::vector<double> x = random_half(d, rng, 0.2);
    DriftEntropyReport rep;
    double fx = barrier_value(x, &rep);
    res.min_fundamental_slack = std::min(res.min_fundamental_slack, rep.fundamental_slack);
    double step = 0.1;
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
      ++res.iterations;
      const auto g = barrier_grad(x);
      const double gn = norm(g);
      if (gn < 1e-10) break;
      // Longest step that stays strictly inside the simplex.
      double cap = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (g[i] < 0.0) cap = std::min(cap, -0.5 * x[i] / g[i]);
      }
      step = std::min(step * 2.0, cap);
      bool moved = false;
      while (step > 1e-16) {
        std::vector<double> y(x);
        for (std::size_t i = 0; i < x.size(); ++i) y[i] += step * g[i];
        const double fy = barrier_value(y, &rep);
        if (fy >= fx + 1e-4 * step * gn * gn) {
          x = renormalised_half(y);
          fx = fy;
          res.min_fundamental_slack = std::min(res.min_fundamental_slack, rep.fundamental_slack);
          moved = true;
          break;
        }
        step *= 0.5;
      }
      if (!moved) break;  // no further ascent resolvable at double precision
    }
    res.start_results.push_back(x);
  }

  for (const auto& a : res.start_results) {
    for (const auto& b : res.start_results) res.start_spread = std::max(res.start_spread, max_dist(a, b));
  }
  res.starts_agree = res.start_spread <= opts.tol;
  res.argmax.assign(d, 0.0);
  for (const auto& a : res.start_results) {
    for (int i = 0; i < d; ++i) res.argmax[i] += a[i] / static_cast<double>(res.start_results.size());
  }
  res.value = symmetric_objective(obj, res.argmax);
  res.gradient_norm = norm(symmetric_gradient(obj, res.argmax, opts.fd_step));
  if (!res.starts_agree) {
    throw Error(ErrorCode::kMultiStartDisagreement,
                "starts spread " + std::to_string(res.start_spread) + " > tol");
  }
  return res;
}

nlohmann::json OptimizationResult::to_json() const {
  return {{"argmax", argmax},
          {"value", value},
          {"gradient_norm", gradient_norm},
          {"iterations", iterations},
          {"starts_agree", starts_agree},
          {"start_spread", start_spread},
          {"min_fundamental_slack", min_fundamental_slack},
          {"start_results", start_results}};
}

double lagrange_cubic(double a, double b, double lambda, double q) {
  const double la2 = lambda * a * a;
  return 16.0 * a * q * q * q + 4.0 * q * q * (la2 - 4.0 * a - b) + 4.0 * q * (-la2 + a + b) + la2;
}

double lagrange_cubic_dq(double a, double b, double lambda, double q) {
  const double la2 = lambda * a * a;
  return 48.0 * a * q * q + 8.0 * q * (la2 - 4.0 * a - b) + 4.0 * (-la2 + a + b);
}

int root_count(double a, double b, double lambda) {
  if (!(0.0 < b && b < 1.0 && 1.0 < a)) {
    throw Error(ErrorCode::kDomainViolation, "root count needs 0 < B < 1 < A");
  }
  // G' has roots 1/2 and qc, so G is monotone between the breakpoints.
  const double qc = (-lambda * a * a + a + b) / (6.0 * a);
  std::vector<double> pts{0.0};
  if (qc > 0.0 && qc < 0.5) pts.push_back(qc);
  pts.push_back(0.5);
  int count = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double ga = lagrange_cubic(a, b, lambda, pts[i]);
    const double gb = lagrange_cubic(a, b, lambda, pts[i + 1]);
    if (ga == 0.0) {
      ++count;  // root at the left end; a root at qc is counted by the next piece
    } else if (gb != 0.0 && (ga < 0.0) != (gb < 0.0)) {
      ++count;
    }
  }
  return count;
}

nlohmann::json ConcavityReport::to_json() const {
  auto dump = [](const std::vector<ConcavityViolation>& vs) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : vs) arr.push_back({{"pa", v.pa}, {"pb", v.pb}, {"t", v.t}, {"gap", v.gap}});
    return arr;
  };
  return {{"d", d},
          {"chords", chords},
          {"evaluations", evaluations},
          {"violations", dump(violations)},
          {"indeterminate", dump(indeterminate)},
          {"min_gap", min_gap}};
}

ConcavityReport concavity_probe(int d, const ConcavityOptions& opts) {
  if (d < 2) throw Error(ErrorCode::kDomainViolation, "concavity probe needs d >= 2");
  ConcavityReport rep;
  rep.d = d;
  rep.chords = opts.chords;
  rep.min_gap = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(opts.seed);
  std::vector<double> ts{0.5};
  for (int k = 1; k <= opts.grid; ++k) {
    const double t = static_cast<double>(k) / (opts.grid + 1);
    if (t != 0.5) ts.push_back(t);
  }
  for (std::size_t c = 0; c < opts.chords; ++c) {
    auto pa = random_half(d, rng, 0.0);
    auto pb = random_half(d, rng, 0.0);
    for (auto* p : {&pa, &pb}) {
      for (double& v : *p) v = std::max(v, 1e-9);
      *p = renormalised_half(*p);
    }
    const double fa = symmetric_objective(opts.objective, pa);
    const double fb = symmetric_objective(opts.objective, pb);
    rep.evaluations += 2;
    for (double t : ts) {
      std::vector<double> mix(d);
      for (int i = 0; i < d; ++i) mix[i] = (1.0 - t) * pa[i] + t * pb[i];
      const double gap = symmetric_objective(opts.objective, mix) - ((1.0 - t) * fa + t * fb);
      ++rep.evaluations;
      rep.min_gap = std::min(rep.min_gap, gap);
      if (gap < -opts.tol) {
        rep.violations.push_back({pa, pb, t, gap});
      } else if (gap < 0.0) {
        rep.indeterminate.push_back({pa, pb, t, gap});
      }
    }
  }
  return rep;
}

std::vector<SweepRow> sweep_line(const StepDistribution& pa, const StepDistribution& pb,
                                 int grid_size) {
  if (pa.d() != pb.d()) throw Error(ErrorCode::kInvalidSpec, "sweep endpoints differ in d");
  if (grid_size < 3) throw Error(ErrorCode::kConfigError, "sweep needs at least 3 points");
  const std::size_t n = static_cast<std::size_t>(grid_size);
  const double dt = 1.0 / static_cast<double>(n - 1);
  std::vector<SweepRow> rows(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) * dt;
    DriftEntropyReport r;
    if (k == 0) {
      r = free_report(pa);
    } else if (k + 1 == n) {
      r = free_report(pb);
    } else {
      std::vector<double> mix(pa.probs().size());
      for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = (1.0 - t) * pa[i] + t * pb[i];
      r = free_report(StepDistribution::validate(mix));
    }
    rows[k].t = k + 1 == n ? 1.0 : t;
    rows[k].drift = r.drift;
    rows[k].entropy = r.entropy;
  }
  std::vector<double> jump(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    if (k == 0) {
      rows[k].d1_drift = (rows[1].drift - rows[0].drift) / dt;
    } else if (k + 1 == n) {
      rows[k].d1_drift = (rows[k].drift - rows[k - 1].drift) / dt;
    } else {
      rows[k].d1_drift = (rows[k + 1].drift - rows[k - 1].drift) / (2.0 * dt);
      jump[k] = (rows[k + 1].drift - 2.0 * rows[k].drift + rows[k - 1].drift) / dt;
      rows[k].d2_drift = jump[k] / dt;
    }
  }
  // A kink shows up as a spike in the first-difference jump that dwarfs the
  // jump two points away on either side.
  std::vector<bool> flag(n, false);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    double ref = 0.0;
    bool have = false;
    if (k >= 3) ref = std::max(ref, std::abs(jump[k - 2])), have = true;
    if (k + 3 <= n) ref = std::max(ref, std::abs(jump[k + 2])), have = true;
    if (!have) continue;
    flag[k] = std::abs(jump[k]) > 1e-7 && std::abs(jump[k]) > 10.0 * ref;
  }
  for (std::size_t k = 1; k + 1 < n;) {
    if (!flag[k]) {
      ++k;
      continue;
    }
    std::size_t best = k, end = k;
    while (end + 1 < n && flag[end + 1]) {
      ++end;
      if (std::abs(jump[end]) > std::abs(jump[best])) best = end;
    }
    rows[best].kink = true;
    k = end + 1;
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "t,drift,entropy,d1_drift,d2_drift,kink_flag\n" << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.t << ',' << r.drift << ',' << r.entropy << ',' << r.d1_drift << ',' << r.d2_drift << ','
       << (r.kink ? 1 : 0) << '\n';
  }
}

std::size_t kink_count(const std::vector<SweepRow>& rows) {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.kink; }));
}

}  // namespace rwdrift
