#include "rwdrift/hitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include <Eigen/Dense>

#include "rwdrift/element_trie.hpp"
#include "rwdrift/error.hpp"

namespace rwdrift {

namespace {

// Unknowns rho(j, g) = F((j, g), e): every non-identity element of a finite
// factor, and the two unit steps of a Z factor.
class ReturnSystem {
 public:
  explicit ReturnSystem(const Walk& walk) : walk_(walk) {
    const auto& factors = walk.factors();
    steps_of_.resize(factors.size());
    for (std::size_t k = 0; k < walk.steps().size(); ++k) {
      steps_of_[walk.steps()[k].factor].push_back(k);
    }
    for (const auto& f : factors) {
      offset_.push_back(size_);
      size_ += f.is_finite() ? static_cast<std::size_t>(f.order() - 1) : 2;
    }
  }

  std::size_t size() const { return size_; }

  std::size_t unknown(int factor, std::int64_t value) const {
    const auto& f = walk_.factors()[factor];
    if (f.is_finite()) return offset_[factor] + static_cast<std::size_t>(value - 1);
    return offset_[factor] + (value > 0 ? 0 : 1);
  }

  std::size_t unknown_of_step(std::size_t k) const {
    return unknown(walk_.steps()[k].factor, walk_.steps()[k].value);
  }

  void apply(const std::vector<double>& r, std::vector<double>& out) const {
    const auto& steps = walk_.steps();
    const auto& factors = walk_.factors();
    out.assign(size_, 0.0);
    std::vector<double> own(factors.size(), 0.0);
    double total = 0.0;
    for (std::size_t k = 0; k < steps.size(); ++k) {
      const double v = steps[k].prob * r[unknown_of_step(k)];
      own[steps[k].factor] += v;
      total += v;
    }
    for (std::size_t j = 0; j < factors.size(); ++j) {
      const auto& f = factors[j];
      const double loop = total - own[j];
      const int jf = static_cast<int>(j);
      if (f.is_finite()) {
        for (int g = 1; g < f.order(); ++g) {
          double v = 0.0;
          for (std::size_t k : steps_of_[j]) {
            const std::int64_t gh = f.multiply(g, steps[k].value);
            v += steps[k].prob * (gh == 0 ? 1.0 : r[unknown(jf, gh)]);
          }
          const std::size_t u = unknown(jf, g);
          out[u] = v + loop * r[u];
        }
      } else {
        double pp = 0.0, pm = 0.0;
        for (std::size_t k : steps_of_[j]) (steps[k].value > 0 ? pp : pm) += steps[k].prob;
        const std::size_t up = unknown(jf, 1), um = unknown(jf, -1);
        out[up] = pm + pp * r[up] * r[up] + loop * r[up];
        out[um] = pp + pm * r[um] * r[um] + loop * r[um];
      }
    }
  }

 private:
  const Walk& walk_;
  std::vector<std::vector<std::size_t>> steps_of_;
  std::vector<std::size_t> offset_;
  std::size_t size_ = 0;
};

struct Affine {
  double c = 0.0;  // constant part
  double d = 0.0;  // coefficient of v(base)
};

// Solves the ball problem by eliminating cones bottom-up. A cone is the set
// of ball elements x * (j, g) * ... hanging off a base x whose last block is
// not in factor j; its contribution to the equation at x is affine in v(x).
class ConeElimination {
 public:
  ConeElimination(const Walk& walk, std::vector<double> exit_weight, int radius)
      : walk_(walk), exit_(std::move(exit_weight)), radius_(radius) {
    const auto& steps = walk.steps();
    steps_of_.resize(walk.rank());
    for (std::size_t k = 0; k < steps.size(); ++k) steps_of_[steps[k].factor].push_back(k);
    free_.assign(walk.rank(), std::vector<Affine>(static_cast<std::size_t>(radius) + 1));
    free_total_.assign(static_cast<std::size_t>(radius) + 1, Affine{});
    const std::vector<const NormalFormWord*> none;
    for (int b = 0; b <= radius; ++b) {
      for (std::size_t j = 0; j < walk.rank(); ++j) {
        const Affine a = cone(static_cast<int>(j), b, none, 0);
        free_[j][b] = a;
        free_total_[b].c += a.c;
        free_total_[b].d += a.d;
      }
      built_ = b + 1;
    }
  }

  double solve(const std::vector<NormalFormWord>& targets) {
    std::vector<const NormalFormWord*> ts;
    for (const auto& t : targets) {
      if (t.empty()) return 1.0;
      ts.push_back(&t);
    }
    const Affine a = sub_cones(-1, radius_, ts, 0);
    return a.c / (1.0 - a.d);
  }

 private:
  // Sum of the cones at a base with `budget` remaining, over factors other
  // than `skip`. `targets` all extend the base by at least one block.
  Affine sub_cones(int skip, int budget, const std::vector<const NormalFormWord*>& targets,
                   std::size_t depth) {
    if (targets.empty() && ready(budget)) {
      Affine a = free_total_[budget];
      if (skip >= 0) {
        a.c -= free_[skip][budget].c;
        a.d -= free_[skip][budget].d;
      }
      return a;
    }
    Affine sum;
    for (std::size_t i = 0; i < walk_.rank(); ++i) {
      if (static_cast<int>(i) == skip) continue;
      std::vector<const NormalFormWord*> sub;
      for (auto* t : targets) {
        if (t->blocks()[depth].factor == static_cast<int>(i)) sub.push_back(t);
      }
      const Affine a = sub.empty() && ready(budget) ? free_[i][budget]
                                                    : cone(static_cast<int>(i), budget, sub, depth);
      sum.c += a.c;
      sum.d += a.d;
    }
    return sum;
  }

  bool ready(int budget) const { return budget < built_; }

  // Targets sitting at coset element `value`, split into "is this element"
  // and "lies deeper below it".
  static void split(const std::vector<const NormalFormWord*>& targets, std::size_t depth,
                    std::int64_t value, bool& hit, std::vector<const NormalFormWord*>& deeper) {
    hit = false;
    deeper.clear();
    for (auto* t : targets) {
      if (t->blocks()[depth].value != value) continue;
      if (t->block_length() == depth + 1) {
        hit = true;
      } else {
        deeper.push_back(t);
      }
    }
  }

  Affine cone(int j, int budget, const std::vector<const NormalFormWord*>& targets,
              std::size_t depth) {
    const auto& f = walk_.factors()[j];
    const auto& steps = walk_.steps();
    Affine out;
    if (budget < 1) {
      for (std::size_t k : steps_of_[j]) out.d += steps[k].prob * exit_[k];
      return out;
    }
    std::vector<const NormalFormWord*> deeper;
    bool hit = false;
    if (f.is_finite()) {
      const int m = f.order() - 1;
      Eigen::MatrixXd mat = Eigen::MatrixXd::Identity(m, m);
      Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(m, 2);
      for (int g = 1; g <= m; ++g) {
        split(targets, depth, g, hit, deeper);
        if (hit) {
          rhs(g - 1, 0) = 1.0;
          continue;
        }
        const Affine below = sub_cones(j, budget - 1, deeper, depth + 1);
        mat(g - 1, g - 1) -= below.d;
        rhs(g - 1, 0) += below.c;
        for (std::size_t k : steps_of_[j]) {
          const std::int64_t gh = f.multiply(g, steps[k].value);
          if (gh == 0) {
            rhs(g - 1, 1) += steps[k].prob;
          } else {
            mat(g - 1, gh - 1) -= steps[k].prob;
          }
        }
      }
      const Eigen::MatrixXd sol = mat.partialPivLu().solve(rhs);
      for (std::size_t k : steps_of_[j]) {
        out.c += steps[k].prob * sol(steps[k].value - 1, 0);
        out.d += steps[k].prob * sol(steps[k].value - 1, 1);
      }
    } else {
      for (std::size_t k : steps_of_[j]) {
        const int dir = steps[k].value > 0 ? 1 : -1;
        const Affine first = chain(j, dir, budget, targets, depth);
        out.c += steps[k].prob * first.c;
        out.d += steps[k].prob * first.d;
      }
    }
    return out;
  }

  // Z factor: elements dir*1 .. dir*budget of the coset, solved as a
  // tridiagonal system (Thomas algorithm) for the value at dir*1.
  Affine chain(int j, int dir, int budget, const std::vector<const NormalFormWord*>& targets,
               std::size_t depth) {
    const auto& steps = walk_.steps();
    double away = 0.0, toward = 0.0, exit_w = 0.0;
    for (std::size_t k : steps_of_[j]) {
      if ((steps[k].value > 0) == (dir > 0)) {
        away += steps[k].prob;
        exit_w = exit_[k];
      } else {
        toward += steps[k].prob;
      }
    }
    const std::size_t n = static_cast<std::size_t>(budget);
    std::vector<double> lo(n, 0.0), di(n, 1.0), up(n, 0.0), r0(n, 0.0), r1(n, 0.0);
    std::vector<const NormalFormWord*> deeper;
    bool hit = false;
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t value = dir * static_cast<std::int64_t>(i + 1);
      split(targets, depth, value, hit, deeper);
      if (hit) {
        r0[i] = 1.0;
        continue;
      }
      const Affine below = sub_cones(j, budget - static_cast<int>(i) - 1, deeper, depth + 1);
      di[i] = 1.0 - below.d - (i + 1 == n ? away * exit_w : 0.0);
      r0[i] = below.c;
      if (i == 0) {
        r1[i] = toward;
      } else {
        lo[i] = -toward;
      }
      if (i + 1 < n) up[i] = -away;
    }
    // Forward elimination, then back substitution for both right-hand sides.
    for (std::size_t i = 1; i < n; ++i) {
      const double w = lo[i] / di[i - 1];
      di[i] -= w * up[i - 1];
      r0[i] -= w * r0[i - 1];
      r1[i] -= w * r1[i - 1];
    }
    double x0 = r0[n - 1] / di[n - 1];
    double x1 = r1[n - 1] / di[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) {
      x0 = (r0[i] - up[i] * x0) / di[i];
      x1 = (r1[i] - up[i] * x1) / di[i];
    }
    return {x0, x1};
  }

  const Walk& walk_;
  std::vector<double> exit_;
  int radius_;
  std::vector<std::vector<std::size_t>> steps_of_;
  std::vector<std::vector<Affine>> free_;
  std::vector<Affine> free_total_;
  int built_ = 0;  // target-free cones are tabulated for budgets below this
};

std::vector<NormalFormWord> translate(const Walk& walk, const std::vector<NormalFormWord>& targets,
                                      const NormalFormWord& start, int radius) {
  const NormalFormWord inv = walk.inverse(start);
  std::vector<NormalFormWord> out;
  for (const auto& t : targets) {
    if (!t.is_valid(walk.factors())) throw Error(ErrorCode::kInvalidSpec, "target is not a normal form");
    NormalFormWord x = walk.multiply(inv, t);
    if (walk.word_length(x) > radius) {
      throw Error(ErrorCode::kInvalidSpec, "target " + t.to_string() + " lies outside the ball");
    }
    out.push_back(std::move(x));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double solve_ball(const Walk& walk, const std::vector<double>& exit_weight,
                  const std::vector<NormalFormWord>& translated, int radius) {
  ConeElimination elim(walk, exit_weight, radius);
  return elim.solve(translated);
}

// Bounds are computed in round-to-nearest; widen by a few ulps so the
// bracket still encloses the exact value once truncation error is below that.
HittingBracket widened(HittingBracket b) {
  const double slack = 16.0 * std::numeric_limits<double>::epsilon();
  b.lower = std::max(0.0, b.lower - slack * b.lower);
  b.upper = std::min(1.0, b.upper + slack * b.upper);
  return b;
}

}  // namespace

ReturnBounds certify_return_bounds(const Walk& walk, double tol, std::size_t max_iterations) {
  ReturnSystem sys(walk);
  const std::size_t n = sys.size();
  std::vector<double> r(n, 0.0), next;
  ReturnBounds out;
  for (;;) {
    sys.apply(r, next);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) change = std::max(change, next[i] - r[i]);
    r.swap(next);
    if (++out.iterations >= max_iterations) {
      throw Error(ErrorCode::kNoConvergence, "return-probability iteration did not settle");
    }
    if (change <= tol) break;
  }

  // Direction v = (I - J)^{-1} 1 satisfies J v = v - 1 < v, so a small step
  // along it turns the fixed point into a strict supersolution.
  std::vector<double> base, bumped;
  sys.apply(r, base);
  Eigen::MatrixXd jac(n, n);
  const double h = 1e-7;
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<double> rb = r;
    rb[b] += h;
    sys.apply(rb, bumped);
    for (std::size_t a = 0; a < n; ++a) jac(a, b) = (bumped[a] - base[a]) / h;
  }
  const Eigen::VectorXd dir =
      (Eigen::MatrixXd::Identity(n, n) - jac).partialPivLu().solve(Eigen::VectorXd::Ones(n));
  if (!(dir.minCoeff() > 0.0)) {
    throw Error(ErrorCode::kNoConvergence, "return-probability system is not contracting");
  }
  const Eigen::VectorXd v = dir / dir.maxCoeff();

  std::vector<double> u(n), phi;
  for (double eps = 1e-12; eps <= 1e-4 * 1.0001; eps *= 10.0) {
    for (std::size_t i = 0; i < n; ++i) u[i] = r[i] + eps * v(static_cast<Eigen::Index>(i));
    sys.apply(u, phi);
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) ok = ok && phi[i] <= u[i];
    if (ok) {
      out.epsilon = eps;
      out.lower.resize(walk.steps().size());
      out.upper.resize(walk.steps().size());
      for (std::size_t k = 0; k < walk.steps().size(); ++k) {
        out.lower[k] = r[sys.unknown_of_step(k)];
        out.upper[k] = u[sys.unknown_of_step(k)];
      }
      return out;
    }
  }
  throw Error(ErrorCode::kNoConvergence, "could not certify an upper bound on return probabilities");
}

HittingBracket hitting_bracket(const Walk& walk, const ReturnBounds& rho,
                               const std::vector<NormalFormWord>& targets,
                               const NormalFormWord& start, int radius) {
  if (radius < 0) throw Error(ErrorCode::kInvalidSpec, "negative radius");
  const auto ts = translate(walk, targets, start, radius);
  HittingBracket b;
  b.radius = radius;
  b.lower = std::clamp(solve_ball(walk, std::vector<double>(walk.steps().size(), 0.0), ts, radius),
                       0.0, 1.0);
  b.upper = std::clamp(solve_ball(walk, rho.upper, ts, radius), b.lower, 1.0);
  return widened(b);
}

HittingBracket hitting_bracket(const Walk& walk, const std::vector<NormalFormWord>& targets,
                               const NormalFormWord& start, int radius) {
  return hitting_bracket(walk, certify_return_bounds(walk), targets, start, radius);
}

HittingBracket hitting_bracket(const StepDistribution& p, const std::vector<ReducedWord>& targets,
                               const ReducedWord& start, int radius) {
  std::vector<NormalFormWord> ts;
  for (const auto& t : targets) ts.push_back(to_normal_form(t));
  return hitting_bracket(Walk::free_group(p), ts, to_normal_form(start), radius);
}

HittingBracket hitting_bracket_sweep(const Walk& walk, const std::vector<NormalFormWord>& targets,
                                     const NormalFormWord& start, int radius,
                                     const SweepOptions& opts) {
  const auto ts = translate(walk, targets, start, radius);
  const ReturnBounds rho = certify_return_bounds(walk);
  const std::size_t k_steps = walk.steps().size();

  ElementTrie trie(walk);
  std::vector<char> is_target;
  for (const auto& t : ts) {
    const auto id = trie.intern(t);
    if (id >= is_target.size()) is_target.resize(id + 1, 0);
    is_target[id] = 1;
  }
  // Enumerate the ball breadth-first; ids outside the ball are exits.
  std::vector<ElementTrie::NodeId> states{ElementTrie::kRoot};
  std::vector<std::int32_t> index_of;
  auto idx = [&](ElementTrie::NodeId id) -> std::int32_t& {
    if (id >= index_of.size()) index_of.resize(id + 1, -1);
    return index_of[id];
  };
  idx(ElementTrie::kRoot) = 0;
  std::vector<std::int32_t> next;  // state * k_steps + k -> state or -1
  for (std::size_t s = 0; s < states.size(); ++s) {
    for (std::size_t k = 0; k < k_steps; ++k) {
      const auto y = trie.step(states[s], k);
      std::int32_t target = -1;
      if (trie.word_length(y) <= radius) {
        std::int32_t& slot = idx(y);
        if (slot < 0) {
          slot = static_cast<std::int32_t>(states.size());
          states.push_back(y);
          if (states.size() > opts.state_cap) {
            throw Error(ErrorCode::kMemoryBudgetExceeded, "ball has too many states");
          }
        }
        target = slot;
      }
      next.push_back(target);
    }
  }
  std::vector<char> absorbing(states.size(), 0);
  for (std::size_t s = 0; s < states.size(); ++s) {
    absorbing[s] = states[s] < is_target.size() && is_target[states[s]];
  }

  auto run = [&](const std::vector<double>& exit_weight) {
    std::vector<double> v(states.size(), 0.0);
    std::vector<double> stay(states.size(), 0.0);
    for (std::size_t s = 0; s < states.size(); ++s) {
      if (absorbing[s]) v[s] = 1.0;
      for (std::size_t k = 0; k < k_steps; ++k) {
        if (next[s * k_steps + k] < 0) stay[s] += walk.steps()[k].prob * exit_weight[k];
      }
    }
    for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      double change = 0.0;
      for (std::size_t s = 0; s < states.size(); ++s) {
        if (absorbing[s]) continue;
        double acc = 0.0;
        for (std::size_t k = 0; k < k_steps; ++k) {
          const auto y = next[s * k_steps + k];
          if (y >= 0) acc += walk.steps()[k].prob * v[y];
        }
        const double gs = acc / (1.0 - stay[s]);
        const double nv = (1.0 - opts.damping) * v[s] + opts.damping * gs;
        change = std::max(change, std::abs(nv - v[s]));
        v[s] = nv;
      }
      if (change < opts.tol) return v[0];
    }
    throw Error(ErrorCode::kNoConvergence, "ball sweep did not reach the residual target");
  };

  HittingBracket b;
  b.radius = radius;
  b.lower = std::clamp(run(std::vector<double>(k_steps, 0.0)), 0.0, 1.0);
  b.upper = std::clamp(run(rho.upper), b.lower, 1.0);
  return widened(b);
}

HittingBracket hitting_bracket_adaptive(const Walk& walk,
                                        const std::vector<NormalFormWord>& targets,
                                        const NormalFormWord& start, double tol,
                                        int initial_radius, int max_radius) {
  const ReturnBounds rho = certify_return_bounds(walk);
  for (int r = std::max(1, initial_radius); r <= max_radius; r *= 2) {
    const HittingBracket b = hitting_bracket(walk, rho, targets, start, r);
    if (b.width() < tol) return b;
  }
  throw Error(ErrorCode::kNoConvergence, "bracket width stayed above tolerance");
}

}  // namespace rwdrift
