#include "rwdrift/free_product.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "rwdrift/error.hpp"
#include "rwdrift/walk.hpp"

namespace rwdrift {

double factor_green_radius(const FactorSpec& f) {
  if (f.is_finite()) return 1.0;
  return 1.0 / (2.0 * std::sqrt(f.p_plus() * f.p_minus()));
}

double factor_green(const FactorSpec& f, double z) {
  if (!(z >= 0.0) || !(z < factor_green_radius(f))) {
    throw Error(ErrorCode::kOutOfDomain, "z = " + std::to_string(z) + " outside the Green disc");
  }
  if (!f.is_finite()) return 1.0 / std::sqrt(1.0 - 4.0 * f.p_plus() * f.p_minus() * z * z);
  const int m = f.order();
  // P[a][b] = p(a^{-1} b); right multiplication by the step h sends a to a h.
  Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(m, m);
  for (int a = 0; a < m; ++a) {
    for (const auto& [h, pr] : f.support()) {
      sys(a, f.multiply(a, h)) -= z * pr;
    }
  }
  Eigen::VectorXd e0 = Eigen::VectorXd::Zero(m);
  e0(0) = 1.0;
  const Eigen::VectorXd col = sys.partialPivLu().solve(e0);
  return col(0);
}

double XiVector::max_width() const {
  double w = 0.0;
  for (std::size_t i = 0; i < lower.size(); ++i) w = std::max(w, upper[i] - lower[i]);
  return w;
}

XiVector xi_vector(const FreeProductSpec& spec, double tol) {
  const Walk walk = Walk::free_product(spec);
  const ReturnBounds rho = certify_return_bounds(walk);
  XiVector xi;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const auto& f = spec.factor(i);
    const int fi = static_cast<int>(i);
    // Entering a Z factor always passes through +1 or -1 first.
    std::vector<NormalFormWord> targets;
    if (f.is_finite()) {
      for (int g = 1; g < f.order(); ++g) targets.emplace_back(std::vector<Block>{{fi, g}});
    } else {
      targets.emplace_back(std::vector<Block>{{fi, 1}});
      targets.emplace_back(std::vector<Block>{{fi, -1}});
    }
    HittingBracket b;
    bool done = false;
    for (int r = 10; r <= 5120; r *= 2) {
      b = hitting_bracket(walk, rho, targets, NormalFormWord{}, r);
      if (b.width() < tol) {
        done = true;
        break;
      }
    }
    if (!done) throw Error(ErrorCode::kNoConvergence, "xi bracket did not reach tolerance");
    xi.lower.push_back(b.lower);
    xi.upper.push_back(b.upper);
    xi.value.push_back(0.5 * (b.lower + b.upper));
    xi.radius.push_back(b.radius);
  }
  return xi;
}

double block_drift_formula(const FreeProductSpec& spec, std::span<const double> xi) {
  if (xi.size() != spec.rank()) throw Error(ErrorCode::kInvalidSpec, "one xi per factor");
  double l = 0.0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    const double x = xi[i];
    if (!(x > 0.0 && x < 1.0)) throw Error(ErrorCode::kOutOfDomain, "xi must lie in (0,1)");
    l += spec.alpha()[i] * ((1.0 - x) / x) * (1.0 - (1.0 - x) * factor_green(spec.factor(i), x));
  }
  return l;
}

BlockDriftResult block_drift(const FreeProductSpec& spec, const XiVector& xi) {
  BlockDriftResult r;
  r.xi = xi;
  r.value = block_drift_formula(spec, xi.value);
  r.lower = r.upper = r.value;
  const std::size_t n = spec.rank();
  std::vector<double> corner(n);
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    for (std::size_t i = 0; i < n; ++i) corner[i] = (mask >> i) & 1U ? xi.upper[i] : xi.lower[i];
    const double v = block_drift_formula(spec, corner);
    r.lower = std::min(r.lower, v);
    r.upper = std::max(r.upper, v);
  }
  return r;
}

BlockDriftResult block_drift(const FreeProductSpec& spec, double tol) {
  return block_drift(spec, xi_vector(spec, tol));
}

nlohmann::json BlockDriftResult::to_json() const {
  return {{"l_block", value},
          {"interval", {lower, upper}},
          {"xi", xi.value},
          {"xi_lower", xi.lower},
          {"xi_upper", xi.upper},
          {"radius", xi.radius}};
}

}  // namespace rwdrift
