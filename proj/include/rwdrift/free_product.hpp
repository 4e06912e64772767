#pragma once

// Block-length drift of walks on free products of finite groups and Z.

#include <span>
#include <vector>

#include <json.hpp>

#include "rwdrift/group.hpp"
#include "rwdrift/hitting.hpp"

namespace rwdrift {

// G_i(z) = sum_n p_i^(n)(e) z^n. Finite factors: the (e, e) entry of
// (I - z P_i)^{-1}, valid for 0 <= z < 1. Z factors: 1 / sqrt(1 - 4 p+ p- z^2).
// Throws kOutOfDomain outside the disc of convergence.
double factor_green(const FactorSpec& f, double z);
// Radius of convergence: 1 for finite factors, 1 / (2 sqrt(p+ p-)) for Z.
double factor_green_radius(const FactorSpec& f);

struct XiVector {
  std::vector<double> value;  // bracket midpoints
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<int> radius;
  double max_width() const;
};

// xi_i = probability of ever hitting G_i \ {e} from e, bracketed to `tol`.
XiVector xi_vector(const FreeProductSpec& spec, double tol = 1e-10);

// sum_i alpha_i ((1 - xi_i) / xi_i) (1 - (1 - xi_i) G_i(xi_i))
double block_drift_formula(const FreeProductSpec& spec, std::span<const double> xi);

struct BlockDriftResult {
  double value = 0.0;
  double lower = 0.0;  // min / max of the formula over all bracket corners
  double upper = 0.0;
  XiVector xi;

  nlohmann::json to_json() const;
};

BlockDriftResult block_drift(const FreeProductSpec& spec, const XiVector& xi);
BlockDriftResult block_drift(const FreeProductSpec& spec, double tol = 1e-10);

}  // namespace rwdrift
