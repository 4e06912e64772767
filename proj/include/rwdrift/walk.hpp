#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "rwdrift/group.hpp"

namespace rwdrift {

// One increment of the lifted law p = sum_k alpha_k * pbar_k.
struct Step {
  int factor = 0;
  std::int64_t value = 0;
  double prob = 0.0;
};

// A random walk law on a free group or a free product, in the common
// block representation. F_d is stored as Z * ... * Z with
// alpha_k = p_k + p_{-k}; its step order matches the Letter slot order.
class Walk {
 public:
  static Walk free_group(const StepDistribution& p);
  static Walk free_product(const FreeProductSpec& spec);

  bool is_free_group() const { return free_law_.has_value(); }
  const StepDistribution& free_law() const { return *free_law_; }

  const std::vector<FactorSpec>& factors() const { return factors_; }
  const std::vector<double>& alpha() const { return alpha_; }
  const std::vector<Step>& steps() const { return steps_; }
  std::size_t rank() const { return factors_.size(); }

  void apply(NormalFormWord& x, const Step& s) const {
    x.push(factors_, Block{s.factor, s.value});
  }
  std::int64_t word_length(const NormalFormWord& x) const { return x.word_length(factors_); }
  NormalFormWord multiply(const NormalFormWord& x, const NormalFormWord& y) const {
    return multiply_normal_form(x, y, factors_);
  }
  NormalFormWord inverse(const NormalFormWord& x) const { return x.inverse(factors_); }

  nlohmann::json to_json() const;

 private:
  Walk() = default;
  std::optional<StepDistribution> free_law_;
  std::vector<FactorSpec> factors_;
  std::vector<double> alpha_;
  std::vector<Step> steps_;
};

}  // namespace rwdrift
