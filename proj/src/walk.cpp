#include "rwdrift/walk.hpp"

namespace rwdrift {

Walk Walk::free_group(const StepDistribution& p) {
  Walk w;
  w.free_law_ = p;
  for (int k = 0; k < p.d(); ++k) {
    const double plus = p[2 * k];
    const double minus = p[2 * k + 1];
    const double a = plus + minus;
    w.factors_.push_back(FactorSpec::integer_line(plus / a, minus / a));
    w.alpha_.push_back(a);
    w.steps_.push_back({k, +1, plus});
    w.steps_.push_back({k, -1, minus});
  }
  return w;
}

Walk Walk::free_product(const FreeProductSpec& spec) {
  Walk w;
  w.factors_ = spec.factors();
  w.alpha_ = spec.alpha();
  for (std::size_t k = 0; k < spec.rank(); ++k) {
    for (const auto& [value, prob] : spec.factor(k).support()) {
      w.steps_.push_back({static_cast<int>(k), value, spec.alpha()[k] * prob});
    }
  }
  return w;
}

nlohmann::json Walk::to_json() const {
  if (is_free_group()) {
    return nlohmann::json{{"d", free_law_->d()}, {"p", free_law_->probs()}};
  }
  nlohmann::json j;
  j["factors"] = nlohmann::json::array();
  for (const auto& f : factors_) j["factors"].push_back(f.to_json());
  j["alpha"] = alpha_;
  return j;
}

}  // namespace rwdrift
