#pragma once

// Monte Carlo oracles: endpoint sampling and drift / entropy estimators with
// confidence intervals. Samples are split into fixed chunks, each with its own
// generator seeded from (seed, chunk index), and chunk moments are merged in
// index order. Results therefore do not depend on the number of threads.

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rwdrift/convolution.hpp"
#include "rwdrift/group.hpp"
#include "rwdrift/walk.hpp"

namespace rwdrift {

enum class LengthFunctional { kWord, kBlock, kGreen };
LengthFunctional parse_functional(std::string_view name);
std::string_view to_string(LengthFunctional f);

struct EstimateWithCI {
  double value = 0.0;
  double stderr_ = 0.0;
  std::size_t samples = 0;
  std::int64_t n_steps = 0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

struct SimulationOptions {
  std::int64_t n = 20'000;
  std::size_t samples = 10'000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  // Use (len(X_n) - len(X_m)) / (n - m) with m = n / 2 instead of
  // len(X_n) / n. The O(1) offset of E len(X_n) - n l cancels.
  bool increment = false;
};

// Running (count, sum, sum of squares).
struct Moments {
  std::size_t count = 0;
  double sum = 0.0;
  double sumsq = 0.0;

  void add(double x) {
    ++count;
    sum += x;
    sumsq += x * x;
  }
  void merge(const Moments& o) {
    count += o.count;
    sum += o.sum;
    sumsq += o.sumsq;
  }
  EstimateWithCI estimate(std::int64_t n_steps, std::uint64_t seed) const;
};

inline constexpr std::size_t kSamplesPerChunk = 64;

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk);

// Inverse-CDF sampler over the step list of a walk.
class StepSampler {
 public:
  explicit StepSampler(const std::vector<double>& probs);
  std::size_t operator()(std::mt19937_64& rng) const;

 private:
  std::vector<double> cdf_;
};

NormalFormWord sample_endpoint(const Walk& walk, std::int64_t n, std::mt19937_64& rng);
ReducedWord sample_endpoint(const StepDistribution& p, std::int64_t n, std::mt19937_64& rng);

// Mean of length(X_n) / n over independent endpoints. kGreen needs a free
// group of rank >= 2 (throws kIncompatibleFunctional otherwise).
EstimateWithCI estimate_drift(const Walk& walk, LengthFunctional functional,
                              const SimulationOptions& opts);

// Mean of -ln p^(n)(X_n) / n, with p^(n) taken from the exact table.
EstimateWithCI estimate_entropy_pointwise(const Walk& walk, int n, const SimulationOptions& opts,
                                          const ConvolutionOptions& copts =
                                              ConvolutionOptions::default_options());

// Fraction of paths from e that hit one of `targets` within opts.n steps.
EstimateWithCI estimate_hitting_probability(const Walk& walk,
                                            const std::vector<NormalFormWord>& targets,
                                            const SimulationOptions& opts);

}  // namespace rwdrift
