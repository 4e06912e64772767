#pragma once

// Exact law of X_n by repeated convolution over normal-form words.

#include <cstddef>
#include <memory>
#include <ostream>
#include <utility>
#include <vector>

#include "rwdrift/element_trie.hpp"
#include "rwdrift/walk.hpp"

namespace rwdrift {

struct ConvolutionOptions {
  // 0 disables the cap. default_options() reads RWDRIFT_MEM_CAP_MB.
  std::size_t memory_cap_bytes = 0;
  bool prune = false;
  double prune_epsilon = 1e-16;

  static ConvolutionOptions default_options();
};

struct DistributionTable {
  std::shared_ptr<ElementTrie> trie;
  int n = 0;
  // (node, probability) sorted by node id; every probability is > 0.
  std::vector<std::pair<ElementTrie::NodeId, double>> entries;
  double mass_defect = 0.0;

  double total_mass() const;
  double mass(const NormalFormWord& x) const;
  double mass(ElementTrie::NodeId node) const;
  std::int64_t max_word_length() const;
  std::int64_t max_block_length() const;
};

DistributionTable dirac(const Walk& walk, const ConvolutionOptions& opts = {});
DistributionTable convolve_step(const DistributionTable& t, const ConvolutionOptions& opts = {});
// Law of X_n, n >= 0.
DistributionTable convolve_power(const Walk& walk, int n, const ConvolutionOptions& opts = {});

struct EntropyLength {
  double entropy = 0.0;            // H_n
  double mean_length = 0.0;        // L_n (word metric)
  double mean_block_length = 0.0;  // block metric
  double length_error_bar = 0.0;   // mass_defect * max |g| when pruning
};

EntropyLength entropy_and_length(const DistributionTable& t);

struct HorizonRow {
  int n = 0;
  double entropy = 0.0;
  double mean_length = 0.0;
  double return_probability = 0.0;
  double entropy_increment = 0.0;  // H_n - H_{n-1}
};

// Rows for n = 0..n_max from one pass of repeated convolution.
std::vector<HorizonRow> horizon_table(const Walk& walk, int n_max,
                                      const ConvolutionOptions& opts = {});
void write_horizon_csv(std::ostream& os, const std::vector<HorizonRow>& rows);

struct ReturnSeries {
  std::vector<double> return_probability;  // p^(n)(e), n = 0..n_max
  std::vector<int> even_steps;             // 2m for each estimate
  std::vector<double> estimates;           // p^(2m)(e)^(1/(2m))
  bool tail_increasing = false;
  double final_estimate = 0.0;
};

ReturnSeries return_series(const Walk& walk, int n_max, const ConvolutionOptions& opts = {});
// Estimates and diagnostic from given p^(n)(e), n = 0..n_max.
ReturnSeries series_from_returns(std::vector<double> return_probability);
// Ratio estimate sqrt(p^(2m+2)/p^(2m)) corrected by the local-limit factor
// ((m+1)/m)^(3/4) that holds for non-amenable tree-like groups, then one
// Richardson step against the m^-2 bias.
double extrapolated_spectral_radius(const ReturnSeries& s);

// Exact law of |X_n| on F_d, n <= n_max, by last-exit decomposition over
// cone excursions. Row n holds P(|X_n| = k) for k = 0..n. Avoids storing the
// ball, so it reaches horizons where the full table does not fit.
std::vector<std::vector<double>> exact_length_distribution(const StepDistribution& p, int n_max);
// p^(n)(e) for n = 0..n_max on F_d via the same excursion recursion.
std::vector<double> excursion_return_probabilities(const StepDistribution& p, int n_max);

}  // namespace rwdrift
