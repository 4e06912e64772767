#include "rwdrift/convolution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <string>

#include "rwdrift/error.hpp"

namespace rwdrift {

ConvolutionOptions ConvolutionOptions::default_options() {
  ConvolutionOptions o;
  o.memory_cap_bytes = std::size_t{2048} << 20;
  if (const char* env = std::getenv("RWDRIFT_MEM_CAP_MB")) {
    char* end = nullptr;
    const unsigned long long mb = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0') o.memory_cap_bytes = static_cast<std::size_t>(mb) << 20;
  }
  return o;
}

double DistributionTable::total_mass() const {
  // Neumaier summation; tables reach millions of entries.
  double s = 0.0, c = 0.0;
  for (const auto& e : entries) {
    const double t = s + e.second;
    c += std::abs(s) >= std::abs(e.second) ? (s - t) + e.second : (e.second - t) + s;
    s = t;
  }
  return s + c;
}

double DistributionTable::mass(ElementTrie::NodeId node) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), node,
                             [](const auto& e, ElementTrie::NodeId v) { return e.first < v; });
  return it != entries.end() && it->first == node ? it->second : 0.0;
}

double DistributionTable::mass(const NormalFormWord& x) const {
  auto node = trie->find(x);
  return node ? mass(*node) : 0.0;
}

std::int64_t DistributionTable::max_word_length() const {
  std::int64_t m = 0;
  for (const auto& e : entries) m = std::max(m, trie->word_length(e.first));
  return m;
}

std::int64_t DistributionTable::max_block_length() const {
  std::int64_t m = 0;
  for (const auto& e : entries) m = std::max(m, trie->block_length(e.first));
  return m;
}

DistributionTable dirac(const Walk& walk, const ConvolutionOptions& opts) {
  DistributionTable t;
  t.trie = std::make_shared<ElementTrie>(walk, opts.memory_cap_bytes);
  t.entries.push_back({ElementTrie::kRoot, 1.0});
  return t;
}

DistributionTable convolve_step(const DistributionTable& t, const ConvolutionOptions& opts) {
  ElementTrie& trie = *t.trie;
  const auto& steps = trie.walk().steps();
  const std::size_t k_steps = steps.size();

  std::vector<double> acc(trie.size(), 0.0);
  std::vector<ElementTrie::NodeId> touched;
  touched.reserve(t.entries.size() * 2);

  for (const auto& [node, pr] : t.entries) {
    for (std::size_t k = 0; k < k_steps; ++k) {
      const ElementTrie::NodeId y = trie.step(node, k);
      if (y >= acc.size()) acc.resize(std::max<std::size_t>(trie.size(), acc.size() * 3 / 2), 0.0);
      if (acc[y] == 0.0) touched.push_back(y);
      acc[y] += pr * steps[k].prob;
    }
  }
  if (opts.memory_cap_bytes != 0 &&
      trie.memory_bytes() + acc.capacity() * sizeof(double) > opts.memory_cap_bytes) {
    throw Error(ErrorCode::kMemoryBudgetExceeded,
                "convolution at n=" + std::to_string(t.n + 1) + " exceeds the memory cap");
  }

  std::sort(touched.begin(), touched.end());
  DistributionTable out;
  out.trie = t.trie;
  out.n = t.n + 1;
  out.mass_defect = t.mass_defect;
  out.entries.reserve(touched.size());
  for (auto y : touched) {
    const double v = acc[y];
    if (opts.prune && v < opts.prune_epsilon) {
      out.mass_defect += v;
    } else {
      out.entries.push_back({y, v});
    }
  }
  return out;
}

DistributionTable convolve_power(const Walk& walk, int n, const ConvolutionOptions& opts) {
  DistributionTable t = dirac(walk, opts);
  for (int i = 0; i < n; ++i) t = convolve_step(t, opts);
  return t;
}

EntropyLength entropy_and_length(const DistributionTable& t) {
  EntropyLength r;
  for (const auto& [node, pr] : t.entries) {
    r.entropy -= pr * std::log(pr);
    r.mean_length += pr * static_cast<double>(t.trie->word_length(node));
    r.mean_block_length += pr * static_cast<double>(t.trie->block_length(node));
  }
  // Every removed word had length at most n in either metric.
  r.length_error_bar = t.mass_defect * t.n;
  return r;
}

std::vector<HorizonRow> horizon_table(const Walk& walk, int n_max, const ConvolutionOptions& opts) {
  std::vector<HorizonRow> rows;
  DistributionTable t = dirac(walk, opts);
  double prev_h = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    if (n > 0) t = convolve_step(t, opts);
    const EntropyLength el = entropy_and_length(t);
    HorizonRow row;
    row.n = n;
    row.entropy = el.entropy;
    row.mean_length = el.mean_length;
    row.return_probability = t.mass(ElementTrie::kRoot);
    row.entropy_increment = n > 0 ? el.entropy - prev_h : 0.0;
    prev_h = el.entropy;
    rows.push_back(row);
  }
  return rows;
}

void write_horizon_csv(std::ostream& os, const std::vector<HorizonRow>& rows) {
  os << "n,entropy,mean_length,return_probability,entropy_increment\n";
  os << std::setprecision(17);
  for (const auto& r : rows) {
    os << r.n << ',' << r.entropy << ',' << r.mean_length << ',' << r.return_probability << ','
       << r.entropy_increment << '\n';
  }
}

ReturnSeries series_from_returns(std::vector<double> ret) {
  ReturnSeries s;
  s.return_probability = std::move(ret);
  const int n_max = static_cast<int>(s.return_probability.size()) - 1;
  for (int n = 2; n <= n_max; n += 2) {
    s.even_steps.push_back(n);
    s.estimates.push_back(std::pow(s.return_probability[n], 1.0 / n));
  }
  if (!s.estimates.empty()) s.final_estimate = s.estimates.back();
  // Diagnostic over the second half of the estimates.
  const std::size_t m = s.estimates.size();
  s.tail_increasing = m >= 2;
  for (std::size_t i = m / 2; i + 1 < m; ++i) {
    if (!(s.estimates[i + 1] > s.estimates[i])) s.tail_increasing = false;
  }
  return s;
}

ReturnSeries return_series(const Walk& walk, int n_max, const ConvolutionOptions& opts) {
  std::vector<double> ret;
  DistributionTable t = dirac(walk, opts);
  ret.push_back(1.0);
  for (int n = 1; n <= n_max; ++n) {
    t = convolve_step(t, opts);
    ret.push_back(t.mass(ElementTrie::kRoot));
  }
  return series_from_returns(std::move(ret));
}

double extrapolated_spectral_radius(const ReturnSeries& s) {
  const auto& r = s.return_probability;
  int n = static_cast<int>(r.size()) - 1;
  if (n % 2 == 1) --n;
  if (n < 4 || r[n] <= 0.0 || r[n - 2] <= 0.0) return s.final_estimate;
  auto ratio = [&](int k) {
    const double m = (k - 2) / 2.0;
    return std::sqrt(r[k] / r[k - 2]) * std::pow((m + 1.0) / m, 0.75);
  };
  const double hi = ratio(n);
  if (n < 6 || r[n - 4] <= 0.0) return hi;
  // Remaining bias is O(m^-2); one Richardson step removes it.
  const double m = (n - 2) / 2.0;
  return (m * m * hi - (m - 1) * (m - 1) * ratio(n - 2)) / (2 * m - 1);
}

namespace {

// Cone excursion probabilities. cone[a][m] is the probability that an m-step
// path from a word ending in letter slot a returns there without leaving the
// cone; root[m] is the same over all directions (loops at e).
struct Excursions {
  std::vector<std::vector<double>> cone;
  std::vector<double> root;
};

Excursions excursions(const StepDistribution& p, int n_max) {
  const std::size_t s = 2 * static_cast<std::size_t>(p.d());
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  Excursions e;
  e.cone.assign(s, std::vector<double>(len, 0.0));
  e.root.assign(len, 0.0);
  for (auto& c : e.cone) c[0] = 1.0;
  e.root[0] = 1.0;
  for (std::size_t m = 2; m < len; ++m) {
    for (std::size_t a = 0; a <= s; ++a) {
      double v = 0.0;
      for (std::size_t b = 0; b < s; ++b) {
        if (a < s && b == (a ^ 1U)) continue;
        const double w = p[b] * p[b ^ 1U];
        double conv = 0.0;
        for (std::size_t m1 = 0; m1 + 2 <= m; ++m1) {
          const double rest = a < s ? e.cone[a][m - 2 - m1] : e.root[m - 2 - m1];
          conv += e.cone[b][m1] * rest;
        }
        v += w * conv;
      }
      (a < s ? e.cone[a][m] : e.root[m]) = v;
    }
  }
  return e;
}

}  // namespace

std::vector<double> excursion_return_probabilities(const StepDistribution& p, int n_max) {
  return excursions(p, n_max).root;
}

std::vector<std::vector<double>> exact_length_distribution(const StepDistribution& p, int n_max) {
  const std::size_t s = 2 * static_cast<std::size_t>(p.d());
  const std::size_t len = static_cast<std::size_t>(n_max) + 1;
  const Excursions e = excursions(p, n_max);

  std::vector<std::vector<double>> dist(len);
  for (std::size_t t = 0; t < len; ++t) {
    dist[t].assign(t + 1, 0.0);
    dist[t][0] = e.root[t];
  }
  // level[t][a]: probability that X_t has length k and ends in slot a.
  std::vector<std::vector<double>> level(len, std::vector<double>(s, 0.0));
  for (std::size_t t = 1; t < len; ++t) {
    for (std::size_t a = 0; a < s; ++a) {
      double v = 0.0;
      for (std::size_t u = 0; u + 1 <= t; ++u) v += e.root[u] * e.cone[a][t - 1 - u];
      level[t][a] = p[a] * v;
    }
  }
  for (std::size_t k = 1; k < len; ++k) {
    for (std::size_t t = k; t < len; ++t) {
      double tot = 0.0;
      for (double x : level[t]) tot += x;
      dist[t][k] = tot;
    }
    std::vector<std::vector<double>> next(len, std::vector<double>(s, 0.0));
    for (std::size_t t = k + 1; t < len; ++t) {
      for (std::size_t a = 0; a < s; ++a) {
        double v = 0.0;
        for (std::size_t u = k; u + 1 <= t; ++u) {
          double in = 0.0;
          for (std::size_t b = 0; b < s; ++b) {
            if (b != (a ^ 1U)) in += level[u][b];
          }
          v += in * e.cone[a][t - 1 - u];
        }
        next[t][a] = p[a] * v;
      }
    }
    level = std::move(next);
  }
  return dist;
}

}  // namespace rwdrift
