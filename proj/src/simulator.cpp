#include "rwdrift/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <set>
#include <thread>

#include "rwdrift/error.hpp"
#include "rwdrift/traffic.hpp"

namespace rwdrift {

LengthFunctional parse_functional(std::string_view name) {
  if (name == "word") return LengthFunctional::kWord;
  if (name == "block") return LengthFunctional::kBlock;
  if (name == "green") return LengthFunctional::kGreen;
  throw Error(ErrorCode::kConfigError, "unknown length functional '" + std::string(name) + "'");
}

std::string_view to_string(LengthFunctional f) {
  switch (f) {
    case LengthFunctional::kWord: return "word";
    case LengthFunctional::kBlock: return "block";
    case LengthFunctional::kGreen: return "green";
  }
  return "?";
}

nlohmann::json EstimateWithCI::to_json() const {
  return {{"value", value},   {"stderr", stderr_}, {"n", n_steps},
          {"samples", samples}, {"seed", seed},    {"ci95", {ci_low, ci_high}}};
}

EstimateWithCI Moments::estimate(std::int64_t n_steps, std::uint64_t seed) const {
  if (count < 2) throw Error(ErrorCode::kConfigError, "need at least 2 samples");
  EstimateWithCI e;
  const double c = static_cast<double>(count);
  e.value = sum / c;
  const double var = std::max(0.0, (sumsq - c * e.value * e.value) / (c - 1.0));
  e.stderr_ = std::sqrt(var / c);
  e.samples = count;
  e.n_steps = n_steps;
  e.ci_low = e.value - 1.96 * e.stderr_;
  e.ci_high = e.value + 1.96 * e.stderr_;
  e.seed = seed;
  return e;
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

StepSampler::StepSampler(const std::vector<double>& probs) {
  double acc = 0.0;
  for (double p : probs) {
    acc += p;
    cdf_.push_back(acc);
  }
  for (double& c : cdf_) c /= acc;
}

std::size_t StepSampler::operator()(std::mt19937_64& rng) const {
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  for (std::size_t k = 0; k + 1 < cdf_.size(); ++k) {
    if (u < cdf_[k]) return k;
  }
  return cdf_.size() - 1;
}

namespace {

std::vector<double> step_probs(const Walk& walk) {
  std::vector<double> p;
  for (const auto& s : walk.steps()) p.push_back(s.prob);
  return p;
}

// Runs `body(rng, count, moments)` on every chunk and merges in chunk order.
Moments run_chunks(std::size_t samples, unsigned threads, std::uint64_t seed,
                   const std::function<void(std::mt19937_64&, std::size_t, Moments&)>& body) {
  const std::size_t chunks = (samples + kSamplesPerChunk - 1) / kSamplesPerChunk;
  std::vector<Moments> parts(chunks);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      auto rng = chunk_rng(seed, c);
      const std::size_t count = std::min(kSamplesPerChunk, samples - c * kSamplesPerChunk);
      body(rng, count, parts[c]);
    }
  };
  const unsigned t = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(chunks)));
  if (t == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < t; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  Moments total;
  for (const auto& m : parts) total.merge(m);
  return total;
}

// Reduced word over letter slots, tracking per-slot counts and block count.
struct LetterStack {
  std::vector<std::int8_t> slots;
  std::vector<std::int64_t> counts;
  std::int64_t blocks = 0;

  explicit LetterStack(std::size_t n_slots) : counts(n_slots, 0) {}

  void reset() {
    slots.clear();
    std::fill(counts.begin(), counts.end(), 0);
    blocks = 0;
  }

  void push(std::int8_t s) {
    const std::int8_t inv = static_cast<std::int8_t>(s ^ 1);
    if (!slots.empty() && slots.back() == inv) {
      slots.pop_back();
      --counts[inv];
      if (slots.empty() || (slots.back() >> 1) != (s >> 1)) --blocks;
      return;
    }
    if (slots.empty() || (slots.back() >> 1) != (s >> 1)) ++blocks;
    slots.push_back(s);
    ++counts[s];
  }
};

}  // namespace

NormalFormWord sample_endpoint(const Walk& walk, std::int64_t n, std::mt19937_64& rng) {
  const StepSampler pick(step_probs(walk));
  NormalFormWord x;
  for (std::int64_t t = 0; t < n; ++t) walk.apply(x, walk.steps()[pick(rng)]);
  return x;
}

ReducedWord sample_endpoint(const StepDistribution& p, std::int64_t n, std::mt19937_64& rng) {
  const StepSampler pick(p.probs());
  ReducedWord w;
  for (std::int64_t t = 0; t < n; ++t) w.push(Letter::from_slot(pick(rng)));
  return w;
}

EstimateWithCI estimate_drift(const Walk& walk, LengthFunctional functional,
                              const SimulationOptions& opts) {
  if (opts.n < 1) throw Error(ErrorCode::kConfigError, "horizon must be >= 1");
  if (opts.increment && opts.n < 2) throw Error(ErrorCode::kConfigError, "increment needs n >= 2");
  const StepSampler pick(step_probs(walk));
  // mid = 0 gives the plain estimator (base length is that of e).
  const std::int64_t mid = opts.increment ? opts.n / 2 : 0;
  const double span = static_cast<double>(opts.n - mid);

  if (walk.is_free_group()) {
    std::vector<double> weight;
    if (functional == LengthFunctional::kGreen) {
      if (walk.free_law().d() < 2) {
        throw Error(ErrorCode::kIncompatibleFunctional, "Green metric needs d >= 2");
      }
      const TrafficSolution sol = solve_traffic(walk.free_law());
      for (double z : sol.z) weight.push_back(-std::log(z));
    }
    const std::size_t n_slots = walk.steps().size();
    // Step index equals letter slot for free-group walks.
    const Moments m = run_chunks(opts.samples, opts.threads, opts.seed,
                                 [&](std::mt19937_64& rng, std::size_t count, Moments& acc) {
      LetterStack w(n_slots);
      auto length = [&] {
        switch (functional) {
          case LengthFunctional::kWord: return static_cast<double>(w.slots.size());
          case LengthFunctional::kBlock: return static_cast<double>(w.blocks);
          case LengthFunctional::kGreen: break;
        }
        double len = 0.0;
        for (std::size_t s = 0; s < n_slots; ++s) len += static_cast<double>(w.counts[s]) * weight[s];
        return len;
      };
      for (std::size_t i = 0; i < count; ++i) {
        w.reset();
        double base = 0.0;
        for (std::int64_t t = 0; t < opts.n; ++t) {
          if (t == mid) base = length();
          w.push(static_cast<std::int8_t>(pick(rng)));
        }
        acc.add((length() - base) / span);
      }
    });
    return m.estimate(opts.n, opts.seed);
  }

  if (functional == LengthFunctional::kGreen) {
    throw Error(ErrorCode::kIncompatibleFunctional, "Green metric is only available on free groups");
  }
  const Moments m = run_chunks(opts.samples, opts.threads, opts.seed,
                               [&](std::mt19937_64& rng, std::size_t count, Moments& acc) {
    auto length = [&](const NormalFormWord& x) {
      return functional == LengthFunctional::kWord ? static_cast<double>(walk.word_length(x))
                                                   : static_cast<double>(x.block_length());
    };
    for (std::size_t i = 0; i < count; ++i) {
      NormalFormWord x;
      double base = 0.0;
      for (std::int64_t t = 0; t < opts.n; ++t) {
        if (t == mid) base = length(x);
        walk.apply(x, walk.steps()[pick(rng)]);
      }
      acc.add((length(x) - base) / span);
    }
  });
  return m.estimate(opts.n, opts.seed);
}

EstimateWithCI estimate_entropy_pointwise(const Walk& walk, int n, const SimulationOptions& opts,
                                          const ConvolutionOptions& copts) {
  if (n < 1) throw Error(ErrorCode::kConfigError, "horizon must be >= 1");
  const DistributionTable table = convolve_power(walk, n, copts);
  const ElementTrie& trie = *table.trie;
  const StepSampler pick(step_probs(walk));
  const Moments m = run_chunks(opts.samples, opts.threads, opts.seed,
                               [&](std::mt19937_64& rng, std::size_t count, Moments& acc) {
    for (std::size_t i = 0; i < count; ++i) {
      ElementTrie::NodeId x = ElementTrie::kRoot;
      // Every transition out of the support of X_t was cached by the convolution.
      for (int t = 0; t < n; ++t) x = trie.peek(x, pick(rng));
      acc.add(-std::log(table.mass(x)) / n);
    }
  });
  return m.estimate(n, opts.seed);
}

EstimateWithCI estimate_hitting_probability(const Walk& walk,
                                            const std::vector<NormalFormWord>& targets,
                                            const SimulationOptions& opts) {
  const std::set<NormalFormWord> target_set(targets.begin(), targets.end());
  std::size_t max_blocks = 0;
  for (const auto& t : targets) max_blocks = std::max(max_blocks, t.block_length());
  const StepSampler pick(step_probs(walk));
  const Moments m = run_chunks(opts.samples, opts.threads, opts.seed,
                               [&](std::mt19937_64& rng, std::size_t count, Moments& acc) {
    for (std::size_t i = 0; i < count; ++i) {
      NormalFormWord x;
      bool hit = target_set.count(x) > 0;
      for (std::int64_t t = 0; t < opts.n && !hit; ++t) {
        walk.apply(x, walk.steps()[pick(rng)]);
        hit = x.block_length() <= max_blocks && target_set.count(x) > 0;
      }
      acc.add(hit ? 1.0 : 0.0);
    }
  });
  return m.estimate(opts.n, opts.seed);
}

}  // namespace rwdrift
