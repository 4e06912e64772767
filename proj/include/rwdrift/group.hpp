#pragma once

// Group elements for free groups and free products of finite groups and Z.
//
// Free groups use reduced words over signed generators. Free products use
// alternating-block normal forms. The identity is the empty word in both.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace rwdrift {

// Generator +i or -i of a free group, i >= 1.
class Letter {
 public:
  explicit Letter(int index);

  int index() const { return index_; }
  int generator() const { return index_ > 0 ? index_ : -index_; }
  Letter inverse() const { return Letter(-index_); }

  // Position in the fixed order (+1, -1, +2, -2, ...).
  std::size_t slot() const {
    return 2 * static_cast<std::size_t>(generator() - 1) + (index_ < 0 ? 1 : 0);
  }
  static Letter from_slot(std::size_t slot);

  friend bool operator==(Letter, Letter) = default;
  friend auto operator<=>(Letter, Letter) = default;

 private:
  int index_;
};

class ReducedWord {
 public:
  ReducedWord() = default;
  // Throws kInvalidSpec if the sequence contains a cancelling pair or a zero.
  explicit ReducedWord(std::span<const int> indices);
  ReducedWord(std::initializer_list<int> indices);

  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }
  Letter back() const { return letters_.back(); }

  // Right multiplication by one letter, cancelling if needed.
  void push(Letter x);

  ReducedWord inverse() const;
  // Number of maximal runs of one generator (the Z^{*d} block length).
  std::size_t block_length() const;
  std::string to_string() const;

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;
  friend auto operator<=>(const ReducedWord&, const ReducedWord&) = default;

 private:
  std::vector<Letter> letters_;
};

ReducedWord reduce_concat(const ReducedWord& w, Letter x);
ReducedWord operator*(const ReducedWord& x, const ReducedWord& y);

// Fully supported law on the 2d letters of F_d, slots in Letter order.
class StepDistribution {
 public:
  // Accepts iff every entry is > 0 and the sum is within 1e-12 of 1, then
  // renormalises. Throws kNonPositiveMass / kMassNotOne / kInvalidSpec.
  static StepDistribution validate(std::span<const double> raw);
  static StepDistribution uniform(int d);
  // Symmetric law from p_1..p_d with sum 1/2.
  static StepDistribution symmetric(std::span<const double> half);

  int d() const { return d_; }
  const std::vector<double>& probs() const { return probs_; }
  double operator[](std::size_t slot) const { return probs_[slot]; }
  double prob(Letter x) const { return probs_[x.slot()]; }
  bool is_symmetric(double tol = 0.0) const;

 private:
  StepDistribution(int d, std::vector<double> probs)
      : d_(d), probs_(std::move(probs)) {}
  int d_ = 0;
  std::vector<double> probs_;
};

enum class FactorKind { kFiniteGroup, kIntegerLine };

// One free factor with its step law. Finite factors carry an explicit
// multiplication table with the identity at index 0; the law is stored over
// all m elements with zero mass on the identity. Z factors move by +-1.
class FactorSpec {
 public:
  // law has m-1 entries, indexed over the non-identity elements.
  static FactorSpec finite(std::vector<std::vector<int>> table,
                           std::span<const double> law);
  static FactorSpec cyclic(int order, std::span<const double> law);
  static FactorSpec integer_line(double p_plus, double p_minus);

  FactorKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == FactorKind::kFiniteGroup; }
  // Group order; 0 for Z.
  int order() const { return order_; }

  // Element arithmetic on element values (table index, or integer for Z).
  std::int64_t multiply(std::int64_t a, std::int64_t b) const;
  std::int64_t inverse(std::int64_t a) const;
  // Word length of a non-trivial block: 1 for finite factors, |k| for Z.
  int element_length(std::int64_t a) const;
  bool valid_element(std::int64_t a) const;

  // Law over factor elements: finite -> size m (entry 0 is zero);
  // Z -> {p_plus, p_minus}.
  const std::vector<double>& law() const { return law_; }
  double p_plus() const { return law_[0]; }
  double p_minus() const { return law_[1]; }
  const std::vector<std::vector<int>>& table() const { return table_; }

  // Support of the law as (element, probability) pairs.
  std::vector<std::pair<std::int64_t, double>> support() const;

  nlohmann::json to_json() const;
  static FactorSpec from_json(const nlohmann::json& j);

 private:
  FactorSpec() = default;
  FactorKind kind_ = FactorKind::kIntegerLine;
  int order_ = 0;
  std::vector<std::vector<int>> table_;
  std::vector<int> inverse_;
  std::vector<double> law_;
  std::string label_;
};

class FreeProductSpec {
 public:
  // Requires r >= 2, alpha > 0 summing to 1 within 1e-12 (renormalised),
  // and rejects Z/2 * Z/2.
  FreeProductSpec(std::vector<FactorSpec> factors, std::vector<double> alpha);

  std::size_t rank() const { return factors_.size(); }
  const std::vector<FactorSpec>& factors() const { return factors_; }
  const FactorSpec& factor(std::size_t k) const { return factors_[k]; }
  const std::vector<double>& alpha() const { return alpha_; }

  nlohmann::json to_json() const;
  static FreeProductSpec from_json(const nlohmann::json& j);
  static FreeProductSpec from_json_text(const std::string& text);

 private:
  std::vector<FactorSpec> factors_;
  std::vector<double> alpha_;
};

struct Block {
  int factor = 0;
  std::int64_t value = 0;

  friend bool operator==(const Block&, const Block&) = default;
  friend auto operator<=>(const Block&, const Block&) = default;
};

// Alternating-block normal form. Factor ids index into a factor list that the
// caller supplies; the word itself does not own one.
class NormalFormWord {
 public:
  NormalFormWord() = default;
  explicit NormalFormWord(std::vector<Block> blocks) : blocks_(std::move(blocks)) {}

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t block_length() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

  // Right multiplication by a single factor element, with contraction.
  void push(const std::vector<FactorSpec>& factors, Block b);
  NormalFormWord inverse(const std::vector<FactorSpec>& factors) const;
  std::int64_t word_length(const std::vector<FactorSpec>& factors) const;
  bool is_valid(const std::vector<FactorSpec>& factors) const;
  std::string to_string() const;

  friend bool operator==(const NormalFormWord&, const NormalFormWord&) = default;
  friend auto operator<=>(const NormalFormWord&, const NormalFormWord&) = default;

 private:
  std::vector<Block> blocks_;
};

NormalFormWord multiply_normal_form(const NormalFormWord& x,
                                    const NormalFormWord& y,
                                    const std::vector<FactorSpec>& factors);
inline NormalFormWord multiply_normal_form(const NormalFormWord& x,
                                           const NormalFormWord& y,
                                           const FreeProductSpec& spec) {
  return multiply_normal_form(x, y, spec.factors());
}

std::size_t word_length(const ReducedWord& w);
std::size_t block_length(const ReducedWord& w);

// F_d viewed as Z * ... * Z: factor k-1 carries generator k.
NormalFormWord to_normal_form(const ReducedWord& w);
ReducedWord to_reduced_word(const NormalFormWord& x);

}  // namespace rwdrift
