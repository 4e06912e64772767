#include "rwdrift/group.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <random>
#include <sstream>

#include "rwdrift/error.hpp"

namespace rwdrift {
namespace {

constexpr double kMassTolerance = 1e-12;

std::vector<double> normalised_law(std::span<const double> raw, bool strictly_positive,
                                   const char* what) {
  if (raw.empty()) {
    throw Error(ErrorCode::kInvalidSpec, std::string(what) + ": empty law");
  }
  double sum = 0.0;
  for (double v : raw) {
    if (!std::isfinite(v) || v < 0.0 || (strictly_positive && v <= 0.0)) {
      throw Error(ErrorCode::kNonPositiveMass,
                  std::string(what) + ": entry " + std::to_string(v));
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kMassTolerance) {
    throw Error(ErrorCode::kMassNotOne,
                std::string(what) + ": total mass " + std::to_string(sum));
  }
  std::vector<double> out(raw.begin(), raw.end());
  for (double& v : out) v /= sum;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// Letters and reduced words

Letter::Letter(int index) : index_(index) {
  if (index == 0) throw Error(ErrorCode::kInvalidSpec, "letter index 0");
}

Letter Letter::from_slot(std::size_t slot) {
  const int gen = static_cast<int>(slot / 2) + 1;
  return Letter(slot % 2 == 0 ? gen : -gen);
}

ReducedWord::ReducedWord(std::span<const int> indices) {
  letters_.reserve(indices.size());
  for (int i : indices) {
    Letter x(i);
    if (!letters_.empty() && letters_.back() == x.inverse()) {
      throw Error(ErrorCode::kInvalidSpec, "word is not reduced");
    }
    letters_.push_back(x);
  }
}

ReducedWord::ReducedWord(std::initializer_list<int> indices)
    : ReducedWord(std::span<const int>(indices.begin(), indices.size())) {}

void ReducedWord::push(Letter x) {
  if (!letters_.empty() && letters_.back() == x.inverse()) {
    letters_.pop_back();
  } else {
    letters_.push_back(x);
  }
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) {
    out.letters_.push_back(it->inverse());
  }
  return out;
}

std::size_t ReducedWord::block_length() const {
  std::size_t runs = 0;
  for (std::size_t j = 0; j < letters_.size(); ++j) {
    if (j == 0 || letters_[j].generator() != letters_[j - 1].generator()) ++runs;
  }
  return runs;
}

std::string ReducedWord::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < letters_.size(); ++j) {
    if (j) os << ',';
    os << letters_[j].index();
  }
  os << ']';
  return os.str();
}

ReducedWord reduce_concat(const ReducedWord& w, Letter x) {
  ReducedWord out = w;
  out.push(x);
  return out;
}

ReducedWord operator*(const ReducedWord& x, const ReducedWord& y) {
  ReducedWord out = x;
  for (Letter l : y.letters()) out.push(l);
  return out;
}

std::size_t word_length(const ReducedWord& w) { return w.length(); }
std::size_t block_length(const ReducedWord& w) { return w.block_length(); }

// ---------------------------------------------------------------------------
// Step distributions

StepDistribution StepDistribution::validate(std::span<const double> raw) {
  if (raw.size() < 2 || raw.size() % 2 != 0) {
    throw Error(ErrorCode::kInvalidSpec,
                "step law needs 2d entries, got " + std::to_string(raw.size()));
  }
  auto probs = normalised_law(raw, /*strictly_positive=*/true, "step law");
  return StepDistribution(static_cast<int>(raw.size() / 2), std::move(probs));
}

StepDistribution StepDistribution::uniform(int d) {
  if (d < 1) throw Error(ErrorCode::kInvalidSpec, "d must be >= 1");
  return StepDistribution(d, std::vector<double>(2 * d, 1.0 / (2.0 * d)));
}

StepDistribution StepDistribution::symmetric(std::span<const double> half) {
  std::vector<double> full;
  full.reserve(2 * half.size());
  for (double v : half) {
    full.push_back(v);
    full.push_back(v);
  }
  return validate(full);
}

bool StepDistribution::is_symmetric(double tol) const {
  for (int i = 0; i < d_; ++i) {
    if (std::abs(probs_[2 * i] - probs_[2 * i + 1]) > tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Factors

FactorSpec FactorSpec::finite(std::vector<std::vector<int>> table,
                              std::span<const double> law) {
  const int m = static_cast<int>(table.size());
  if (m < 2) throw Error(ErrorCode::kInvalidSpec, "finite factor needs order >= 2");
  for (const auto& row : table) {
    if (static_cast<int>(row.size()) != m) {
      throw Error(ErrorCode::kInvalidSpec, "multiplication table is not square");
    }
    for (int v : row) {
      if (v < 0 || v >= m) throw Error(ErrorCode::kInvalidSpec, "table entry out of range");
    }
  }
  for (int a = 0; a < m; ++a) {
    if (table[0][a] != a || table[a][0] != a) {
      throw Error(ErrorCode::kInvalidSpec, "element 0 is not the identity");
    }
  }
  // Latin square: every row and column is a permutation.
  for (int a = 0; a < m; ++a) {
    std::vector<char> row_seen(m, 0), col_seen(m, 0);
    for (int b = 0; b < m; ++b) {
      if (row_seen[table[a][b]]++ || col_seen[table[b][a]]++) {
        throw Error(ErrorCode::kInvalidSpec, "table is not a Latin square");
      }
    }
  }
  std::vector<int> inverse(m, -1);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) {
      if (table[a][b] == 0) inverse[a] = b;
    }
    if (table[inverse[a]][a] != 0) {
      throw Error(ErrorCode::kInvalidSpec, "left and right inverses differ");
    }
  }
  auto assoc = [&](int a, int b, int c) {
    return table[table[a][b]][c] == table[a][table[b][c]];
  };
  if (m <= 64) {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c)
          if (!assoc(a, b, c)) throw Error(ErrorCode::kInvalidSpec, "table is not associative");
  } else {
    std::mt19937_64 rng(0x5eedULL);
    std::uniform_int_distribution<int> pick(0, m - 1);
    for (int t = 0; t < 20000; ++t) {
      if (!assoc(pick(rng), pick(rng), pick(rng))) {
        throw Error(ErrorCode::kInvalidSpec, "table is not associative");
      }
    }
  }

  if (static_cast<int>(law.size()) != m - 1) {
    throw Error(ErrorCode::kInvalidSpec, "finite factor law must have order-1 entries");
  }
  auto normed = normalised_law(law, /*strictly_positive=*/false, "factor law");
  FactorSpec f;
  f.kind_ = FactorKind::kFiniteGroup;
  f.order_ = m;
  f.table_ = std::move(table);
  f.inverse_ = std::move(inverse);
  f.law_.assign(1, 0.0);
  f.law_.insert(f.law_.end(), normed.begin(), normed.end());
  f.label_ = "table";

  // The support has to generate the factor, otherwise the walk is reducible.
  std::vector<char> reached(m, 0);
  std::vector<int> frontier{0};
  reached[0] = 1;
  while (!frontier.empty()) {
    int a = frontier.back();
    frontier.pop_back();
    for (int h = 1; h < m; ++h) {
      if (f.law_[h] <= 0.0) continue;
      int b = f.table_[a][h];
      if (!reached[b]) {
        reached[b] = 1;
        frontier.push_back(b);
      }
    }
  }
  if (std::find(reached.begin(), reached.end(), 0) != reached.end()) {
    throw Error(ErrorCode::kInvalidSpec, "factor law support does not generate the group");
  }
  return f;
}

FactorSpec FactorSpec::cyclic(int order, std::span<const double> law) {
  if (order < 2) throw Error(ErrorCode::kInvalidSpec, "cyclic order must be >= 2");
  std::vector<std::vector<int>> table(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a)
    for (int b = 0; b < order; ++b) table[a][b] = (a + b) % order;
  FactorSpec f = finite(std::move(table), law);
  f.label_ = "cyclic";
  return f;
}

FactorSpec FactorSpec::integer_line(double p_plus, double p_minus) {
  const double raw[2] = {p_plus, p_minus};
  auto normed = normalised_law(raw, /*strictly_positive=*/true, "Z factor law");
  FactorSpec f;
  f.kind_ = FactorKind::kIntegerLine;
  f.order_ = 0;
  f.law_ = std::move(normed);
  f.label_ = "integer";
  return f;
}

std::int64_t FactorSpec::multiply(std::int64_t a, std::int64_t b) const {
  if (is_finite()) return table_[a][b];
  return a + b;
}

std::int64_t FactorSpec::inverse(std::int64_t a) const {
  if (is_finite()) return inverse_[a];
  return -a;
}

int FactorSpec::element_length(std::int64_t a) const {
  if (a == 0) return 0;
  if (is_finite()) return 1;
  return static_cast<int>(a > 0 ? a : -a);
}

bool FactorSpec::valid_element(std::int64_t a) const {
  if (is_finite()) return a >= 0 && a < order_;
  return true;
}

std::vector<std::pair<std::int64_t, double>> FactorSpec::support() const {
  std::vector<std::pair<std::int64_t, double>> out;
  if (is_finite()) {
    for (int h = 1; h < order_; ++h) {
      if (law_[h] > 0.0) out.emplace_back(h, law_[h]);
    }
  } else {
    out.emplace_back(1, law_[0]);
    out.emplace_back(-1, law_[1]);
  }
  return out;
}

nlohmann::json FactorSpec::to_json() const {
  nlohmann::json j;
  if (!is_finite()) {
    j["kind"] = "integer";
    j["law"] = law_;
    return j;
  }
  j["kind"] = label_;
  j["order"] = order_;
  if (label_ == "table") j["table"] = table_;
  j["law"] = std::vector<double>(law_.begin() + 1, law_.end());
  return j;
}

FactorSpec FactorSpec::from_json(const nlohmann::json& j) {
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const auto law = j.at("law").get<std::vector<double>>();
    if (kind == "cyclic") {
      const int order = j.at("order").get<int>();
      return cyclic(order, law);
    }
    if (kind == "table") {
      return finite(j.at("table").get<std::vector<std::vector<int>>>(), law);
    }
    if (kind == "integer") {
      if (law.size() != 2) throw Error(ErrorCode::kInvalidSpec, "Z factor law needs 2 entries");
      return integer_line(law[0], law[1]);
    }
    throw Error(ErrorCode::kInvalidSpec, "unknown factor kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("factor JSON: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Free products

FreeProductSpec::FreeProductSpec(std::vector<FactorSpec> factors, std::vector<double> alpha)
    : factors_(std::move(factors)) {
  if (factors_.size() < 2) {
    throw Error(ErrorCode::kInvalidSpec, "free product needs at least two factors");
  }
  if (alpha.size() != factors_.size()) {
    throw Error(ErrorCode::kInvalidSpec, "alpha must have one weight per factor");
  }
  alpha_ = normalised_law(alpha, /*strictly_positive=*/true, "alpha");
  if (factors_.size() == 2 && factors_[0].order() == 2 && factors_[1].order() == 2) {
    throw Error(ErrorCode::kInvalidSpec, "Z/2 * Z/2 is excluded (recurrent)");
  }
}

nlohmann::json FreeProductSpec::to_json() const {
  nlohmann::json j;
  j["factors"] = nlohmann::json::array();
  for (const auto& f : factors_) j["factors"].push_back(f.to_json());
  j["alpha"] = alpha_;
  return j;
}

FreeProductSpec FreeProductSpec::from_json(const nlohmann::json& j) {
  try {
    std::vector<FactorSpec> factors;
    for (const auto& f : j.at("factors")) factors.push_back(FactorSpec::from_json(f));
    return FreeProductSpec(std::move(factors), j.at("alpha").get<std::vector<double>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("free product JSON: ") + e.what());
  }
}

FreeProductSpec FreeProductSpec::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kInvalidSpec, std::string("malformed JSON: ") + e.what());
  }
  return from_json(j);
}

// ---------------------------------------------------------------------------
// Normal forms

void NormalFormWord::push(const std::vector<FactorSpec>& factors, Block b) {
  if (b.value == 0) return;
  if (!blocks_.empty() && blocks_.back().factor == b.factor) {
    const std::int64_t v = factors[b.factor].multiply(blocks_.back().value, b.value);
    if (v == 0) {
      blocks_.pop_back();
    } else {
      blocks_.back().value = v;
    }
    return;
  }
  blocks_.push_back(b);
}

NormalFormWord NormalFormWord::inverse(const std::vector<FactorSpec>& factors) const {
  std::vector<Block> out;
  out.reserve(blocks_.size());
  for (auto it = blocks_.rbegin(); it != blocks_.rend(); ++it) {
    out.push_back({it->factor, factors[it->factor].inverse(it->value)});
  }
  return NormalFormWord(std::move(out));
}

std::int64_t NormalFormWord::word_length(const std::vector<FactorSpec>& factors) const {
  std::int64_t len = 0;
  for (const auto& b : blocks_) len += factors[b.factor].element_length(b.value);
  return len;
}

bool NormalFormWord::is_valid(const std::vector<FactorSpec>& factors) const {
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    const auto& b = blocks_[j];
    if (b.factor < 0 || b.factor >= static_cast<int>(factors.size())) return false;
    if (b.value == 0 || !factors[b.factor].valid_element(b.value)) return false;
    if (j > 0 && blocks_[j - 1].factor == b.factor) return false;
  }
  return true;
}

std::string NormalFormWord::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < blocks_.size(); ++j) {
    if (j) os << ' ';
    os << '(' << blocks_[j].factor << ':' << blocks_[j].value << ')';
  }
  os << ']';
  return os.str();
}

NormalFormWord multiply_normal_form(const NormalFormWord& x, const NormalFormWord& y,
                                    const std::vector<FactorSpec>& factors) {
  NormalFormWord out = x;
  for (const auto& b : y.blocks()) out.push(factors, b);
  return out;
}

NormalFormWord to_normal_form(const ReducedWord& w) {
  std::vector<Block> blocks;
  for (Letter x : w.letters()) {
    const int f = x.generator() - 1;
    const int s = x.index() > 0 ? 1 : -1;
    if (!blocks.empty() && blocks.back().factor == f) {
      blocks.back().value += s;  // reduced, so never reaches zero
    } else {
      blocks.push_back({f, s});
    }
  }
  return NormalFormWord(std::move(blocks));
}

ReducedWord to_reduced_word(const NormalFormWord& x) {
  ReducedWord w;
  for (const auto& b : x.blocks()) {
    const int gen = b.factor + 1;
    const Letter step(b.value > 0 ? gen : -gen);
    for (std::int64_t k = 0; k < std::abs(b.value); ++k) w.push(step);
  }
  return w;
}

}  // namespace rwdrift
