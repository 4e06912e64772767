#include <doctest.h>

#include <random>

#include "rwdrift/error.hpp"
#include "rwdrift/group.hpp"
#include "rwdrift/walk.hpp"

using namespace rwdrift;

namespace {

std::vector<FactorSpec> z3_z2_factors() {
  const std::vector<double> l3{0.5, 0.5}, l2{1.0};
  return {FactorSpec::cyclic(3, l3), FactorSpec::cyclic(2, l2)};
}

// S_3 as permutations of {0,1,2}, identity first.
FactorSpec s3_factor() {
  std::vector<std::array<int, 3>> perms{{0, 1, 2}, {1, 0, 2}, {0, 2, 1},
                                        {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::vector<int>> table(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int i = 0; i < 3; ++i) c[i] = perms[a][perms[b][i]];
      for (int k = 0; k < 6; ++k) {
        if (perms[k] == c) table[a][b] = k;
      }
    }
  }
  const std::vector<double> law{0.25, 0.25, 0.0, 0.25, 0.25};
  return FactorSpec::finite(table, law);
}

NormalFormWord random_word(const std::vector<FactorSpec>& fs, std::mt19937_64& rng, int len) {
  NormalFormWord x;
  std::uniform_int_distribution<int> pick_f(0, static_cast<int>(fs.size()) - 1);
  for (int i = 0; i < len; ++i) {
    const int f = pick_f(rng);
    std::int64_t v;
    if (fs[f].is_finite()) {
      v = std::uniform_int_distribution<int>(1, fs[f].order() - 1)(rng);
    } else {
      v = std::uniform_int_distribution<int>(-3, 3)(rng);
    }
    x.push(fs, {f, v});
  }
  return x;
}

}  // namespace

TEST_CASE("reduce_concat examples") {
  CHECK(reduce_concat(ReducedWord{1, 2}, Letter(-2)) == ReducedWord{1});
  CHECK(reduce_concat(ReducedWord{}, Letter(1)) == ReducedWord{1});
  CHECK(reduce_concat(ReducedWord{1, 2}, Letter(1)) == ReducedWord{1, 2, 1});
  CHECK_THROWS_AS(ReducedWord({1, -1}), Error);
  CHECK_THROWS_AS(Letter(0), Error);
}

TEST_CASE("letter slots follow +1,-1,+2,-2") {
  CHECK(Letter(1).slot() == 0);
  CHECK(Letter(-1).slot() == 1);
  CHECK(Letter(2).slot() == 2);
  CHECK(Letter(-3).slot() == 5);
  for (std::size_t s = 0; s < 8; ++s) {
    CHECK(Letter::from_slot(s).slot() == s);
    CHECK(Letter::from_slot(s).inverse().slot() == (s ^ 1U));
  }
}

TEST_CASE("free-group lengths") {
  CHECK(word_length(ReducedWord{1, 2, -1}) == 3);
  CHECK(word_length(ReducedWord{}) == 0);
  CHECK(block_length(ReducedWord{1, 1, 2, -1}) == 3);
}

TEST_CASE("multiply_normal_form examples") {
  const auto fs = z3_z2_factors();
  const NormalFormWord g1({{0, 1}}), g2({{0, 2}});
  CHECK(multiply_normal_form(g1, g2, fs).empty());

  const NormalFormWord x({{0, 1}, {1, 1}, {0, 2}});
  CHECK(multiply_normal_form(x, NormalFormWord{}, fs) == x);

  // [a][b] * [b^-1][a'] with a a' != e contracts to [a a'].
  const NormalFormWord left({{0, 1}, {1, 1}});
  const NormalFormWord right({{1, 1}, {0, 1}});
  CHECK(multiply_normal_form(left, right, fs) == NormalFormWord({{0, 2}}));
}

TEST_CASE("free-product lengths") {
  std::vector<FactorSpec> fs{FactorSpec::integer_line(0.5, 0.5), z3_z2_factors()[1]};
  const NormalFormWord x({{0, 3}, {1, 1}});
  CHECK(x.block_length() == 2);
  CHECK(x.word_length(fs) == 4);
  CHECK(NormalFormWord{}.word_length(fs) == 0);
}

TEST_CASE("validate_step_distribution") {
  const std::vector<double> u{0.25, 0.25, 0.25, 0.25};
  CHECK(StepDistribution::validate(u).d() == 2);
  const std::vector<double> boundary{0.5, 0.5, 0.0, 0.0};
  try {
    StepDistribution::validate(boundary);
    FAIL("boundary law accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonPositiveMass);
  }
  const std::vector<double> ok{0.4, 0.2, 0.3, 0.1};
  CHECK(StepDistribution::validate(ok)[0] == doctest::Approx(0.4));
  const std::vector<double> heavy{0.5, 0.5, 0.1, 0.1};
  try {
    StepDistribution::validate(heavy);
    FAIL("mass 1.2 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMassNotOne);
  }
  // Within 1e-12 the law is accepted and renormalised.
  const std::vector<double> near{0.25 + 2e-13, 0.25, 0.25, 0.25};
  const auto p = StepDistribution::validate(near);
  CHECK(std::abs(p[0] + p[1] + p[2] + p[3] - 1.0) < 1e-15);
}

TEST_CASE("factor validation") {
  const std::vector<double> l2{1.0};
  CHECK_THROWS_AS(FreeProductSpec({FactorSpec::cyclic(2, l2), FactorSpec::cyclic(2, l2)}, {0.5, 0.5}),
                  Error);
  // Not a group: row 1 repeats an entry.
  std::vector<std::vector<int>> bad{{0, 1, 2}, {1, 1, 0}, {2, 0, 1}};
  const std::vector<double> l{0.5, 0.5};
  CHECK_THROWS_AS(FactorSpec::finite(bad, l), Error);
  // A law whose support does not generate the group.
  const std::vector<double> sub{0.0, 1.0, 0.0};
  CHECK_THROWS_AS(FactorSpec::cyclic(4, sub), Error);
  CHECK_NOTHROW(s3_factor());
}

TEST_CASE("round trip x * s * s^-1 = x") {
  std::mt19937_64 rng(3);
  const std::vector<FactorSpec> fs{z3_z2_factors()[0], z3_z2_factors()[1],
                                   FactorSpec::integer_line(0.6, 0.4), s3_factor()};
  for (int t = 0; t < 500; ++t) {
    const NormalFormWord x = random_word(fs, rng, 12);
    const NormalFormWord s = random_word(fs, rng, 1);
    const NormalFormWord y = multiply_normal_form(multiply_normal_form(x, s, fs), s.inverse(fs), fs);
    CHECK(y == x);
    CHECK(x.is_valid(fs));
  }
  for (int t = 0; t < 500; ++t) {
    ReducedWord w;
    for (int i = 0; i < 10; ++i) w.push(Letter::from_slot(rng() % 6));
    const Letter x = Letter::from_slot(rng() % 6);
    CHECK(reduce_concat(reduce_concat(w, x), x.inverse()) == w);
  }
}

TEST_CASE("associativity of normal forms on random triples") {
  std::mt19937_64 rng(5);
  const std::vector<FactorSpec> fs{z3_z2_factors()[0], FactorSpec::integer_line(0.5, 0.5),
                                   s3_factor()};
  for (int t = 0; t < 1000; ++t) {
    const auto a = random_word(fs, rng, 6), b = random_word(fs, rng, 6), c = random_word(fs, rng, 6);
    CHECK(multiply_normal_form(multiply_normal_form(a, b, fs), c, fs) ==
          multiply_normal_form(a, multiply_normal_form(b, c, fs), fs));
  }
}

TEST_CASE("word distance satisfies the triangle inequality") {
  std::mt19937_64 rng(9);
  const std::vector<FactorSpec> fs{z3_z2_factors()[0], FactorSpec::integer_line(0.5, 0.5)};
  auto dist = [&](const NormalFormWord& x, const NormalFormWord& y) {
    return multiply_normal_form(x.inverse(fs), y, fs).word_length(fs);
  };
  for (int t = 0; t < 1000; ++t) {
    const auto x = random_word(fs, rng, 8), y = random_word(fs, rng, 8), z = random_word(fs, rng, 8);
    CHECK(dist(x, z) <= dist(x, y) + dist(y, z));
    CHECK(dist(x, y) == dist(y, x));
  }
}

TEST_CASE("free group and its Z * ... * Z normal form agree") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    ReducedWord w;
    for (int i = 0; i < 15; ++i) w.push(Letter::from_slot(rng() % 6));
    const NormalFormWord x = to_normal_form(w);
    CHECK(to_reduced_word(x) == w);
    std::vector<FactorSpec> zs(3, FactorSpec::integer_line(0.5, 0.5));
    CHECK(static_cast<std::size_t>(x.word_length(zs)) == w.length());
    CHECK(x.block_length() == w.block_length());
  }
}

TEST_CASE("spec JSON round trip") {
  const std::string text =
      R"({"factors":[{"kind":"cyclic","order":3,"law":[0.5,0.5]},{"kind":"cyclic","order":2,"law":[1.0]}],"alpha":[0.5,0.5]})";
  const FreeProductSpec spec = FreeProductSpec::from_json_text(text);
  CHECK(spec.rank() == 2);
  CHECK(spec.factor(0).order() == 3);
  const FreeProductSpec again = FreeProductSpec::from_json(spec.to_json());
  CHECK(again.to_json() == spec.to_json());
  CHECK_THROWS_AS(FreeProductSpec::from_json_text(R"({"factors":[],"alpha":[]})"), Error);
}

TEST_CASE("lifted walk law sums to one") {
  const std::string text =
      R"({"factors":[{"kind":"cyclic","order":3,"law":[0.5,0.5]},{"kind":"integer","law":[0.7,0.3]}],"alpha":[0.4,0.6]})";
  const Walk w = Walk::free_product(FreeProductSpec::from_json_text(text));
  double s = 0.0;
  for (const auto& st : w.steps()) s += st.prob;
  CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(w.steps().size() == 4);
}
