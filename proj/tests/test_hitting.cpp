#include <doctest.h>

#include <cmath>
#include <random>

#include "rwdrift/error.hpp"
#include "rwdrift/hitting.hpp"
#include "rwdrift/traffic.hpp"

using namespace rwdrift;

namespace {

StepDistribution random_law(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> w(2 * d);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x /= s;
  return StepDistribution::validate(w);
}

FreeProductSpec z3_z2(double a1) {
  const std::vector<double> l3{0.5, 0.5}, l2{1.0};
  return FreeProductSpec({FactorSpec::cyclic(3, l3), FactorSpec::cyclic(2, l2)}, {a1, 1.0 - a1});
}

}  // namespace

TEST_CASE("gambler's ruin on Z") {
  const auto p = StepDistribution::validate(std::vector<double>{0.7, 0.3});
  const auto up = hitting_bracket(p, {ReducedWord{1}}, ReducedWord{}, 40);
  CHECK(up.lower <= 1.0);
  CHECK(up.upper >= 1.0 - 1e-15);
  CHECK(up.width() < 1e-6);

  const auto down = hitting_bracket(p, {ReducedWord{-1}}, ReducedWord{}, 60);
  CHECK(down.lower <= 3.0 / 7.0 + 1e-15);
  CHECK(down.upper >= 3.0 / 7.0 - 1e-15);
  CHECK(down.width() < 1e-6);

  // Two steps down is (3/7)^2.
  const auto two = hitting_bracket(p, {ReducedWord{-1, -1}}, ReducedWord{}, 60);
  CHECK(two.lower <= 9.0 / 49.0 + 1e-15);
  CHECK(two.upper >= 9.0 / 49.0 - 1e-15);
}

TEST_CASE("first-passage probabilities on F_2") {
  const auto u = StepDistribution::uniform(2);
  const auto b = hitting_bracket(u, {ReducedWord{1}}, ReducedWord{}, 20);
  CHECK(b.lower <= 1.0 / 3.0 + 1e-15);
  CHECK(b.upper >= 1.0 / 3.0 - 1e-15);
  CHECK(b.width() < 1e-6);

  std::mt19937_64 rng(3);
  for (int t = 0; t < 5; ++t) {
    const auto p = random_law(2, rng);
    const auto sol = solve_traffic(p);
    for (std::size_t s = 0; s < 4; ++s) {
      const Letter x = Letter::from_slot(s);
      const auto br = hitting_bracket(p, {ReducedWord{x.index()}}, ReducedWord{}, 20);
      CHECK(br.lower <= sol.z[s] + 1e-13);
      CHECK(br.upper >= sol.z[s] - 1e-13);
      CHECK(br.width() < 1e-6);
    }
    // F is multiplicative along reduced words.
    const auto br = hitting_bracket(p, {ReducedWord{1, -2}}, ReducedWord{}, 20);
    const double f = sol.z[0] * sol.z[3];
    CHECK(br.lower <= f + 1e-13);
    CHECK(br.upper >= f - 1e-13);
    // Translation invariance: F(g, g x) = F(e, x).
    const auto moved = hitting_bracket(p, {ReducedWord{2, 1, -2}}, ReducedWord{2}, 20);
    CHECK(moved.lower == doctest::Approx(br.lower).epsilon(1e-12));
    CHECK(moved.upper == doctest::Approx(br.upper).epsilon(1e-12));
  }
}

TEST_CASE("certified return bounds") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 5; ++t) {
    const auto p = random_law(3, rng);
    const Walk w = Walk::free_group(p);
    const auto rb = certify_return_bounds(w);
    const auto sol = solve_traffic(p);
    for (std::size_t s = 0; s < 6; ++s) {
      // Step s returns to e by ever hitting s^{-1} from e.
      CHECK(rb.lower[s] <= sol.z[s ^ 1U] + 1e-14);
      CHECK(rb.upper[s] >= sol.z[s ^ 1U]);
      CHECK(rb.upper[s] - rb.lower[s] < 1e-6);
    }
    // Supersolution check of the free-group return system, written out
    // directly. rho(s) = z_{s^-1} and z_i = p_i + z_i sum_{j != i} p_j z_{-j}.
    for (std::size_t s = 0; s < 6; ++s) {
      double tail = 0.0;
      for (std::size_t j = 0; j < 6; ++j) {
        if (j != (s ^ 1U)) tail += p[j] * rb.upper[j];
      }
      CHECK(p[s ^ 1U] + rb.upper[s] * tail <= rb.upper[s] + 1e-15);
    }
  }
}

TEST_CASE("brackets nest as the radius grows") {
  const Walk w = Walk::free_product(z3_z2(0.5));
  const std::vector<NormalFormWord> targets{NormalFormWord({{1, 1}})};
  double lo = 0.0, hi = 1.0;
  for (int r = 2; r <= 60; r += 2) {
    const auto b = hitting_bracket(w, targets, NormalFormWord{}, r);
    CHECK(b.lower >= lo - 1e-15);
    CHECK(b.upper <= hi + 1e-15);
    CHECK(b.lower <= b.upper);
    lo = b.lower;
    hi = b.upper;
  }
  // The miss mass at the boundary halves every two steps of radius.
  CHECK(hi - lo < 1e-9);
}

TEST_CASE("elimination agrees with ball sweeps") {
  const Walk fp = Walk::free_product(z3_z2(2.0 / 3.0));
  const Walk fg = Walk::free_group(StepDistribution::validate(std::vector<double>{0.3, 0.1, 0.2, 0.4}));
  const std::vector<double> l3{0.5, 0.5};
  const Walk mixed = Walk::free_product(
      FreeProductSpec({FactorSpec::integer_line(0.6, 0.4), FactorSpec::cyclic(3, l3)}, {0.5, 0.5}));
  struct Case {
    const Walk* w;
    std::vector<NormalFormWord> targets;
    NormalFormWord start;
  };
  const std::vector<Case> cases{
      {&fp, {NormalFormWord({{1, 1}}), NormalFormWord({{0, 2}})}, NormalFormWord{}},
      {&fp, {NormalFormWord({{0, 1}, {1, 1}})}, NormalFormWord({{1, 1}})},
      {&fg, {NormalFormWord({{0, 1}})}, NormalFormWord{}},
      {&fg, {NormalFormWord({{1, -1}, {0, 2}})}, NormalFormWord({{0, 1}})},
      {&mixed, {NormalFormWord({{0, -2}}), NormalFormWord({{1, 1}, {0, 1}})}, NormalFormWord{}},
  };
  for (const auto& c : cases) {
    for (int r = 4; r <= 6; ++r) {
      const auto a = hitting_bracket(*c.w, c.targets, c.start, r);
      const auto b = hitting_bracket_sweep(*c.w, c.targets, c.start, r);
      CHECK(std::abs(a.lower - b.lower) < 1e-11);
      CHECK(std::abs(a.upper - b.upper) < 1e-11);
    }
  }
}

TEST_CASE("adaptive radius") {
  const Walk w = Walk::free_group(StepDistribution::uniform(3));
  const auto b = hitting_bracket_adaptive(w, {NormalFormWord({{0, 1}})}, NormalFormWord{}, 1e-10);
  CHECK(b.width() < 1e-10);
  CHECK(b.lower <= 0.2 + 1e-14);
  CHECK(b.upper >= 0.2 - 1e-14);

  try {
    hitting_bracket(w, {NormalFormWord({{0, 5}})}, NormalFormWord{}, 3);
    FAIL("target outside the ball accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInvalidSpec);
  }
}
