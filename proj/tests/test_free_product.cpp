#include <doctest.h>

#include <cmath>
#include <random>

#include "rwdrift/error.hpp"
#include "rwdrift/free_product.hpp"
#include "rwdrift/simulator.hpp"
#include "rwdrift/traffic.hpp"

using namespace rwdrift;

namespace {

FreeProductSpec z3_z2(double a1) {
  const std::vector<double> l3{0.5, 0.5}, l2{1.0};
  return FreeProductSpec({FactorSpec::cyclic(3, l3), FactorSpec::cyclic(2, l2)}, {a1, 1.0 - a1});
}

// sum_{n <= n_max} p^(n)(e) z^n for a cyclic factor, by direct powers.
double cyclic_green_series(int m, const std::vector<double>& law, double z, int n_max) {
  std::vector<double> dist(m, 0.0);
  dist[0] = 1.0;
  double s = 1.0, zn = 1.0;
  for (int n = 1; n <= n_max; ++n) {
    std::vector<double> next(m, 0.0);
    for (int a = 0; a < m; ++a) {
      for (int g = 1; g < m; ++g) next[(a + g) % m] += dist[a] * law[g - 1];
    }
    dist = next;
    zn *= z;
    s += dist[0] * zn;
  }
  return s;
}

std::vector<double> random_simplex(std::size_t k, std::mt19937_64& rng, double lo = 0.05) {
  std::uniform_real_distribution<double> u(lo, 1.0);
  std::vector<double> w(k);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x /= s;
  return w;
}

FreeProductSpec random_spec(std::mt19937_64& rng) {
  while (true) {
    const std::size_t r = 2 + rng() % 2;
    std::vector<FactorSpec> fs;
    bool all_z2 = true;
    for (std::size_t i = 0; i < r; ++i) {
      const int kind = static_cast<int>(rng() % 4);
      if (kind == 0) {
        const auto pm = random_simplex(2, rng, 0.2);
        fs.push_back(FactorSpec::integer_line(pm[0], pm[1]));
        all_z2 = false;
      } else {
        const int m = 2 + static_cast<int>(rng() % 4);
        fs.push_back(FactorSpec::cyclic(m, random_simplex(m - 1, rng)));
        if (m != 2) all_z2 = false;
      }
    }
    if (r == 2 && all_z2) continue;
    return FreeProductSpec(std::move(fs), random_simplex(r, rng, 0.2));
  }
}

std::vector<NormalFormWord> factor_targets(const FreeProductSpec& spec, std::size_t i) {
  std::vector<NormalFormWord> t;
  const int fi = static_cast<int>(i);
  if (spec.factor(i).is_finite()) {
    for (int g = 1; g < spec.factor(i).order(); ++g) t.emplace_back(std::vector<Block>{{fi, g}});
  } else {
    t.emplace_back(std::vector<Block>{{fi, 1}});
    t.emplace_back(std::vector<Block>{{fi, -1}});
  }
  return t;
}

}  // namespace

TEST_CASE("factor Green functions") {
  const std::vector<double> flip{1.0};
  const auto z2 = FactorSpec::cyclic(2, flip);
  CHECK(factor_green(z2, 0.5) == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(factor_green(z2, 0.0) == 1.0);

  const std::vector<double> half{0.5, 0.5};
  const auto z3 = FactorSpec::cyclic(3, half);
  CHECK(std::abs(factor_green(z3, 0.6) - cyclic_green_series(3, half, 0.6, 60)) < 1e-10);
  CHECK(factor_green(z3, 0.0) == 1.0);

  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const int m = 2 + static_cast<int>(rng() % 6);
    const auto law = random_simplex(m - 1, rng);
    const double z = 0.8 * std::uniform_real_distribution<double>(0, 1)(rng);
    CHECK(std::abs(factor_green(FactorSpec::cyclic(m, law), z) - cyclic_green_series(m, law, z, 400)) <
          1e-12);
  }

  // Z: sum_n C(2n, n) (p+ p-)^n z^{2n}.
  const auto zl = FactorSpec::integer_line(0.7, 0.3);
  double s = 0.0, c = 1.0;
  const double x = 0.21 * 0.9 * 0.9;
  for (int n = 0; n < 400; ++n) {
    s += c;
    c *= x * (2.0 * n + 1) * (2.0 * n + 2) / ((n + 1.0) * (n + 1.0));
  }
  CHECK(factor_green(zl, 0.9) == doctest::Approx(s).epsilon(1e-12));
  CHECK(factor_green_radius(zl) == doctest::Approx(1.0 / (2.0 * std::sqrt(0.21))));

  try {
    factor_green(z3, 1.0);
    FAIL("z = 1 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kOutOfDomain);
  }
  CHECK_THROWS_AS(factor_green(FactorSpec::integer_line(0.5, 0.5), 1.0), Error);
  CHECK_THROWS_AS(factor_green(z2, -0.1), Error);
}

TEST_CASE("xi for Z/3 * Z/2") {
  const auto spec = z3_z2(2.0 / 3.0);
  const auto xi = xi_vector(spec, 1e-10);
  CHECK(xi.max_width() < 1e-10);
  CHECK(xi.value[0] == doctest::Approx(6.0 / 7.0).epsilon(1e-9));
  CHECK(xi.value[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-9));

  const auto half = xi_vector(z3_z2(0.5), 1e-10);
  CHECK(half.value[0] == doctest::Approx(0.8).epsilon(1e-9));
  CHECK(half.value[1] == doctest::Approx(0.75).epsilon(1e-9));

  // Monte Carlo hitting frequencies.
  const Walk w = Walk::free_product(spec);
  SimulationOptions opts;
  opts.n = 400;
  opts.samples = 20000;
  opts.seed = 31;
  for (std::size_t i = 0; i < 2; ++i) {
    const auto est = estimate_hitting_probability(w, factor_targets(spec, i), opts);
    CHECK(std::abs(est.value - xi.value[i]) <= 3.0 * est.stderr_);
  }
}

TEST_CASE("symmetric spec gives equal xi") {
  const std::vector<double> l{0.3, 0.7};
  const FreeProductSpec spec({FactorSpec::cyclic(3, l), FactorSpec::cyclic(3, l), FactorSpec::cyclic(3, l)},
                             {1.0 / 3, 1.0 / 3, 1.0 / 3});
  const auto xi = xi_vector(spec, 1e-10);
  CHECK(xi.value[0] == doctest::Approx(xi.value[1]).epsilon(1e-10));
  CHECK(xi.value[1] == doctest::Approx(xi.value[2]).epsilon(1e-10));
}

TEST_CASE("block drift on Z/3 * Z/2") {
  const auto a = block_drift(z3_z2(0.5));
  const auto b = block_drift(z3_z2(2.0 / 3.0));
  CHECK(a.value == doctest::Approx(1.0 / 7.0).epsilon(1e-9));
  CHECK(b.value == doctest::Approx(2.0 / 15.0).epsilon(1e-9));
  CHECK(a.lower <= a.value);
  CHECK(a.upper >= a.value);
  CHECK(a.upper - a.lower < 1e-8);
  CHECK(b.upper < a.lower);

  const auto j = a.to_json();
  CHECK(j.contains("l_block"));
  CHECK(j["interval"].size() == 2);
  CHECK(j["xi"].size() == 2);
}

TEST_CASE("block drift agrees with simulation on random specs") {
  std::mt19937_64 rng(77);
  SimulationOptions opts;
  opts.n = 2000;
  opts.samples = 4000;
  opts.increment = true;
  for (int t = 0; t < 10; ++t) {
    const auto spec = random_spec(rng);
    const auto r = block_drift(spec, 1e-9);
    opts.seed = 100 + t;
    const auto mc = estimate_drift(Walk::free_product(spec), LengthFunctional::kBlock, opts);
    INFO("spec " << spec.to_json().dump());
    CHECK(std::abs(mc.value - r.value) <= 3.0 * mc.stderr_ + 1e-6);
    CHECK(r.upper - r.lower < 1e-6);
  }
}

TEST_CASE("F_2 as Z * Z") {
  const std::vector<double> raw{0.3, 0.1, 0.2, 0.4};
  const auto p = StepDistribution::validate(raw);
  const FreeProductSpec spec({FactorSpec::integer_line(0.75, 0.25), FactorSpec::integer_line(1.0 / 3, 2.0 / 3)},
                             {0.4, 0.6});
  const Walk a = Walk::free_group(p), b = Walk::free_product(spec);
  REQUIRE(a.steps().size() == b.steps().size());
  for (std::size_t k = 0; k < a.steps().size(); ++k) {
    CHECK(a.steps()[k].factor == b.steps()[k].factor);
    CHECK(a.steps()[k].value == b.steps()[k].value);
    CHECK(a.steps()[k].prob == doctest::Approx(b.steps()[k].prob).epsilon(1e-15));
  }
  const auto r = block_drift(spec, 1e-10);
  SimulationOptions opts;
  opts.n = 4000;
  opts.samples = 4000;
  opts.seed = 5;
  opts.increment = true;
  const auto mc = estimate_drift(a, LengthFunctional::kBlock, opts);
  CHECK(std::abs(mc.value - r.value) <= 3.0 * mc.stderr_);
  // Entering generator 1 happens through +1 or -1. With e_+- the entry
  // probabilities, z_+ = e_+ + e_- z_+^2 and z_- = e_- + e_+ z_-^2.
  const auto sol = solve_traffic(p);
  const auto xi = xi_vector(spec, 1e-10);
  const double zp = sol.z[0], zm = sol.z[1];
  const double det = 1.0 - zp * zp * zm * zm;
  const double ep = (zp - zp * zp * zm) / det;
  const double em = (zm - zm * zm * zp) / det;
  CHECK(xi.value[0] == doctest::Approx(ep + em).epsilon(1e-9));
}

TEST_CASE("continuity in alpha") {
  double prev = block_drift(z3_z2(0.3), 1e-10).value;
  for (double a = 0.32; a < 0.8; a += 0.02) {
    const double v = block_drift(z3_z2(a), 1e-10).value;
    CHECK(std::abs(v - prev) < 0.01);
    prev = v;
  }
}

TEST_CASE("formula domain") {
  const auto spec = z3_z2(0.5);
  const std::vector<double> bad{1.0, 0.5};
  CHECK_THROWS_AS(block_drift_formula(spec, bad), Error);
  const std::vector<double> wrong_size{0.5};
  CHECK_THROWS_AS(block_drift_formula(spec, wrong_size), Error);
}
