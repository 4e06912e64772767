#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rwdrift/error.hpp"
#include "rwdrift/optimizer.hpp"
#include "rwdrift/traffic.hpp"

using namespace rwdrift;

namespace {

std::vector<double> random_half(int d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::vector<double> w(d);
  double s = 0.0;
  for (auto& x : w) s += (x = u(rng));
  for (auto& x : w) x *= 0.5 / s;
  return w;
}

// Sign changes of G on a fine grid of [0, 1/2).
int grid_roots(double a, double b, double lambda) {
  const int n = 20000;
  int count = 0;
  double prev = lagrange_cubic(a, b, lambda, 0.0);
  if (prev == 0.0) ++count;
  for (int k = 1; k < n; ++k) {
    const double g = lagrange_cubic(a, b, lambda, 0.5 * k / n);
    if (g == 0.0 || (prev != 0.0 && (g < 0.0) != (prev < 0.0))) ++count;
    prev = g;
  }
  return count;
}

}  // namespace

TEST_CASE("maximisation finds the uniform point") {
  for (int d = 2; d <= 3; ++d) {
    for (Objective obj : {Objective::kDrift, Objective::kEntropy}) {
      const auto r = maximize_symmetric(obj, d);
      CHECK(r.starts_agree);
      CHECK(r.start_results.size() == 8);
      for (double x : r.argmax) CHECK(std::abs(x - 0.5 / d) < 1e-6);
      const double expect = obj == Objective::kDrift ? 1.0 - 1.0 / d : (1.0 - 1.0 / d) * std::log(2.0 * d - 1);
      CHECK(std::abs(r.value - expect) < 1e-6);
      CHECK(r.gradient_norm < 1e-6);
      if (obj == Objective::kEntropy) CHECK(r.min_fundamental_slack >= -1e-10);
    }
  }
  CHECK_THROWS_AS(maximize_symmetric(Objective::kDrift, 1), Error);
}

TEST_CASE("the objective tends to the d = 1 value at the boundary") {
  double prev = 1.0;
  for (double eps : {1e-2, 1e-4, 1e-6, 1e-8}) {
    const std::vector<double> half{eps, 0.5 - eps};
    const double v = symmetric_objective(Objective::kDrift, half);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(prev < 1e-3);
}

TEST_CASE("gradients") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const auto half = random_half(3, rng);
    const auto g1 = symmetric_gradient(Objective::kDrift, half, 1e-5);
    const auto g2 = symmetric_gradient(Objective::kDrift, half, 0.5e-5);
    double num = 0.0, den = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < g1.size(); ++i) {
      num += (g1[i] - g2[i]) * (g1[i] - g2[i]);
      den += g1[i] * g1[i];
      sum += g1[i];
    }
    CHECK(std::sqrt(num) <= 1e-5 * std::sqrt(den) + 1e-9);
    // Tangent to the constraint sum = 1/2.
    CHECK(std::abs(sum) < 1e-10);
  }
  for (int d = 2; d <= 4; ++d) {
    const std::vector<double> uniform(d, 0.5 / d);
    const auto g = symmetric_gradient(Objective::kDrift, uniform, 1e-5);
    double n2 = 0.0;
    for (double x : g) n2 += x * x;
    CHECK(std::sqrt(n2) < 1e-7);
  }
}

TEST_CASE("gradient against a directional difference of the objective") {
  // Independent check: derivative along u = e_0 - e_1 by a plain central difference.
  const std::vector<double> half{0.1, 0.15, 0.25};
  const auto g = symmetric_gradient(Objective::kEntropy, half, 1e-5);
  const double h = 1e-4;
  std::vector<double> a = half, b = half;
  a[0] += h, a[1] -= h;
  b[0] -= h, b[1] += h;
  const double fd = (symmetric_objective(Objective::kEntropy, a) - symmetric_objective(Objective::kEntropy, b)) / (2 * h);
  CHECK(g[0] - g[1] == doctest::Approx(fd).epsilon(1e-6));
}

TEST_CASE("Lagrange cubic") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> ua(1.0, 10.0), ub(0.0, 1.0), ul(-20.0, 20.0);
  int multi = 0;
  for (int t = 0; t < 10000; ++t) {
    const double a = ua(rng), b = ub(rng), lambda = ul(rng);
    if (!(b > 0.0 && a > 1.0)) continue;
    const double scale = 16 * a + std::abs(lambda) * a * a + 4 * a + b;
    CHECK(std::abs(lagrange_cubic(a, b, lambda, 0.5) - b) <= 1e-14 * scale);
    CHECK(std::abs(lagrange_cubic_dq(a, b, lambda, 0.5)) <= 1e-14 * scale);
    const int rc = root_count(a, b, lambda);
    CHECK(rc <= 1);
    if (grid_roots(a, b, lambda) > 1) ++multi;
    CHECK(rc == grid_roots(a, b, lambda));
  }
  CHECK(multi == 0);
  try {
    root_count(0.5, 0.5, 1.0);
    FAIL("A < 1 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kDomainViolation);
  }
}

TEST_CASE("concavity probe") {
  for (int d = 2; d <= 3; ++d) {
    ConcavityOptions opts;
    opts.chords = 1000;
    const auto rep = concavity_probe(d, opts);
    CHECK(rep.violations.empty());
    CHECK(rep.evaluations == 3000);
    const auto j = rep.to_json();
    CHECK(j["violations"].is_array());
  }
  // Degenerate chord: the midpoint equals both ends.
  const std::vector<double> half{0.1, 0.4};
  std::vector<double> mix(2);
  for (int i = 0; i < 2; ++i) mix[i] = 0.5 * half[i] + 0.5 * half[i];
  const double f = symmetric_objective(Objective::kDrift, half);
  CHECK(symmetric_objective(Objective::kDrift, mix) - 0.5 * (f + f) == 0.0);
}

TEST_CASE("d = 1 sweep has one kink at the symmetric point") {
  const auto pa = StepDistribution::validate(std::vector<double>{0.3, 0.7});
  const auto pb = StepDistribution::validate(std::vector<double>{0.7, 0.3});
  const auto rows = sweep_line(pa, pb, 81);
  CHECK(kink_count(rows) == 1);
  for (const auto& r : rows) {
    const double p1 = 0.3 + 0.4 * r.t;
    if (r.kink) {
      CHECK(p1 == doctest::Approx(0.5));
    } else {
      CHECK(std::abs(r.drift - std::abs(2.0 * p1 - 1.0)) < 1e-12);
    }
  }
  std::ostringstream os;
  write_sweep_csv(os, rows);
  CHECK(os.str().rfind("t,drift,entropy,d1_drift,d2_drift,kink_flag\n", 0) == 0);
}

TEST_CASE("d = 2 sweeps are smooth and endpoints are exact") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int t = 0; t < 5; ++t) {
    std::vector<double> a(4), b(4);
    double sa = 0, sb = 0;
    for (auto& x : a) sa += (x = u(rng));
    for (auto& x : b) sb += (x = u(rng));
    for (auto& x : a) x /= sa;
    for (auto& x : b) x /= sb;
    const auto pa = StepDistribution::validate(a), pb = StepDistribution::validate(b);
    const auto rows = sweep_line(pa, pb, 81);
    CHECK(kink_count(rows) == 0);
    CHECK(rows.front().drift == free_report(pa).drift);
    CHECK(rows.back().drift == free_report(pb).drift);
    CHECK(rows.front().entropy == free_report(pa).entropy);
    CHECK(rows.back().t == 1.0);
    for (const auto& r : rows) CHECK(std::abs(r.d2_drift) < 50.0);
  }
}
