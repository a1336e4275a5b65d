#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "quartic_rg/errors.hpp"
#include "quartic_rg/levels.hpp"
#include "quartic_rg/rgflow.hpp"

using namespace quartic_rg;
using std::numbers::pi;

namespace {

// Plain bisection on x cos x - sin(x)/omega, written out here so the branch
// values are checked against something that shares no code with the library.
double root_in(double lo, double hi, double omega) {
  auto f = [omega](double x) { return x * std::cos(x) - std::sin(x) / omega; };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double oracle(double omega, int n) {
  const double eps = 1e-13;
  if (n == 0) return root_in(1e-9, pi - eps, omega);
  return omega > 0 ? root_in(n * pi + eps, (n + 1) * pi - eps, omega)
                   : root_in((n - 1) * pi + eps, n * pi - eps, omega);
}

}  // namespace

TEST_CASE("model parameters reduce phi and carry the scattering length") {
  const ModelParams p(2.0, 1.0 + pi);
  CHECK(p.phi() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(p.scattering_length() == doctest::Approx(2.0 * std::tan(1.0)));
  CHECK(ModelParams(1.0, -0.5).phi() == doctest::Approx(pi - 0.5));
  CHECK(ModelParams::from_scattering_length(3.0, -3.0).phi() == doctest::Approx(0.75 * pi));
  CHECK_THROWS_AS(ModelParams(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(ModelParams(-1.0, 1.0), DomainError);
}

TEST_CASE("omega at regular points and tangent poles") {
  auto w = omega_of(pi - 1.0, 1.0);
  CHECK(w.omega == doctest::Approx(1.0));
  CHECK_FALSE(w.singular);

  w = omega_of(pi / 2 - 1.0, 1.0);
  CHECK(w.singular);
  CHECK(w.omega == 0.0);

  w = omega_of(1.0, 1.0);
  CHECK(w.omega == doctest::Approx(1.0 / (1.0 + std::tan(2.0))).epsilon(1e-14));
  CHECK(w.omega == doctest::Approx(-0.84385).epsilon(1e-5));

  // 1 + alpha tan(alpha + phi) = 0 gives an infinite omega
  // tan(2 + phi) = -1/2
  const double phi = pi - std::atan(0.5) - 2.0;
  CHECK(std::abs(omega_of(2.0, phi).omega) > 1e10);
}

TEST_CASE("kernels") {
  CHECK(lambda_kernel(0.5, 0.0) == 1.0);
  CHECK(lambda_kernel(0.5, 1.0) == doctest::Approx(1.0 + 0.25 * std::log(1.0 / 3.0)));
  CHECK(lambda_kernel(0.5, 1.0) == doctest::Approx(0.72535).epsilon(1e-5));
  CHECK(lambda_kernel(1e-9, 3.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(lambda_kernel(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(lambda_kernel(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(lambda_kernel(-0.2, 1.0), DomainError);

  const auto L = capital_lambda0(0.5, 1.0);
  CHECK(L.real() == doctest::Approx(0.72535).epsilon(1e-5));
  CHECK(L.imag() == doctest::Approx(pi / 4));
  CHECK(capital_lambda0(0.3, 0.0) == std::complex<double>(1.0, 0.0));

  const auto O = capital_omega_n(0.5, 1.0, 1);
  const auto expect = L * L + pi * pi / 4;
  CHECK(O.real() == doctest::Approx(expect.real()));
  CHECK(O.imag() == doctest::Approx(expect.imag()));
  CHECK(capital_omega_n(0.7, 0.0, 4) == std::complex<double>(1.0, 0.0));
  CHECK_THROWS_AS(capital_omega_n(0.5, 1.0, 0), DomainError);
}

TEST_CASE("branch zero") {
  CHECK(beta0(1.0 + 1e-10) < 1e-4);
  for (double w : {1.5, 2.0, 4.0, 10.0}) {
    const double b = beta0(w);
    CHECK(b == doctest::Approx(oracle(w, 0)).epsilon(1e-9));
    CHECK(std::abs(b / std::tan(b) - 1.0 / w) < 1e-6);
  }
  CHECK_THROWS_AS(beta0(1.0), DomainError);
  CHECK_THROWS_AS(beta0(0.5), DomainError);
  CHECK(beta(2.0, 0) == beta0(2.0));
}

TEST_CASE("branches n >= 1 against the independent root") {
  CHECK(beta_n(0.0, 3) == 3 * pi);
  CHECK(beta_n(-0.84385, 1) == doctest::Approx(2.08).epsilon(5e-3));
  CHECK(beta_oracle(-0.84385, 1) > 2.0);
  CHECK(beta_oracle(-0.84385, 1) < 2.2);
  for (int n = 1; n <= 4; ++n) {
    for (double w : {-5.0, -1.0, -0.2, -0.01, 0.01, 0.3, 0.5, 2.0, 5.0}) {
      const double b = beta_n(w, n);
      CHECK(b == doctest::Approx(oracle(w, n)).epsilon(1e-9));
      CHECK(beta_oracle(w, n) == doctest::Approx(oracle(w, n)).epsilon(1e-11));
      CHECK(std::abs(b / std::tan(b) - 1.0 / w) < 1e-6 * std::max(1.0, std::abs(1.0 / w)));
      CHECK(beta_oracle(w, n + 1) > beta_oracle(w, n));
    }
  }
  CHECK_THROWS_AS(beta_n(0.3, 0), DomainError);
}

TEST_CASE("branches approach n pi as omega -> 0") {
  for (int n = 1; n <= 3; ++n) {
    CHECK(std::abs(beta_n(1e-4, n) - n * pi) < 1e-3);
    CHECK(std::abs(beta_n(-1e-4, n) - n * pi) < 1e-3);
    CHECK(beta_oracle(1e-9, n) == doctest::Approx(n * pi).epsilon(1e-7));
  }
}

TEST_CASE("sampling one branch") {
  const ModelParams p(1.0, 1.0);
  const std::vector<double> grid{0.2, 1.0 / (pi - 1.0), 0.9, 1.4};
  const auto c = sample_branch(p, 1, grid);
  REQUIRE(c.samples.size() == grid.size());
  CHECK_FALSE(c.continuous);
  CHECK(c.policy_value == 1);
  // alpha + phi = pi: omega = 1, so alpha_s cot alpha_s = 1 and the branch-1 root is the
  // first positive solution of tan x = x
  CHECK(c.samples[1].omega == doctest::Approx(1.0));
  CHECK(c.samples[1].alpha_s == doctest::Approx(oracle(1.0, 1)).epsilon(1e-9));
  for (const auto& s : c.samples) {
    CHECK(s.alpha * s.R == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s.branch == 1);
  }
  const std::vector<double> bad{0.5, 0.4};
  CHECK_THROWS_AS(sample_branch(p, 1, bad), DomainError);
  const std::vector<double> neg{-0.5, 0.4};
  CHECK_THROWS_AS(sample_branch(p, 1, neg), DomainError);
}

TEST_CASE("discontinuities are poles of omega") {
  const ModelParams p(1.0, 1.0);
  const auto d = find_discontinuities(p, 0.5, 2.0);
  REQUIRE_FALSE(d.empty());
  CHECK(d.back() == doctest::Approx(0.64).epsilon(0.01));
  CHECK(1.0 / d.back() == doctest::Approx(1.56).epsilon(0.01));
  for (double r : d) {
    const double a = 1.0 / r;
    CHECK(std::abs(1.0 + a * std::tan(a + 1.0)) < 1e-8 * std::max(1.0, a * a));
  }
  CHECK(find_discontinuities(p, 2.0, 10.0).empty());
  CHECK(find_discontinuities(p, 0.7, 0.7).empty());

  // Small cutoffs: one pole per pi of alpha, none missed.
  const auto dense = find_discontinuities(p, 0.01, 0.1);
  const double a_lo = 10.0;
  const double a_hi = 100.0;
  CHECK(std::abs(static_cast<double>(dense.size()) - (a_hi - a_lo) / pi) <= 1.0);
  for (std::size_t i = 1; i < dense.size(); ++i) CHECK(dense[i] > dense[i - 1]);
}

TEST_CASE("minimal cutoff for a fixed count") {
  const ModelParams p(1.0, 1.0);
  const double r1 = minimal_cutoff(p, 1);
  CHECK(r1 == doctest::Approx(0.63).epsilon(0.02));
  // at R_min the outer count steps from 0 to 1
  CHECK(count_outer(1.0 / (r1 * 1.0001), 1.0) == 0);
  CHECK(count_outer(1.0 / (r1 * 0.9999), 1.0) == 1);
  CHECK(minimal_cutoff(p, 3) < minimal_cutoff(p, 2));
  CHECK(minimal_cutoff(p, 2) < r1);
  CHECK_THROWS_AS(minimal_cutoff(p, 0), DomainError);
  // phi past pi/2 as well
  const double r2 = minimal_cutoff(ModelParams(1.0, 2.0), 1);
  REQUIRE(std::isfinite(r2));
  CHECK(count_outer(1.0 / (r2 * 1.0001), 2.0) == 0);
  CHECK(count_outer(1.0 / (r2 * 0.9999), 2.0) == 1);
}

TEST_CASE("continuous flow holds the count and jumps branches") {
  const ModelParams p(1.0, 1.0);
  std::vector<double> grid;
  for (int i = 0; i < 60; ++i) grid.push_back(0.6 - i * (0.6 - 0.125) / 59);  // descending
  const auto c = continuous_flow(p, 3, grid);
  CHECK(c.continuous);
  REQUIRE(c.samples.size() == grid.size());
  int prev_branch = 0;
  for (std::size_t i = 0; i < c.samples.size(); ++i) {
    const auto& s = c.samples[i];
    if (i > 0) {
      CHECK(s.R > c.samples[i - 1].R);
      CHECK(s.branch >= prev_branch);  // the branch only drops as R decreases
    }
    prev_branch = s.branch;
    CHECK(count_bound_states(s.alpha_s, s.alpha, 1.0) == 3);
  }
  CHECK(c.samples.front().branch < c.samples.back().branch);
  CHECK_FALSE(c.discontinuities.empty());
}

TEST_CASE("continuous flow on a single branch matches sample_branch") {
  const ModelParams p(1.0, 1.0);
  const std::vector<double> grid{0.7, 0.9, 1.2, 2.0};
  const auto a = continuous_flow(p, 1, grid);
  const auto b = sample_branch(p, 1, grid);
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(a.samples[i].alpha_s == b.samples[i].alpha_s);
    CHECK(a.samples[i].branch == 1);
  }
}

TEST_CASE("continuous flow below R_min") {
  const ModelParams p(1.0, 1.0);
  const std::vector<double> grid{0.5, 0.7};
  try {
    continuous_flow(p, 1, grid);
    FAIL("expected RMinViolation");
  } catch (const RMinViolation& e) {
    CHECK(e.r_min() == doctest::Approx(0.634).epsilon(0.005));
    CHECK(e.target() == 1);
  }
  CHECK_THROWS_AS(continuous_flow(p, 0, grid), DomainError);
}

TEST_CASE("crossing a discontinuity adds one bound state on a fixed branch") {
  const ModelParams p(1.0, 1.0);
  const auto d = find_discontinuities(p, 0.1, 1.0);
  for (double r : d) {
    for (int n = 1; n <= 3; ++n) {
      const double above = r * (1 + 1e-6);
      const double below = r * (1 - 1e-6);
      const int n_above = count_bound_states(flow_alpha_s(p, n, above), 1.0 / above, 1.0);
      const int n_below = count_bound_states(flow_alpha_s(p, n, below), 1.0 / below, 1.0);
      CHECK(n_below == n_above + 1);
    }
  }
}

TEST_CASE("region-one cutoffs hold n states on branch n") {
  const ModelParams p(1.0, 1.0);
  for (int n = 1; n <= 4; ++n) {
    for (double R : {0.7, 1.0, 3.0}) CHECK(count_bound_states(flow_alpha_s(p, n, R), 1.0 / R, 1.0) == n);
  }
}
