#include "quartic_rg/levels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "quartic_rg/errors.hpp"

namespace quartic_rg {

namespace {

// Integer part with ties (exact integers) resolved downwards: a zero-energy
// resonance sitting exactly at threshold is not counted as bound.
int lower_floor(double x) {
  if (x <= 0.0) return 0;
  return static_cast<int>(std::ceil(x)) - 1;
}

}  // namespace

ZeroEnergySolution make_zero_energy_solution(const ModelParams& params, const CutoffConfig& config) {
  if (!(config.R > 0.0)) throw DomainError("cutoff R must be positive");
  const double R = config.R;
  const double a = config.alpha(params.g());
  const double x = a + params.phi();
  const double inner_value = std::sin(config.alpha_s);
  const double inner_slope = config.alpha_s / R * std::cos(config.alpha_s);
  // outer piece per unit B at r = R
  const double outer_value = R * std::cos(x);
  const double outer_slope = std::cos(x) + a * std::sin(x);
  // compare in a common scale: value * (1/R) vs slope
  const double b = (std::abs(outer_value) / R >= std::abs(outer_slope)) ? inner_value / outer_value
                                                                          : inner_slope / outer_slope;
  return {params, config, 1.0, b};
}

double zero_energy_psi(double r, const ZeroEnergySolution& sol) {
  if (!(r > 0.0)) throw DomainError("zero_energy_psi requires r > 0");
  const double R = sol.config.R;
  if (r < R) return sol.inner_amplitude * std::sin(sol.config.alpha_s * r / R);
  return sol.outer_amplitude * r * std::cos(sol.params.g() / r + sol.params.phi());
}

double zero_energy_dpsi(double r, const ZeroEnergySolution& sol) {
  if (!(r > 0.0)) throw DomainError("zero_energy_dpsi requires r > 0");
  const double R = sol.config.R;
  if (r < R) return sol.inner_amplitude * sol.config.alpha_s / R * std::cos(sol.config.alpha_s * r / R);
  const double u = sol.params.g() / r;
  const double x = u + sol.params.phi();
  return sol.outer_amplitude * (std::cos(x) + u * std::sin(x));
}

double matching_residual(const ZeroEnergySolution& sol) {
  const double R = sol.config.R;
  const double in_v = sol.inner_amplitude * std::sin(sol.config.alpha_s);
  const double in_d = sol.inner_amplitude * sol.config.alpha_s / R * std::cos(sol.config.alpha_s);
  const double x = sol.params.g() / R + sol.params.phi();
  const double out_v = sol.outer_amplitude * R * std::cos(x);
  const double out_d = sol.outer_amplitude * (std::cos(x) + sol.params.g() / R * std::sin(x));
  const double scale = std::max(std::hypot(in_v / R, in_d), std::hypot(out_v / R, out_d));
  if (scale == 0.0) return 0.0;
  return std::hypot((in_v - out_v) / R, in_d - out_d) / scale;
}

int count_inner(double alpha_s) {
  if (alpha_s < 0.0) throw DomainError("count_inner requires alpha_s >= 0");
  return lower_floor(alpha_s / std::numbers::pi + 0.5);
}

int count_outer(double alpha, double phi) {
  if (!(alpha > 0.0)) throw DomainError("count_outer requires alpha > 0");
  // u + phi + atan(1/u) increases from phi + pi/2 at u = 0+, so the roots in
  // (0, alpha) are the multiples of pi it passes on the way to u = alpha. The
  // subtracted term is zero for phi in [-pi/2, pi/2).
  const double pi = std::numbers::pi;
  return lower_floor((alpha + phi + std::atan(1.0 / alpha)) / pi) - static_cast<int>(std::floor((phi + 0.5 * pi) / pi));
}

int count_bound_states(double alpha_s, double alpha, double phi) {
  return count_inner(alpha_s) + count_outer(alpha, phi);
}

}  // namespace quartic_rg
