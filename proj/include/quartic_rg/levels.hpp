#pragma once

// Zero-energy wavefunction of the regularized potential and closed-form
// bound-state counting.

#include "quartic_rg/rgflow.hpp"

namespace quartic_rg {

/// psi_0(r) = A sin(alpha_s r / R) inside the well and B r cos(g/r + phi)
/// outside, with A = 1 and B fixed by continuity at R.
struct ZeroEnergySolution {
  ModelParams params;
  CutoffConfig config;
  double inner_amplitude = 1.0;
  double outer_amplitude = 0.0;
};

/// Builds the matched solution. B is taken from whichever of value or slope
/// matching is better conditioned; when alpha_s lies on the flow both agree.
ZeroEnergySolution make_zero_energy_solution(const ModelParams& params, const CutoffConfig& config);

/// Relative mismatch of (psi, psi') at r = R between the two pieces.
double matching_residual(const ZeroEnergySolution& sol);

double zero_energy_psi(double r, const ZeroEnergySolution& sol);
double zero_energy_dpsi(double r, const ZeroEnergySolution& sol);

/// Extrema of sin(alpha_s r/R) on 0 < r < R: floor(alpha_s/pi + 1/2).
int count_inner(double alpha_s);

/// Solutions of x tan(x + phi) = -1 with 0 < x < alpha:
/// floor((alpha + phi + atan(1/alpha)) / pi) - floor((phi + pi/2) / pi).
/// The second term vanishes for phi in [-pi/2, pi/2).
int count_outer(double alpha, double phi);

/// N1 + N2. At an exact jump of either floor the lower count is returned.
int count_bound_states(double alpha_s, double alpha, double phi);

}  // namespace quartic_rg
