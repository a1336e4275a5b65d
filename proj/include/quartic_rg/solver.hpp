#pragma once

// Radial s-wave Schroedinger equation psi'' = (V(r) - E) psi in units
// hbar = 2m = 1, for the square-well regularized and the hard-core variants of
// the -g^2/r^4 potential.

#include <span>
#include <variant>
#include <vector>

#include "quartic_rg/rgflow.hpp"

namespace quartic_rg {

/// -alpha_s^2/R^2 for r < R, -g^2/r^4 for r >= R.
struct Regularized {
  double alpha_s = 0.0;
  double R = 1.0;
  double g = 1.0;
};

/// psi(Rc) = 0 and -g^2/r^4 outside the core.
struct HardCore {
  double Rc = 1.0;
  double g = 1.0;
};

using PotentialSpec = std::variant<Regularized, HardCore>;

/// Regularized potential on branch n of the flow at cutoff R.
Regularized regularized_on_branch(const ModelParams& params, int n, double R);

/// Throws DomainError for nonpositive lengths or negative strengths.
void validate(const PotentialSpec& spec);

double eval_potential(double r, const PotentialSpec& spec);

struct IntegrationOptions {
  double rel_tol = 1e-10;
  /// Keep every accepted step in the returned solution.
  bool record = true;
};

/// Solution of the radial equation along one integration path. Samples are
/// stored with increasing r regardless of the direction of integration, all in
/// one common scale; `log_scale` is the log of the factor that was divided out
/// to keep (psi, psi') in range.
struct RadialSolution {
  double energy = 0.0;
  std::vector<double> r;
  std::vector<double> psi;
  std::vector<double> dpsi;
  int node_count = 0;
  double log_scale = 0.0;
  /// Final values at r_end.
  double psi_end = 0.0;
  double dpsi_end = 0.0;
  /// Integrals of psi^2 and r^2 psi^2 over the path (in the final scale),
  /// always taken as positive measures.
  double norm_integral = 0.0;
  double r2_integral = 0.0;
};

RadialSolution integrate_radial(double energy, const PotentialSpec& spec, double r_start, double r_end,
                                double psi0, double dpsi0, const IntegrationOptions& options = {});

struct SolverOptions {
  /// r_inf = max(r_inf_kappa / kappa, r_inf_g * g, r_inf_match * r_match).
  double r_inf_kappa = 25.0;
  double r_inf_g = 10.0;
  double r_inf_match = 5.0;
  /// Hard-core matching radius = match_scale * max(g, Rc).
  double match_scale = 2.0;
  int scan_points = 200;
  /// Lower end of the kappa scan in units of 1/g.
  double kappa_min_g = 1e-6;
  double root_rel_tol = 1e-12;
  /// Phase-shift integration stops where g^2/r^4 <= tail_ratio * k^2.
  double tail_ratio = 1e-10;
  double rel_tol = 1e-10;
};

struct BoundState {
  double kappa = 0.0;
  double energy = 0.0;
  /// Zeros of psi on (0, inf). For the hard core the zero at r = Rc is
  /// included.
  int nodes = 0;
  double rms_radius = 0.0;
  bool weakest = false;
};

double matching_radius(const PotentialSpec& spec, const SolverOptions& options = {});

/// (psi'/psi) of the decaying solution minus that of the regular solution at
/// the matching radius. Returns +-infinity when either psi vanishes there.
double log_derivative_mismatch(double kappa, const PotentialSpec& spec, const SolverOptions& options = {});

/// Normalized Wronskian of the regular and decaying solutions at the matching
/// radius. Continuous in kappa; zero exactly at bound states.
double matching_wronskian(double kappa, const PotentialSpec& spec, const SolverOptions& options = {});

/// Number of bound states with binding wavenumber above kappa, from the node
/// count of the regular solution at E = -kappa^2.
int states_deeper_than(double kappa, const PotentialSpec& spec, const SolverOptions& options = {});

/// Nodes on (0, inf) of the regular zero-energy solution.
int zero_energy_nodes(const PotentialSpec& spec, const SolverOptions& options = {});

/// Full spectrum, deepest first. The last entry is flagged weakest.
std::vector<BoundState> bound_states(const PotentialSpec& spec, const SolverOptions& options = {});

/// Weakest bound state; throws NumericalError if there is none.
BoundState weakest_state(const PotentialSpec& spec, const SolverOptions& options = {});

/// Unit-normalized wavefunction of `state` at the given radii (any order).
/// Points inside the hard core evaluate to 0.
std::vector<double> bound_state_wavefunction(const PotentialSpec& spec, const BoundState& state,
                                             std::span<const double> radii, const SolverOptions& options = {});

/// Principal s-wave phase shift in [0, pi) at wavenumber k.
double phase_shift(double k, const PotentialSpec& spec, const SolverOptions& options = {});

struct PhaseSample {
  double k = 0.0;
  double delta = 0.0;
};

struct PhaseCurve {
  PotentialSpec spec;
  /// pi when the potential binds, 0 otherwise; the curve's small-k end is
  /// shifted by a multiple of pi to sit closest to it.
  double anchor = 0.0;
  std::vector<PhaseSample> samples;
};

/// Unwrapped phase shift on an increasing grid. Between grid points where the
/// principal value moves by more than pi/4 the curve is tracked through
/// bisected intermediate wavenumbers; fails with NumericalError if that does
/// not settle within the refinement cap.
PhaseCurve phase_curve(const PotentialSpec& spec, std::span<const double> k_grid, const SolverOptions& options = {});

}  // namespace quartic_rg
