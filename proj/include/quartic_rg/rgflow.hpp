#pragma once

// Running square-well strength for the cut-off -g^2/r^4 potential.
//
// Below the cutoff R the singular tail is replaced by an attractive square
// well of depth alpha_s^2 / R^2. Matching the zero-energy solutions at R gives
//
//     alpha_s cot(alpha_s) = 1 + alpha tan(alpha + phi) = 1 / omega,
//
// with alpha = g / R. Its solutions form infinitely many branches beta_n(omega).
// This header provides closed-form (integral) expressions for the branches,
// an independent root-finding oracle, and sweeps over the cutoff.

#include <complex>
#include <span>
#include <vector>

namespace quartic_rg {

/// Physical inputs that stay fixed while the cutoff runs.
class ModelParams {
 public:
  /// `phi` is reduced modulo pi into [0, pi). Throws DomainError unless g > 0.
  ModelParams(double g, double phi);

  /// Builds the parameters from a scattering length, tan(phi) = L / g.
  static ModelParams from_scattering_length(double g, double scattering_length);

  double g() const noexcept { return g_; }
  double phi() const noexcept { return phi_; }
  /// L = g tan(phi).
  double scattering_length() const;

 private:
  double g_;
  double phi_;
};

/// Regulator state at one cutoff. `alpha` is always derived from R.
struct CutoffConfig {
  double R = 1.0;
  double alpha_s = 0.0;
  int branch = 1;

  double alpha(double g) const noexcept { return g / R; }
};

struct OmegaValue {
  double omega = 0.0;
  /// Set when tan(alpha + phi) has a pole; omega is then exactly 0.
  bool singular = false;
};

inline constexpr double kTangentPoleTolerance = 1e-12;

/// omega with 1/omega = 1 + alpha tan(alpha + phi). At a zero of the right-hand
/// side the result is an infinity of the appropriate sign.
OmegaValue omega_of(double alpha, double phi);

/// lambda(t) = 1 + (omega t / 2) ln((1 - t)/(1 + t)), 0 < t < 1.
double lambda_kernel(double t, double omega);

/// Lambda_0(t) = lambda(t) + i pi omega t / 2.
std::complex<double> capital_lambda0(double t, double omega);

/// Omega_n(t) = Lambda_0(t)^2 + n^2 pi^2 omega^2 t^2.
std::complex<double> capital_omega_n(double t, double omega, int n);

/// Branch n = 0, defined for omega > 1. Positive sign convention.
double beta0(double omega);

/// Branch n >= 1 for any real omega (exactly n*pi at omega = 0).
double beta_n(double omega, int n);

/// Root of x cot x = 1/omega by bisection: in (0, pi) for n = 0, in
/// (n pi, (n+1) pi) for omega > 0 and ((n-1) pi, n pi) for omega < 0.
double beta_oracle(double omega, int n);

/// Dispatches to beta0 for n == 0 and to beta_n otherwise.
double beta(double omega, int n);

struct FlowSample {
  double R = 0.0;
  double alpha = 0.0;
  double omega = 0.0;
  double alpha_s = 0.0;
  int branch = 0;
};

struct FlowCurve {
  ModelParams params;
  bool continuous = false;
  /// Branch index in fixed mode, target bound-state count in continuous mode.
  int policy_value = 0;
  std::vector<FlowSample> samples;  // strictly increasing in R
  std::vector<double> discontinuities;  // increasing R*
};

/// Evaluates one fixed branch on every grid point. `R_grid` must be strictly
/// increasing and positive.
FlowCurve sample_branch(const ModelParams& params, int n, std::span<const double> R_grid);

/// Cutoffs in [R_lo, R_hi] where 1 + alpha tan(alpha + phi) vanishes, i.e. where
/// every branch jumps by pi. Sorted ascending.
std::vector<double> find_discontinuities(const ModelParams& params, double R_lo, double R_hi);

/// Smallest cutoff at which `n_target` bound states can be kept with a branch
/// n >= 1. Returns 0 when every cutoff is admissible, +inf when none is.
double minimal_cutoff(const ModelParams& params, int n_target);

/// Branch index that holds `n_target` bound states at cutoff R, or 0 if none.
int branch_for_count(const ModelParams& params, int n_target, double R);

/// Branch-jumping flow holding the bound-state count fixed. The grid may be
/// given in either order; samples come back increasing in R. Throws
/// RMinViolation if some grid point lies below minimal_cutoff.
FlowCurve continuous_flow(const ModelParams& params, int n_target, std::span<const double> R_grid);

/// Square-well strength on branch n at cutoff R (fixed-branch flow).
double flow_alpha_s(const ModelParams& params, int n, double R);

}  // namespace quartic_rg
