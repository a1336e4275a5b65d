#pragma once

// Dictionary between the square-well regularization and a hard core of radius
// Rc that reproduces the same scattering length, semiclassical estimates, and
// the electron-polarizable-molecule application in atomic units.

#include <optional>
#include <span>
#include <vector>

#include "quartic_rg/rgflow.hpp"
#include "quartic_rg/solver.hpp"

namespace quartic_rg {

/// Conversion constants for hbar = 2m = 1 with lengths in Bohr radii, where
/// energies come out in Rydberg.
struct UnitsContext {
  double bohr_radius_angstrom = 0.529177;
  double rydberg_meV = 13605.69;
};

/// L = g cot(g / Rc). Throws DomainError at the poles sin(g/Rc) = 0.
double hardcore_scattering_length(double g, double Rc);

/// phi = atan(L / g) mapped into [0, pi).
double phi_from_scattering_length(double L, double g);

/// Rc = g / ((s + 1/2) pi - phi): the hard core with s nodes in its weakest
/// state and the same scattering length as phase phi.
double hardcore_radius(double g, double phi, int s = 1);

struct CorrespondenceRow {
  double phi = 0.0;
  int s = 1;
  double Rc_over_g = 0.0;
  double g_kappa_R = 0.0;    // square-well regularization
  double g_kappa_hc = 0.0;   // hard core
  double rms_R = 0.0;        // <r^2>^{1/2} / g
  double rms_hc = 0.0;
};

struct CorrespondenceOptions {
  /// Square-well cutoff R / g used for the regularized column.
  double cutoff_over_g = 0.1;
  int branch = 1;
  SolverOptions solver{};
};

/// One row per phase: weakest state of the regularized potential on a fixed
/// branch next to the weakest state of the matching hard core.
CorrespondenceRow correspondence_row(double g, double phi, int s = 1, const CorrespondenceOptions& options = {});

std::vector<CorrespondenceRow> correspondence_table(double g, std::span<const double> phis, int s = 1,
                                                    const CorrespondenceOptions& options = {});

/// The nine phases of the published comparison table.
std::span<const double> reference_phases();

/// Printed values of the published comparison table, three significant
/// figures, in the order of reference_phases().
struct PublishedRow {
  double phi;
  double Rc_over_g;
  double g_kappa_R;
  double g_kappa_hc;
  double rms_R;
  double rms_hc;
};

std::span<const PublishedRow> published_rows();

/// Gamma(5/4) / Gamma(3/4), checked once against Gamma(1/4)^2 / (4 pi sqrt 2).
double gamma_ratio();

/// Semiclassical action
///   R sqrt(E + alpha_s^2/R^2) + int_R^{r+} sqrt(E + g^2/r^4) dr,  r+ = sqrt(g/kappa),
/// for E = -kappa^2 < 0.
double wkb_action(double E, double alpha_s, double R, double g);

/// kappa solving wkb_action(-kappa^2) = (n - 1/2) pi. Throws NumericalError if
/// level n does not exist.
double wkb_kappa_finite(double alpha_s, double R, double g, int n);

/// Highest level index n with a solution (the weakest semiclassical level), 0
/// if none.
int wkb_highest_level(double alpha_s, double R, double g);

/// kappa with g kappa = (4/pi) (Gamma(5/4)/Gamma(3/4))^2 (phi + 1/2)^2.
double wkb_kappa_limit(double g, double phi);

/// Coupling length in Bohr radii for a polarizability in a0^3: g = sqrt(alphaP).
double polarizability_coupling(double alphaP);

/// Exactly one of the short-range inputs must be set.
struct ShortRangeInput {
  std::optional<double> phi;
  std::optional<double> radius_angstrom;
  std::optional<double> scattering_length_a0;
};

struct C60Report {
  double alpha_p = 0.0;
  double g_a0 = 0.0;
  double phi = 0.0;
  int s = 1;
  double scattering_length_a0 = 0.0;
  double radius_a0 = 0.0;
  double radius_angstrom = 0.0;
  double g_kappa = 0.0;      // hard core
  double binding_meV = 0.0;  // hard core
  double g_kappa_R = 0.0;    // square-well regularization cross-check
  double binding_meV_R = 0.0;
};

C60Report c60_report(double alphaP, const ShortRangeInput& input, const UnitsContext& units = {},
                     const CorrespondenceOptions& options = {});

}  // namespace quartic_rg
