#include "quartic_rg/correspondence.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "quartic_rg/errors.hpp"

namespace quartic_rg {

namespace {

constexpr double kPi = std::numbers::pi;

constexpr std::array<double, 9> kReferencePhases{0.1, 0.2, 0.4, 0.6, 0.8, 1.0, 1.2, 1.4, 1.5};

constexpr std::array<PublishedRow, 9> kPublished{{
    {0.1, 0.21681, 3.09, 3.14, 0.545, 0.548},
    {0.2, 0.22161, 2.73, 2.82, 0.577, 0.583},
    {0.4, 0.23189, 2.18, 2.23, 0.666, 0.672},
    {0.6, 0.24317, 1.69, 1.71, 0.794, 0.796},
    {0.8, 0.25560, 1.23, 1.24, 0.982, 0.984},
    {1.0, 0.26937, 0.830, 0.834, 1.300, 1.300},
    {1.2, 0.28471, 0.484, 0.486, 1.960, 1.961},
    {1.4, 0.30190, 0.196, 0.196, 4.175, 4.176},
    {1.5, 0.31130, 0.0755, 0.0755, 10.09, 10.01},
}};

}  // namespace

double hardcore_scattering_length(double g, double Rc) {
  if (!(Rc > 0.0)) throw DomainError("hard-core radius must be positive");
  const double x = g / Rc;
  const double s = std::sin(x);
  if (std::abs(s) < 1e-14 * std::max(1.0, x)) throw DomainError("scattering length diverges: g/Rc is a multiple of pi");
  return g * std::cos(x) / s;
}

double phi_from_scattering_length(double L, double g) {
  if (!(g > 0.0)) throw DomainError("coupling length g must be positive");
  double phi = std::atan(L / g);
  if (phi < 0.0) phi += kPi;
  if (phi >= kPi) phi -= kPi;
  return phi;
}

double hardcore_radius(double g, double phi, int s) {
  if (s < 1) throw DomainError("node index s must be >= 1");
  if (!(g > 0.0)) throw DomainError("coupling length g must be positive");
  return g / ((s + 0.5) * kPi - phi);
}

CorrespondenceRow correspondence_row(double g, double phi, int s, const CorrespondenceOptions& options) {
  const ModelParams params(g, phi);
  const double R = options.cutoff_over_g * g;
  const auto reg = regularized_on_branch(params, options.branch, R);
  const auto weak_R = weakest_state(reg, options.solver);

  const double Rc = hardcore_radius(g, phi, s);
  const auto weak_hc = weakest_state(HardCore{Rc, g}, options.solver);

  return {phi, s, Rc / g, g * weak_R.kappa, g * weak_hc.kappa, weak_R.rms_radius / g, weak_hc.rms_radius / g};
}

std::vector<CorrespondenceRow> correspondence_table(double g, std::span<const double> phis, int s,
                                                    const CorrespondenceOptions& options) {
  std::vector<CorrespondenceRow> rows;
  rows.reserve(phis.size());
  for (double phi : phis) rows.push_back(correspondence_row(g, phi, s, options));
  return rows;
}

std::span<const double> reference_phases() { return kReferencePhases; }

std::span<const PublishedRow> published_rows() { return kPublished; }

double gamma_ratio() {
  static const double value = [] {
    const double direct = std::tgamma(1.25) / std::tgamma(0.75);
    // Gamma(5/4) = Gamma(1/4)/4 and Gamma(1/4) Gamma(3/4) = pi sqrt(2)
    const double q = std::tgamma(0.25);
    const double via_reflection = q * q / (4.0 * kPi * std::numbers::sqrt2);
    if (std::abs(direct - via_reflection) > 1e-12 * via_reflection) {
      throw NumericalError("platform gamma function fails the reflection identity");
    }
    return direct;
  }();
  return value;
}

double wkb_action(double E, double alpha_s, double R, double g) {
  if (!(E < 0.0)) throw DomainError("wkb_action requires E < 0");
  if (!(R > 0.0) || !(g > 0.0)) throw DomainError("wkb_action requires R > 0 and g > 0");
  const double inner2 = E + alpha_s * alpha_s / (R * R);
  if (!(inner2 >= 0.0)) throw DomainError("energy lies below the square-well floor");
  const double kappa = std::sqrt(-E);
  const double r_turn = std::sqrt(g / kappa);
  if (!(r_turn > R)) throw DomainError("outer turning point lies inside the cutoff");

  const double inner = R * std::sqrt(inner2);
  using boost::math::quadrature::gauss_kronrod;
  constexpr unsigned kDepth = 15;
  constexpr double kTol = 1e-13;

  // Away from the turning point, y = ln r turns g/r^2 into the gently
  // varying sqrt(g^2/r^2 - kappa^2 r^2).
  const double r_mid = std::max(R, 0.5 * r_turn);
  double outer = 0.0;
  if (r_mid > R) {
    auto near = [&](double y) {
      const double r = std::exp(y);
      const double w = g * g / (r * r) - kappa * kappa * r * r;
      return w > 0.0 ? std::sqrt(w) : 0.0;
    };
    outer += gauss_kronrod<double, 61>::integrate(near, std::log(R), std::log(r_mid), kDepth, kTol);
  }
  // r = r_turn - s^2 removes the square-root zero at the turning point
  auto far = [&](double s) {
    const double r = r_turn - s * s;
    const double u = g / (r * r);
    const double w = (u - kappa) * (u + kappa);
    return w > 0.0 ? 2.0 * s * std::sqrt(w) : 0.0;
  };
  outer += gauss_kronrod<double, 61>::integrate(far, 0.0, std::sqrt(r_turn - r_mid), kDepth, kTol);
  return inner + outer;
}

namespace {

double kappa_upper(double alpha_s, double R, double g) {
  return std::min(alpha_s / R, g / (R * R)) * (1.0 - 1e-12);
}

double action_at_threshold(double alpha_s, double R, double g) {
  const double k_lo = 1e-14 * kappa_upper(alpha_s, R, g);
  return wkb_action(-k_lo * k_lo, alpha_s, R, g);
}

}  // namespace

int wkb_highest_level(double alpha_s, double R, double g) {
  if (!(alpha_s > 0.0)) return 0;
  const double top = action_at_threshold(alpha_s, R, g);
  const double x = top / kPi + 0.5;
  return x <= 0.0 ? 0 : static_cast<int>(std::ceil(x)) - 1;
}

double wkb_kappa_finite(double alpha_s, double R, double g, int n) {
  if (n < 1) throw DomainError("WKB level index must be >= 1");
  if (!(alpha_s > 0.0) || !(R > 0.0) || !(g > 0.0)) throw DomainError("WKB inputs must be positive");
  const double target = (n - 0.5) * kPi;
  const double k_hi = kappa_upper(alpha_s, R, g);
  const double k_lo = 1e-14 * k_hi;
  auto f = [&](double k) { return wkb_action(-k * k, alpha_s, R, g) - target; };
  const double f_lo = f(k_lo);
  const double f_hi = f(k_hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    throw NumericalError("WKB level " + std::to_string(n) + " does not exist for this potential");
  }
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(a, b); };
  const auto [a, b] = boost::math::tools::bisect(f, k_lo, k_hi, tol);
  return 0.5 * (a + b);
}

double wkb_kappa_limit(double g, double phi) {
  if (!(g > 0.0)) throw DomainError("coupling length g must be positive");
  const double r = gamma_ratio();
  const double x = phi + 0.5;
  return 4.0 / kPi * r * r * x * x / g;
}

double polarizability_coupling(double alphaP) {
  if (!(alphaP > 0.0)) throw DomainError("polarizability must be positive");
  return std::sqrt(alphaP);
}

C60Report c60_report(double alphaP, const ShortRangeInput& input, const UnitsContext& units,
                     const CorrespondenceOptions& options) {
  const int given = input.phi.has_value() + input.radius_angstrom.has_value() + input.scattering_length_a0.has_value();
  if (given != 1) throw DomainError("exactly one of phi, hard-core radius, scattering length must be given");

  C60Report rep;
  rep.alpha_p = alphaP;
  rep.g_a0 = polarizability_coupling(alphaP);
  const double g = rep.g_a0;

  if (input.radius_angstrom) {
    if (!(*input.radius_angstrom > 0.0)) throw DomainError("hard-core radius must be positive");
    rep.radius_a0 = *input.radius_angstrom / units.bohr_radius_angstrom;
    rep.scattering_length_a0 = hardcore_scattering_length(g, rep.radius_a0);
    rep.phi = phi_from_scattering_length(rep.scattering_length_a0, g);
    rep.s = static_cast<int>(std::lround((g / rep.radius_a0 + rep.phi) / kPi - 0.5));
  } else {
    rep.phi = input.phi ? ModelParams(g, *input.phi).phi()
                        : phi_from_scattering_length(*input.scattering_length_a0, g);
    rep.s = 1;
    rep.radius_a0 = hardcore_radius(g, rep.phi, rep.s);
    rep.scattering_length_a0 = g * std::tan(rep.phi);
  }
  rep.radius_angstrom = rep.radius_a0 * units.bohr_radius_angstrom;

  const auto hc = weakest_state(HardCore{rep.radius_a0, g}, options.solver);
  rep.g_kappa = g * hc.kappa;
  rep.binding_meV = hc.kappa * hc.kappa * units.rydberg_meV;

  const ModelParams params(g, rep.phi);
  const auto reg = regularized_on_branch(params, options.branch, options.cutoff_over_g * g);
  const auto weak = weakest_state(reg, options.solver);
  rep.g_kappa_R = g * weak.kappa;
  rep.binding_meV_R = weak.kappa * weak.kappa * units.rydberg_meV;
  return rep;
}

}  // namespace quartic_rg
