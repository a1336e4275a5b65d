#include "quartic_rg/rgflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "quartic_rg/errors.hpp"
#include "quartic_rg/levels.hpp"

namespace quartic_rg {

namespace {

constexpr double kPi = std::numbers::pi;

// Below this t the integrand arg(.)/t is replaced by its limit.
constexpr double kSmallT = 1e-12;
// Upper end of the u-range in the t = 1 - exp(-u) substitution; the Jacobian
// exp(-u) makes the remainder far below double precision.
constexpr double kTailU = 80.0;
constexpr double kQuadTolerance = 1e-13;
constexpr unsigned kQuadDepth = 20;

double reduce_phase(double phi) {
  double r = std::fmod(phi, kPi);
  if (r < 0.0) r += kPi;
  if (r >= kPi) r = 0.0;
  return r;
}

// lambda(t) with the logarithm ln((1-t)/(1+t)) supplied by the caller, so the
// tail substitution can pass it without forming 1 - t.
double lambda_with_log(double t, double omega, double log_ratio) {
  return 1.0 + 0.5 * omega * t * log_ratio;
}

std::complex<double> lambda0_with_log(double t, double omega, double log_ratio) {
  return {lambda_with_log(t, omega, log_ratio), 0.5 * kPi * omega * t};
}

std::complex<double> omega_n_with_log(double t, double omega, int n, double log_ratio) {
  const auto l0 = lambda0_with_log(t, omega, log_ratio);
  const double shift = n * kPi * omega * t;
  return l0 * l0 + shift * shift;
}

// (1/pi) * integral_0^1 arg F(t) dt / t where F is built from (t, log_ratio).
// The head [0, 1/2] is integrated in t, the tail in u with t = 1 - exp(-u).
template <class ArgFn>
double exponent_integral(ArgFn arg_of, double limit_at_zero) {
  using boost::math::quadrature::gauss_kronrod;
  auto head = [&](double t) {
    if (t < kSmallT) return limit_at_zero;
    return arg_of(t, std::log1p(-t) - std::log1p(t)) / t;
  };
  auto tail = [&](double u) {
    const double e = std::exp(-u);
    const double t = 1.0 - e;
    // ln((1-t)/(1+t)) = -u - ln(2 - e^{-u})
    const double log_ratio = -u - std::log(2.0 - e);
    return arg_of(t, log_ratio) / t * e;
  };
  const double a = gauss_kronrod<double, 31>::integrate(head, 0.0, 0.5, kQuadDepth, kQuadTolerance);
  const double b =
      gauss_kronrod<double, 31>::integrate(tail, std::numbers::ln2, kTailU, kQuadDepth, kQuadTolerance);
  return (a + b) / kPi;
}

void check_t(double t) {
  if (!(t > 0.0 && t < 1.0)) {
    throw DomainError("kernel argument t must lie in (0, 1), got " + std::to_string(t));
  }
}

}  // namespace

ModelParams::ModelParams(double g, double phi) : g_(g), phi_(reduce_phase(phi)) {
  if (!(g > 0.0) || !std::isfinite(g)) throw DomainError("coupling length g must be positive");
  if (!std::isfinite(phi)) throw DomainError("phase phi must be finite");
}

ModelParams ModelParams::from_scattering_length(double g, double scattering_length) {
  if (!(g > 0.0)) throw DomainError("coupling length g must be positive");
  return ModelParams(g, std::atan(scattering_length / g));
}

double ModelParams::scattering_length() const { return g_ * std::tan(phi_); }

OmegaValue omega_of(double alpha, double phi) {
  if (!(alpha > 0.0)) throw DomainError("omega_of requires alpha > 0");
  const double x = alpha + phi;
  // distance of x to the nearest odd multiple of pi/2
  const double d = std::remainder(x - 0.5 * kPi, kPi);
  if (std::abs(d) < kTangentPoleTolerance) return {0.0, true};
  const double inv = 1.0 + alpha * std::tan(x);
  return {1.0 / inv, false};
}

double lambda_kernel(double t, double omega) {
  check_t(t);
  return lambda_with_log(t, omega, std::log1p(-t) - std::log1p(t));
}

std::complex<double> capital_lambda0(double t, double omega) {
  check_t(t);
  return lambda0_with_log(t, omega, std::log1p(-t) - std::log1p(t));
}

std::complex<double> capital_omega_n(double t, double omega, int n) {
  check_t(t);
  if (n < 1) throw DomainError("branch index n must be >= 1");
  return omega_n_with_log(t, omega, n, std::log1p(-t) - std::log1p(t));
}

double beta0(double omega) {
  if (!(omega > 1.0)) throw DomainError("beta0 requires omega > 1");
  if (std::isinf(omega)) return 0.5 * kPi;
  const double exponent = exponent_integral(
      [omega](double t, double lr) { return std::arg(lambda0_with_log(t, omega, lr)); }, 0.5 * kPi * omega);
  return std::sqrt(omega - 1.0) / omega * std::exp(exponent);
}

double beta_n(double omega, int n) {
  if (n < 1) throw DomainError("beta_n requires n >= 1");
  if (omega == 0.0) return n * kPi;
  // 1/omega = 0: the two adjacent half-integer roots meet the jump; take the
  // omega -> +inf side.
  if (std::isinf(omega)) return (n + 0.5) * kPi;
  const double exponent = exponent_integral(
      [omega, n](double t, double lr) { return std::arg(omega_n_with_log(t, omega, n, lr)); }, kPi * omega);
  return n * kPi * std::exp(exponent);
}

double beta_oracle(double omega, int n) {
  if (n < 0) throw DomainError("beta_oracle requires n >= 0");
  if (n == 0 && !(omega > 1.0)) throw DomainError("beta_oracle branch 0 requires omega > 1");
  if (n >= 1 && omega == 0.0) return n * kPi;
  const double inv = 1.0 / omega;

  double lo = 0.0;
  double hi = 0.0;
  if (n == 0) {
    lo = 0.0;
    hi = kPi;
  } else if (omega > 0.0) {
    lo = n * kPi;
    hi = (n + 1) * kPi;
  } else {
    lo = (n - 1) * kPi;
    hi = n * kPi;
  }
  // x cos x - sin x / omega has the same root as x cot x - 1/omega and no
  // poles; sin keeps one sign inside the bracket.
  const double sign = (std::sin(0.5 * (lo + hi)) > 0.0) ? 1.0 : -1.0;
  auto f = [inv, sign](double x) { return sign * (x * std::cos(x) - inv * std::sin(x)); };
  // x = 0 is a trivial root of the pole-free form; start just above it.
  double a = (lo == 0.0) ? 1e-200 : lo;
  double b = hi;
  const double fa = f(a);
  const double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if ((fa > 0.0) == (fb > 0.0)) {
    throw BracketError("beta_oracle: no sign change in branch interval");
  }
  auto tol = [](double x0, double x1) { return std::abs(x1 - x0) <= 1e-12; };
  const auto [r0, r1] = boost::math::tools::bisect(f, a, b, tol);
  return 0.5 * (r0 + r1);
}

double beta(double omega, int n) { return n == 0 ? beta0(omega) : beta_n(omega, n); }

double flow_alpha_s(const ModelParams& params, int n, double R) {
  if (!(R > 0.0)) throw DomainError("cutoff R must be positive");
  const auto w = omega_of(params.g() / R, params.phi());
  return beta(w.omega, n);
}

namespace {

void check_grid(std::span<const double> R_grid) {
  for (std::size_t i = 0; i < R_grid.size(); ++i) {
    if (!(R_grid[i] > 0.0)) throw DomainError("cutoff grid must be positive");
  }
}

}  // namespace

FlowCurve sample_branch(const ModelParams& params, int n, std::span<const double> R_grid) {
  if (n < 0) throw DomainError("branch index must be >= 0");
  check_grid(R_grid);
  for (std::size_t i = 1; i < R_grid.size(); ++i) {
    if (!(R_grid[i] > R_grid[i - 1])) throw DomainError("cutoff grid must be strictly increasing");
  }
  FlowCurve curve{params, false, n, {}, {}};
  curve.samples.reserve(R_grid.size());
  for (double R : R_grid) {
    const double alpha = params.g() / R;
    const auto w = omega_of(alpha, params.phi());
    curve.samples.push_back({R, alpha, w.omega, beta(w.omega, n), n});
  }
  if (!R_grid.empty()) {
    curve.discontinuities = find_discontinuities(params, R_grid.front(), R_grid.back());
  }
  return curve;
}

std::vector<double> find_discontinuities(const ModelParams& params, double R_lo, double R_hi) {
  if (!(R_lo > 0.0) || !(R_hi > 0.0)) throw DomainError("cutoff interval must be positive");
  if (R_hi < R_lo) std::swap(R_lo, R_hi);
  std::vector<double> out;
  if (R_hi == R_lo) return out;

  const double g = params.g();
  const double phi = params.phi();
  const double a_lo = g / R_hi;
  const double a_hi = g / R_lo;
  auto h = [phi](double a) { return 1.0 + a * std::tan(a + phi); };

  // Split [a_lo, a_hi] at the tangent poles a + phi = (k + 1/2) pi; h is
  // continuous on each piece. Each piece gets a fixed number of scan points so
  // that the spacing shrinks with the pole spacing in R.
  constexpr int kScanPerPiece = 64;
  std::vector<double> edges{a_lo};
  for (double k = std::ceil((a_lo + phi) / kPi - 0.5); ; k += 1.0) {
    const double pole = (k + 0.5) * kPi - phi;
    if (pole <= a_lo) continue;
    if (pole >= a_hi) break;
    edges.push_back(pole);
  }
  edges.push_back(a_hi);

  std::vector<double> alphas;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double span = edges[p + 1] - edges[p];
    const double shrink = 1e-12 * std::max(1.0, edges[p + 1]);
    const double left = (p == 0) ? edges[p] : edges[p] + shrink;
    const double right = (p + 2 == edges.size()) ? edges[p + 1] : edges[p + 1] - shrink;
    if (!(right > left)) continue;
    double prev_x = left;
    double prev_h = h(left);
    for (int i = 1; i <= kScanPerPiece; ++i) {
      const double x = (i == kScanPerPiece) ? right : left + span * i / kScanPerPiece;
      if (x > right) break;
      const double hx = h(x);
      if (prev_h == 0.0) {
        alphas.push_back(prev_x);
      } else if ((prev_h > 0.0) != (hx > 0.0) && hx != 0.0) {
        auto tol = [](double x0, double x1) { return std::abs(x1 - x0) <= 1e-14 * std::max(1.0, x1); };
        const auto [r0, r1] = boost::math::tools::bisect(h, prev_x, x, tol);
        alphas.push_back(0.5 * (r0 + r1));
      }
      prev_x = x;
      prev_h = hx;
    }
    if (prev_h == 0.0) alphas.push_back(prev_x);
  }
  out.reserve(alphas.size());
  for (double a : alphas) out.push_back(g / a);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double minimal_cutoff(const ModelParams& params, int n_target) {
  if (n_target < 1) throw DomainError("target bound-state count must be >= 1");
  // With a branch n >= 1 the count is n + N2(alpha), and N2 is nondecreasing in
  // alpha: a + phi + atan(1/a) is increasing. The admissible cutoffs are those
  // with N2 <= n_target - 1.
  const double phi = params.phi();
  const double offset = std::floor((phi + 0.5 * kPi) / kPi);
  const double level = (n_target + offset) * kPi;
  auto f = [phi, level](double a) { return a + phi + std::atan(1.0 / a) - level; };
  // f(0+) = phi + pi/2 - level
  if (phi + 0.5 * kPi >= level) return std::numeric_limits<double>::infinity();
  double lo = 1e-300;
  double hi = level + 1.0;
  auto tol = [](double x0, double x1) { return std::abs(x1 - x0) <= 1e-15 * std::max(1.0, x1); };
  const auto [r0, r1] = boost::math::tools::bisect(f, lo, hi, tol);
  return params.g() / (0.5 * (r0 + r1));
}

int branch_for_count(const ModelParams& params, int n_target, double R) {
  if (!(R > 0.0)) throw DomainError("cutoff R must be positive");
  const double alpha = params.g() / R;
  const auto w = omega_of(alpha, params.phi());
  const int guess = n_target - count_outer(alpha, params.phi());
  for (int n : {guess, guess - 1, guess + 1}) {
    if (n < 1) continue;
    if (count_bound_states(beta_n(w.omega, n), alpha, params.phi()) == n_target) return n;
  }
  return 0;
}

FlowCurve continuous_flow(const ModelParams& params, int n_target, std::span<const double> R_grid) {
  if (n_target < 1) throw DomainError("target bound-state count must be >= 1");
  check_grid(R_grid);
  std::vector<double> grid(R_grid.begin(), R_grid.end());
  std::sort(grid.begin(), grid.end());
  if (std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
    throw DomainError("cutoff grid must not repeat points");
  }

  const double r_min = minimal_cutoff(params, n_target);
  FlowCurve curve{params, true, n_target, {}, {}};
  curve.samples.reserve(grid.size());
  for (double R : grid) {
    const int n = branch_for_count(params, n_target, R);
    if (n == 0) {
      throw RMinViolation("no flow branch holds " + std::to_string(n_target) +
                              " bound states at R = " + std::to_string(R) +
                              "; minimal admissible cutoff is " + std::to_string(r_min),
                          r_min, n_target);
    }
    const double alpha = params.g() / R;
    const auto w = omega_of(alpha, params.phi());
    curve.samples.push_back({R, alpha, w.omega, beta_n(w.omega, n), n});
  }
  if (!grid.empty()) curve.discontinuities = find_discontinuities(params, grid.front(), grid.back());
  return curve;
}

}  // namespace quartic_rg
