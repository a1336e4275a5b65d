#include "quartic_rg/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>
#include <boost/numeric/odeint/stepper/runge_kutta_fehlberg78.hpp>

#include "quartic_rg/errors.hpp"

namespace quartic_rg {

namespace {

constexpr double kPi = std::numbers::pi;

using State = std::array<double, 4>;  // psi, psi', int psi^2, int r^2 psi^2

// Potential restricted to one side of the square-well edge, so stage points of
// a step that ends exactly on R never see the other piece.
struct Field {
  bool inner = false;  // inside the square well
  double well = 0.0;   // alpha_s^2 / R^2
  double g2 = 0.0;

  double operator()(double r) const { return inner ? -well : -g2 / (r * r * r * r); }
};

Field field_for(const PotentialSpec& spec, double r_lo, double r_hi) {
  return std::visit(
      [&](const auto& s) -> Field {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Regularized>) {
          const bool inner = r_hi <= s.R && r_lo < s.R;
          return {inner, s.alpha_s * s.alpha_s / (s.R * s.R), s.g * s.g};
        } else {
          return {false, 0.0, s.g * s.g};
        }
      },
      spec);
}

double coupling(const PotentialSpec& spec) {
  return std::visit([](const auto& s) { return s.g; }, spec);
}

struct Rhs {
  Field v;
  double energy;

  void operator()(const State& x, State& dxdt, double r) const {
    dxdt[0] = x[1];
    dxdt[1] = (v(r) - energy) * x[0];
    dxdt[2] = x[0] * x[0];
    dxdt[3] = r * r * x[0] * x[0];
  }
};

int sign_of(double x) { return (x > 0.0) - (x < 0.0); }

struct Segment {
  double a;
  double b;
};

// Adaptive Runge-Kutta-Fehlberg 7(8) over one smooth segment. The step error
// is measured on (psi, l psi') with l the local wavelength scale, relative to
// the size of the same pair.
void integrate_segment(const Field& field, double energy, Segment seg, double rel_tol, State& x, RadialSolution& out,
                       int& last_sign, bool record) {
  boost::numeric::odeint::runge_kutta_fehlberg78<State> rk;
  const Rhs rhs{field, energy};
  const double dir = seg.b > seg.a ? 1.0 : -1.0;
  const double length = std::abs(seg.b - seg.a);
  auto local_scale = [&](double r) {
    const double k2 = std::abs(field(r) - energy);
    const double l = k2 > 0.0 ? 1.0 / std::sqrt(k2) : length;
    return std::min(l, length);
  };

  double r = seg.a;
  double dt = dir * std::min(length / 16.0, 0.05 * local_scale(r));
  if (dt == 0.0) dt = dir * length;
  State xn{};
  State err{};
  const double min_step = 1e-14 * std::max({std::abs(seg.a), std::abs(seg.b), length});

  while (dir * (seg.b - r) > 0.0) {
    bool last = false;
    if (dir * (r + dt - seg.b) >= 0.0) {
      dt = seg.b - r;
      last = true;
    }
    rk.do_step(rhs, x, r, xn, dt, err);
    const double l = local_scale(r);
    const double size = std::max(std::abs(x[0]) + l * std::abs(x[1]), std::abs(xn[0]) + l * std::abs(xn[1]));
    const double e = std::abs(err[0]) + l * std::abs(err[1]);
    const double ratio = size > 0.0 ? e / (rel_tol * size) : 0.0;
    if (!std::isfinite(ratio)) throw NumericalError("radial integration produced a non-finite value");
    if (ratio <= 1.0) {
      x = xn;
      r = last ? seg.b : r + dt;
      const int s = sign_of(x[0]);
      if (s != 0) {
        if (last_sign != 0 && s != last_sign) ++out.node_count;
        last_sign = s;
      }
      if (record) {
        out.r.push_back(r);
        out.psi.push_back(x[0]);
        out.dpsi.push_back(x[1]);
      }
      // keep (psi, psi') inside the representable range
      const double now = std::abs(x[0]) + l * std::abs(x[1]);
      if (now > 1e100 || (now > 0.0 && now < 1e-100)) {
        x[0] /= now;
        x[1] /= now;
        x[2] /= now * now;
        x[3] /= now * now;
        out.log_scale += std::log(now);
        for (auto& p : out.psi) p /= now;
        for (auto& p : out.dpsi) p /= now;
      }
      const double grow = ratio > 0.0 ? 0.9 * std::pow(ratio, -1.0 / 8.0) : 5.0;
      dt *= std::clamp(grow, 0.2, 5.0);
    } else {
      dt *= std::max(0.2, 0.9 * std::pow(ratio, -1.0 / 8.0));
      if (std::abs(dt) < min_step) {
        throw NumericalError("radial integration step size underflow near r = " + std::to_string(r));
      }
    }
  }
}

// Regular solution inside the square well, normalized as sin(q r)/q so that it
// stays continuous through q^2 = 0.
struct WellSolution {
  double q2;

  double value(double r) const {
    const double x2 = q2 * r * r;
    if (std::abs(x2) < 1e-8) return r * (1.0 - x2 / 6.0 + x2 * x2 / 120.0);
    if (q2 > 0.0) {
      const double q = std::sqrt(q2);
      return std::sin(q * r) / q;
    }
    const double p = std::sqrt(-q2);
    return std::sinh(p * r) / p;
  }
  double slope(double r) const {
    const double x2 = q2 * r * r;
    if (std::abs(x2) < 1e-8) return 1.0 - x2 / 2.0 + x2 * x2 / 24.0;
    if (q2 > 0.0) return std::cos(std::sqrt(q2) * r);
    return std::cosh(std::sqrt(-q2) * r);
  }
  // zeros of sin(q r) strictly inside (0, R)
  int nodes(double R) const {
    if (q2 <= 0.0) return 0;
    const double x = std::sqrt(q2) * R / kPi;
    return std::max(0, static_cast<int>(std::ceil(x)) - 1);
  }
};

double well_depth(const Regularized& s) { return s.alpha_s * s.alpha_s / (s.R * s.R); }

double r_infinity(double kappa, const PotentialSpec& spec, const SolverOptions& o) {
  return std::max({o.r_inf_kappa / kappa, o.r_inf_g * coupling(spec), o.r_inf_match * matching_radius(spec, o)});
}

RadialSolution run(double energy, const PotentialSpec& spec, double a, double b, double psi0, double dpsi0,
                   double rel_tol, bool record = false) {
  return integrate_radial(energy, spec, a, b, psi0, dpsi0, IntegrationOptions{rel_tol, record});
}

// One side of the matched solution. Values are in the integrator's final
// scale: the solution started from the given data equals them times
// exp(log_scale).
struct Piece {
  double psi = 0.0;
  double dpsi = 0.0;
  int nodes = 0;
  double norm = 0.0;  // int psi^2
  double r2 = 0.0;    // int r^2 psi^2
  double log_scale = 0.0;
};

Piece to_piece(const RadialSolution& sol) {
  return {sol.psi_end, sol.dpsi_end, sol.node_count, sol.norm_integral, sol.r2_integral, sol.log_scale};
}

Piece regular_piece(double kappa, const PotentialSpec& spec, const SolverOptions& o, bool with_integrals) {
  const double rm = matching_radius(spec, o);
  if (const auto* s = std::get_if<Regularized>(&spec)) {
    const WellSolution w{well_depth(*s) - kappa * kappa};
    Piece p{w.value(rm), w.slope(rm), w.nodes(rm), 0.0, 0.0, 0.0};
    if (with_integrals) {
      using boost::math::quadrature::gauss_kronrod;
      p.norm = gauss_kronrod<double, 61>::integrate(
          [&](double r) {
            const double f = w.value(r);
            return f * f;
          },
          0.0, rm, 15, 1e-13);
      p.r2 = gauss_kronrod<double, 61>::integrate(
          [&](double r) {
            const double f = w.value(r);
            return r * r * f * f;
          },
          0.0, rm, 15, 1e-13);
    }
    return p;
  }
  const auto& h = std::get<HardCore>(spec);
  return to_piece(run(-kappa * kappa, spec, h.Rc, rm, 0.0, 1.0, o.rel_tol));
}

// Decaying solution integrated inward from r_inf to the matching radius,
// started from exp(-kappa (r - r_inf)).
Piece decaying_piece(double kappa, const PotentialSpec& spec, const SolverOptions& o) {
  const double rm = matching_radius(spec, o);
  const double rinf = r_infinity(kappa, spec, o);
  auto p = to_piece(run(-kappa * kappa, spec, rinf, rm, 1.0, -kappa, o.rel_tol));
  // tail beyond r_inf: exp(-kappa (r - r_inf)), expressed in the final scale
  const double a2 = std::exp(-2.0 * p.log_scale);
  p.norm += a2 / (2.0 * kappa);
  p.r2 += a2 * (rinf * rinf / (2.0 * kappa) + rinf / (2.0 * kappa * kappa) + 1.0 / (4.0 * kappa * kappa * kappa));
  return p;
}

double wronskian(const Piece& in, const Piece& out, double rm) {
  const double k = 1.0 / rm;
  const double num = in.psi * out.dpsi - in.dpsi * out.psi;
  const double den = std::hypot(k * in.psi, in.dpsi) * std::hypot(k * out.psi, out.dpsi);
  return num / den;
}

}  // namespace

Regularized regularized_on_branch(const ModelParams& params, int n, double R) {
  return {flow_alpha_s(params, n, R), R, params.g()};
}

void validate(const PotentialSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if (!(s.g >= 0.0) || !std::isfinite(s.g)) throw DomainError("coupling length g must be >= 0");
        if constexpr (std::is_same_v<T, Regularized>) {
          if (!(s.R > 0.0)) throw DomainError("cutoff R must be positive");
          if (!(s.alpha_s >= 0.0)) throw DomainError("square-well strength must be >= 0");
        } else {
          if (!(s.Rc > 0.0)) throw DomainError("hard-core radius must be positive");
        }
      },
      spec);
}

double eval_potential(double r, const PotentialSpec& spec) {
  validate(spec);
  if (!(r > 0.0)) throw DomainError("eval_potential requires r > 0");
  return std::visit(
      [r](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Regularized>) {
          if (r < s.R) return -well_depth(s);
        } else {
          if (r < s.Rc) throw DomainError("radius lies inside the hard core");
        }
        return -s.g * s.g / (r * r * r * r);
      },
      spec);
}

RadialSolution integrate_radial(double energy, const PotentialSpec& spec, double r_start, double r_end, double psi0,
                                double dpsi0, const IntegrationOptions& options) {
  validate(spec);
  if (r_start == r_end) throw DomainError("integration interval is empty");
  if (!(r_start > 0.0) || !(r_end > 0.0)) {
    // r = 0 is allowed only as a start inside the square well
    if (!(r_start >= 0.0 && r_end > 0.0 && std::holds_alternative<Regularized>(spec))) {
      throw DomainError("integration radii must be positive");
    }
  }
  if (const auto* h = std::get_if<HardCore>(&spec)) {
    if (r_start < h->Rc || r_end < h->Rc) throw DomainError("integration path enters the hard core");
  }

  std::vector<Segment> segments;
  if (const auto* s = std::get_if<Regularized>(&spec);
      s != nullptr && std::min(r_start, r_end) < s->R && std::max(r_start, r_end) > s->R) {
    segments = {{r_start, s->R}, {s->R, r_end}};
  } else {
    segments = {{r_start, r_end}};
  }

  RadialSolution out;
  out.energy = energy;
  if (options.record) {
    out.r.push_back(r_start);
    out.psi.push_back(psi0);
    out.dpsi.push_back(dpsi0);
  }
  State x{psi0, dpsi0, 0.0, 0.0};
  int last_sign = sign_of(psi0);
  for (const auto& seg : segments) {
    const Field f = field_for(spec, std::min(seg.a, seg.b), std::max(seg.a, seg.b));
    integrate_segment(f, energy, seg, options.rel_tol, x, out, last_sign, options.record);
  }
  out.psi_end = x[0];
  out.dpsi_end = x[1];
  out.norm_integral = std::abs(x[2]);
  out.r2_integral = std::abs(x[3]);
  if (r_end < r_start && options.record) {
    std::reverse(out.r.begin(), out.r.end());
    std::reverse(out.psi.begin(), out.psi.end());
    std::reverse(out.dpsi.begin(), out.dpsi.end());
  }
  return out;
}

double matching_radius(const PotentialSpec& spec, const SolverOptions& options) {
  return std::visit(
      [&](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Regularized>) {
          return s.R;
        } else {
          return options.match_scale * std::max(s.g, s.Rc);
        }
      },
      spec);
}

double log_derivative_mismatch(double kappa, const PotentialSpec& spec, const SolverOptions& options) {
  validate(spec);
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const double rm = matching_radius(spec, options);
  const auto in = regular_piece(kappa, spec, options, false);
  const auto out = decaying_piece(kappa, spec, options);
  constexpr double kTiny = 1e-14;
  if (std::abs(in.psi) <= kTiny * rm * std::abs(in.dpsi) || std::abs(out.psi) <= kTiny * rm * std::abs(out.dpsi)) {
    const double s = sign_of(in.psi * in.dpsi) + sign_of(out.psi * out.dpsi);
    return s >= 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
  }
  return out.dpsi / out.psi - in.dpsi / in.psi;
}

double matching_wronskian(double kappa, const PotentialSpec& spec, const SolverOptions& options) {
  validate(spec);
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const auto in = regular_piece(kappa, spec, options, false);
  const auto out = decaying_piece(kappa, spec, options);
  return wronskian(in, out, matching_radius(spec, options));
}

int states_deeper_than(double kappa, const PotentialSpec& spec, const SolverOptions& options) {
  validate(spec);
  if (!(kappa > 0.0)) throw DomainError("kappa must be positive");
  const double rm = matching_radius(spec, options);
  const double rinf = r_infinity(kappa, spec, options);
  const auto in = regular_piece(kappa, spec, options, false);
  const auto sol = run(-kappa * kappa, spec, rm, rinf, in.psi, in.dpsi, options.rel_tol);
  int nodes = in.nodes + sol.node_count;
  // A zero of psi exactly at the matching radius is seen by neither piece.
  if (in.psi == 0.0) ++nodes;
  // beyond r_inf: psi = a cosh(kappa s) + (b / kappa) sinh(kappa s)
  const double a = sol.psi_end;
  const double b = sol.dpsi_end;
  if (sign_of(a) * sign_of(b) < 0 && std::abs(b) > kappa * std::abs(a)) ++nodes;
  return nodes;
}

int zero_energy_nodes(const PotentialSpec& spec, const SolverOptions& options) {
  validate(spec);
  const double g = coupling(spec);
  const double rm = matching_radius(spec, options);
  int nodes = 0;
  double psi = 0.0;
  double dpsi = 0.0;
  if (const auto* s = std::get_if<Regularized>(&spec)) {
    const WellSolution w{well_depth(*s)};
    psi = w.value(rm);
    dpsi = w.slope(rm);
    nodes = w.nodes(rm);
    if (psi == 0.0) ++nodes;
  } else {
    const auto& h = std::get<HardCore>(spec);
    const auto sol = run(0.0, spec, h.Rc, rm, 0.0, 1.0, options.rel_tol);
    psi = sol.psi_end;
    dpsi = sol.dpsi_end;
    nodes = sol.node_count;
  }
  // Far out the zero-energy solution is linear to relative accuracy g^2/r^2.
  const double r_far = std::max(1e5 * std::max(g, rm), 10.0 * rm);
  const auto sol = run(0.0, spec, rm, r_far, psi, dpsi, options.rel_tol);
  nodes += sol.node_count;
  if (sign_of(sol.psi_end) * sign_of(sol.dpsi_end) < 0) ++nodes;
  return nodes;
}

namespace {

double kappa_ceiling(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& s) -> double {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Regularized>) {
          return std::max(s.alpha_s, s.g / s.R) / s.R * (1.0 + 1e-6);
        } else {
          return s.g / (s.Rc * s.Rc) * (1.0 + 1e-6);
        }
      },
      spec);
}

struct Matched {
  Piece in;
  Piece out;
  double scale = 1.0;  // psi_outer = scale * decaying piece
  double norm = 1.0;   // int psi^2 before normalization
  double rm = 0.0;
};

Matched match_at(double kappa, const PotentialSpec& spec, const SolverOptions& o) {
  Matched m;
  m.rm = matching_radius(spec, o);
  m.in = regular_piece(kappa, spec, o, true);
  m.out = decaying_piece(kappa, spec, o);
  const double k2 = 1.0 / (m.rm * m.rm);
  m.scale = (m.in.psi * m.out.psi + m.in.dpsi * m.out.dpsi / k2) / (m.out.psi * m.out.psi + m.out.dpsi * m.out.dpsi / k2);
  m.norm = m.in.norm + m.scale * m.scale * m.out.norm;
  return m;
}

BoundState assemble(double kappa, const PotentialSpec& spec, const SolverOptions& o) {
  const auto m = match_at(kappa, spec, o);
  BoundState st;
  st.kappa = kappa;
  st.energy = -kappa * kappa;
  st.nodes = m.in.nodes + m.out.nodes + (m.in.psi == 0.0 ? 1 : 0);
  // the wall zero at Rc counts, so the weakest hard-core state has s nodes
  if (std::holds_alternative<HardCore>(spec)) ++st.nodes;
  const double r2 = m.in.r2 + m.scale * m.scale * m.out.r2;
  st.rms_radius = std::sqrt(r2 / m.norm);
  return st;
}

// Root of the matching condition in a cell known to hold exactly one level.
double refine_level(double lo, double hi, int count_hi, const PotentialSpec& spec, const SolverOptions& o) {
  auto tol = [&](double a, double b) { return std::abs(b - a) <= o.root_rel_tol * std::max(a, b); };
  auto w = [&](double k) { return matching_wronskian(k, spec, o); };
  const double wl = w(lo);
  const double wh = w(hi);
  if (wl == 0.0) return lo;
  if (wh == 0.0) return hi;
  if (sign_of(wl) != sign_of(wh)) {
    const auto [a, b] = boost::math::tools::bisect(w, lo, hi, tol);
    return 0.5 * (a + b);
  }
  // Level sits closer to a cell edge than the two solution paths agree; fall
  // back on the node count itself.
  auto c = [&](double k) { return states_deeper_than(k, spec, o) > count_hi ? 1.0 : -1.0; };
  const auto [a, b] = boost::math::tools::bisect(c, lo, hi, tol);
  return 0.5 * (a + b);
}

void split_cell(double lo, double hi, int count_lo, int count_hi, const PotentialSpec& spec, const SolverOptions& o,
                std::vector<double>& levels, int depth) {
  const int m = count_lo - count_hi;
  if (m <= 0) return;
  if (m == 1) {
    levels.push_back(refine_level(lo, hi, count_hi, spec, o));
    return;
  }
  if (depth > 80) throw NumericalError("could not separate nearly degenerate levels");
  const double mid = std::sqrt(lo * hi);
  const int count_mid = states_deeper_than(mid, spec, o);
  split_cell(lo, mid, count_lo, count_mid, spec, o, levels, depth + 1);
  split_cell(mid, hi, count_mid, count_hi, spec, o, levels, depth + 1);
}

}  // namespace

namespace {

struct Scan {
  std::vector<double> ks;
  std::vector<int> counts;
};

// Sturm counts on the log-spaced kappa grid; empty when nothing can bind.
Scan scan_levels(const PotentialSpec& spec, const SolverOptions& options) {
  const double g = coupling(spec);
  if (g == 0.0) {
    const auto* s = std::get_if<Regularized>(&spec);
    if (s == nullptr || s->alpha_s == 0.0) return {};
  }
  const double scale_g = g > 0.0 ? g : matching_radius(spec, options);
  const double k_lo = options.kappa_min_g / scale_g;
  const double k_hi = kappa_ceiling(spec);
  const int n = std::max(options.scan_points, 2);
  Scan scan{std::vector<double>(n), std::vector<int>(n)};
  for (int i = 0; i < n; ++i) {
    scan.ks[i] = (i == n - 1) ? k_hi : k_lo * std::pow(k_hi / k_lo, static_cast<double>(i) / (n - 1));
    scan.counts[i] = states_deeper_than(scan.ks[i], spec, options);
  }
  return scan;
}

}  // namespace

std::vector<BoundState> bound_states(const PotentialSpec& spec, const SolverOptions& options) {
  validate(spec);
  const auto scan = scan_levels(spec, options);
  std::vector<double> levels;
  for (std::size_t i = 0; i + 1 < scan.ks.size(); ++i) {
    split_cell(scan.ks[i], scan.ks[i + 1], scan.counts[i], scan.counts[i + 1], spec, options, levels, 0);
  }
  std::sort(levels.begin(), levels.end(), std::greater<>());

  std::vector<BoundState> out;
  out.reserve(levels.size());
  for (double k : levels) out.push_back(assemble(k, spec, options));
  if (!out.empty()) out.back().weakest = true;
  return out;
}

BoundState weakest_state(const PotentialSpec& spec, const SolverOptions& options) {
  validate(spec);
  const auto scan = scan_levels(spec, options);
  for (std::size_t i = 0; i + 1 < scan.ks.size(); ++i) {
    if (scan.counts[i] == scan.counts[i + 1]) continue;
    double lo = scan.ks[i];
    double hi = scan.ks[i + 1];
    int c_hi = scan.counts[i + 1];
    // narrow to the lowest-kappa level when several share the cell
    for (int depth = 0; scan.counts[i] - c_hi > 1; ++depth) {
      if (depth > 80) throw NumericalError("could not separate nearly degenerate levels");
      const double mid = std::sqrt(lo * hi);
      const int c_mid = states_deeper_than(mid, spec, options);
      if (c_mid < scan.counts[i]) {
        hi = mid;
        c_hi = c_mid;
      } else {
        lo = mid;
      }
    }
    auto st = assemble(refine_level(lo, hi, c_hi, spec, options), spec, options);
    st.weakest = true;
    return st;
  }
  throw NumericalError("potential has no bound state");
}

std::vector<double> bound_state_wavefunction(const PotentialSpec& spec, const BoundState& state,
                                             std::span<const double> radii, const SolverOptions& options) {
  validate(spec);
  const double kappa = state.kappa;
  if (!(kappa > 0.0)) throw DomainError("bound state kappa must be positive");
  const auto m = match_at(kappa, spec, options);
  const double inv_norm = 1.0 / std::sqrt(m.norm);
  const double rinf = r_infinity(kappa, spec, options);
  const double E = -kappa * kappa;

  std::vector<std::size_t> order(radii.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return radii[a] < radii[b]; });
  std::vector<double> out(radii.size(), 0.0);

  // inner region, ascending
  if (const auto* s = std::get_if<Regularized>(&spec)) {
    const WellSolution w{well_depth(*s) - kappa * kappa};
    for (auto i : order) {
      if (radii[i] < m.rm) out[i] = w.value(radii[i]) * inv_norm;
    }
  } else {
    const auto& h = std::get<HardCore>(spec);
    double r = h.Rc;
    double psi = 0.0;
    double dpsi = 1.0;
    double logs = 0.0;
    for (auto i : order) {
      const double ri = radii[i];
      if (ri <= h.Rc || ri >= m.rm) continue;
      if (ri > r) {
        const auto sol = run(E, spec, r, ri, psi, dpsi, options.rel_tol);
        psi = sol.psi_end;
        dpsi = sol.dpsi_end;
        logs += sol.log_scale;
        r = ri;
      }
      out[i] = psi * std::exp(logs - m.in.log_scale) * inv_norm;
    }
  }

  // outer region, descending from r_inf
  double r = rinf;
  double psi = 1.0;
  double dpsi = -kappa;
  double logs = 0.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const double ri = radii[*it];
    if (ri < m.rm) break;
    if (ri >= rinf) {
      out[*it] = m.scale * std::exp(-kappa * (ri - rinf) - m.out.log_scale) * inv_norm;
      continue;
    }
    if (ri < r) {
      const auto sol = run(E, spec, r, ri, psi, dpsi, options.rel_tol);
      psi = sol.psi_end;
      dpsi = sol.dpsi_end;
      logs += sol.log_scale;
      r = ri;
    }
    out[*it] = m.scale * psi * std::exp(logs - m.out.log_scale) * inv_norm;
  }
  return out;
}

double phase_shift(double k, const PotentialSpec& spec, const SolverOptions& options) {
  validate(spec);
  if (!(k > 0.0)) throw DomainError("phase_shift requires k > 0");
  const double g = coupling(spec);
  double r0 = 0.0;
  double psi = 0.0;
  double dpsi = 1.0;
  double r_inner = 0.0;
  if (const auto* s = std::get_if<Regularized>(&spec)) {
    const WellSolution w{well_depth(*s) + k * k};
    r0 = s->R;
    psi = w.value(r0);
    dpsi = w.slope(r0);
    r_inner = s->R;
  } else {
    r0 = std::get<HardCore>(spec).Rc;
    r_inner = r0;
  }
  const double r_tail = g > 0.0 ? std::sqrt(g / (k * std::sqrt(options.tail_ratio))) : 0.0;
  const double r_max = std::max({r_tail, 10.0 * r_inner, 2.0 * kPi / k + r_inner});
  const auto sol = run(k * k, spec, r0, r_max, psi, dpsi, options.rel_tol);
  double delta = std::atan2(k * sol.psi_end, sol.dpsi_end) - k * r_max;
  delta = std::fmod(delta, kPi);
  if (delta < 0.0) delta += kPi;
  if (delta >= kPi) delta -= kPi;
  return delta;
}

PhaseCurve phase_curve(const PotentialSpec& spec, std::span<const double> k_grid, const SolverOptions& options) {
  validate(spec);
  for (std::size_t i = 0; i < k_grid.size(); ++i) {
    if (!(k_grid[i] > 0.0)) throw DomainError("wavenumbers must be positive");
    if (i > 0 && !(k_grid[i] > k_grid[i - 1])) throw DomainError("wavenumber grid must be increasing");
  }
  PhaseCurve curve{spec, 0.0, {}};
  if (k_grid.empty()) return curve;

  // nearest representative of `raw` (mod pi) to `ref`
  auto follow = [](double raw, double ref) { return raw + kPi * std::round((ref - raw) / kPi); };
  constexpr int kMaxRefine = 16;
  constexpr double kStepLimit = 0.25 * kPi;

  std::vector<double> unwrapped;
  unwrapped.reserve(k_grid.size());
  double prev_k = k_grid[0];
  double prev = phase_shift(prev_k, spec, options);
  unwrapped.push_back(prev);
  for (std::size_t i = 1; i < k_grid.size(); ++i) {
    // walk from prev_k to k_grid[i], halving the step where the phase moves fast
    double target = k_grid[i];
    double k = prev_k;
    int depth = 0;
    while (k < target) {
      double step = (target - k) / std::ldexp(1.0, depth);
      const double next_k = std::min(target, k + step);
      const double v = follow(phase_shift(next_k, spec, options), prev);
      if (std::abs(v - prev) > kStepLimit && depth < kMaxRefine) {
        ++depth;
        continue;
      }
      if (std::abs(v - prev) > kStepLimit) {
        throw NumericalError("phase shift could not be unwrapped near k = " + std::to_string(next_k));
      }
      prev = v;
      k = next_k;
      depth = std::max(0, depth - 1);
    }
    prev_k = target;
    unwrapped.push_back(prev);
  }

  const bool binds = [&] {
    const double g = coupling(spec);
    const double scale_g = g > 0.0 ? g : matching_radius(spec, options);
    return states_deeper_than(options.kappa_min_g / scale_g, spec, options) > 0;
  }();
  curve.anchor = binds ? kPi : 0.0;
  const double shift = kPi * std::round((curve.anchor - unwrapped.front()) / kPi);
  curve.samples.reserve(k_grid.size());
  for (std::size_t i = 0; i < k_grid.size(); ++i) curve.samples.push_back({k_grid[i], unwrapped[i] + shift});
  return curve;
}

}  // namespace quartic_rg
