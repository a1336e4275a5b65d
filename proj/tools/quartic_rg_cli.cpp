// Command-line front end: writes plot-ready CSV or JSON datasets for the
// flow, the spectrum, phase shifts, the hard-core comparison table, the C60
// estimate and the semiclassical limit.
//
// Exit codes: 0 success, 2 bad arguments, 3 domain violation (including a
// cutoff below R_min), 4 numerical failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "quartic_rg/correspondence.hpp"
#include "quartic_rg/errors.hpp"
#include "quartic_rg/levels.hpp"
#include "quartic_rg/rgflow.hpp"
#include "quartic_rg/solver.hpp"

namespace {

using namespace quartic_rg;

enum ExitCode { kOk = 0, kArgs = 2, kDomain = 3, kNumerical = 4 };

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Cell = std::variant<std::monostate, double, long long, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  /// Emit a single JSON object instead of an array of rows.
  bool single = false;
};

struct OutputSpec {
  std::string format = "csv";
  int precision = 6;
  std::string destination;
};

// Locale-independent shortest rendering with `precision` significant digits.
std::string format_double(double v, int precision) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

std::string csv_cell(const Cell& c, int precision) {
  struct {
    int p;
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_double(v, p); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(const std::string& s) const { return s; }
  } visit{precision};
  return std::visit(visit, c);
}

nlohmann::ordered_json json_cell(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d)) return nullptr;
    // Round through the text form so JSON and CSV carry the same digits.
    const std::string text = format_double(*d, precision);
    double rounded = 0.0;
    std::from_chars(text.data(), text.data() + text.size(), rounded);
    return rounded;
  }
  if (const auto* i = std::get_if<long long>(&c)) return *i;
  if (const auto* s = std::get_if<std::string>(&c)) return *s;
  return nullptr;
}

void write_table(const Table& t, const OutputSpec& out) {
  std::ofstream file;
  if (!out.destination.empty()) {
    file.open(out.destination, std::ios::binary);
    if (!file) throw ArgumentError("cannot open output file " + out.destination);
  }
  std::ostream& os = out.destination.empty() ? std::cout : file;

  if (out.format == "json") {
    auto row_object = [&](const std::vector<Cell>& row) {
      nlohmann::ordered_json obj = nlohmann::ordered_json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(row[i], out.precision);
      return obj;
    };
    nlohmann::ordered_json doc;
    if (t.single) {
      doc = row_object(t.rows.at(0));
    } else {
      doc = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) doc.push_back(row_object(row));
    }
    os << doc.dump(2) << '\n';
    return;
  }

  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i], out.precision);
    os << '\n';
  }
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 1) throw ArgumentError("--points must be >= 1");
  if (!(lo > 0.0) || !(hi >= lo)) throw ArgumentError("grid bounds must satisfy 0 < min <= max");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return grid;
}

// ---- flow ---------------------------------------------------------------

struct FlowArgs {
  double g = 1.0, phi = 1.0, r_min = 0.05, r_max = 1.5;
  int points = 400;
  std::optional<int> n;
  std::optional<int> continuous;
};

Table cmd_flow(const FlowArgs& a) {
  const ModelParams params(a.g, a.phi);
  const auto grid = linear_grid(a.r_min, a.r_max, a.points);
  FlowCurve curve = a.continuous ? continuous_flow(params, *a.continuous, grid)
                                 : sample_branch(params, a.n.value_or(1), grid);

  Table t{{"R", "alpha", "omega", "alpha_s", "branch_n", "discontinuity_flag"}, {}};
  const auto& jumps = curve.discontinuities;
  for (std::size_t i = 0; i < curve.samples.size(); ++i) {
    const auto& s = curve.samples[i];
    // 1 when a pole of omega lies between this sample and the previous one
    long long flag = 0;
    if (i > 0) {
      const double lo = curve.samples[i - 1].R;
      for (double r : jumps) flag |= (r > lo && r <= s.R);
    }
    t.rows.push_back({s.R, s.alpha, s.omega, s.alpha_s, static_cast<long long>(s.branch), flag});
  }
  return t;
}

// ---- spectrum -----------------------------------------------------------

struct SpectrumArgs {
  double g = 1.0, phi = 1.0, r_min = 0.05, r_max = 0.6;
  int points = 20;
  int count = 3;
  std::optional<int> branch;
  bool clip = false;
};

Table cmd_spectrum(const SpectrumArgs& a) {
  const ModelParams params(a.g, a.phi);
  auto grid = linear_grid(a.r_min, a.r_max, a.points);
  Table t{{"R", "level_index", "g_kappa", "rms_over_g", "weakest_flag"}, {}};

  std::vector<FlowSample> samples;
  if (a.branch) {
    samples = sample_branch(params, *a.branch, grid).samples;
  } else {
    if (a.clip) {
      std::erase_if(grid, [&](double R) { return branch_for_count(params, a.count, R) == 0; });
      if (grid.empty()) return t;
    }
    samples = continuous_flow(params, a.count, grid).samples;
  }

  for (const auto& s : samples) {
    const Regularized spec{s.alpha_s, s.R, a.g};
    const auto levels = bound_states(spec);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& b = levels[i];
      t.rows.push_back({s.R, static_cast<long long>(i), a.g * b.kappa, b.rms_radius / a.g,
                        static_cast<long long>(b.weakest)});
    }
  }
  return t;
}

// ---- phase --------------------------------------------------------------

struct PhaseArgs {
  double g = 1.0, phi = 1.0, k_min = 0.01, k_max = 1.5;
  int points = 150;
  int branch = 1;
  std::vector<double> r_over_g{0.1, 0.2, 0.4};
};

Table cmd_phase(const PhaseArgs& a) {
  const ModelParams params(a.g, a.phi);
  const auto gk = linear_grid(a.k_min, a.k_max, a.points);
  std::vector<double> ks(gk.size());
  for (std::size_t i = 0; i < gk.size(); ++i) ks[i] = gk[i] / a.g;

  Table t{{"g_k", "R_over_g", "delta0"}, {}};
  for (double rg : a.r_over_g) {
    if (!(rg > 0.0)) throw ArgumentError("--R values must be positive");
    const auto spec = regularized_on_branch(params, a.branch, rg * a.g);
    const auto curve = phase_curve(spec, ks);
    for (std::size_t i = 0; i < curve.samples.size(); ++i) t.rows.push_back({gk[i], rg, curve.samples[i].delta});
  }
  return t;
}

// ---- table1 -------------------------------------------------------------

struct Table1Args {
  double g = 1.0;
  int s = 1;
  double cutoff = 0.1;
};

Table cmd_table1(const Table1Args& a) {
  CorrespondenceOptions opts;
  opts.cutoff_over_g = a.cutoff;
  Table t{{"phi", "Rc_over_g", "g_kappa_R_published", "g_kappa_R", "g_kappa_hc_published", "g_kappa_hc",
           "rms_R_published", "rms_R", "rms_hc_published", "rms_hc"},
          {}};
  for (const auto& p : published_rows()) {
    const auto row = correspondence_row(a.g, p.phi, a.s, opts);
    t.rows.push_back({p.phi, row.Rc_over_g, p.g_kappa_R, row.g_kappa_R, p.g_kappa_hc, row.g_kappa_hc, p.rms_R,
                      row.rms_R, p.rms_hc, row.rms_hc});
  }
  return t;
}

// ---- c60 ----------------------------------------------------------------

struct C60Args {
  double alpha_p = 558.0;
  ShortRangeInput input;
};

Table cmd_c60(const C60Args& a) {
  const auto r = c60_report(a.alpha_p, a.input);
  Table t{{"alpha_p", "g_a0", "phi", "s", "scattering_length_a0", "radius_a0", "radius_angstrom", "g_kappa",
           "binding_meV", "g_kappa_R", "binding_meV_R"},
          {},
          true};
  t.rows.push_back({r.alpha_p, r.g_a0, r.phi, static_cast<long long>(r.s), r.scattering_length_a0, r.radius_a0,
                    r.radius_angstrom, r.g_kappa, r.binding_meV, r.g_kappa_R, r.binding_meV_R});
  return t;
}

// ---- wkb ----------------------------------------------------------------

struct WkbArgs {
  double g = 1.0, phi = 1.0;
  int branch = 1;
  std::vector<double> study;
};

Table cmd_wkb(const WkbArgs& a) {
  const ModelParams params(a.g, a.phi);
  Table t{{"quantity", "R_over_g", "alpha_s", "level", "g_kappa"}, {}};
  t.rows.push_back({std::string("limit"), {}, {}, {}, a.g * wkb_kappa_limit(a.g, params.phi())});
  for (double rg : a.study) {
    if (!(rg > 0.0)) throw ArgumentError("--r-study values must be positive");
    const double R = rg * a.g;
    const double alpha_s = flow_alpha_s(params, a.branch, R);
    const int n = wkb_highest_level(alpha_s, R, a.g);
    if (n < 1) throw NumericalError("no semiclassical level at R/g = " + format_double(rg, 6));
    t.rows.push_back({std::string("finite"), rg, alpha_s, static_cast<long long>(n),
                      a.g * wkb_kappa_finite(alpha_s, R, a.g, n)});
  }
  return t;
}

void add_output_options(CLI::App* sub, OutputSpec& out) {
  sub->add_option("--format", out.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--precision", out.precision, "Significant digits")->check(CLI::Range(1, 17));
  sub->add_option("--output", out.destination, "Output file (default: stdout)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renormalized -g^2/r^4 potential: datasets for the flow, spectra and phase shifts"};
  app.require_subcommand(1);
  OutputSpec out;

  FlowArgs flow;
  auto* f = app.add_subcommand("flow", "Running square-well strength along the cutoff");
  f->add_option("--g", flow.g, "Coupling g")->check(CLI::PositiveNumber);
  f->add_option("--phi", flow.phi, "Phase phi");
  auto* f_n = f->add_option("--n", flow.n, "Fixed branch index")->check(CLI::NonNegativeNumber);
  auto* f_c = f->add_option("--continuous", flow.continuous, "Hold this many bound states")->check(CLI::PositiveNumber);
  f_n->excludes(f_c);
  f->add_option("--r-min", flow.r_min, "Smallest R/g");
  f->add_option("--r-max", flow.r_max, "Largest R/g");
  f->add_option("--points", flow.points, "Number of samples")->check(CLI::PositiveNumber);
  add_output_options(f, out);

  SpectrumArgs spec;
  auto* s = app.add_subcommand("spectrum", "Bound-state spectrum along the continuous flow");
  s->add_option("--g", spec.g, "Coupling g")->check(CLI::PositiveNumber);
  s->add_option("--phi", spec.phi, "Phase phi");
  auto* s_n = s->add_option("--N", spec.count, "Bound states held fixed")->check(CLI::PositiveNumber);
  s->add_option("--branch", spec.branch, "Use a fixed branch instead")->check(CLI::NonNegativeNumber)->excludes(s_n);
  s->add_option("--r-min", spec.r_min, "Smallest R/g");
  s->add_option("--r-max", spec.r_max, "Largest R/g");
  s->add_option("--points", spec.points, "Number of samples")->check(CLI::PositiveNumber);
  s->add_flag("--clip", spec.clip, "Drop cutoffs below R_min instead of failing");
  add_output_options(s, out);

  PhaseArgs phase;
  auto* p = app.add_subcommand("phase", "s-wave phase shift against g k");
  p->add_option("--g", phase.g, "Coupling g")->check(CLI::PositiveNumber);
  p->add_option("--phi", phase.phi, "Phase phi");
  p->add_option("--R", phase.r_over_g, "Cutoffs in units of g")->delimiter(',');
  p->add_option("--branch", phase.branch, "Flow branch index")->check(CLI::NonNegativeNumber);
  p->add_option("--k-min", phase.k_min, "Smallest g k")->check(CLI::PositiveNumber);
  p->add_option("--k-max", phase.k_max, "Largest g k")->check(CLI::PositiveNumber);
  p->add_option("--points", phase.points, "Number of samples")->check(CLI::PositiveNumber);
  add_output_options(p, out);

  Table1Args t1;
  auto* t = app.add_subcommand("table1", "Square-well versus hard-core comparison table");
  t->add_option("--g", t1.g, "Coupling g")->check(CLI::PositiveNumber);
  t->add_option("--s", t1.s, "Hard-core node index")->check(CLI::PositiveNumber);
  t->add_option("--cutoff", t1.cutoff, "Square-well cutoff R/g")->check(CLI::PositiveNumber);
  add_output_options(t, out);

  C60Args c60;
  auto* c = app.add_subcommand("c60", "Polarization-bound electron on a neutral molecule");
  c->add_option("--alpha-p", c60.alpha_p, "Polarizability in a0^3")->check(CLI::PositiveNumber);
  auto* c_phi = c->add_option("--phi", c60.input.phi, "Phase phi");
  auto* c_rc = c->add_option("--radius", c60.input.radius_angstrom, "Hard-core radius in angstrom");
  auto* c_l = c->add_option("--scattering-length", c60.input.scattering_length_a0, "Scattering length in a0");
  c_phi->excludes(c_rc)->excludes(c_l);
  c_rc->excludes(c_l);
  add_output_options(c, out);

  WkbArgs wkb;
  auto* w = app.add_subcommand("wkb", "Semiclassical weakest level");
  w->add_option("--g", wkb.g, "Coupling g")->check(CLI::PositiveNumber);
  w->add_option("--phi", wkb.phi, "Phase phi");
  w->add_option("--branch", wkb.branch, "Flow branch index")->check(CLI::NonNegativeNumber);
  w->add_option("--r-study", wkb.study, "Cutoffs R/g for the finite-R sequence")
      ->delimiter(',')
      ->expected(0, -1)
      ->default_str("0.1,0.05,0.02");
  add_output_options(w, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kArgs;
  }

  try {
    Table table;
    if (*f) {
      table = cmd_flow(flow);
    } else if (*s) {
      table = cmd_spectrum(spec);
    } else if (*p) {
      table = cmd_phase(phase);
    } else if (*t) {
      table = cmd_table1(t1);
    } else if (*c) {
      if (!c60.input.phi && !c60.input.radius_angstrom && !c60.input.scattering_length_a0) c60.input.phi = 1.0;
      if (c->count("--format") == 0) out.format = "json";
      table = cmd_c60(c60);
    } else {
      // a bare --r-study selects the default sequence
      if (w->count("--r-study") > 0 && wkb.study.empty()) wkb.study = {0.1, 0.05, 0.02};
      table = cmd_wkb(wkb);
    }
    write_table(table, out);
  } catch (const ArgumentError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kArgs;
  } catch (const RMinViolation& e) {
    std::cerr << "error: " << e.what() << " (R_min = " << format_double(e.r_min(), 6) << ")\n";
    return kDomain;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const BracketError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
