// Command-line surface for the microreversibility simulator: map/curve/cut
// sweeps, extremum search, the photonic digital twin and the verification
// runner. All configuration is by flags; outputs are deterministic CSV/JSON
// with shortest round-trip float formatting.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "microrev/channel.hpp"
#include "microrev/io.hpp"
#include "microrev/photonics.hpp"
#include "microrev/states.hpp"
#include "microrev/svg.hpp"
#include "microrev/sweeps.hpp"
#include "microrev/verify.hpp"

namespace {

using namespace microrev;

struct OutputTarget {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit OutputTarget(const std::string& path) {
    if (!path.empty() && path != "-") {
      file.open(path, std::ios::binary);
      if (!file) throw CLI::ValidationError("--output", "cannot open " + path);
      os = &file;
    }
  }
};

Regime parse_regime(const std::string& s) {
  if (s == "release") return Regime::HeatRelease;
  if (s == "absorb") return Regime::HeatAbsorb;
  throw CLI::ValidationError("--regime", "must be 'release' or 'absorb'");
}

struct CasePair {
  BlochState initial;
  BlochState final_state;
};

// The three transition pairs of the temperature-curve study:
//   1 / classical: g -> e, coherences (0, 0)
//   2: (|g>+|e>)/sqrt(2) -> e, coherences (1, 0)
//   3: (|g>+|e>)/sqrt(2) -> (|g>+sqrt(3)|e>)/2, coherences (1, ~0.87)
CasePair named_case(const std::string& name) {
  const double pi = std::numbers::pi;
  if (name == "1" || name == "classical") {
    return {BlochState(0.0, 0.0), BlochState(pi, 0.0)};
  }
  if (name == "2") {
    return {BlochState(pi / 2.0, 0.0), BlochState(pi, 0.0)};
  }
  if (name == "3") {
    return {BlochState(pi / 2.0, 0.0), BlochState(2.0 * pi / 3.0, 0.0)};
  }
  throw CLI::ValidationError("--case", "must be one of 1|2|3|classical");
}

void check_range(double v, double lo, double hi, const char* flag) {
  if (!(v >= lo && v <= hi)) {
    throw CLI::ValidationError(flag, "value " + format_double(v) + " outside [" +
                                         format_double(lo) + ", " + format_double(hi) + "]");
  }
}

int cmd_map(double beta, double p, const std::string& regime_name, std::size_t grid,
            double phi_i, double phi_f, const std::string& out_path,
            const std::string& svg_path) {
  check_range(p, 0.0, 1.0, "--p");
  check_range(beta, 0.0, kBetaDeltaECap, "--beta-delta-e");
  if (grid < 2) throw CLI::ValidationError("--grid", "needs at least 2 points");
  SweepGrid g;
  g.n_i = g.n_f = grid;
  g.beta_delta_e = beta;
  g.p = p;
  g.phi_i = phi_i;
  g.phi_f = phi_f;
  const Regime regime = parse_regime(regime_name);
  const std::vector<MapCell> table = gamma_map(g, regime);
  OutputTarget out(out_path);
  *out.os << "c_i,c_f,theta_i,theta_f,p_forward,p_backward,ratio,q_over_de,gamma,diverged\n";
  for (const MapCell& cell : table) {
    *out.os << format_double(cell.c_i) << ',' << format_double(cell.c_f) << ','
            << format_double(cell.theta_i) << ',' << format_double(cell.theta_f) << ','
            << format_double(cell.p_forward) << ',' << format_double(cell.p_backward) << ','
            << format_double(cell.ratio) << ',' << format_double(cell.q_over_de) << ','
            << format_double(cell.gamma) << ',' << (cell.diverged ? '1' : '0') << '\n';
  }
  if (!svg_path.empty()) {
    std::ofstream svg(svg_path, std::ios::binary);
    write_map_svg(svg, table, g.n_i, g.n_f);
  }
  return 0;
}

int cmd_curve(const std::string& case_name, std::optional<double> theta_i,
              std::optional<double> theta_f, double phi_i, double phi_f, double p,
              double beta_lo, double beta_hi, std::size_t n, const std::string& out_path,
              const std::string& svg_path) {
  check_range(p, 0.0, 1.0, "--p");
  CasePair pair = named_case(case_name);
  if (theta_i) pair.initial = BlochState(*theta_i, phi_i);
  if (theta_f) pair.final_state = BlochState(*theta_f, phi_f);
  const std::vector<CurvePoint> curve =
      gamma_curve(pair.initial, pair.final_state, beta_lo, beta_hi, n, p);
  OutputTarget out(out_path);
  *out.os << "beta_delta_e,p_forward,p_backward,ratio,gamma,diverged\n";
  std::vector<double> xs, ys;
  for (const CurvePoint& pt : curve) {
    *out.os << format_double(pt.beta_delta_e) << ',' << format_double(pt.p_forward) << ','
            << format_double(pt.p_backward) << ',' << format_double(pt.ratio) << ','
            << format_double(pt.gamma) << ',' << (pt.diverged ? '1' : '0') << '\n';
    xs.push_back(pt.beta_delta_e);
    ys.push_back(pt.gamma);
  }
  if (!svg_path.empty()) {
    std::ofstream svg(svg_path, std::ios::binary);
    write_curve_svg(svg, xs, ys);
  }
  return 0;
}

int cmd_cut(double beta, double p, const std::string& regime_name, std::size_t n,
            const std::string& out_path, const std::string& svg_path) {
  check_range(p, 0.0, 1.0, "--p");
  check_range(beta, 0.0, kBetaDeltaECap, "--beta-delta-e");
  const std::vector<CutPoint> cut = diagonal_cut(beta, p, parse_regime(regime_name), n);
  OutputTarget out(out_path);
  *out.os << "c,gamma,diverged\n";
  std::vector<double> xs, ys;
  for (const CutPoint& pt : cut) {
    *out.os << format_double(pt.c) << ',' << format_double(pt.gamma) << ','
            << (pt.diverged ? '1' : '0') << '\n';
    xs.push_back(pt.c);
    ys.push_back(pt.gamma);
  }
  if (!svg_path.empty()) {
    std::ofstream svg(svg_path, std::ios::binary);
    write_curve_svg(svg, xs, ys);
  }
  return 0;
}

int cmd_extremum(double beta, double p, const std::string& regime_name,
                 const std::string& out_path) {
  check_range(p, 0.0, 1.0, "--p");
  check_range(beta, 0.0, kBetaDeltaECap, "--beta-delta-e");
  const ExtremumResult r = find_extremum(beta, p, parse_regime(regime_name));
  const std::string kind = r.kind == ExtremumKind::Min ? "min" : "max";
  std::cout << kind << ' ' << format_double(r.c_i_star) << ' ' << format_double(r.c_f_star)
            << ' ' << format_double(r.gamma_star) << ' '
            << format_double(r.refinement_residual) << '\n';
  if (!out_path.empty() && out_path != "-") {
    std::ofstream file(out_path, std::ios::binary);
    file << "kind,c_i,c_f,gamma,residual\n"
         << kind << ',' << format_double(r.c_i_star) << ',' << format_double(r.c_f_star)
         << ',' << format_double(r.gamma_star) << ','
         << format_double(r.refinement_residual) << '\n';
  }
  return 0;
}

int cmd_photonic_sim(const std::string& case_name, std::optional<double> theta_i,
                     std::optional<double> theta_f, double beta, double p,
                     std::uint64_t n_shots, std::uint64_t seed,
                     const std::string& out_path) {
  check_range(p, 0.0, 1.0, "--p");
  check_range(beta, 0.0, kBetaDeltaECap, "--beta-delta-e");
  CasePair pair = named_case(case_name);
  if (theta_i) pair.initial = BlochState(*theta_i, 0.0);
  if (theta_f) pair.final_state = BlochState(*theta_f, 0.0);

  const ThermalReservoir reservoir(beta);
  const ChannelParams channel(p);
  const EnergySpec energy;

  const ExperimentParams fwd = param_map(pair.initial, reservoir, channel);
  const ExperimentParams bwd = param_map(pair.final_state, reservoir, channel);
  const double p_forward =
      projection_probability(reduced_system(evolve_interferometer(fwd)), pair.final_state);
  const double p_backward =
      projection_probability(reduced_system(evolve_interferometer(bwd)), pair.initial);
  const double q = heat(pair.initial, pair.final_state, energy);
  const double beta_q = beta * q / energy.delta_e;
  const bool diverged = p_backward <= kDivergenceFloor;
  const double ratio =
      diverged ? std::numeric_limits<double>::infinity() : p_forward / p_backward;
  const double gamma = diverged ? std::numeric_limits<double>::infinity()
                                : ratio * std::exp(beta_q);

  nlohmann::ordered_json report;
  report["params"] = {{"case", case_name},
                      {"beta_delta_e", beta},
                      {"p", p},
                      {"theta_i", pair.initial.theta},
                      {"theta_f", pair.final_state.theta},
                      {"a", fwd.a},
                      {"b", fwd.b},
                      {"phi_res", fwd.phi_res},
                      {"theta_ch", fwd.theta_ch},
                      {"n_shots", n_shots}};
  report["analytic"] = {{"p_forward", p_forward},
                        {"p_backward", p_backward},
                        {"ratio", diverged ? "inf" : format_double(ratio)},
                        {"gamma", diverged ? "inf" : format_double(gamma)},
                        {"diverged", diverged}};
  if (n_shots > 0 && !diverged) {
    const SampledTransition s =
        sample_transition(p_forward, p_backward, beta_q, ShotConfig(n_shots, seed));
    report["sampled"] = {{"p_forward", s.p_forward_hat},
                         {"p_forward_std_err", s.p_forward_err},
                         {"p_backward", s.p_backward_hat},
                         {"p_backward_std_err", s.p_backward_err},
                         {"gamma", s.gamma_hat},
                         {"gamma_std_err", s.gamma_err}};
  }
  report["seed"] = seed;
  OutputTarget out(out_path);
  *out.os << report.dump(2) << '\n';
  return 0;
}

int cmd_verify(double perturbation, const std::string& out_path) {
  VerifyOptions opt;
  opt.perturbation = perturbation;
  const std::vector<VerifySuiteResult> suites = run_verification(opt);
  nlohmann::ordered_json summary;
  summary["suites"] = nlohmann::ordered_json::array();
  int total_failed = 0;
  for (const VerifySuiteResult& s : suites) {
    std::cout << "suite=" << s.name << " passed=" << s.passed << " failed=" << s.failed
              << '\n';
    summary["suites"].push_back({{"name", s.name}, {"passed", s.passed}, {"failed", s.failed}});
    total_failed += s.failed;
  }
  summary["failed"] = total_failed;
  summary["ok"] = total_failed == 0;
  OutputTarget out(out_path);
  *out.os << summary.dump(2) << '\n';
  return total_failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum microreversibility simulator for a qubit thermalizing "
               "through the generalized amplitude damping channel"};
  app.require_subcommand(1);

  double beta = 2.0, p = 0.5, phi_i = 0.0, phi_f = 0.0;
  std::size_t grid = 201, n_points = 101;
  double beta_lo = 0.0, beta_hi = 5.0;
  std::string regime = "release", case_name = "1";
  std::string out_path, svg_path;
  std::optional<double> theta_i_opt, theta_f_opt;
  std::uint64_t n_shots = 100000, seed = 1;
  double perturbation = 0.0;

  auto add_common = [&](CLI::App* sub, bool with_regime) {
    sub->add_option("--beta-delta-e", beta, "Dimensionless inverse temperature beta*dE")
        ->capture_default_str();
    sub->add_option("--p", p, "Damping parameter in [0,1]")->capture_default_str();
    if (with_regime) {
      sub->add_option("--regime", regime, "Heat regime: release or absorb")
          ->capture_default_str();
    }
    sub->add_option("-o,--output", out_path, "Output file ('-' for stdout)");
  };

  CLI::App* map = app.add_subcommand(
      "map", "Deviation-factor map over the (C_i, C_f) coherence plane");
  add_common(map, true);
  map->add_option("--grid", grid, "Points per coherence axis")->capture_default_str();
  map->add_option("--phi-i", phi_i, "Initial azimuthal angle")->capture_default_str();
  map->add_option("--phi-f", phi_f, "Final azimuthal angle")->capture_default_str();
  map->add_option("--svg", svg_path, "Optional heatmap SVG file");

  CLI::App* curve = app.add_subcommand(
      "curve", "Deviation factor versus beta*dE for a transition pair");
  add_common(curve, false);
  curve->add_option("--case", case_name, "Named transition pair: 1|2|3|classical")
      ->capture_default_str();
  curve->add_option("--theta-i", theta_i_opt, "Explicit initial polar angle");
  curve->add_option("--theta-f", theta_f_opt, "Explicit final polar angle");
  curve->add_option("--phi-i", phi_i, "Initial azimuthal angle")->capture_default_str();
  curve->add_option("--phi-f", phi_f, "Final azimuthal angle")->capture_default_str();
  curve->add_option("--beta-min", beta_lo, "Range start")->capture_default_str();
  curve->add_option("--beta-max", beta_hi, "Range end")->capture_default_str();
  curve->add_option("--n", n_points, "Sample count")->capture_default_str();
  curve->add_option("--svg", svg_path, "Optional curve SVG file");

  CLI::App* cut = app.add_subcommand(
      "cut", "Diagonal cut C_i = C_f = C through the deviation-factor map");
  add_common(cut, true);
  cut->add_option("--n", n_points, "Sample count")->capture_default_str();
  cut->add_option("--svg", svg_path, "Optional curve SVG file");

  CLI::App* extremum = app.add_subcommand(
      "extremum", "Locate the deviation-factor extremum of a regime");
  add_common(extremum, true);

  CLI::App* photonic = app.add_subcommand(
      "photonic-sim", "Two-layer interferometer twin with shot-noise Monte Carlo");
  add_common(photonic, false);
  photonic->add_option("--case", case_name, "Named transition pair: 1|2|3|classical")
      ->capture_default_str();
  photonic->add_option("--theta-i", theta_i_opt, "Explicit initial polar angle");
  photonic->add_option("--theta-f", theta_f_opt, "Explicit final polar angle");
  photonic->add_option("--n-shots", n_shots, "Shots per probability (0 = analytic only)")
      ->capture_default_str();
  photonic->add_option("--seed", seed, "Monte Carlo seed, echoed in the report")
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand(
      "verify", "Run the invariant and oracle-equivalence suites");
  verify->add_option("-o,--output", out_path, "Summary JSON file ('-' for stdout)");
  verify->add_option("--perturb", perturbation,
                     "Canary: bias the closed forms by this amount (must fail)")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
    if (map->parsed()) return cmd_map(beta, p, regime, grid, phi_i, phi_f, out_path, svg_path);
    if (curve->parsed())
      return cmd_curve(case_name, theta_i_opt, theta_f_opt, phi_i, phi_f, p, beta_lo, beta_hi,
                       n_points, out_path, svg_path);
    if (cut->parsed()) return cmd_cut(beta, p, regime, n_points, out_path, svg_path);
    if (extremum->parsed()) return cmd_extremum(beta, p, regime, out_path);
    if (photonic->parsed())
      return cmd_photonic_sim(case_name, theta_i_opt, theta_f_opt, beta, p, n_shots, seed,
                              out_path);
    if (verify->parsed()) return cmd_verify(perturbation, out_path);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
