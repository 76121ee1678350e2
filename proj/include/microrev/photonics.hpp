#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "microrev/channel.hpp"
#include "microrev/linalg.hpp"
#include "microrev/states.hpp"

// Digital twin of the two-layer interferometer: the photon lives in an
// 8-dimensional space (path column {l,r}) x (path layer {d,u}) x
// (polarization {H,V}). The column encodes the system (l = ground,
// r = excited), the layer encodes the reservoir energy state (d = Eg,
// u = Ee), and polarization is the ancilla the wave plates act on.

namespace microrev {

enum class PathColumn : std::size_t { Left = 0, Right = 1 };
enum class PathLayer : std::size_t { Down = 0, Up = 1 };
enum class Polarization : std::size_t { H = 0, V = 1 };

struct PathCell {
  PathColumn column;
  PathLayer layer;
};

inline std::size_t optical_index(PathColumn c, PathLayer l, Polarization p) {
  return static_cast<std::size_t>(c) * 4 + static_cast<std::size_t>(l) * 2 +
         static_cast<std::size_t>(p);
}

// Path-only index matching the channel module's system x reservoir order:
// |l,d>, |l,u>, |r,d>, |r,u> = |g,Eg>, |g,Ee>, |e,Eg>, |e,Ee>.
inline std::size_t path_index(PathColumn c, PathLayer l) {
  return static_cast<std::size_t>(c) * 2 + static_cast<std::size_t>(l);
}

using PhotonicState = Ket;  // dim 8, normalized

struct OpticalElement {
  enum class Kind { HWP, QWP, BD };
  enum class Orientation { Horizontal, Vertical };

  Kind kind;
  // HWP/QWP: plate mount angle and the addressed cells.
  double angle = 0.0;
  std::vector<PathCell> cells;
  // BD: orientation plus the addressed layer (horizontal) or columns
  // (vertical), and which polarization it displaces.
  Orientation orientation = Orientation::Horizontal;
  PathLayer layer = PathLayer::Down;
  std::vector<PathColumn> columns;
  Polarization displaced = Polarization::H;

  static OpticalElement hwp(double angle, std::vector<PathCell> cells) {
    OpticalElement e;
    e.kind = Kind::HWP;
    e.angle = angle;
    e.cells = std::move(cells);
    return e;
  }

  static OpticalElement qwp(double angle, std::vector<PathCell> cells) {
    OpticalElement e;
    e.kind = Kind::QWP;
    e.angle = angle;
    e.cells = std::move(cells);
    return e;
  }

  static OpticalElement bd_horizontal(PathLayer layer, Polarization displaced) {
    OpticalElement e;
    e.kind = Kind::BD;
    e.orientation = Orientation::Horizontal;
    e.layer = layer;
    e.displaced = displaced;
    return e;
  }

  static OpticalElement bd_vertical(std::vector<PathColumn> columns, Polarization displaced) {
    OpticalElement e;
    e.kind = Kind::BD;
    e.orientation = Orientation::Vertical;
    e.columns = std::move(columns);
    e.displaced = displaced;
    return e;
  }
};

// 8x8 unitary of one element. Half-wave plates act on polarization as the
// reflection [[cos 2a, sin 2a], [sin 2a, -cos 2a]] on the addressed cells;
// quarter-wave plates are phase compensators and modeled as identity; beam
// displacers are lossless polarization-selective path swaps.
inline ComplexMatrix element_unitary(const OpticalElement& e) {
  ComplexMatrix u = ComplexMatrix::identity(8);
  switch (e.kind) {
    case OpticalElement::Kind::QWP:
      break;
    case OpticalElement::Kind::HWP: {
      const double c = std::cos(2.0 * e.angle);
      const double s = std::sin(2.0 * e.angle);
      for (const PathCell& cell : e.cells) {
        const std::size_t ih = optical_index(cell.column, cell.layer, Polarization::H);
        const std::size_t iv = optical_index(cell.column, cell.layer, Polarization::V);
        u(ih, ih) = c;
        u(ih, iv) = s;
        u(iv, ih) = s;
        u(iv, iv) = -c;
      }
      break;
    }
    case OpticalElement::Kind::BD: {
      if (e.orientation == OpticalElement::Orientation::Horizontal) {
        const std::size_t a = optical_index(PathColumn::Left, e.layer, e.displaced);
        const std::size_t b = optical_index(PathColumn::Right, e.layer, e.displaced);
        u(a, a) = 0.0;
        u(b, b) = 0.0;
        u(a, b) = 1.0;
        u(b, a) = 1.0;
      } else {
        for (PathColumn col : e.columns) {
          const std::size_t a = optical_index(col, PathLayer::Down, e.displaced);
          const std::size_t b = optical_index(col, PathLayer::Up, e.displaced);
          u(a, a) = 0.0;
          u(b, b) = 0.0;
          u(a, b) = 1.0;
          u(b, a) = 1.0;
        }
      }
      break;
    }
  }
  return u;
}

inline PhotonicState apply_element(const OpticalElement& e, const PhotonicState& s) {
  if (s.dim() != 8) {
    throw std::invalid_argument("apply_element: photonic states are 8-dimensional");
  }
  const ComplexMatrix u = element_unitary(e);
  std::vector<Complex> out(8, Complex{0.0, 0.0});
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) out[i] += u(i, j) * s[j];
  return PhotonicState(8, std::move(out));
}

struct ExperimentParams {
  double a;          // amplitude on |l> (ground), real
  double b;          // amplitude on |r> (excited), real
  double phi_res;    // reservoir wave-plate angle: w_g = sin^2, w_e = cos^2
  double theta_ch;   // damping wave-plate angle: p = cos^2

  ExperimentParams(double a_, double b_, double phi_res_, double theta_ch_)
      : a(a_), b(b_), phi_res(phi_res_), theta_ch(theta_ch_) {
    if (std::abs(a * a + b * b - 1.0) > tol::kAlgebra) {
      throw std::invalid_argument("ExperimentParams: a^2 + b^2 must equal 1");
    }
  }
};

// The interferometer realizes phi_i = phi_f = 0 state preparation; the
// azimuthal phase has no optical counterpart here.
inline ExperimentParams param_map(const BlochState& initial, const ThermalReservoir& r,
                                  const ChannelParams& c) {
  if (std::abs(initial.phi) > tol::kAlgebra) {
    throw std::invalid_argument("param_map: the optical twin prepares phi = 0 states");
  }
  return ExperimentParams(std::cos(0.5 * initial.theta), std::sin(0.5 * initial.theta),
                          std::acos(std::sqrt(r.w_e())), std::acos(std::sqrt(c.p)));
}

// Product state over the path factors after the preparation stage:
// (a|l> + b|r>)(a<l| + b<r|) x (sin^2 phi |d><d| + cos^2 phi |u><u|).
inline DensityMatrix prepare_joint_state(const ExperimentParams& x) {
  ComplexMatrix sys(2);
  sys(0, 0) = x.a * x.a;
  sys(0, 1) = x.a * x.b;
  sys(1, 0) = x.a * x.b;
  sys(1, 1) = x.b * x.b;
  ComplexMatrix env(2);
  const double s = std::sin(x.phi_res);
  const double c = std::cos(x.phi_res);
  env(0, 0) = s * s;
  env(1, 1) = c * c;
  return DensityMatrix(tensor(sys, env));
}

namespace detail {

// The two pure path branches of the evolved state, in the order
// (|l,d>, |l,u>, |r,d>, |r,u>), already carrying the thermal weights.
// The |r,d> amplitude of the up-branch carries the minus sign required by
// unitarity of the damping rotation; it drops out of every reduced system
// quantity.
inline std::pair<std::vector<Complex>, std::vector<Complex>> evolved_branches(
    const ExperimentParams& x) {
  const double sf = std::sin(x.phi_res);
  const double cf = std::cos(x.phi_res);
  const double st = std::sin(x.theta_ch);
  const double ct = std::cos(x.theta_ch);
  std::vector<Complex> down = {x.a * sf, x.b * sf * ct, x.b * sf * st, 0.0};
  std::vector<Complex> up = {0.0, x.a * cf * st, -x.a * cf * ct, x.b * cf};
  return {std::move(down), std::move(up)};
}

inline ComplexMatrix branch_mixture(const std::vector<Complex>& down,
                                    const std::vector<Complex>& up) {
  ComplexMatrix rho(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      rho(i, j) = down[i] * std::conj(down[j]) + up[i] * std::conj(up[j]);
  return rho;
}

}  // namespace detail

// Closed-form evolved system-reservoir state at the output of the damping
// stage: a classical mixture of the two thermal branches.
inline DensityMatrix evolve_interferometer(const ExperimentParams& x) {
  auto [down, up] = detail::evolved_branches(x);
  return DensityMatrix(detail::branch_mixture(down, up));
}

inline DensityMatrix reduced_system(const DensityMatrix& rho_se) {
  return partial_trace(rho_se, Subsystem::First, 2, 2);
}

inline DensityMatrix reduced_env(const DensityMatrix& rho_se) {
  return partial_trace(rho_se, Subsystem::Second, 2, 2);
}

// Born-rule probability of projecting the evolved system onto a pure state.
inline double projection_probability(const DensityMatrix& rho_s, const BlochState& final_state) {
  const Complex t = expectation(rho_s, projector(bloch_ket(final_state)));
  return microrev::detail::clamp_probability(t.real(), "projection_probability");
}

// State-preparation elements: HWP_alpha sets the system amplitudes, BD1
// splits the system paths, HWP_phi sets the reservoir weights and BD2
// populates the upper layer. A compensator plate on the right path aligns
// the polarizations before the reservoir plate.
inline std::vector<OpticalElement> preparation_elements(const ExperimentParams& x) {
  const double quarter = std::numbers::pi / 4.0;
  const PathCell rd{PathColumn::Right, PathLayer::Down};
  const PathCell ld{PathColumn::Left, PathLayer::Down};
  return {
      OpticalElement::hwp(0.5 * std::atan2(x.b, x.a), {rd}),
      OpticalElement::bd_horizontal(PathLayer::Down, Polarization::H),
      OpticalElement::hwp(quarter, {rd}),
      OpticalElement::hwp(0.5 * x.phi_res, {ld, rd}),
      OpticalElement::bd_vertical({PathColumn::Left, PathColumn::Right}, Polarization::H),
  };
}

// Damping stage: BD3/BD4 route the |l,u> and |r,d> modes into one cell
// with orthogonal polarizations, HWP_theta plus an HWP_0 realize the
// energy-exchange rotation there, and the mirror elements route the modes
// back. The closing plates align every occupied mode to H so the path
// state carries the full coherence structure.
inline std::vector<OpticalElement> evolution_elements(const ExperimentParams& x) {
  const double quarter = std::numbers::pi / 4.0;
  const PathCell rd{PathColumn::Right, PathLayer::Down};
  const PathCell ld{PathColumn::Left, PathLayer::Down};
  const PathCell lu{PathColumn::Left, PathLayer::Up};
  return {
      OpticalElement::hwp(quarter, {lu}),
      OpticalElement::bd_horizontal(PathLayer::Up, Polarization::V),
      OpticalElement::hwp(quarter, {rd}),
      OpticalElement::bd_vertical({PathColumn::Right}, Polarization::V),
      OpticalElement::hwp(0.5 * (x.theta_ch - 0.5 * std::numbers::pi), {rd}),
      OpticalElement::hwp(0.0, {rd}),
      OpticalElement::qwp(0.0, {rd}),
      OpticalElement::bd_vertical({PathColumn::Right}, Polarization::V),
      OpticalElement::hwp(quarter, {rd}),
      OpticalElement::bd_horizontal(PathLayer::Up, Polarization::V),
      OpticalElement::hwp(quarter, {lu}),
      OpticalElement::hwp(quarter, {ld, rd}),
  };
}

struct PipelineResult {
  // Pure-state snapshots after each preparation element, starting from the
  // injected |r,d,H> photon.
  std::vector<PhotonicState> preparation_stages;
  // Thermal branches after the layer decoherence at BD2, each propagated
  // through the damping stage.
  PhotonicState branch_down;
  PhotonicState branch_up;
  double weight_down;
  double weight_up;

  // Mixed state over the path factors with polarization ignored.
  DensityMatrix path_state() const {
    ComplexMatrix rho(4);
    const PhotonicState* branches[2] = {&branch_down, &branch_up};
    const double weights[2] = {weight_down, weight_up};
    for (int br = 0; br < 2; ++br) {
      for (std::size_t pol = 0; pol < 2; ++pol) {
        std::vector<Complex> amp(4);
        for (std::size_t c = 0; c < 2; ++c)
          for (std::size_t l = 0; l < 2; ++l)
            amp[path_index(static_cast<PathColumn>(c), static_cast<PathLayer>(l))] =
                (*branches[br])[optical_index(static_cast<PathColumn>(c),
                                              static_cast<PathLayer>(l),
                                              static_cast<Polarization>(pol))];
        for (std::size_t i = 0; i < 4; ++i)
          for (std::size_t j = 0; j < 4; ++j)
            rho(i, j) += weights[br] * amp[i] * std::conj(amp[j]);
      }
    }
    return DensityMatrix(std::move(rho));
  }
};

// Element-by-element run of the interferometer. After BD2 the polarization
// is perfectly correlated with the layer, which is where the thermal
// mixture comes from: the state splits into a down-layer branch of weight
// sin^2 phi and an up-layer branch of weight cos^2 phi.
inline PipelineResult element_pipeline(const ExperimentParams& x) {
  PipelineResult out{.preparation_stages = {},
                     .branch_down = Ket::basis(8, 0),
                     .branch_up = Ket::basis(8, 0),
                     .weight_down = 0.0,
                     .weight_up = 0.0};
  PhotonicState s =
      Ket::basis(8, optical_index(PathColumn::Right, PathLayer::Down, Polarization::H));
  out.preparation_stages.push_back(s);
  for (const OpticalElement& e : preparation_elements(x)) {
    s = apply_element(e, s);
    out.preparation_stages.push_back(s);
  }

  // Layer decoherence: project onto each layer and renormalize.
  const auto split = [&s](PathLayer layer) -> std::pair<PhotonicState, double> {
    std::vector<Complex> amp(8, Complex{0.0, 0.0});
    double w = 0.0;
    for (std::size_t c = 0; c < 2; ++c)
      for (std::size_t p = 0; p < 2; ++p) {
        const std::size_t i =
            optical_index(static_cast<PathColumn>(c), layer, static_cast<Polarization>(p));
        amp[i] = s[i];
        w += std::norm(s[i]);
      }
    if (w <= 0.0) {
      return {Ket::basis(8, optical_index(PathColumn::Left, layer, Polarization::V)), 0.0};
    }
    const double scale = 1.0 / std::sqrt(w);
    for (Complex& v : amp) v *= scale;
    return {PhotonicState(8, std::move(amp)), w};
  };
  auto [down, wd] = split(PathLayer::Down);
  auto [up, wu] = split(PathLayer::Up);

  for (const OpticalElement& e : evolution_elements(x)) {
    down = apply_element(e, down);
    up = apply_element(e, up);
  }
  out.branch_down = down;
  out.branch_up = up;
  out.weight_down = wd;
  out.weight_up = wu;
  return out;
}

struct ShotConfig {
  std::uint64_t n_shots;
  std::uint64_t seed;

  ShotConfig(std::uint64_t n_shots_, std::uint64_t seed_)
      : n_shots(n_shots_), seed(seed_) {
    if (n_shots == 0) {
      throw std::invalid_argument("ShotConfig: n_shots must be >= 1");
    }
  }
};

struct ShotResult {
  std::vector<std::uint64_t> counts;     // per input bin
  std::uint64_t discarded = 0;           // residual probability bin
  std::vector<double> estimates;         // count / n
  std::vector<double> std_errors;        // sqrt(p(1-p)/n)
  std::uint64_t seed = 0;
};

// Multinomial photon counting with a deterministic seeded generator. Any
// residual probability mass goes to a discard bin.
inline ShotResult simulate_shots(const std::vector<double>& probabilities,
                                 const ShotConfig& cfg) {
  double total = 0.0;
  for (double p : probabilities) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("simulate_shots: probabilities must lie in [0,1]");
    }
    total += p;
  }
  if (total > 1.0 + 1e-10) {
    throw std::invalid_argument("simulate_shots: probabilities sum above 1");
  }

  std::mt19937_64 rng(cfg.seed);
  ShotResult out;
  out.seed = cfg.seed;
  out.counts.resize(probabilities.size(), 0);
  // Sequential conditional binomials realize an exact multinomial draw.
  std::uint64_t remaining = cfg.n_shots;
  double mass_left = 1.0;
  for (std::size_t i = 0; i < probabilities.size() && remaining > 0; ++i) {
    const double cond = std::min(1.0, probabilities[i] / mass_left);
    std::binomial_distribution<std::uint64_t> binom(remaining, cond);
    const std::uint64_t k = binom(rng);
    out.counts[i] = k;
    remaining -= k;
    mass_left -= probabilities[i];
    if (mass_left <= 0.0) break;
  }
  out.discarded = remaining;
  const double n = static_cast<double>(cfg.n_shots);
  out.estimates.resize(probabilities.size());
  out.std_errors.resize(probabilities.size());
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    const double ph = static_cast<double>(out.counts[i]) / n;
    out.estimates[i] = ph;
    out.std_errors[i] = std::sqrt(ph * (1.0 - ph) / n);
  }
  return out;
}

struct SampledTransition {
  double p_forward_hat = 0.0;
  double p_forward_err = 0.0;
  double p_backward_hat = 0.0;
  double p_backward_err = 0.0;
  double gamma_hat = 0.0;
  double gamma_err = 0.0;  // first-order error propagation
  std::uint64_t seed = 0;
};

// Shot-noise estimate of the deviation factor from independently sampled
// forward and backward probabilities.
inline SampledTransition sample_transition(double p_forward, double p_backward,
                                           double beta_q, const ShotConfig& cfg) {
  const ShotResult f = simulate_shots({p_forward}, ShotConfig(cfg.n_shots, cfg.seed));
  const ShotResult b =
      simulate_shots({p_backward}, ShotConfig(cfg.n_shots, cfg.seed ^ 0x9e3779b97f4a7c15ull));
  SampledTransition out;
  out.seed = cfg.seed;
  out.p_forward_hat = f.estimates[0];
  out.p_forward_err = f.std_errors[0];
  out.p_backward_hat = b.estimates[0];
  out.p_backward_err = b.std_errors[0];
  const double scale = std::exp(beta_q);
  out.gamma_hat = out.p_forward_hat / out.p_backward_hat * scale;
  out.gamma_err = out.gamma_hat *
                  std::sqrt(std::pow(out.p_forward_err / out.p_forward_hat, 2) +
                            std::pow(out.p_backward_err / out.p_backward_hat, 2));
  return out;
}

}  // namespace microrev
