#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "microrev/channel.hpp"
#include "microrev/linalg.hpp"
#include "microrev/photonics.hpp"
#include "microrev/states.hpp"
#include "microrev/sweeps.hpp"

// Self-verification suites behind the `verify` subcommand: each suite is a
// batch of invariant and oracle-equivalence checks with pass/fail counts.
// The perturbation knob exists for canary runs: a nonzero value biases the
// closed-form probabilities inside the oracle comparison and must make the
// run fail.

namespace microrev {

struct VerifySuiteResult {
  std::string name;
  int passed = 0;
  int failed = 0;
};

struct VerifyOptions {
  double perturbation = 0.0;
  std::uint64_t seed = 20240817;
};

namespace verify_detail {

struct Checker {
  VerifySuiteResult result;
  void check(bool ok) { ok ? ++result.passed : ++result.failed; }
  void close(double a, double b, double tolerance) { check(std::abs(a - b) <= tolerance); }
};

inline BlochState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  // Uniform over the sphere in theta via arccos of a uniform cosine.
  const double theta = std::acos(1.0 - 2.0 * u01(rng));
  const double phi = (2.0 * u01(rng) - 1.0) * std::numbers::pi;
  return BlochState(theta, phi);
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = Complex{g(rng), g(rng)};
  return m;
}

inline VerifySuiteResult suite_linalg(const VerifyOptions& opt) {
  Checker c;
  c.result.name = "linalg";
  std::mt19937_64 rng(opt.seed);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2);
    const ComplexMatrix b = random_matrix(rng, 2);
    const ComplexMatrix x = random_matrix(rng, 2);
    const ComplexMatrix y = random_matrix(rng, 2);
    c.check((tensor(a, b) * tensor(x, y) - tensor(a * x, b * y)).max_norm() <= 1e-10);
    c.check((conjugate_transpose(a * b) - conjugate_transpose(b) * conjugate_transpose(a))
                .max_norm() <= tol::kAlgebra);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const BlochState s = random_state(rng);
    const ComplexMatrix p = projector(bloch_ket(s));
    c.check((p * p - p).max_norm() <= tol::kAlgebra);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const ThermalReservoir r(5.0 * u01(rng));
    const ComplexMatrix joint = tensor(p, thermal_state(r).matrix());
    c.check((partial_trace(joint, Subsystem::First, 2, 2) - p).max_norm() <= tol::kAlgebra);
    c.check((partial_trace(joint, Subsystem::Second, 2, 2) - thermal_state(r).matrix())
                .max_norm() <= tol::kAlgebra);
  }
  return c.result;
}

inline VerifySuiteResult suite_states(const VerifyOptions& opt) {
  Checker c;
  c.result.name = "states";
  std::mt19937_64 rng(opt.seed + 1);
  for (int trial = 0; trial < 200; ++trial) {
    const BlochState s = random_state(rng);
    const Ket k = bloch_ket(s);
    double n2 = 0.0;
    for (const Complex& a : k.amplitudes()) n2 += std::norm(a);
    c.close(n2, 1.0, tol::kAlgebra);
    const BlochState rr = time_reverse(time_reverse(s));
    c.check(rr.theta == s.theta && rr.phi == s.phi);
    c.close(coherence_l1(DensityMatrix(projector(k))), std::sin(s.theta), tol::kAlgebra);
    const BlochState t = random_state(rng);
    const EnergySpec e;
    c.check(heat(s, t, e) == -heat(t, s, e));
  }
  for (int i = 0; i <= 50; ++i) {
    const double coh = static_cast<double>(i) / 50.0;
    c.close(std::sin(theta_from_coherence(coh, CoherenceBranch::Lower)), coh, tol::kAlgebra);
    c.close(std::sin(theta_from_coherence(coh, CoherenceBranch::Upper)), coh, tol::kAlgebra);
  }
  double prev = 0.5;
  bool monotone = true;
  for (int i = 1; i <= 100; ++i) {
    const double w = ThermalReservoir(0.1 * i).w_e();
    monotone = monotone && w < prev;
    prev = w;
  }
  c.check(monotone);
  return c.result;
}

inline VerifySuiteResult suite_channel_oracle(const VerifyOptions& opt) {
  Checker c;
  c.result.name = "channel-oracle";
  std::mt19937_64 rng(opt.seed + 2);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const BlochState i = random_state(rng);
    const BlochState f = random_state(rng);
    const ChannelParams ch(u01(rng));
    const ThermalReservoir r(10.0 * u01(rng));
    c.close(forward_prob_closed(i, f, ch, r) + opt.perturbation,
            forward_prob_numeric(i, f, ch, r), 1e-9);
    c.close(backward_prob_closed(i, f, ch, r) + opt.perturbation,
            backward_prob_numeric(i, f, ch, r), 1e-9);
  }
  for (double p : {0.0, 0.37, 0.5, 1.0}) {
    c.check(gadc_unitary(ChannelParams(p)).is_unitary(1e-14));
  }
  return c.result;
}

inline VerifySuiteResult suite_symmetry(const VerifyOptions& opt) {
  Checker c;
  c.result.name = "symmetry";
  std::mt19937_64 rng(opt.seed + 3);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const BlochState i = random_state(rng);
    const BlochState f = random_state(rng);
    const ChannelParams ch(u01(rng));
    const ThermalReservoir r(6.0 * u01(rng));
    // Completeness over the orthogonal final pair.
    const BlochState f_perp(std::numbers::pi - f.theta, f.phi + std::numbers::pi);
    c.close(forward_prob_closed(i, f, ch, r) + forward_prob_closed(i, f_perp, ch, r), 1.0,
            tol::kPhysical);
    // theta_i <-> theta_f inversion of the ratio.
    const RatioResult fwd = microrev_ratio(i, f, ch, r);
    const BlochState i_sw(f.theta, i.phi);
    const BlochState f_sw(i.theta, f.phi);
    const RatioResult swapped = microrev_ratio(i_sw, f_sw, ch, r);
    if (!fwd.diverged && !swapped.diverged) {
      c.close(fwd.ratio * swapped.ratio, 1.0, tol::kPhysical * std::max(1.0, fwd.ratio));
    }
  }
  return c.result;
}

inline VerifySuiteResult suite_photonic_equivalence(const VerifyOptions& opt) {
  Checker c;
  c.result.name = "photonic-equivalence";
  std::mt19937_64 rng(opt.seed + 4);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double theta_i = u01(rng) * std::numbers::pi;
    const ThermalReservoir r(8.0 * u01(rng));
    const ChannelParams ch(u01(rng));
    const ExperimentParams x = param_map(BlochState(theta_i, 0.0), r, ch);
    const DensityMatrix closed = evolve_interferometer(x);
    const DensityMatrix piped = element_pipeline(x).path_state();
    c.check((closed.matrix() - piped.matrix()).max_norm() <= tol::kPhysical);
    const DensityMatrix channel_side = evolved_system_state(BlochState(theta_i, 0.0), ch, r);
    c.check((reduced_system(closed).matrix() - channel_side.matrix()).max_norm() <=
            tol::kPhysical);
  }
  for (const OpticalElement& e :
       evolution_elements(ExperimentParams(0.6, 0.8, 1.0, 0.7))) {
    c.check(element_unitary(e).is_unitary(tol::kAlgebra));
  }
  return c.result;
}

inline VerifySuiteResult suite_limits(const VerifyOptions& opt) {
  Checker c;
  c.result.name = "limits";
  std::mt19937_64 rng(opt.seed + 5);
  const EnergySpec e;
  // Incoherent endpoints recover the classical ratio for every p.
  for (double p : {0.1, 0.3, 0.5, 0.7, 0.9}) {
    for (double beta : {0.5, 1.0, 2.0, 5.0}) {
      const ThermalReservoir r(beta);
      const RatioResult rr = microrev_ratio(BlochState(0.0, 0.0),
                                            BlochState(std::numbers::pi, 0.0),
                                            ChannelParams(p), r);
      c.close(rr.ratio / std::exp(-beta), 1.0, 1e-10);
    }
  }
  // Gamma = 1 at the incoherent and maximally coherent corners.
  for (double beta : {0.1, 1.0, 2.0, 4.0}) {
    const ThermalReservoir r(beta);
    const ChannelParams ch(0.5);
    const TransitionReport classical = deviation_factor(
        BlochState(0.0, 0.0), BlochState(std::numbers::pi, 0.0), ch, r, e);
    c.close(classical.deviation, 1.0, 1e-10);
    const TransitionReport coherent =
        deviation_factor(BlochState(std::numbers::pi / 2, 0.0),
                         BlochState(std::numbers::pi / 2, 0.0), ch, r, e);
    c.close(coherent.deviation, 1.0, 1e-10);
  }
  // Infinite temperature is exactly classical for arbitrary state pairs.
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const ThermalReservoir hot(0.0);
  for (int trial = 0; trial < 100; ++trial) {
    const TransitionReport rep = deviation_factor(
        random_state(rng), random_state(rng), ChannelParams(u01(rng)), hot, e);
    c.close(rep.deviation, 1.0, 1e-12);
  }
  // Zero-temperature trend for a fixed coherent pair: Gamma falls with
  // beta when heat is released and grows when heat is absorbed.
  const BlochState rel_i(2.2, 0.0), rel_f(0.9, 0.0);
  double prev_rel = deviation_factor(rel_i, rel_f, ChannelParams(0.5),
                                     ThermalReservoir(10.0), e)
                        .deviation;
  double prev_abs = deviation_factor(rel_f, rel_i, ChannelParams(0.5),
                                     ThermalReservoir(10.0), e)
                        .deviation;
  for (double beta : {20.0, 50.0}) {
    const double g_rel =
        deviation_factor(rel_i, rel_f, ChannelParams(0.5), ThermalReservoir(beta), e).deviation;
    const double g_abs =
        deviation_factor(rel_f, rel_i, ChannelParams(0.5), ThermalReservoir(beta), e).deviation;
    c.check(g_rel < prev_rel);
    c.check(g_abs > prev_abs);
    prev_rel = g_rel;
    prev_abs = g_abs;
  }
  return c.result;
}

}  // namespace verify_detail

inline std::vector<VerifySuiteResult> run_verification(const VerifyOptions& opt) {
  return {
      verify_detail::suite_linalg(opt),
      verify_detail::suite_states(opt),
      verify_detail::suite_channel_oracle(opt),
      verify_detail::suite_symmetry(opt),
      verify_detail::suite_photonic_equivalence(opt),
      verify_detail::suite_limits(opt),
  };
}

}  // namespace microrev
