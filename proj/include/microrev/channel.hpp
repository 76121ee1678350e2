#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "microrev/linalg.hpp"
#include "microrev/states.hpp"

// Generalized amplitude damping: the joint system-reservoir unitary, the
// forward/backward transition probabilities of the two-point-measurement
// protocol (both as explicit traces and as closed forms), the quantum
// microreversibility ratio and the deviation factor.

namespace microrev {

struct ChannelParams {
  double p;  // damping strength, [0,1]

  explicit ChannelParams(double p_) : p(p_) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("ChannelParams: p must lie in [0,1]");
    }
  }
};

struct TimeMap {
  double tau;  // thermalization time constant, > 0

  explicit TimeMap(double tau_) : tau(tau_) {
    if (!(tau > 0.0)) {
      throw std::invalid_argument("TimeMap: tau must be positive");
    }
  }
};

// p = e^{-t/tau}, as printed: t = 0 gives p = 1.
inline ChannelParams p_from_time(double t, const TimeMap& m) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("p_from_time: t must be >= 0");
  }
  return ChannelParams(std::exp(-t / m.tau));
}

// Joint unitary in the basis |g,Eg>, |g,Ee>, |e,Eg>, |e,Ee>:
// rotation by sqrt(p) on the middle energy-exchange block.
inline ComplexMatrix gadc_unitary(const ChannelParams& c) {
  const double sp = std::sqrt(c.p);
  const double sq = std::sqrt(1.0 - c.p);
  ComplexMatrix u(4);
  u(0, 0) = 1.0;
  u(1, 1) = sq;
  u(1, 2) = sp;
  u(2, 1) = -sp;
  u(2, 2) = sq;
  u(3, 3) = 1.0;
  return u;
}

namespace detail {

// Values within 1e-12 of [0,1] are float dust and clamped; anything worse
// is a formula bug and raised as an error.
inline double clamp_probability(double v, const char* what) {
  constexpr double slack = 1e-12;
  if (v < -slack || v > 1.0 + slack) {
    throw std::logic_error(std::string(what) + ": probability out of range: " +
                           std::to_string(v));
  }
  return std::min(1.0, std::max(0.0, v));
}

inline double trace_probability(const BlochState& in, const BlochState& out,
                                const ComplexMatrix& u, const ThermalReservoir& r,
                                const char* what) {
  const ComplexMatrix joint = tensor(projector(bloch_ket(in)), thermal_state(r).matrix());
  const ComplexMatrix evolved = u * joint * conjugate_transpose(u);
  const ComplexMatrix meas = tensor(projector(bloch_ket(out)), ComplexMatrix::identity(2));
  const Complex t = expectation(evolved, meas);
  if (std::abs(t.imag()) > tol::kAlgebra) {
    throw std::logic_error(std::string(what) + ": trace has imaginary part");
  }
  return clamp_probability(t.real(), what);
}

}  // namespace detail

// Explicit matrix composition of Tr[U (rho_i x rho_th) U^dag (P_f x I)].
inline double forward_prob_numeric(const BlochState& initial, const BlochState& final_state,
                                   const ChannelParams& c, const ThermalReservoir& r) {
  return detail::trace_probability(initial, final_state, gadc_unitary(c), r,
                                   "forward_prob_numeric");
}

// Closed form of the forward transition probability.
inline double forward_prob_closed(const BlochState& initial, const BlochState& final_state,
                                  const ChannelParams& c, const ThermalReservoir& r) {
  const double ci = std::cos(initial.theta);
  const double cf = std::cos(final_state.theta);
  const double v = 0.5 * (cf * ((1.0 - c.p) * ci + (1.0 - 2.0 * r.w_e()) * c.p) + 1.0 +
                          std::sqrt(1.0 - c.p) * std::sin(initial.theta) *
                              std::sin(final_state.theta) *
                              std::cos(initial.phi - final_state.phi));
  return detail::clamp_probability(v, "forward_prob_closed");
}

// Reverse-process trace: U^dag acting on rho_f^R x rho_th, projected onto
// the time-reversed initial state.
inline double backward_prob_numeric(const BlochState& initial, const BlochState& final_state,
                                    const ChannelParams& c, const ThermalReservoir& r) {
  const ComplexMatrix u_r = conjugate_transpose(gadc_unitary(c));
  return detail::trace_probability(time_reverse(final_state), time_reverse(initial), u_r, r,
                                   "backward_prob_numeric");
}

// Closed form of the backward transition probability: the forward formula
// with the roles of cos(theta_i) and cos(theta_f) exchanged.
inline double backward_prob_closed(const BlochState& initial, const BlochState& final_state,
                                   const ChannelParams& c, const ThermalReservoir& r) {
  const double ci = std::cos(initial.theta);
  const double cf = std::cos(final_state.theta);
  const double v = 0.5 * (ci * ((1.0 - c.p) * cf + (1.0 - 2.0 * r.w_e()) * c.p) + 1.0 +
                          std::sqrt(1.0 - c.p) * std::sin(initial.theta) *
                              std::sin(final_state.theta) *
                              std::cos(initial.phi - final_state.phi));
  return detail::clamp_probability(v, "backward_prob_closed");
}

// Below this the backward probability is treated as vanished and the ratio
// reported as divergent.
inline constexpr double kDivergenceFloor = 1e-300;

// Shared coherence term of numerator and denominator of the ratio.
inline double gamma_term(const BlochState& initial, const BlochState& final_state,
                         const ChannelParams& c) {
  return 1.0 + std::sqrt(1.0 - c.p) * std::sin(initial.theta) *
                   std::sin(final_state.theta) * std::cos(initial.phi - final_state.phi);
}

struct RatioResult {
  double ratio;        // P_F / P_B, +inf when diverged
  double gamma_small;  // the shared coherence term
  bool diverged;       // P_B at or below the divergence floor
};

inline RatioResult microrev_ratio(const BlochState& initial, const BlochState& final_state,
                                  const ChannelParams& c, const ThermalReservoir& r) {
  const double pf = forward_prob_closed(initial, final_state, c, r);
  const double pb = backward_prob_closed(initial, final_state, c, r);
  RatioResult out;
  out.gamma_small = gamma_term(initial, final_state, c);
  out.diverged = pb <= kDivergenceFloor;
  out.ratio = out.diverged ? std::numeric_limits<double>::infinity() : pf / pb;
  return out;
}

// All scalars of one forward/backward pair.
struct TransitionReport {
  double p_forward = 0.0;
  double p_backward = 0.0;
  double ratio = 0.0;            // P_F / P_B
  double gamma_small = 0.0;      // shared coherence term
  double q_heat = 0.0;           // heat absorbed in the forward process
  double deviation = 0.0;        // Gamma = ratio * e^{beta Q}
  double classical_ratio = 0.0;  // e^{-beta Q}
  bool diverged = false;
};

inline TransitionReport deviation_factor(const BlochState& initial,
                                         const BlochState& final_state,
                                         const ChannelParams& c, const ThermalReservoir& r,
                                         const EnergySpec& e) {
  TransitionReport rep;
  rep.p_forward = forward_prob_closed(initial, final_state, c, r);
  rep.p_backward = backward_prob_closed(initial, final_state, c, r);
  rep.gamma_small = gamma_term(initial, final_state, c);
  rep.q_heat = heat(initial, final_state, e);
  const double beta_q = r.beta_delta_e() * rep.q_heat / e.delta_e;
  rep.classical_ratio = std::exp(-beta_q);
  rep.diverged = rep.p_backward <= kDivergenceFloor;
  if (rep.diverged) {
    rep.ratio = std::numeric_limits<double>::infinity();
    rep.deviation = std::numeric_limits<double>::infinity();
  } else {
    rep.ratio = rep.p_forward / rep.p_backward;
    // beta dE = 0 makes both factors exactly 1; keep that identity exact.
    rep.deviation = beta_q == 0.0 ? rep.ratio : rep.ratio * std::exp(beta_q);
  }
  return rep;
}

// Reduced system state after the channel, Tr_R[U (rho_i x rho_th) U^dag].
// The photonics module pins its interferometer output against this.
inline DensityMatrix evolved_system_state(const BlochState& initial, const ChannelParams& c,
                                          const ThermalReservoir& r) {
  const ComplexMatrix u = gadc_unitary(c);
  const ComplexMatrix joint =
      tensor(projector(bloch_ket(initial)), thermal_state(r).matrix());
  const ComplexMatrix evolved = u * joint * conjugate_transpose(u);
  return DensityMatrix(partial_trace(evolved, Subsystem::First, 2, 2));
}

}  // namespace microrev
