#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "microrev/linalg.hpp"

// Bloch-sphere endpoints, thermal reservoir qubits, l1 coherence and heat
// bookkeeping. Temperature only ever enters as the dimensionless product
// beta * dE.

namespace microrev {

// Inputs above this are treated as the zero-temperature limit; e^{+beta Q}
// would overflow past it.
inline constexpr double kBetaDeltaECap = 700.0;

struct BlochState {
  double theta;  // polar angle, [0, pi]
  double phi;    // azimuthal angle, normalized into [-pi, pi)

  BlochState(double theta_, double phi_) : theta(theta_), phi(normalize_phi(phi_)) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
      throw std::invalid_argument("BlochState: theta must lie in [0, pi]");
    }
  }

  static double normalize_phi(double phi) {
    if (phi >= -std::numbers::pi && phi < std::numbers::pi) return phi;
    const double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(phi + std::numbers::pi, two_pi);
    if (r < 0.0) r += two_pi;
    return r - std::numbers::pi;
  }
};

// (theta, phi) -> (theta, -phi); energy eigenstates are invariant.
inline BlochState time_reverse(const BlochState& s) {
  return BlochState(s.theta, -s.phi);
}

// Amplitudes (cos(theta/2), e^{i phi} sin(theta/2)) in the {|g>,|e>} basis.
// The amplitude on |g> is real and nonnegative by construction; global
// phases are never tracked.
inline Ket bloch_ket(const BlochState& s) {
  const double half = 0.5 * s.theta;
  return Ket(2, {Complex{std::cos(half), 0.0},
                 std::polar(std::sin(half), s.phi)});
}

class ThermalReservoir {
 public:
  explicit ThermalReservoir(double beta_delta_e) {
    if (!(beta_delta_e >= 0.0)) {
      throw std::invalid_argument("ThermalReservoir: beta*dE must be >= 0");
    }
    capped_ = beta_delta_e > kBetaDeltaECap;
    beta_delta_e_ = capped_ ? kBetaDeltaECap : beta_delta_e;
    const double x = std::exp(-beta_delta_e_);
    w_e_ = x / (1.0 + x);
    w_g_ = 1.0 - w_e_;
  }

  double beta_delta_e() const { return beta_delta_e_; }
  double w_g() const { return w_g_; }
  double w_e() const { return w_e_; }
  // True when the input exceeded the overflow cap and was clamped to the
  // zero-temperature limit.
  bool capped() const { return capped_; }

 private:
  double beta_delta_e_;
  double w_g_;
  double w_e_;
  bool capped_;
};

// diag(w_g, w_e) in the {|Eg>,|Ee>} basis.
inline DensityMatrix thermal_state(const ThermalReservoir& r) {
  ComplexMatrix m(2);
  m(0, 0) = r.w_g();
  m(1, 1) = r.w_e();
  return DensityMatrix(std::move(m));
}

struct EnergySpec {
  double delta_e = 1.0;
  double e_ground = 0.0;

  explicit EnergySpec(double delta_e_ = 1.0, double e_ground_ = 0.0)
      : delta_e(delta_e_), e_ground(e_ground_) {
    if (!(delta_e > 0.0)) {
      throw std::invalid_argument("EnergySpec: delta_e must be positive");
    }
  }

  ComplexMatrix hamiltonian() const {
    ComplexMatrix h(2);
    h(0, 0) = e_ground;
    h(1, 1) = e_ground + delta_e;
    return h;
  }
};

// Sum of absolute off-diagonal entries; sin(theta) for pure Bloch states.
inline double coherence_l1(const DensityMatrix& rho) {
  if (rho.dim() != 2) {
    throw std::invalid_argument("coherence_l1: expects a qubit state");
  }
  return std::abs(rho(0, 1)) + std::abs(rho(1, 0));
}

enum class CoherenceBranch {
  Lower,  // theta in [0, pi/2]
  Upper,  // theta in (pi/2, pi]
};

// Inverse of C = sin(theta) on the requested branch.
inline double theta_from_coherence(double c, CoherenceBranch branch) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("theta_from_coherence: coherence must lie in [0,1]");
  }
  const double t = std::asin(c);
  return branch == CoherenceBranch::Lower ? t : std::numbers::pi - t;
}

// Heat absorbed by the system between pure endpoints:
// Q = dE (cos theta_i - cos theta_f) / 2. Positive Q means absorption.
inline double heat(const BlochState& initial, const BlochState& final_state,
                   const EnergySpec& e) {
  return 0.5 * e.delta_e * (std::cos(initial.theta) - std::cos(final_state.theta));
}

}  // namespace microrev
