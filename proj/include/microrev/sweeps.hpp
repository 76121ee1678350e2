#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "microrev/channel.hpp"
#include "microrev/states.hpp"

// Plot-ready sweep data: deviation-factor maps over the coherence
// plane, curves over temperature for fixed transition pairs, diagonal cuts
// and extremum location by grid scan plus local refinement.

namespace microrev {

// Branch assignment of the endpoint polar angles along coherence sweeps.
// Release: theta_i in [pi/2, pi], theta_f in [0, pi/2] (Q < 0).
// Absorb: the mirror assignment (Q > 0).
enum class Regime { HeatRelease, HeatAbsorb };

inline BlochState initial_state_for(double c_i, Regime regime, double phi_i) {
  const CoherenceBranch branch = regime == Regime::HeatRelease ? CoherenceBranch::Upper
                                                               : CoherenceBranch::Lower;
  return BlochState(theta_from_coherence(c_i, branch), phi_i);
}

inline BlochState final_state_for(double c_f, Regime regime, double phi_f) {
  const CoherenceBranch branch = regime == Regime::HeatRelease ? CoherenceBranch::Lower
                                                               : CoherenceBranch::Upper;
  return BlochState(theta_from_coherence(c_f, branch), phi_f);
}

struct SweepGrid {
  std::size_t n_i = 201;
  std::size_t n_f = 201;
  double beta_delta_e = 2.0;
  double p = 0.5;
  double phi_i = 0.0;
  double phi_f = 0.0;

  void validate() const {
    if (n_i < 2 || n_f < 2) {
      throw std::invalid_argument("SweepGrid: need at least 2 points per axis");
    }
  }
};

struct MapCell {
  double c_i;
  double c_f;
  double theta_i;
  double theta_f;
  double p_forward;
  double p_backward;
  double ratio;
  double q_over_de;
  double gamma;
  bool diverged;
};

// Row-major table over uniform coherence grids including both endpoints.
inline std::vector<MapCell> gamma_map(const SweepGrid& g, Regime regime) {
  g.validate();
  const ThermalReservoir reservoir(g.beta_delta_e);
  const ChannelParams channel(g.p);
  const EnergySpec energy;
  std::vector<MapCell> table;
  table.reserve(g.n_i * g.n_f);
  for (std::size_t i = 0; i < g.n_i; ++i) {
    const double c_i = static_cast<double>(i) / static_cast<double>(g.n_i - 1);
    const BlochState initial = initial_state_for(c_i, regime, g.phi_i);
    for (std::size_t j = 0; j < g.n_f; ++j) {
      const double c_f = static_cast<double>(j) / static_cast<double>(g.n_f - 1);
      const BlochState final_state = final_state_for(c_f, regime, g.phi_f);
      const TransitionReport rep =
          deviation_factor(initial, final_state, channel, reservoir, energy);
      table.push_back({c_i, c_f, initial.theta, final_state.theta, rep.p_forward,
                       rep.p_backward, rep.ratio, rep.q_heat / energy.delta_e,
                       rep.deviation, rep.diverged});
    }
  }
  return table;
}

enum class ExtremumKind { Min, Max };

struct ExtremumResult {
  double c_i_star;
  double c_f_star;
  double gamma_star;
  ExtremumKind kind;
  // Central finite-difference gradient magnitude at the reported point.
  double refinement_residual;
};

namespace detail {

inline double gamma_at(double c_i, double c_f, Regime regime, const ChannelParams& channel,
                       const ThermalReservoir& reservoir, const EnergySpec& energy) {
  const TransitionReport rep = deviation_factor(initial_state_for(c_i, regime, 0.0),
                                                final_state_for(c_f, regime, 0.0), channel,
                                                reservoir, energy);
  return rep.deviation;
}

}  // namespace detail

// Coarse 201x201 scan over [0,1]^2 followed by iterative local grid
// refinement (shrink factor 10) around the incumbent. Release regimes
// carry a minimum, absorb regimes a maximum.
inline ExtremumResult find_extremum(double beta_delta_e, double p, Regime regime) {
  const ThermalReservoir reservoir(beta_delta_e);
  const ChannelParams channel(p);
  const EnergySpec energy;
  const ExtremumKind kind =
      regime == Regime::HeatRelease ? ExtremumKind::Min : ExtremumKind::Max;
  const auto better = [kind](double candidate, double incumbent) {
    return kind == ExtremumKind::Min ? candidate < incumbent : candidate > incumbent;
  };

  double best_ci = 0.0, best_cf = 0.0;
  double best = detail::gamma_at(0.0, 0.0, regime, channel, reservoir, energy);
  const auto scan = [&](double lo_i, double hi_i, double lo_f, double hi_f, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      const double ci = lo_i + (hi_i - lo_i) * static_cast<double>(i) / static_cast<double>(n - 1);
      for (std::size_t j = 0; j < n; ++j) {
        const double cf =
            lo_f + (hi_f - lo_f) * static_cast<double>(j) / static_cast<double>(n - 1);
        const double g = detail::gamma_at(ci, cf, regime, channel, reservoir, energy);
        if (std::isfinite(g) && better(g, best)) {
          best = g;
          best_ci = ci;
          best_cf = cf;
        }
      }
    }
  };

  scan(0.0, 1.0, 0.0, 1.0, 201);
  double span = 1.0 / 200.0;
  for (int round = 0; round < 6; ++round) {
    const double lo_i = std::max(0.0, best_ci - span);
    const double hi_i = std::min(1.0, best_ci + span);
    const double lo_f = std::max(0.0, best_cf - span);
    const double hi_f = std::min(1.0, best_cf + span);
    scan(lo_i, hi_i, lo_f, hi_f, 21);
    span /= 10.0;
  }

  const double h = 1e-7;
  double residual = 0.0;
  if (best_ci > h && best_ci < 1.0 - h && best_cf > h && best_cf < 1.0 - h) {
    const double gi =
        (detail::gamma_at(best_ci + h, best_cf, regime, channel, reservoir, energy) -
         detail::gamma_at(best_ci - h, best_cf, regime, channel, reservoir, energy)) /
        (2.0 * h);
    const double gf =
        (detail::gamma_at(best_ci, best_cf + h, regime, channel, reservoir, energy) -
         detail::gamma_at(best_ci, best_cf - h, regime, channel, reservoir, energy)) /
        (2.0 * h);
    residual = std::hypot(gi, gf);
  }
  return {best_ci, best_cf, best, kind, residual};
}

struct CurvePoint {
  double beta_delta_e;
  double p_forward;
  double p_backward;
  double ratio;
  double gamma;
  bool diverged;
};

// Deviation factor along a temperature range for a fixed transition pair.
inline std::vector<CurvePoint> gamma_curve(const BlochState& initial,
                                           const BlochState& final_state, double beta_lo,
                                           double beta_hi, std::size_t n_points, double p) {
  if (n_points < 2) {
    throw std::invalid_argument("gamma_curve: need at least 2 points");
  }
  const ChannelParams channel(p);
  const EnergySpec energy;
  std::vector<CurvePoint> curve;
  curve.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double beta =
        beta_lo + (beta_hi - beta_lo) * static_cast<double>(k) / static_cast<double>(n_points - 1);
    const ThermalReservoir reservoir(beta);
    const TransitionReport rep =
        deviation_factor(initial, final_state, channel, reservoir, energy);
    curve.push_back(
        {beta, rep.p_forward, rep.p_backward, rep.ratio, rep.deviation, rep.diverged});
  }
  return curve;
}

struct CutPoint {
  double c;
  double gamma;
  bool diverged;
};

// Diagonal cut C_i = C_f = C through the map of the given regime.
inline std::vector<CutPoint> diagonal_cut(double beta_delta_e, double p, Regime regime,
                                          std::size_t n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("diagonal_cut: need at least 2 points");
  }
  const ThermalReservoir reservoir(beta_delta_e);
  const ChannelParams channel(p);
  const EnergySpec energy;
  std::vector<CutPoint> cut;
  cut.reserve(n_points);
  for (std::size_t k = 0; k < n_points; ++k) {
    const double c = static_cast<double>(k) / static_cast<double>(n_points - 1);
    const TransitionReport rep =
        deviation_factor(initial_state_for(c, regime, 0.0), final_state_for(c, regime, 0.0),
                         channel, reservoir, energy);
    cut.push_back({c, rep.deviation, rep.diverged});
  }
  return cut;
}

}  // namespace microrev
