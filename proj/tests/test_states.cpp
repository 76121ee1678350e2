#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "microrev/linalg.hpp"
#include "microrev/states.hpp"

using namespace microrev;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("bloch_ket at the poles and the equator") {
  const Ket g = bloch_ket(BlochState(0.0, 0.0));
  CHECK(g[0] == Complex{1.0, 0.0});
  CHECK(g[1] == Complex{0.0, 0.0});

  const Ket e = bloch_ket(BlochState(kPi, 1.3));
  CHECK(std::abs(e[0]) <= 1e-12);
  CHECK(std::abs(std::abs(e[1]) - 1.0) <= 1e-12);

  const Ket d = bloch_ket(BlochState(kPi / 2.0, 0.0));
  CHECK(d[0].real() == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-14));
  CHECK(d[1].real() == doctest::Approx(1.0 / std::numbers::sqrt2).epsilon(1e-14));
  CHECK(d[1].imag() == 0.0);
}

TEST_CASE("bloch_ket is normalized everywhere") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Ket k = bloch_ket(BlochState(u01(rng) * kPi, (2 * u01(rng) - 1) * kPi));
    CHECK(std::abs(std::norm(k[0]) + std::norm(k[1]) - 1.0) <= 1e-12);
  }
}

TEST_CASE("state validation") {
  CHECK_THROWS_AS(BlochState(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(BlochState(kPi + 0.1, 0.0), std::invalid_argument);
  CHECK(BlochState(1.0, 3.0 * kPi / 2.0).phi == doctest::Approx(-kPi / 2.0));
}

TEST_CASE("time reversal conjugates the azimuthal phase") {
  CHECK(time_reverse(BlochState(1.1, 0.0)).phi == 0.0);
  const BlochState r = time_reverse(BlochState(kPi / 2.0, kPi / 3.0));
  CHECK(r.theta == kPi / 2.0);
  CHECK(r.phi == doctest::Approx(-kPi / 3.0).epsilon(1e-15));
}

TEST_CASE("time reversal is an exact involution") {
  std::mt19937_64 rng(19);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const BlochState s(u01(rng) * kPi, (2 * u01(rng) - 1) * kPi);
    const BlochState rr = time_reverse(time_reverse(s));
    CHECK(rr.theta == s.theta);
    CHECK(rr.phi == s.phi);
  }
}

TEST_CASE("thermal state weights") {
  const DensityMatrix cold = thermal_state(ThermalReservoir(1e6));
  CHECK(cold(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(cold(1, 1)) <= 1e-12);
  CHECK(ThermalReservoir(1e6).capped());

  const DensityMatrix hot = thermal_state(ThermalReservoir(0.0));
  CHECK(hot(0, 0).real() == 0.5);
  CHECK(hot(1, 1).real() == 0.5);

  const ThermalReservoir r(2.0);
  CHECK_FALSE(r.capped());
  CHECK(r.w_e() == doctest::Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-14));
  CHECK(r.w_g() + r.w_e() == 1.0);
  CHECK_THROWS_AS(ThermalReservoir(-1.0), std::invalid_argument);
}

TEST_CASE("excited population decreases with beta") {
  double prev = ThermalReservoir(0.0).w_e();
  for (int i = 1; i <= 100; ++i) {
    const double w = ThermalReservoir(0.12 * i).w_e();
    CHECK(w < prev);
    CHECK(w <= 0.5);
    prev = w;
  }
}

TEST_CASE("thermal state commutes with the Hamiltonian") {
  const EnergySpec e(1.7, 0.3);
  const ComplexMatrix h = e.hamiltonian();
  const ComplexMatrix rho = thermal_state(ThermalReservoir(1.4)).matrix();
  CHECK((rho * h - h * rho).max_norm() <= 1e-14);
}

TEST_CASE("l1 coherence") {
  CHECK(coherence_l1(thermal_state(ThermalReservoir(1.0))) == 0.0);
  ComplexMatrix mixed = ComplexMatrix::identity(2) * Complex{0.5, 0.0};
  CHECK(coherence_l1(DensityMatrix(mixed)) == 0.0);
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    const BlochState s(u01(rng) * kPi, (2 * u01(rng) - 1) * kPi);
    CHECK(coherence_l1(DensityMatrix(projector(bloch_ket(s)))) ==
          doctest::Approx(std::sin(s.theta)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(coherence_l1(DensityMatrix(tensor(
                      projector(Ket::basis(2, 0)), projector(Ket::basis(2, 0))))),
                  std::invalid_argument);
}

TEST_CASE("theta from coherence branch mapping") {
  CHECK(theta_from_coherence(0.0, CoherenceBranch::Lower) == 0.0);
  CHECK(theta_from_coherence(0.0, CoherenceBranch::Upper) == doctest::Approx(kPi));
  CHECK(theta_from_coherence(1.0, CoherenceBranch::Lower) == doctest::Approx(kPi / 2.0));
  CHECK(theta_from_coherence(1.0, CoherenceBranch::Upper) == doctest::Approx(kPi / 2.0));
  CHECK(std::sin(theta_from_coherence(0.87, CoherenceBranch::Lower)) ==
        doctest::Approx(0.87).epsilon(1e-14));
  CHECK_THROWS_AS(theta_from_coherence(1.1, CoherenceBranch::Lower), std::invalid_argument);
  CHECK_THROWS_AS(theta_from_coherence(-0.1, CoherenceBranch::Upper), std::invalid_argument);

  // Right inverse of C = sin(theta) on each branch, and round trip through
  // the state coherence.
  for (int i = 0; i <= 100; ++i) {
    const double c = static_cast<double>(i) / 100.0;
    for (CoherenceBranch b : {CoherenceBranch::Lower, CoherenceBranch::Upper}) {
      const double theta = theta_from_coherence(c, b);
      CHECK(std::sin(theta) == doctest::Approx(c).epsilon(1e-12));
      CHECK(coherence_l1(DensityMatrix(projector(bloch_ket(BlochState(theta, 0.0))))) ==
            doctest::Approx(c).epsilon(1e-12));
    }
  }
}

TEST_CASE("heat between endpoint states") {
  const EnergySpec e;
  CHECK(heat(BlochState(0.0, 0.0), BlochState(kPi, 0.0), e) == doctest::Approx(1.0));
  CHECK(heat(BlochState(0.7, 0.2), BlochState(0.7, 1.9), e) == 0.0);
  CHECK(heat(BlochState(kPi / 2.0, 0.0), BlochState(kPi, 0.0), e) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK_THROWS_AS(EnergySpec(0.0), std::invalid_argument);
  CHECK_THROWS_AS(EnergySpec(-1.0), std::invalid_argument);
}

TEST_CASE("heat equals the expectation-based form") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const EnergySpec e(2.5, 0.4);
  const ComplexMatrix h = e.hamiltonian();
  for (int trial = 0; trial < 300; ++trial) {
    const BlochState a(u01(rng) * kPi, (2 * u01(rng) - 1) * kPi);
    const BlochState b(u01(rng) * kPi, (2 * u01(rng) - 1) * kPi);
    const double oracle =
        (expectation(projector(bloch_ket(b)), h) - expectation(projector(bloch_ket(a)), h))
            .real();
    CHECK(heat(a, b, e) == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(heat(a, b, e) == -heat(b, a, e));
  }
}
