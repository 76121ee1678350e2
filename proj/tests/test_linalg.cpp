#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "microrev/channel.hpp"
#include "microrev/linalg.hpp"
#include "microrev/photonics.hpp"
#include "microrev/states.hpp"

using namespace microrev;

namespace {

ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = Complex{g(rng), g(rng)};
  return m;
}

}  // namespace

TEST_CASE("tensor of identities is the identity") {
  const ComplexMatrix i2 = ComplexMatrix::identity(2);
  CHECK((tensor(i2, i2) - ComplexMatrix::identity(4)).max_norm() == 0.0);
}

TEST_CASE("tensor places basis projectors at the composite index") {
  const ComplexMatrix g = projector(Ket::basis(2, 0));
  const ComplexMatrix e = projector(Ket::basis(2, 1));
  const ComplexMatrix m = tensor(g, e);  // |g,Ee><g,Ee| lives at index 1
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(m(i, j) == (i == 1 && j == 1 ? Complex{1.0, 0.0} : Complex{0.0, 0.0}));
}

TEST_CASE("mixed-product property against direct multiplication") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2);
    const ComplexMatrix b = random_matrix(rng, 2);
    const ComplexMatrix c = random_matrix(rng, 2);
    const ComplexMatrix d = random_matrix(rng, 2);
    CHECK((tensor(a, b) * tensor(c, d) - tensor(a * c, b * d)).max_norm() <= 1e-12 * 100);
  }
}

TEST_CASE("tensor bilinearity") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix a = random_matrix(rng, 2);
    const ComplexMatrix b = random_matrix(rng, 2);
    const ComplexMatrix c = random_matrix(rng, 2);
    CHECK((tensor(a + b, c) - (tensor(a, c) + tensor(b, c))).max_norm() <= tol::kAlgebra);
    CHECK((tensor(c, a + b) - (tensor(c, a) + tensor(c, b))).max_norm() <= tol::kAlgebra);
  }
}

TEST_CASE("partial trace of a product state factors") {
  const BlochState s(1.2, 0.4);
  const ComplexMatrix rho_a = projector(bloch_ket(s));
  const ComplexMatrix rho_b = thermal_state(ThermalReservoir(1.7)).matrix();
  const ComplexMatrix joint = tensor(rho_a, rho_b);
  CHECK((partial_trace(joint, Subsystem::First, 2, 2) - rho_a).max_norm() <= tol::kAlgebra);
  CHECK((partial_trace(joint, Subsystem::Second, 2, 2) - rho_b).max_norm() <= tol::kAlgebra);
}

TEST_CASE("partial trace of a maximally entangled state is maximally mixed") {
  const double r = 1.0 / std::numbers::sqrt2;
  const Ket bell(4, {Complex{r, 0.0}, 0.0, 0.0, Complex{r, 0.0}});
  const ComplexMatrix reduced = partial_trace(projector(bell), Subsystem::Second, 2, 2);
  CHECK((reduced - ComplexMatrix::identity(2) * Complex{0.5, 0.0}).max_norm() <=
        tol::kAlgebra);
}

TEST_CASE("partial trace of the evolved joint state matches the interferometer closed form") {
  // theta_i = pi/2, p = 3/4, w_e = 0.3 under the optical parameter mapping.
  const double w_e = 0.3;
  const ThermalReservoir r(std::log((1.0 - w_e) / w_e));
  CHECK(r.w_e() == doctest::Approx(w_e).epsilon(1e-12));
  const ChannelParams c(0.75);
  const BlochState initial(std::numbers::pi / 2.0, 0.0);
  const ComplexMatrix u = gadc_unitary(c);
  const ComplexMatrix joint = tensor(projector(bloch_ket(initial)), thermal_state(r).matrix());
  const ComplexMatrix evolved = u * joint * conjugate_transpose(u);
  const DensityMatrix closed =
      reduced_system(evolve_interferometer(param_map(initial, r, c)));
  CHECK((partial_trace(evolved, Subsystem::First, 2, 2) - closed.matrix()).max_norm() <=
        tol::kAlgebra);
}

TEST_CASE("partial trace preserves trace and hermiticity under unitaries") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix u = gadc_unitary(ChannelParams(u01(rng)));
    const ComplexMatrix joint = tensor(projector(bloch_ket(BlochState(
                                           u01(rng) * std::numbers::pi, u01(rng)))),
                                       thermal_state(ThermalReservoir(u01(rng) * 5)).matrix());
    const ComplexMatrix evolved = u * joint * conjugate_transpose(u);
    const ComplexMatrix red = partial_trace(evolved, Subsystem::First, 2, 2);
    CHECK(std::abs(red.trace() - Complex{1.0, 0.0}) <= tol::kPhysical);
    CHECK((red - conjugate_transpose(red)).max_norm() <= tol::kPhysical);
  }
}

TEST_CASE("partial trace rejects mismatched factor dimensions") {
  CHECK_THROWS_AS(partial_trace(ComplexMatrix::identity(4), Subsystem::First, 2, 3),
                  std::invalid_argument);
}

TEST_CASE("conjugate transpose basics") {
  const ComplexMatrix i4 = ComplexMatrix::identity(4);
  CHECK((conjugate_transpose(i4) - i4).max_norm() == 0.0);
  std::mt19937_64 rng(3);
  const ComplexMatrix a = random_matrix(rng, 4);
  const ComplexMatrix b = random_matrix(rng, 4);
  CHECK((conjugate_transpose(a * b) - conjugate_transpose(b) * conjugate_transpose(a))
            .max_norm() <= 1e-12 * 100);
  for (double p : {0.0, 0.5, 1.0}) {
    const ComplexMatrix u = gadc_unitary(ChannelParams(p));
    CHECK((conjugate_transpose(u) * u - i4).max_norm() <= 1e-14);
  }
}

TEST_CASE("expectation values") {
  const DensityMatrix rho = thermal_state(ThermalReservoir(2.0));
  CHECK(expectation(rho, ComplexMatrix::identity(2)).real() == doctest::Approx(1.0));
  ComplexMatrix h(2);
  h(1, 1) = 1.0;
  CHECK(std::abs(expectation(DensityMatrix(projector(Ket::basis(2, 0))), h)) <=
        tol::kAlgebra);
  CHECK(expectation(rho, h).real() ==
        doctest::Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-12));
  CHECK_THROWS_AS(expectation(ComplexMatrix::identity(2), ComplexMatrix::identity(4)),
                  std::invalid_argument);
}

TEST_CASE("projectors are idempotent") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const ComplexMatrix p = projector(
        bloch_ket(BlochState(u01(rng) * std::numbers::pi, (2 * u01(rng) - 1) * 3.0)));
    CHECK((p * p - p).max_norm() <= tol::kAlgebra);
  }
}

TEST_CASE("hermitian eigenvalues on known spectra") {
  ComplexMatrix x(2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const auto ev = hermitian_eigenvalues(x);
  CHECK(ev[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(ev[1] == doctest::Approx(1.0).epsilon(1e-12));

  ComplexMatrix y(2);
  y(0, 1) = Complex{0.0, -0.5};
  y(1, 0) = Complex{0.0, 0.5};
  const auto ev2 = hermitian_eigenvalues(y);
  CHECK(ev2[0] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(ev2[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("density matrix validation") {
  ComplexMatrix bad(2);
  bad(0, 0) = 1.5;
  bad(1, 1) = -0.5;
  CHECK_THROWS_AS(DensityMatrix{bad}, std::invalid_argument);

  ComplexMatrix non_hermitian(2);
  non_hermitian(0, 0) = 1.0;
  non_hermitian(0, 1) = 0.3;
  CHECK_THROWS_AS(DensityMatrix{non_hermitian}, std::invalid_argument);

  ComplexMatrix wrong_trace = ComplexMatrix::identity(2);
  CHECK_THROWS_AS(DensityMatrix{wrong_trace}, std::invalid_argument);
}

TEST_CASE("matrix construction rejects wrong entry counts") {
  CHECK_THROWS_AS(ComplexMatrix(2, std::vector<Complex>(3)), std::invalid_argument);
  CHECK_THROWS_AS(Ket(2, {Complex{1.0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(Ket(2, {Complex{1.0, 0.0}, Complex{1.0, 0.0}}), std::invalid_argument);
}

TEST_CASE("round trip: tensor then both partial traces recovers factors") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const ComplexMatrix a = projector(bloch_ket(BlochState(u01(rng) * std::numbers::pi, 0.0)));
    const ComplexMatrix b = thermal_state(ThermalReservoir(u01(rng) * 4)).matrix();
    const ComplexMatrix joint = tensor(a, b);
    CHECK((partial_trace(joint, Subsystem::First, 2, 2) - a).max_norm() <= tol::kAlgebra);
    CHECK((partial_trace(joint, Subsystem::Second, 2, 2) - b).max_norm() <= tol::kAlgebra);
  }
}
