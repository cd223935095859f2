#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dqp/gates.hpp"
#include "dqp/metrics.hpp"
#include "util.hpp"

using namespace dqp;
using testutil::random_density;
using testutil::random_pure;

TEST_CASE("trace distance endpoints") {
  Mat z0 = projector(gates::zero()), z1 = projector(gates::one());
  CHECK(trace_distance(z0, z0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(trace_distance(z0, z1) == doctest::Approx(1.0));
  // Pure states with overlap 1/2: D = sqrt(1 - 1/2).
  CHECK(trace_distance(z0, projector(gates::plus())) ==
        doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("fidelity endpoints") {
  Mat z0 = projector(gates::zero()), z1 = projector(gates::one());
  CHECK(fidelity(z0, z0) == doctest::Approx(1.0));
  CHECK(fidelity(z0, z1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(fidelity(z0, projector(gates::plus())) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("plain trace distance refuses mismatched traces") {
  Mat a = projector(gates::zero());
  Mat b = 0.5 * a;
  CHECK_THROWS_AS(trace_distance(a, b), std::invalid_argument);
  // Generalized form: D + 0.5 |tr a - tr b| = 0.25 + 0.25.
  CHECK(trace_distance(a, b, true) == doctest::Approx(0.5));
}

TEST_CASE("subnormalized orthogonal pair, all metrics by hand") {
  // a = 0.5 |0><0|, b = 0.5 |1><1|.
  Mat a = 0.5 * projector(gates::zero());
  Mat b = 0.5 * projector(gates::one());
  CHECK(trace_distance(a, b, true) == doctest::Approx(0.5));
  CHECK(fidelity(a, b) == doctest::Approx(0.0).epsilon(1e-12));
  // Fbar = 0 + sqrt(0.5 * 0.5); P = sqrt(1 - 1/4).
  CHECK(fidelity(a, b, true) == doctest::Approx(0.5));
  CHECK(purified_distance(a, b) == doctest::Approx(std::sqrt(3.0) / 2.0));
}

TEST_CASE("purified distance equals trace distance for normalized pure states") {
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    const int dim = 2 + static_cast<int>(rng.uniform_int(3));
    Vec x = random_pure(dim, rng), y = random_pure(dim, rng);
    Mat a = x * x.adjoint(), b = y * y.adjoint();
    const double d = trace_distance(a, b);
    const double p = purified_distance(a, b);
    CHECK(std::abs(p - d) < 1e-9);
    CHECK(std::abs(trace_distance(a, b, true) - d) < 1e-12);
  }
}

TEST_CASE("distance-fidelity sandwich on random pairs") {
  Rng rng(22);
  for (int i = 0; i < 300; ++i) {
    const int dim = 2 + static_cast<int>(rng.uniform_int(3));
    const double ta = (i % 3 == 0) ? 1.0 : 0.3 + 0.7 * rng.uniform();
    const double tb = (i % 3 == 0) ? 1.0 : 0.3 + 0.7 * rng.uniform();
    Mat a = random_density(dim, rng, ta);
    Mat b = random_density(dim, rng, tb);
    const double dbar = trace_distance(a, b, true);
    const double p = purified_distance(a, b);
    CHECK(dbar <= p + 1e-9);
    CHECK(p <= std::sqrt(2.0 * dbar) + 1e-9);
  }
}

TEST_CASE("fidelity is symmetric and unitary invariant") {
  Rng rng(23);
  Mat a = random_density(4, rng), b = random_density(4, rng);
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)));
  Mat u = kron(gates::H(), gates::X());
  CHECK(fidelity(u * a * u.adjoint(), u * b * u.adjoint()) ==
        doctest::Approx(fidelity(a, b)));
}

TEST_CASE("label-aware overloads align wire order") {
  Rng rng(24);
  Mat x = random_density(2, rng), y = random_density(2, rng);
  DensityOperator ab(Wires::qubits({"a", "b"}), kron(x, y));
  DensityOperator ba(Wires::qubits({"b", "a"}), kron(y, x));
  CHECK(trace_distance(ab, ba) < 1e-12);
  CHECK(fidelity(ab, ba) == doctest::Approx(1.0));
  CHECK(purified_distance(ab, ba) < 1e-6);
}
