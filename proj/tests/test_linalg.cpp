#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dqp/gates.hpp"
#include "dqp/linalg.hpp"

using namespace dqp;

TEST_CASE("kron of matrices matches hand expansion") {
  Mat a(2, 2), b(2, 2);
  a << 1, 2, 3, 4;
  b << 0, 1, 1, 0;
  Mat k = kron(a, b);
  REQUIRE(k.rows() == 4);
  CHECK(k(0, 1) == cplx(1, 0));
  CHECK(k(0, 0) == cplx(0, 0));
  CHECK(k(1, 0) == cplx(1, 0));
  CHECK(k(2, 1) == cplx(3, 0));
  CHECK(k(3, 0) == cplx(3, 0));
  CHECK(k(2, 3) == cplx(4, 0));
  CHECK(k(3, 2) == cplx(4, 0));
  CHECK(k(2, 2) == cplx(0, 0));
}

TEST_CASE("kron of vectors stacks amplitudes") {
  Vec v = kron(gates::zero(), gates::one());  // |01>
  REQUIRE(v.size() == 4);
  CHECK(std::abs(v(1) - 1.0) < 1e-15);
  CHECK(std::abs(v(0)) < 1e-15);
}

TEST_CASE("gate matrices are unitary") {
  for (const Mat& u : {gates::X(), gates::Y(), gates::Z(), gates::H(),
                       gates::CZ(), gates::CNOT(), gates::z_phase(0.7)}) {
    Mat id = Mat::Identity(u.rows(), u.cols());
    CHECK(max_abs_diff(u * u.adjoint(), id) < 1e-14);
  }
}

TEST_CASE("z_phase fixes |0> and phases |1>") {
  const double th = 1.234;
  Vec v = gates::z_phase(th) * gates::plus_theta(0.0);
  Vec expect = gates::plus_theta(th);
  CHECK((v - expect).norm() < 1e-15);
}

TEST_CASE("CZ is symmetric and phases only |11>") {
  Mat cz = gates::CZ();
  Vec v11 = kron(gates::one(), gates::one());
  CHECK((cz * v11 + v11).norm() < 1e-15);
  for (int i = 0; i < 3; ++i) {
    Vec e = basis_state(4, i);
    CHECK((cz * e - e).norm() < 1e-15);
  }
}

TEST_CASE("hermitian eigenvalues of Z") {
  auto evals = hermitian_eigenvalues(gates::Z());
  CHECK(evals(0) == doctest::Approx(-1.0));
  CHECK(evals(1) == doctest::Approx(1.0));
}

TEST_CASE("psd_sqrt squares back") {
  Mat rho = 0.25 * Mat::Identity(2, 2) + 0.5 * projector(gates::plus());
  Mat r = psd_sqrt(rho);
  CHECK(max_abs_diff(r * r, rho) < 1e-12);
}

TEST_CASE("psd_sqrt clips tiny negatives and rejects real ones") {
  Mat almost = -5e-11 * Mat::Identity(2, 2);
  CHECK(psd_sqrt(almost).norm() == doctest::Approx(0.0));
  Mat bad = -1e-6 * Mat::Identity(2, 2);
  CHECK_THROWS_AS(psd_sqrt(bad), std::domain_error);
}

TEST_CASE("trace norm of a hermitian difference") {
  // |0><0| - |1><1| has eigenvalues {1, -1}.
  Mat m = projector(gates::zero()) - projector(gates::one());
  CHECK(trace_norm_hermitian(m) == doctest::Approx(2.0));
}

TEST_CASE("epr state is the usual maximally entangled pair") {
  Vec e = gates::epr();
  CHECK(std::abs(e(0) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(e(3) - 1.0 / std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(e(1)) + std::abs(e(2)) < 1e-15);
  Mat cnot = gates::CNOT();
  Vec built = cnot * kron(gates::plus(), gates::zero());
  CHECK((built - e).norm() < 1e-15);
}
