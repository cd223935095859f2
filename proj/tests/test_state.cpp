#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "dqp/gates.hpp"
#include "dqp/rng.hpp"
#include "dqp/state.hpp"

using namespace dqp;

namespace {

Vec random_pure(int dim, Rng& rng) {
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

}  // namespace

TEST_CASE("wire order is big-endian") {
  // |b0 b1> has flat index 2*b0 + b1.
  Wires w = Wires::qubits({"a", "b"});
  Vec v = basis_state(4, 0);  // |00>
  Vec out = apply_unitary_vec(gates::X(), v, w, {0});
  CHECK((out - basis_state(4, 2)).norm() < 1e-15);  // |10>
  out = apply_unitary_vec(gates::X(), v, w, {1});
  CHECK((out - basis_state(4, 1)).norm() < 1e-15);  // |01>
}

TEST_CASE("single-wire op in the middle matches a kron oracle") {
  Rng rng(101);
  Wires w = Wires::qubits({"a", "b", "c"});
  Vec v = random_pure(8, rng);
  Mat h = gates::H();
  Mat full = kron(kron(Mat::Identity(2, 2), h), Mat::Identity(2, 2));
  Vec got = apply_unitary_vec(h, v, w, {1});
  CHECK((got - full * v).norm() < 1e-14);
}

TEST_CASE("two-wire op on adjacent wires matches a kron oracle") {
  Rng rng(102);
  Wires w = Wires::qubits({"a", "b", "c"});
  Vec v = random_pure(8, rng);
  Mat full = kron(gates::CNOT(), Mat::Identity(2, 2));
  Vec got = apply_unitary_vec(gates::CNOT(), v, w, {0, 1});
  CHECK((got - full * v).norm() < 1e-14);
}

TEST_CASE("two-wire op with reversed target order swaps the op's indices") {
  Rng rng(103);
  Wires w = Wires::qubits({"a", "b"});
  Vec v = random_pure(4, rng);
  // CNOT with control b (position 1), target a (position 0).
  Vec got = apply_unitary_vec(gates::CNOT(), v, w, {1, 0});
  Mat full = Mat::Zero(4, 4);
  // |a b> -> a ^= b
  full(0, 0) = 1;  // 00 -> 00
  full(3, 1) = 1;  // 01 -> 11
  full(2, 2) = 1;  // 10 -> 10
  full(1, 3) = 1;  // 11 -> 01
  CHECK((got - full * v).norm() < 1e-14);
}

TEST_CASE("non-adjacent targets match a hand-built controlled op") {
  Rng rng(104);
  Wires w = Wires::qubits({"a", "b", "c"});
  Vec v = random_pure(8, rng);
  // CNOT control a (pos 0), target c (pos 2).
  Mat p0 = projector(gates::zero()), p1 = projector(gates::one());
  Mat full = kron(kron(p0, Mat::Identity(2, 2)), Mat::Identity(2, 2)) +
             kron(kron(p1, Mat::Identity(2, 2)), gates::X());
  Vec got = apply_unitary_vec(gates::CNOT(), v, w, {0, 2});
  CHECK((got - full * v).norm() < 1e-14);
}

TEST_CASE("density application agrees with the pure path") {
  Rng rng(105);
  Wires wv = Wires::qubits({"a", "b", "c"});
  Vec v = random_pure(8, rng);
  Mat rho = v * v.adjoint();
  Vec v2 = apply_unitary_vec(gates::CZ(), v, wv, {2, 0});
  Mat rho2 = apply_unitary_mat(gates::CZ(), rho, wv, {2, 0});
  CHECK(max_abs_diff(rho2, v2 * v2.adjoint()) < 1e-14);
}

TEST_CASE("projection bra removes the wire") {
  Wires w = Wires::qubits({"a", "b"});
  Vec epr = gates::epr();
  Vec got = apply_op_vec(z_bra(0), epr, w, {0}, {});
  REQUIRE(w.count() == 1);
  CHECK(w.at(0).label == "b");
  CHECK((got - gates::zero() / std::sqrt(2.0)).norm() < 1e-15);
}

TEST_CASE("isometry splices its output wires where the target was") {
  // |b> -> |bb> copy isometry.
  Mat iso = Mat::Zero(4, 2);
  iso(0, 0) = 1;
  iso(3, 1) = 1;
  Wires w = Wires::qubits({"a", "b", "c"});
  Vec v = kron(kron(gates::zero(), gates::plus()), gates::one());
  Vec got = apply_op_vec(iso, v, w, {1}, {{"b1", 2}, {"b2", 2}});
  CHECK(w.labels() == std::vector<std::string>{"a", "b1", "b2", "c"});
  Vec expect = kron(kron(gates::zero(), gates::epr()), gates::one());
  CHECK((got - expect).norm() < 1e-15);
}

TEST_CASE("appending wires with empty targets leaves old wires in place") {
  Wires w = Wires::qubits({"a"});
  Vec v = gates::plus();
  // 2x1 "create |0>" isometry from the trivial wire set.
  Mat create(2, 1);
  create(0, 0) = 1;
  create(1, 0) = 0;
  Vec got = apply_op_vec(create, v, w, {}, {{"fresh", 2}});
  CHECK(w.labels() == std::vector<std::string>{"a", "fresh"});
  CHECK((got - kron(gates::plus(), gates::zero())).norm() < 1e-15);
}

TEST_CASE("partial trace of a maximally entangled pair is maximally mixed") {
  Wires w = Wires::qubits({"a", "b"});
  Mat rho = projector(gates::epr());
  Mat red = partial_trace_mat(rho, w, {0});
  CHECK(w.labels() == std::vector<std::string>{"b"});
  CHECK(max_abs_diff(red, 0.5 * Mat::Identity(2, 2)) < 1e-15);
}

TEST_CASE("partial trace of a product leaves the kept factor") {
  Rng rng(106);
  Vec x = random_pure(2, rng), y = random_pure(4, rng);
  Wires w(std::vector<Wire>{{"x", 2}, {"y1", 2}, {"y2", 2}});
  Vec v = kron(x, y);
  Mat red = partial_trace_vec(v, w, {1, 2});
  CHECK(max_abs_diff(red, x * x.adjoint()) < 1e-14);
}

TEST_CASE("partial trace over vec and mat agree") {
  Rng rng(107);
  Vec v = random_pure(8, rng);
  Wires w1 = Wires::qubits({"a", "b", "c"});
  Wires w2 = w1;
  Mat red1 = partial_trace_vec(v, w1, {2});
  Mat red2 = partial_trace_mat(v * v.adjoint(), w2, {2});
  CHECK(max_abs_diff(red1, red2) < 1e-14);
  CHECK(w1 == w2);
}

TEST_CASE("permutation reorders amplitudes") {
  Wires w = Wires::qubits({"a", "b"});
  Vec v = basis_state(4, 1);  // |01>
  Vec got = permute_vec(v, w, {1, 0});
  CHECK(w.labels() == std::vector<std::string>{"b", "a"});
  CHECK((got - basis_state(4, 2)).norm() < 1e-15);  // |1>_b |0>_a
}

TEST_CASE("measure_xy branches are subnormalized and outcome-complete") {
  // |+_theta> measured at delta = theta: outcome 0 with certainty.
  Angle8 th(3);
  Wires w = Wires::qubits({"q", "r"});
  Vec v = kron(gates::plus_theta(th), gates::plus());
  DensityOperator rho(w, projector(v));
  auto [b0, b1] = measure_xy(rho, "q", th);
  CHECK(b0.trace() == doctest::Approx(1.0));
  CHECK(b1.trace() == doctest::Approx(0.0));
  CHECK(b0.wires().labels() == std::vector<std::string>{"r"});
  CHECK(max_abs_diff(b0.mat(), projector(gates::plus())) < 1e-14);

  // Orthogonal case: measured at delta = theta + pi, outcome 1 certain.
  auto [c0, c1] = measure_xy(rho, "q", th.plus_pi());
  CHECK(c0.trace() == doctest::Approx(0.0));
  CHECK(c1.trace() == doctest::Approx(1.0));

  // Unbiased case: |+> measured at pi/2.
  DensityOperator rho2(Wires::qubits({"q"}), projector(gates::plus()));
  auto [d0, d1] = measure_xy(rho2, "q", Angle8(2));
  CHECK(d0.trace() == doctest::Approx(0.5));
  CHECK(d1.trace() == doctest::Approx(0.5));
}

TEST_CASE("xy_bra matches its defining formula") {
  const double delta = 0.9;
  Mat b0 = xy_bra(0, delta), b1 = xy_bra(1, delta);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(std::abs(b0(0, 0) - s) < 1e-15);
  CHECK(std::abs(b0(0, 1) - s * std::exp(cplx(0, -delta))) < 1e-15);
  CHECK(std::abs(b1(0, 1) + s * std::exp(cplx(0, -delta))) < 1e-15);
  // The two bras are orthonormal rows.
  Mat m(2, 2);
  m.row(0) = b0.row(0);
  m.row(1) = b1.row(0);
  CHECK(max_abs_diff(m * m.adjoint(), Mat::Identity(2, 2)) < 1e-15);
}

TEST_CASE("QuantumState validates normalization") {
  Wires w = Wires::qubits({"a"});
  CHECK_THROWS_AS(QuantumState(w, 2.0 * gates::zero()), std::invalid_argument);
  CHECK_NOTHROW(QuantumState(w, gates::plus()));
}

TEST_CASE("DensityOperator validation") {
  Wires w = Wires::qubits({"a"});
  Mat not_herm(2, 2);
  not_herm << 0, 1, 0, 0;
  CHECK_THROWS_AS(DensityOperator(w, not_herm), std::invalid_argument);

  Mat neg = gates::Z();  // eigenvalue -1
  CHECK_THROWS_AS(DensityOperator(w, neg), std::invalid_argument);

  Mat big = 2.0 * Mat::Identity(2, 2);
  CHECK_THROWS_AS(DensityOperator(w, big), std::invalid_argument);

  // Subnormalized is fine; a tiny negative eigenvalue is clipped silently.
  CHECK_NOTHROW(DensityOperator(w, 0.25 * Mat::Identity(2, 2)));
  Mat tiny = projector(gates::zero()) * 0.5 - 5e-11 * Mat::Identity(2, 2);
  CHECK_NOTHROW(DensityOperator(w, tiny));
}

TEST_CASE("marginal reorders as requested") {
  Mat a = projector(gates::zero()), b = projector(gates::plus());
  DensityOperator rho(Wires::qubits({"a", "b"}), kron(a, b));
  DensityOperator m = rho.marginal({"b", "a"});
  CHECK(m.wires().labels() == std::vector<std::string>{"b", "a"});
  CHECK(max_abs_diff(m.mat(), kron(b, a)) < 1e-14);
}

TEST_CASE("tensor concatenates wires") {
  DensityOperator a(Wires::qubits({"x"}), projector(gates::zero()));
  DensityOperator b(Wires::qubits({"y"}), projector(gates::one()));
  DensityOperator t = tensor(a, b);
  CHECK(t.wires().labels() == std::vector<std::string>{"x", "y"});
  CHECK(max_abs_diff(t.mat(), projector(kron(gates::zero(), gates::one()))) < 1e-15);
}

TEST_CASE("duplicate wire labels are rejected") {
  CHECK_THROWS_AS(Wires::qubits({"a", "a"}), std::invalid_argument);
  Wires w = Wires::qubits({"a", "b"});
  CHECK_THROWS_AS(w.replaced({0}, {{"b", 2}}), std::invalid_argument);
}
