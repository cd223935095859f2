#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dqp/engine.hpp"
#include "dqp/metrics.hpp"
#include "dqp/oneway.hpp"
#include "util.hpp"

using namespace dqp;

namespace {

// Client channel on one own qubit plus a two-qubit tau, producing two qubits.
KrausChannel client_channel(std::uint64_t seed) {
  auto ch = random_channel(8, 4, 2, seed);
  ch.in_wires = {{"a", 2}, {"t1", 2}, {"t2", 2}};
  ch.out_wires = {{"o1", 2}, {"o2", 2}};
  return ch;
}

DensityOperator random_tau(Rng& rng) {
  return DensityOperator(Wires::qubits({"t1", "t2"}), testutil::random_density(4, rng));
}

DensityOperator pure_on(const std::vector<std::string>& labels, const Vec& amp) {
  return DensityOperator::from_state(QuantumState(Wires::qubits(labels), amp));
}

}  // namespace

TEST_CASE("the client comb equals the forward-verbatim composite") {
  Rng rng(611);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto suite = oneway_suite(random_tau(rng), client_channel(seed));
    CHECK(message_signature(suite.alice) == message_signature(suite.ideal));
    CHECK(comb_distance(comb_choi(suite.alice), comb_choi(suite.ideal)) <= 1e-12);
  }
}

TEST_CASE("an honest run applies the channel to the joint state") {
  Rng rng(612);
  auto ch = client_channel(7);
  auto tau = random_tau(rng);
  auto suite = oneway_suite(tau, ch);

  auto psi = pure_on({"a", "ref"}, testutil::random_pure(4, rng));
  auto input = tensor(psi, tau);  // wires [a, ref, t1, t2]
  auto run = run_interaction(suite.alice, suite.bob, input, RunMode::exact);
  auto oracle = apply_channel(input, ch);
  CHECK(run.output.wires().labels() == std::vector<std::string>{"o1", "o2", "ref"});
  CHECK(max_abs_diff(run.output.mat(), oracle.mat()) < 1e-12);
}

TEST_CASE("a channel that drops tau returns the client state untouched") {
  Rng rng(613);
  KrausChannel drop;
  drop.in_wires = {{"a", 2}, {"t1", 2}, {"t2", 2}};
  drop.out_wires = {{"o", 2}};
  for (int j = 0; j < 4; ++j) drop.ops.push_back(kron(Mat::Identity(2, 2), z_bra(j, 4)));
  drop.validate();

  auto tau = random_tau(rng);
  auto suite = oneway_suite(tau, drop);
  auto psi = pure_on({"a", "ref"}, testutil::random_pure(4, rng));
  auto run = run_interaction(suite.alice, suite.bob, tensor(psi, tau), RunMode::exact);
  CHECK(run.output.wires().labels() == std::vector<std::string>{"o", "ref"});
  CHECK(max_abs_diff(run.output.mat(), psi.mat()) < 1e-12);
}

TEST_CASE("substituting tau adversarially cannot separate the two clients") {
  Rng rng(614);
  auto suite = oneway_suite(random_tau(rng), client_channel(19));

  // Sends half of an entangled pair plus a junk qubit, keeps the other half.
  auto adv = ProgramBuilder("bob")
                 .outputs({"keep"})
                 .prepare(OpPrepare::Kind::epr, {"keep", "s1"})
                 .prepare(OpPrepare::Kind::plus, {"s2"})
                 .send({"s1", "s2"})
                 .build();

  auto psi = pure_on({"a", "ref"}, testutil::random_pure(4, rng));
  auto real = run_interaction(suite.alice, adv, psi, RunMode::exact);
  auto ideal = run_interaction(suite.ideal, adv, psi, RunMode::exact);
  REQUIRE(real.output.wires().labels() == ideal.output.wires().labels());
  CHECK(max_abs_diff(real.output.mat(), ideal.output.mat()) < 1e-12);
}

TEST_CASE("tau wires must match the channel's trailing inputs") {
  Rng rng(615);
  auto ch = client_channel(23);
  CHECK_THROWS_AS(
      oneway_suite(DensityOperator(Wires::qubits({"x1", "x2"}),
                                   testutil::random_density(4, rng)),
                   ch),
      std::invalid_argument);
  CHECK_THROWS_AS(
      oneway_suite(DensityOperator(Wires::qubits({"a", "t1", "t2", "t3"}),
                                   testutil::random_density(16, rng)),
                   ch),
      std::invalid_argument);
}
