#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dqp/engine.hpp"
#include "dqp/metrics.hpp"
#include "dqp/qotp.hpp"
#include "util.hpp"

using namespace dqp;

namespace {

PartyProgram echo_adversary() {
  return ProgramBuilder("eve").recv({"w"}).send({"w"}).build();
}

// Tampers with the intercepted qubit via a seeded channel that may entangle
// it with a private qubit Eve keeps.
PartyProgram noisy_adversary(std::uint64_t seed) {
  auto ch = random_channel(4, 4, 2, seed);
  ch.in_wires = {{"w", 2}, {"er", 2}};
  ch.out_wires = {{"w", 2}, {"er", 2}};
  return ProgramBuilder("eve")
      .outputs({"er"})
      .prepare(OpPrepare::Kind::zero, {"er"})
      .recv({"w"})
      .kraus(ch)
      .send({"w"})
      .build();
}

DensityOperator pure_on(const std::vector<std::string>& labels, const Vec& amp) {
  return DensityOperator::from_state(QuantumState(Wires::qubits(labels), amp));
}

Mat comb_marginal_of_first_send(const PartyProgram& prog) {
  CombChoi c = comb_choi(prog);
  REQUIRE(c.reg_ports.empty());
  Mat acc = Mat::Zero(c.wire_dim(), c.wire_dim());
  for (const auto& [key, block] : c.blocks) acc += block;
  Wires ws(c.wire_ports);
  std::vector<int> drop;
  for (int i = 0; i < static_cast<int>(c.wire_ports.size()); ++i)
    if (c.wire_ports[i].label != "p_r0_0") drop.push_back(i);
  return partial_trace_mat(acc, ws, drop);
}

}  // namespace

TEST_CASE("both implementations present identical interface behaviour") {
  auto suite = qotp_suite();
  CHECK(message_signature(suite.real) == message_signature(suite.ideal));
  CHECK(comb_distance(comb_choi(suite.real), comb_choi(suite.ideal)) <= 1e-12);
}

TEST_CASE("an honest channel returns the message intact") {
  Rng rng(81);
  auto suite = qotp_suite();
  for (int trial = 0; trial < 3; ++trial) {
    auto in = pure_on({"in", "ref"}, testutil::random_pure(4, rng));
    for (const auto* prog : {&suite.real, &suite.ideal}) {
      auto run = run_interaction(*prog, echo_adversary(), in, RunMode::exact);
      CHECK(run.output.wires().labels() == std::vector<std::string>{"out", "ref"});
      CHECK(max_abs_diff(run.output.mat(), in.mat()) < 1e-12);
    }
  }
}

TEST_CASE("any tampering affects both implementations identically") {
  Rng rng(82);
  auto suite = qotp_suite();
  for (std::uint64_t seed : {101u, 102u, 103u, 104u, 105u}) {
    auto in = pure_on({"in", "ref"}, testutil::random_pure(4, rng));
    auto real = run_interaction(suite.real, noisy_adversary(seed), in, RunMode::exact);
    auto ideal = run_interaction(suite.ideal, noisy_adversary(seed), in, RunMode::exact);
    REQUIRE(real.output.wires().labels() == ideal.output.wires().labels());
    CHECK(max_abs_diff(real.output.mat(), ideal.output.mat()) < 1e-12);
  }
}

TEST_CASE("the qubit on the wire is maximally mixed") {
  auto suite = qotp_suite();
  Mat half = Mat::Identity(2, 2) * 0.5;
  CHECK((comb_marginal_of_first_send(suite.real) - half).norm() <= 1e-12);
  CHECK((comb_marginal_of_first_send(suite.ideal) - half).norm() <= 1e-12);
}
