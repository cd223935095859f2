#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dqp/engine.hpp"
#include "dqp/metrics.hpp"
#include "dqp/resources.hpp"
#include "util.hpp"

using namespace dqp;

namespace {

// A party that only consumes the announced leak value.
PartyProgram leak_sink() {
  return ProgramBuilder("bob")
      .recv_classical("lk", kLeakDim)
      .forget({"lk"})
      .build();
}

DensityOperator pure_on(const std::vector<std::string>& labels, const Vec& amp) {
  return DensityOperator::from_state(QuantumState(Wires::qubits(labels), amp));
}

KrausChannel qubit_unitary_channel(const std::string& label, std::uint64_t seed) {
  return random_channel(2, 2, 1, seed).with_labels({label}, {label});
}

}  // namespace

TEST_CASE("honest configuration applies the programmed channel verbatim") {
  Rng rng(510);
  auto comp = random_channel(4, 4, 3, 11).with_labels({"a"}, {"o"});

  auto res_prog = ideal_resource(ResourceVariant::blind, comp, {2, 3, true});
  auto empty = ProgramBuilder("bob").build();

  for (int trial = 0; trial < 4; ++trial) {
    Mat rho = testutil::random_density(4, rng);
    DensityOperator in(Wires(std::vector<Wire>{{"a", 4}}), rho);
    auto run = run_interaction(res_prog, empty, in, RunMode::exact);
    auto oracle = apply_channel(in, comp);
    CHECK(run.output.wires().labels() == std::vector<std::string>{"o"});
    CHECK(max_abs_diff(run.output.mat(), oracle.mat()) < 1e-12);
    CHECK(run.transcript.rounds.empty());
  }
}

TEST_CASE("honest configuration acts locally on half of an entangled input") {
  Rng rng(511);
  auto comp = qubit_unitary_channel("a", 21);
  auto res_prog = ideal_resource(ResourceVariant::blind, comp, {1, 1, true});
  auto empty = ProgramBuilder("bob").build();

  Vec amp = testutil::random_pure(4, rng);
  auto in = pure_on({"a", "ref"}, amp);
  auto run = run_interaction(res_prog, empty, in, RunMode::exact);
  auto oracle = apply_channel(in, comp);
  CHECK(run.output.wires().labels() == std::vector<std::string>{"a", "ref"});
  CHECK(max_abs_diff(run.output.mat(), oracle.mat()) < 1e-12);
}

TEST_CASE("active cheating interface hands the state to the described map") {
  Rng rng(512);
  auto comp = qubit_unitary_channel("a", 33);

  SUBCASE("constant map erases the input") {
    KrausChannel constant;
    constant.in_wires = {{"a", 2}};
    constant.out_wires = {{"w", 2}};
    constant.ops = {z_bra(0).adjoint() * z_bra(0), z_bra(0).adjoint() * z_bra(1)};
    constant.validate();

    auto res_prog = ideal_resource(ResourceVariant::blind, comp, {1, 1, true},
                                   {1, constant});
    for (int trial = 0; trial < 3; ++trial) {
      auto in = pure_on({"a"}, testutil::random_pure(2, rng));
      auto run = run_interaction(res_prog, leak_sink(), in, RunMode::exact);
      Mat zero = Mat::Zero(2, 2);
      zero(0, 0) = 1.0;
      CHECK(run.output.wires().labels() == std::vector<std::string>{"w"});
      CHECK(max_abs_diff(run.output.mat(), zero) < 1e-12);
    }
  }

  SUBCASE("wires from the counterparty are forwarded into the map") {
    auto cheat = KrausChannel::identity({{"a", 2}, {"f", 2}});
    auto res_prog = ideal_resource(ResourceVariant::blind, comp, {1, 1, true},
                                   {1, cheat});
    auto bob = ProgramBuilder("bob")
                   .recv_classical("lk", kLeakDim)
                   .forget({"lk"})
                   .prepare(OpPrepare::Kind::plus, {"bf"})
                   .send({"bf"})
                   .build();

    Vec amp = testutil::random_pure(4, rng);
    auto in = pure_on({"a", "ref"}, amp);
    auto run = run_interaction(res_prog, bob, in, RunMode::exact);

    Mat plus = Mat::Constant(2, 2, 0.5);
    auto expected = tensor(in, DensityOperator(Wires::qubits({"f"}), plus))
                        .permuted({"a", "f", "ref"});
    CHECK(run.output.wires().labels() == std::vector<std::string>{"a", "f", "ref"});
    CHECK(max_abs_diff(run.output.mat(), expected.mat()) < 1e-12);
  }
}

TEST_CASE("verifiable variant: clear flag and exact result when not aborted") {
  Rng rng(513);
  auto comp = qubit_unitary_channel("a", 47);
  auto honest = ideal_resource(ResourceVariant::blind_verifiable, comp, {1, 1, true});
  auto empty = ProgramBuilder("bob").build();

  Vec amp = testutil::random_pure(4, rng);
  auto in = pure_on({"a", "ref"}, amp);
  auto run = run_interaction(honest, empty, in, RunMode::exact);

  Mat flag0 = Mat::Zero(2, 2);
  flag0(0, 0) = 1.0;
  auto expected = tensor(DensityOperator(Wires::qubits({kErrFlagWire}), flag0),
                         apply_channel(in, comp));
  CHECK(run.output.wires().labels() ==
        std::vector<std::string>{kErrFlagWire, "a", "ref"});
  CHECK(max_abs_diff(run.output.mat(), expected.mat()) < 1e-12);
  CHECK(run.transcript.rounds.empty());
}

TEST_CASE("verifiable variant: abort yields the flagged blank state, orthogonal to any honest output") {
  Rng rng(514);
  auto comp = qubit_unitary_channel("a", 47);
  auto prog = ideal_resource(ResourceVariant::blind_verifiable, comp, {1, 1, true}, {1, {}});

  auto chooser = [](int c) {
    return ProgramBuilder("bob")
        .recv_classical("lk", kLeakDim)
        .forget({"lk"})
        .compute("c", 2, {}, [c](const RegArgs&) { return c; })
        .send_classical("c", 2)
        .forget({"c"})
        .build();
  };

  auto in = pure_on({"a"}, testutil::random_pure(2, rng));
  auto aborted = run_interaction(prog, chooser(1), in, RunMode::exact);
  Mat err = Mat::Zero(4, 4);
  err(2, 2) = 1.0;  // flag |1>, payload |0>
  CHECK(max_abs_diff(aborted.output.mat(), err) < 1e-12);

  auto passed = run_interaction(prog, chooser(0), in, RunMode::exact);
  auto honest = run_interaction(
      ideal_resource(ResourceVariant::blind_verifiable, comp, {1, 1, true}),
      ProgramBuilder("bob").build(), in, RunMode::exact);
  CHECK(max_abs_diff(passed.output.mat(), honest.output.mat()) < 1e-12);

  // Orthogonality of the error state to every non-aborted output.
  CHECK(std::abs((aborted.output.mat() * passed.output.mat()).trace()) < 1e-12);
}

TEST_CASE("announced leak carries exactly the declared grid data") {
  auto comp = qubit_unitary_channel("a", 5);
  LeakInfo leak{3, 7, false};
  auto cheat = KrausChannel::identity({{"a", 2}});
  auto prog = ideal_resource(ResourceVariant::blind, comp, leak, {1, cheat});

  Rng rng(515);
  auto in = pure_on({"a"}, testutil::random_pure(2, rng));
  auto run = run_interaction(prog, leak_sink(), in, RunMode::sample, 99);
  REQUIRE(run.transcript.rounds.size() == 1);
  CHECK(run.transcript.rounds[0].dir == "a->b");
  CHECK(run.transcript.rounds[0].kind == "classical");
  CHECK(run.transcript.rounds[0].dim == kLeakDim);
  REQUIRE(run.transcript.rounds[0].value.has_value());
  CHECK(*run.transcript.rounds[0].value == leak.encoded());

  // Distinct parameters encode distinctly and in range.
  CHECK(LeakInfo{3, 7, true}.encoded() != leak.encoded());
  CHECK(LeakInfo{7, 3, false}.encoded() != leak.encoded());
  CHECK(LeakInfo{3, 8, false}.encoded() != leak.encoded());
  CHECK(LeakInfo{12, 12, true}.encoded() < kLeakDim);
}

TEST_CASE("configuration errors are rejected") {
  auto comp = qubit_unitary_channel("a", 5);
  CHECK_THROWS_AS(ideal_resource(ResourceVariant::blind, comp, {1, 1, true}, {2, {}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ideal_resource(ResourceVariant::blind, comp, {1, 1, true}, {1, {}}),
                  std::invalid_argument);

  // Cheat map that ignores the client wires entirely.
  auto bad = KrausChannel::identity({{"x", 2}});
  CHECK_THROWS_AS(ideal_resource(ResourceVariant::blind, comp, {1, 1, true}, {1, bad}),
                  std::invalid_argument);

  // Leak outside the encodable range (only reachable when it is sent).
  auto cheat = KrausChannel::identity({{"a", 2}});
  CHECK_THROWS_AS(ideal_resource(ResourceVariant::blind, comp, {16, 1, true}, {1, cheat}),
                  std::invalid_argument);

  // Verifiable output stage requires qubit payload.
  auto wide = random_channel(4, 4, 1, 9);
  CHECK_THROWS_AS(ideal_resource(ResourceVariant::blind_verifiable, wide, {1, 1, true}),
                  std::invalid_argument);
}

TEST_CASE("exact runs are reproducible to the byte") {
  Rng rng(516);
  auto comp = qubit_unitary_channel("a", 47);
  auto prog = ideal_resource(ResourceVariant::blind_verifiable, comp, {1, 1, true});
  auto in = pure_on({"a"}, testutil::random_pure(2, rng));
  auto r1 = run_interaction(prog, ProgramBuilder("bob").build(), in, RunMode::exact);
  auto r2 = run_interaction(prog, ProgramBuilder("bob").build(), in, RunMode::exact);
  CHECK((r1.output.mat() - r2.output.mat()).norm() == 0.0);
}
