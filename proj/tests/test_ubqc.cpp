#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN

#include <string>
#include <utility>
#include <vector>

#include "doctest.h"
#include "dqp/engine.hpp"
#include "dqp/gates.hpp"
#include "dqp/metrics.hpp"
#include "dqp/ubqc.hpp"
#include "util.hpp"

using namespace dqp;

namespace {

MeasurementPattern random_pattern(int n, int m, Rng& rng) {
  std::vector<std::vector<Angle8>> ang(n);
  for (auto& row : ang)
    for (int y = 0; y < m; ++y)
      row.push_back(Angle8(static_cast<int>(rng.uniform_int(8))));
  return make_pattern(n, m, std::move(ang));
}

// Random pure input over in1..inN plus one reference qubit that rides along
// untouched, so entanglement with the environment is part of the check.
DensityOperator entangled_input(int n, Rng& rng) {
  std::vector<Wire> ws;
  for (int x = 1; x <= n; ++x) ws.push_back(Wire{"in" + std::to_string(x), 2});
  ws.push_back(Wire{"ref", 2});
  Vec v = testutil::random_pure(1 << (n + 1), rng);
  return DensityOperator(Wires(ws), Mat(v * v.adjoint()));
}

// version 0 stands for the simulated client.
double gap_to_oracle(int version, const MeasurementPattern& pat, const DensityOperator& input) {
  std::vector<std::string> labels;
  for (int x = 1; x <= pat.n; ++x) labels.push_back("in" + std::to_string(x));
  MbqcResult oracle = honest_mbqc_execute(pat, input, labels, ExecMode::exact);
  PartyProgram alice = version == 0 ? ubqc_simulated_alice(pat) : ubqc_alice(version, pat);
  RunResult run =
      run_interaction(alice, ubqc_bob_honest(pat.n, pat.m), input, RunMode::exact);
  return trace_distance(run.output, oracle.output);
}

}  // namespace

TEST_CASE("direct client against the honest server matches the reference executor") {
  Rng rng(0x5eed01);
  std::vector<std::pair<int, int>> sizes{{1, 1}, {2, 1}, {1, 2}, {2, 2}};
  for (auto [n, m] : sizes)
    for (int rep = 0; rep < 3; ++rep) {
      auto pat = random_pattern(n, m, rng);
      CAPTURE(n);
      CAPTURE(m);
      CHECK(gap_to_oracle(1, pat, entangled_input(n, rng)) <= 1e-9);
    }
}

TEST_CASE("all-zero pattern runs blind and correct") {
  Rng rng(0x5eed02);
  MeasurementPattern pat = make_pattern(1, 2, {{Angle8(0), Angle8(0)}});
  CHECK(gap_to_oracle(1, pat, entangled_input(1, rng)) <= 1e-9);
}

TEST_CASE("teleporting client matches the reference executor") {
  Rng rng(0x5eed03);
  for (int m : {1, 2}) {
    auto pat = random_pattern(1, m, rng);
    CAPTURE(m);
    CHECK(gap_to_oracle(2, pat, entangled_input(1, rng)) <= 1e-9);
  }
}

TEST_CASE("delayed client matches the reference executor") {
  Rng rng(0x5eed04);
  std::vector<std::pair<int, int>> sizes{{1, 1}, {1, 2}, {2, 2}};
  for (auto [n, m] : sizes) {
    auto pat = random_pattern(n, m, rng);
    CAPTURE(n);
    CAPTURE(m);
    CHECK(gap_to_oracle(3, pat, entangled_input(n, rng)) <= 1e-9);
  }
}

TEST_CASE("simulated client matches the reference executor") {
  Rng rng(0x5eed05);
  for (int m : {1, 2}) {
    auto pat = random_pattern(1, m, rng);
    CAPTURE(m);
    CHECK(gap_to_oracle(0, pat, entangled_input(1, rng)) <= 1e-9);
  }
}

TEST_CASE("the four client combs coincide") {
  Rng rng(0x5eed06);
  for (int m : {1, 2}) {
    auto pat = random_pattern(1, m, rng);
    CAPTURE(m);
    std::vector<CombChoi> combs;
    for (int v : {1, 2, 3}) combs.push_back(comb_choi(ubqc_alice(v, pat)));
    combs.push_back(comb_choi(ubqc_simulated_alice(pat)));
    for (std::size_t i = 0; i + 1 < combs.size(); ++i)
      for (std::size_t j = i + 1; j < combs.size(); ++j) {
        CAPTURE(i);
        CAPTURE(j);
        CHECK(comb_distance(combs[i], combs[j]) <= 1e-9);
      }
  }
}

TEST_CASE("exact runs are deterministic") {
  Rng rng(0x5eed07);
  auto pat = random_pattern(1, 2, rng);
  auto input = entangled_input(1, rng);
  auto bob = ubqc_bob_honest(1, 2);
  auto alice = ubqc_alice(1, pat);
  RunResult a = run_interaction(alice, bob, input, RunMode::exact);
  RunResult b = run_interaction(alice, bob, input, RunMode::exact);
  CHECK((a.output.mat() - b.output.mat()).norm() == 0.0);
}

TEST_CASE("instruction angles are marginally uniform") {
  Rng rng(0x5eed08);
  auto pat = random_pattern(1, 1, rng);
  CombChoi c = comb_choi(ubqc_alice(1, pat));
  REQUIRE(c.reg_ports.size() == 2);
  CHECK(c.reg_ports[0].second == 8);  // instruction out
  CHECK(c.reg_ports[1].second == 2);  // probed outcome in
  for (int d = 0; d < 8; ++d) {
    double p = 0.0;
    for (int s = 0; s < 2; ++s) {
      auto it = c.blocks.find({d, s});
      if (it != c.blocks.end()) p += it->second.trace().real();
    }
    CHECK(p == doctest::Approx(1.0 / 8).epsilon(1e-9));
  }
}

TEST_CASE("the qubit sent to the server looks maximally mixed") {
  Rng rng(0x5eed09);
  auto pat = random_pattern(1, 1, rng);
  CombChoi c = comb_choi(ubqc_alice(1, pat));
  Mat acc = Mat::Zero(c.wire_dim(), c.wire_dim());
  for (const auto& [key, block] : c.blocks) acc += block;
  Wires ws(c.wire_ports);
  std::vector<int> drop;
  for (int i = 0; i < static_cast<int>(c.wire_ports.size()); ++i)
    if (c.wire_ports[i].label != "p_r0_0") drop.push_back(i);
  Mat reduced = partial_trace_mat(acc, ws, drop);
  CHECK((reduced - Mat::Identity(2, 2) * 0.5).norm() <= 1e-12);
}

TEST_CASE("measuring an eigenstate instruction always returns 0") {
  ProgramBuilder b("alice");
  b.compute("d", 8, {}, [](const RegArgs&) { return 3; });
  b.prepare(OpPrepare::Kind::plus_theta, {"q"}, "d");
  b.measure_xy("q", "s", {"d"}, [](const RegArgs& v) { return Angle8(v[0]); });
  b.send_classical("s", 2);
  b.forget({"d"});
  CombChoi c = comb_choi(b.build());
  auto hit = c.blocks.find({0});
  REQUIRE(hit != c.blocks.end());
  CHECK(hit->second.trace().real() == doctest::Approx(1.0).epsilon(1e-12));
  auto miss = c.blocks.find({1});
  if (miss != c.blocks.end()) CHECK(miss->second.trace().real() <= 1e-12);
}

TEST_CASE("message schedule depends only on the grid size") {
  Rng rng(0x5eed0a);
  auto pa = random_pattern(2, 2, rng);
  auto pb = random_pattern(2, 2, rng);
  auto sig = message_signature(ubqc_alice(1, pa));
  CHECK(sig == message_signature(ubqc_alice(1, pb)));
  CHECK(sig == message_signature(ubqc_alice(2, pa)));
  CHECK(sig == message_signature(ubqc_alice(3, pa)));
  CHECK(sig == message_signature(ubqc_simulated_alice(pa)));
  // n + n(m-1) qubit messages out, n*m instruction rounds, final column in.
  CHECK(sig.size() == 3 * 2 * 2 + 1);
  CHECK_NOTHROW(check_schedules_compatible(ubqc_alice(1, pa), ubqc_bob_honest(2, 2)));
  CHECK_NOTHROW(check_schedules_compatible(ubqc_simulator(2, 2), ubqc_bob_honest(2, 2)));
}

TEST_CASE("sampled runs honor the schedule and reproduce per seed") {
  Rng rng(0x5eed0b);
  auto pat = random_pattern(1, 2, rng);
  auto input = entangled_input(1, rng);
  auto bob = ubqc_bob_honest(1, 2);
  auto alice = ubqc_alice(1, pat);
  RunResult a = run_interaction(alice, bob, input, RunMode::sample, 42);
  CHECK(a.transcript.rounds.size() == 2 + 2 * 2 + 1);
  int classical = 0;
  for (const auto& r : a.transcript.rounds)
    if (r.kind != "qubits") {
      CHECK(r.value.has_value());
      ++classical;
    }
  CHECK(classical == 4);
  RunResult b = run_interaction(alice, bob, input, RunMode::sample, 42);
  for (std::size_t i = 0; i < a.transcript.rounds.size(); ++i)
    CHECK(a.transcript.rounds[i].value == b.transcript.rounds[i].value);
}
