#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "dqp/gates.hpp"
#include "dqp/harness.hpp"
#include "dqp/json_io.hpp"
#include "dqp/program.hpp"
#include "dqp/suites.hpp"

using namespace dqp;

namespace {

constexpr std::uint64_t kSeed = 2026;

// Every criterion reads from one shared batch so the whole binary costs two
// full sweeps (the second one feeds the determinism check).
const std::vector<SecurityReport>& batch() {
  static const std::vector<SecurityReport> reports = run_all(kSeed);
  return reports;
}

const SecurityReport& report(const std::string& name) {
  for (const auto& r : batch())
    if (r.check == name) return r;
  throw std::runtime_error("no such suite report: " + name);
}

void announce(int index, const SecurityReport& r) {
  std::printf("criterion %2d  %-16s %s  (epsilon=%.3e, tol=%.0e, trials=%d)\n",
              index, r.check.c_str(), r.pass ? "PASS" : "FAIL",
              r.epsilon ? *r.epsilon : -1.0, r.tol, r.trials);
  std::fflush(stdout);
}

}  // namespace

TEST_CASE("criterion 1: delegated runs match the reference executor") {
  const SecurityReport& r = report("correctness");
  announce(1, r);
  CHECK(*r.epsilon <= 1e-9);
  CHECK(r.pass);
}

TEST_CASE("criterion 2: client comb chain collapses to one behaviour") {
  const SecurityReport& r = report("chain-equality");
  announce(2, r);
  CHECK(*r.epsilon <= 1e-9);
  CHECK(r.pass);
}

TEST_CASE("criterion 3: server views are input-independent; cleartext anchor") {
  const SecurityReport& r = report("blindness");
  announce(3, r);
  CHECK(*r.epsilon <= 1e-9);
  CHECK(r.pass);
  PartyProgram keeper =
      ProgramBuilder("keeper").recv({"adv_w"}).outputs({"adv_w"}).build();
  double anchor = check_sa_blindness(cleartext_alice(), keeper);
  std::printf("              cleartext anchor epsilon=%.9f (want 0.5)\n", anchor);
  CHECK(std::abs(anchor - 0.5) <= 1e-6);
}

TEST_CASE("criterion 4: padded channel equals its confidential ideal") {
  const SecurityReport& r = report("qotp");
  announce(4, r);
  CHECK(*r.epsilon <= 1e-9);
  CHECK(r.pass);
}

TEST_CASE("criterion 5: one-message delegation comb equality") {
  const SecurityReport& r = report("oneway");
  announce(5, r);
  CHECK(*r.epsilon <= 1e-12);
  CHECK(r.pass);
}

TEST_CASE("criterion 6: distance metrics respect the two-sided bound") {
  const SecurityReport& r = report("metrics");
  announce(6, r);
  CHECK(*r.epsilon <= 1e-9);
  CHECK(r.trials == 1000);
  CHECK(r.pass);
}

TEST_CASE("criterion 7: hand-off via entangled pairs reproduces the channel") {
  const SecurityReport& r = report("teleport");
  announce(7, r);
  CHECK(*r.epsilon <= 1e-9);
  CHECK(r.pass);
}

TEST_CASE("criterion 8: sampled advantage within twice the measured witness") {
  const SecurityReport& r = report("thm1");
  announce(8, r);
  CHECK(*r.epsilon <= 1e-6);
  CHECK(r.trials == 50);
  CHECK(r.pass);
  // The witness values themselves, measured from the worst fixed-flip
  // interception per family member (brute force over the flip set).
  for (int tt : {10, 9, 7}) {
    VerifiableProtocol toy = toy_protocol(tt);
    double eps0 = 0.0;
    for (const Mat& u : {gates::X(), gates::Y(), gates::Z()}) {
      PartyProgram tap = ProgramBuilder("tap")
                             .recv({"adv_w"})
                             .unitary({"adv_w"}, u)
                             .send({"adv_w"})
                             .outputs({})
                             .build();
      eps0 = std::max(eps0, check_blind_verifiability(toy, tap));
    }
    std::printf("              family member %2d measured witness %.6f\n", tt, eps0);
    CHECK(std::abs(eps0 - (1.0 - tt / 10.0)) <= 1e-6);
  }
}

TEST_CASE("criterion 9: construction bound from component witnesses") {
  const SecurityReport& r = report("lemma1");
  announce(9, r);
  CHECK(*r.epsilon <= 1e-6);
  CHECK(r.pass);
}

TEST_CASE("criterion 10: accept-mass projector bound on random instances") {
  const SecurityReport& r = report("fk");
  announce(10, r);
  CHECK(*r.epsilon <= 1e-9);
  CHECK(r.trials == 1000);
  CHECK(r.pass);
}

TEST_CASE("determinism: a second full sweep reproduces every classical field") {
  std::vector<SecurityReport> again = run_all(kSeed);
  std::string first = reports_to_json(kSeed, batch());
  std::string second = reports_to_json(kSeed, again);
  bool identical = first == second;
  std::printf("criterion 11  determinism      %s  (bytes=%zu)\n",
              identical ? "PASS" : "FAIL", first.size());
  CHECK(identical);
}
