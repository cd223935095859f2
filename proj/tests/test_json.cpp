#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "dqp/engine.hpp"
#include "dqp/json_io.hpp"
#include "dqp/mbqc.hpp"
#include "dqp/qotp.hpp"
#include "dqp/rng.hpp"

using namespace dqp;

namespace {

MeasurementPattern sample_pattern() {
  return make_pattern(2, 2, {{Angle8(1), Angle8(6)}, {Angle8(0), Angle8(3)}});
}

bool patterns_equal(const MeasurementPattern& a, const MeasurementPattern& b) {
  return a.n == b.n && a.m == b.m && a.angles == b.angles && a.x_deps == b.x_deps &&
         a.z_deps == b.z_deps && a.output_x_deps == b.output_x_deps &&
         a.output_z_deps == b.output_z_deps;
}

}  // namespace

TEST_CASE("flow-derived patterns serialize compactly and round-trip") {
  MeasurementPattern p = sample_pattern();
  std::string text = pattern_to_json(p);
  CHECK(text.find("\"flow\"") != std::string::npos);
  MeasurementPattern q = pattern_from_json(text);
  CHECK(patterns_equal(p, q));
  CHECK(pattern_to_json(q) == text);
}

TEST_CASE("hand-written dependencies serialize explicitly and round-trip") {
  MeasurementPattern p = sample_pattern();
  REQUIRE(!p.x_deps[0][1].empty());
  p.x_deps[0][1].clear();  // drop one correction; still measured-before-used
  std::string text = pattern_to_json(p);
  CHECK(text.find("\"flow\"") == std::string::npos);
  MeasurementPattern q = pattern_from_json(text);
  CHECK(patterns_equal(p, q));
  CHECK(pattern_to_json(q) == text);
}

TEST_CASE("malformed pattern files are rejected") {
  CHECK_THROWS(pattern_from_json("not json"));
  CHECK_THROWS(pattern_from_json(R"({"n":1,"m":1,"angles":[[9]]})"));
  CHECK_THROWS(pattern_from_json(R"({"n":2,"m":1,"angles":[[0]]})"));
  CHECK_THROWS(pattern_from_json(R"({"n":0,"m":1,"angles":[]})"));
  CHECK_THROWS(
      pattern_from_json(R"({"n":1,"m":1,"angles":[[0]],"x_deps":"flow","z_deps":[]})"));
}

TEST_CASE("transcripts carry direction arrows and qubit rounds") {
  QotpSuite suite = qotp_suite();
  ProgramBuilder eve("eve");
  eve.recv({"w"});
  eve.send({"w"});
  eve.outputs({});
  DensityOperator in(Wires(std::vector<Wire>{{"in", 2}}),
                     Mat(Mat::Identity(2, 2) / 2.0));
  RunResult run = run_interaction(suite.real, eve.build(), in, RunMode::sample, 9);
  std::string text = transcript_to_json(run.transcript);
  CHECK(text.find("\"A→B\"") != std::string::npos);
  CHECK(text.find("\"B→A\"") != std::string::npos);
  CHECK(text.find("\"qubit\"") != std::string::npos);
  CHECK(text.find("\"qubits\"") == std::string::npos);
  CHECK(text.find("\"mode\": \"sample\"") != std::string::npos);
  CHECK(text.find("\"seed\": 9") != std::string::npos);
}

TEST_CASE("reports serialize with fixed key order and null epsilons") {
  SecurityReport r;
  r.check = "demo";
  r.epsilon = 0.25;
  r.pass = true;
  r.trials = 7;
  r.seed = 42;
  r.tol = 1e-9;
  r.citation = "demo-claim";
  std::string text = report_to_json(r);
  CHECK(text ==
        "{\n  \"check\": \"demo\",\n  \"epsilon\": 0.25,\n  \"pass\": true,\n"
        "  \"trials\": 7,\n  \"seed\": 42,\n  \"tol\": 1e-09,\n"
        "  \"citation\": \"demo-claim\"\n}\n");
  r.epsilon.reset();
  CHECK(report_to_json(r).find("\"epsilon\": null") != std::string::npos);

  std::string agg = reports_to_json(42, {r, r});
  CHECK(agg.find("\"criteria\"") != std::string::npos);
  CHECK(agg.find("\"pass\": true") != std::string::npos);
}
