// Command-line front end: run protocols, emit patterns, execute verification
// suites, and write machine-readable reports.
//
// Exit codes: 0 success / all checks pass, 1 a check failed, 2 usage or
// configuration error. The environment variable DQC_QUBIT_CAP overrides the
// default cap of 12 simulated qubits.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "dqp/engine.hpp"
#include "dqp/harness.hpp"
#include "dqp/json_io.hpp"
#include "dqp/mbqc.hpp"
#include "dqp/qotp.hpp"
#include "dqp/rng.hpp"
#include "dqp/suites.hpp"
#include "dqp/ubqc.hpp"

namespace {

using namespace dqp;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int qubit_cap() {
  const char* env = std::getenv("DQC_QUBIT_CAP");
  if (!env) return 12;
  try {
    int cap = std::stoi(env);
    if (cap < 1) throw UsageError("DQC_QUBIT_CAP must be positive");
    return cap;
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception&) {
    throw UsageError(std::string("DQC_QUBIT_CAP is not an integer: ") + env);
  }
}

void require_cap(int qubits) {
  int cap = qubit_cap();
  if (qubits > cap)
    throw UsageError("session needs " + std::to_string(qubits) +
                     " qubits, over the cap of " + std::to_string(cap) +
                     " (set DQC_QUBIT_CAP to raise it)");
}

RunMode parse_mode(const std::string& mode) {
  if (mode == "exact") return RunMode::exact;
  if (mode == "sample") return RunMode::sample;
  throw UsageError("mode must be exact or sample, got: " + mode);
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_out(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  f << text;
  if (!f) throw std::runtime_error("cannot write " + path);
}

DensityOperator seeded_session_input(int n, std::uint64_t seed) {
  std::vector<Wire> ws;
  for (int x = 1; x <= n; ++x) ws.push_back({"in" + std::to_string(x), 2});
  ws.push_back({"ref", 2});
  Wires w(ws);
  Rng rng(seed);
  Vec v(w.total_dim());
  for (long i = 0; i < w.total_dim(); ++i) v(i) = rng.complex_normal();
  v.normalize();
  return DensityOperator::from_state(QuantumState(w, v));
}

int cmd_run_ubqc(int n, int m, const std::string& pattern_path,
                 const std::string& mode, std::uint64_t seed,
                 const std::string& out) {
  MeasurementPattern pat;
  if (!pattern_path.empty()) {
    pat = pattern_from_json(read_file(pattern_path));
    if ((n > 0 && n != pat.n) || (m > 0 && m != pat.m))
      throw UsageError("--n/--m disagree with the pattern file");
  } else {
    if (n < 1 || m < 1)
      throw UsageError("run-ubqc needs --pattern, or --n and --m");
    pat = random_pattern(n, m, seed);
  }
  require_cap(pat.n * (pat.m + 1) + 1);  // one reference qubit rides along
  RunResult run = run_interaction(ubqc_alice(1, pat), ubqc_bob_honest(pat.n, pat.m),
                                  seeded_session_input(pat.n, seed),
                                  parse_mode(mode), seed);
  write_out(out, transcript_to_json(run.transcript));
  return 0;
}

int cmd_run_qotp(const std::string& mode, std::uint64_t seed,
                 const std::string& out) {
  KrausChannel ch = random_channel(4, 4, 2, seed);
  ch.in_wires = {{"adv_w", 2}, {"adv_k", 2}};
  ch.out_wires = {{"adv_w", 2}, {"adv_k", 2}};
  ProgramBuilder eve("tap");
  eve.prepare(OpPrepare::Kind::zero, {"adv_k"});
  eve.recv({"adv_w"});
  eve.kraus(ch);
  eve.send({"adv_w"});
  eve.outputs({"adv_k"});
  Rng rng(seed);
  Vec v(4);
  for (int i = 0; i < 4; ++i) v(i) = rng.complex_normal();
  v.normalize();
  DensityOperator in = DensityOperator::from_state(
      QuantumState(Wires(std::vector<Wire>{{"in", 2}, {"ref", 2}}), v));
  RunResult run =
      run_interaction(qotp_suite().real, eve.build(), in, parse_mode(mode), seed);
  write_out(out, transcript_to_json(run.transcript));
  return 0;
}

int cmd_check(const std::string& suite, int n, int m, int trials, double tol,
              std::uint64_t seed, const std::string& out) {
  if (!is_suite(suite)) {
    std::string names;
    for (const auto& s : suite_specs()) names += (names.empty() ? "" : ", ") + s.name;
    throw UsageError("unknown suite: " + suite + " (available: " + names + ")");
  }
  if (n > 0 && m > 0) require_cap(n * (m + 1) + 1);
  SuiteOptions opt;
  opt.trials = trials;
  opt.tol = tol;
  opt.seed = seed;
  opt.n = n;
  opt.m = m;
  SecurityReport r = run_suite(suite, opt);
  write_out(out, report_to_json(r));
  if (!r.pass) std::cerr << "check failed: " << suite << "\n";
  return r.pass ? 0 : 1;
}

int cmd_emit_pattern(const std::string& generator, int n, int m,
                     std::uint64_t seed, const std::string& out) {
  if (n < 1 || m < 1) throw UsageError("emit-pattern needs --n and --m >= 1");
  MeasurementPattern pat;
  if (generator.empty() || generator == "random") {
    pat = random_pattern(n, m, seed);
  } else if (generator == "all-zero") {
    std::vector<std::vector<Angle8>> angles(n, std::vector<Angle8>(m, Angle8(0)));
    pat = make_pattern(n, m, std::move(angles));
  } else {
    throw UsageError("generator must be random or all-zero, got: " + generator);
  }
  write_out(out, pattern_to_json(pat));
  return 0;
}

int cmd_verify_all(std::uint64_t seed, const std::string& out) {
  std::vector<SecurityReport> reports = run_all(seed);
  write_out(out, reports_to_json(seed, reports));
  bool all = true;
  for (const auto& r : reports)
    if (!r.pass) {
      all = false;
      std::cerr << "failed: " << r.check << "\n";
    }
  return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"delegated-computation protocols: runners and verification suites"};
  app.require_subcommand(1);

  int n = 0, m = 0, trials = 0;
  double tol = 0.0;
  std::uint64_t seed = 1;
  std::string pattern, mode = "exact", out, suite;

  CLI::App* run_ubqc =
      app.add_subcommand("run-ubqc", "run a delegated pattern against the honest "
                                     "server and write the transcript");
  run_ubqc->add_option("--n", n, "rows");
  run_ubqc->add_option("--m", m, "measured columns");
  run_ubqc->add_option("--pattern", pattern, "pattern JSON file");
  run_ubqc->add_option("--mode", mode, "exact or sample");
  run_ubqc->add_option("--seed", seed, "randomness seed");
  run_ubqc->add_option("--out", out, "output file (default stdout)");

  CLI::App* run_qotp = app.add_subcommand(
      "run-qotp", "run the padded channel against a seeded tap and write the "
                  "transcript");
  run_qotp->add_option("--mode", mode, "exact or sample");
  run_qotp->add_option("--seed", seed, "randomness seed");
  run_qotp->add_option("--out", out, "output file (default stdout)");

  CLI::App* check =
      app.add_subcommand("check", "run one verification suite and write its report");
  check->add_option("--suite", suite, "suite name")->required();
  check->add_option("--n", n, "protocol rows (size-parameterized suites)");
  check->add_option("--m", m, "protocol columns (size-parameterized suites)");
  check->add_option("--trials", trials, "trial count (0 = suite default)");
  check->add_option("--tol", tol, "tolerance (0 = suite default)");
  check->add_option("--seed", seed, "randomness seed");
  check->add_option("--out", out, "output file (default stdout)");

  CLI::App* emitp =
      app.add_subcommand("emit-pattern", "write a pattern JSON file");
  emitp->add_option("--pattern", pattern, "generator: random or all-zero");
  emitp->add_option("--n", n, "rows")->required();
  emitp->add_option("--m", m, "measured columns")->required();
  emitp->add_option("--seed", seed, "randomness seed");
  emitp->add_option("--out", out, "output file (default stdout)");

  CLI::App* verify = app.add_subcommand(
      "verify-all", "run every suite at acceptance size and write the aggregate");
  verify->add_option("--seed", seed, "randomness seed");
  verify->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (run_ubqc->parsed()) return cmd_run_ubqc(n, m, pattern, mode, seed, out);
    if (run_qotp->parsed()) return cmd_run_qotp(mode, seed, out);
    if (check->parsed()) return cmd_check(suite, n, m, trials, tol, seed, out);
    if (emitp->parsed()) return cmd_emit_pattern(pattern, n, m, seed, out);
    if (verify->parsed()) return cmd_verify_all(seed, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
