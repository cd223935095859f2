#include "dqp/suites.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dqp/engine.hpp"
#include "dqp/gates.hpp"
#include "dqp/mbqc.hpp"
#include "dqp/metrics.hpp"
#include "dqp/oneway.hpp"
#include "dqp/qotp.hpp"
#include "dqp/rng.hpp"
#include "dqp/ubqc.hpp"

namespace dqp {
namespace {

DensityOperator random_pure_on(const std::vector<Wire>& wires, Rng& rng) {
  Wires w(wires);
  Vec v(w.total_dim());
  for (long i = 0; i < w.total_dim(); ++i) v(i) = rng.complex_normal();
  v.normalize();
  return DensityOperator::from_state(QuantumState(w, v));
}

// Intercepts one qubit and pushes it through a seeded channel that may
// entangle it with a register the adversary keeps.
PartyProgram entangling_tap(std::uint64_t seed) {
  KrausChannel ch = random_channel(4, 4, 2, seed);
  ch.in_wires = {{"adv_w", 2}, {"adv_k", 2}};
  ch.out_wires = {{"adv_w", 2}, {"adv_k", 2}};
  ProgramBuilder b("tap");
  b.prepare(OpPrepare::Kind::zero, {"adv_k"});
  b.recv({"adv_w"});
  b.kraus(ch);
  b.send({"adv_w"});
  b.outputs({"adv_k"});
  return b.build();
}

// Applies a fixed unitary to the one qubit in flight.
PartyProgram pauli_tap(const Mat& u) {
  ProgramBuilder b("pauli_tap");
  b.recv({"adv_w"});
  b.unitary({"adv_w"}, u);
  b.send({"adv_w"});
  b.outputs({});
  return b.build();
}

// Keeps the single qubit a cleartext sender hands over.
PartyProgram keeper() {
  ProgramBuilder b("keeper");
  b.recv({"adv_w"});
  b.outputs({"adv_w"});
  return b.build();
}

SecurityReport base_report(const std::string& name, int trials, double tol,
                           std::uint64_t seed, const std::string& citation) {
  SecurityReport r;
  r.check = name;
  r.trials = trials;
  r.seed = seed;
  r.tol = tol;
  r.citation = citation;
  return r;
}

SecurityReport suite_correctness(const SuiteOptions& o, int trials, double tol,
                                 std::uint64_t seed) {
  SecurityReport r = base_report("correctness", trials, tol, seed, "ubqc-correctness");
  Rng rng(seed);
  std::vector<std::pair<int, int>> sizes{{1, 2}, {2, 2}, {1, 4}, {2, 4}};
  if (o.n > 0 && o.m > 0) sizes = {{o.n, o.m}};
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto [n, m] = sizes[t % sizes.size()];
    MeasurementPattern pat = random_pattern(n, m, rng.next_u64());
    std::vector<Wire> ws;
    std::vector<std::string> labels;
    for (int x = 1; x <= n; ++x) {
      ws.push_back({"in" + std::to_string(x), 2});
      labels.push_back("in" + std::to_string(x));
    }
    if (t % 2 == 0) ws.push_back({"aref", 2});  // entangled with a reference
    DensityOperator psi = random_pure_on(ws, rng);
    MbqcResult oracle = honest_mbqc_execute(pat, psi, labels, ExecMode::exact);
    RunResult run = run_interaction(ubqc_alice(1, pat), ubqc_bob_honest(n, m), psi,
                                    RunMode::exact, 0);
    worst = std::max(worst, trace_distance(run.output, oracle.output));
  }
  r.epsilon = worst;
  r.pass = worst <= tol;
  return r;
}

SecurityReport suite_chain_equality(const SuiteOptions& o, int trials, double tol,
                                    std::uint64_t seed) {
  SecurityReport r =
      base_report("chain-equality", trials, tol, seed, "composable-blindness-chain");
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    int n = o.n > 0 ? o.n : 1;
    int m = o.m > 0 ? o.m : (t % 2) + 1;
    MeasurementPattern pat = random_pattern(n, m, rng.next_u64());
    std::vector<CombChoi> combs;
    for (int v : {1, 2, 3}) combs.push_back(comb_choi(ubqc_alice(v, pat)));
    combs.push_back(comb_choi(ubqc_simulated_alice(pat)));
    for (std::size_t i = 0; i + 1 < combs.size(); ++i)
      for (std::size_t j = i + 1; j < combs.size(); ++j)
        worst = std::max(worst, comb_distance(combs[i], combs[j]));
  }
  r.epsilon = worst;
  r.pass = worst <= tol;
  return r;
}

SecurityReport suite_blindness(const SuiteOptions& o, int trials, double tol,
                               std::uint64_t seed) {
  SecurityReport r = base_report("blindness", trials, tol, seed,
                                 "standalone-blindness-factorization");
  Rng rng(seed);
  int n = o.n > 0 ? o.n : 1;
  int m = o.m > 0 ? o.m : 2;
  PartyProgram alice = ubqc_alice(1, random_pattern(n, m, rng.next_u64()));
  std::vector<AdversaryStrategy> pool = strategy_pool(alice, trials, rng.next_u64());
  double worst = 0.0;
  for (const auto& s : pool)
    worst = std::max(worst, check_sa_blindness(alice, s.bob));
  double anchor = check_sa_blindness(cleartext_alice(), keeper());
  r.epsilon = worst;
  r.pass = worst <= tol && std::abs(anchor - 0.5) <= 1e-6;
  return r;
}

SecurityReport suite_qotp(int trials, double tol, std::uint64_t seed) {
  SecurityReport r = base_report("qotp", trials, tol, seed, "qotp-equality");
  Rng rng(seed);
  QotpSuite suite = qotp_suite();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    PartyProgram eve = entangling_tap(rng.next_u64());
    DensityOperator in = random_pure_on({{"in", 2}, {"qref", 2}}, rng);
    RunResult real = run_interaction(suite.real, eve, in, RunMode::exact, 0);
    RunResult ideal = run_interaction(suite.ideal, eve, in, RunMode::exact, 0);
    worst = std::max(worst, trace_distance(real.output, ideal.output));
  }
  r.epsilon = worst;
  r.pass = worst <= tol;
  return r;
}

SecurityReport suite_oneway(int trials, double tol, std::uint64_t seed) {
  SecurityReport r = base_report("oneway", trials, tol, seed, "oneway-blindness");
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Mat g(2, 2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) g(i, j) = rng.complex_normal();
    Mat tau = g * g.adjoint();
    tau /= tau.trace().real();
    DensityOperator bob_state(Wires(std::vector<Wire>{{"tau", 2}}), tau);
    KrausChannel am = random_channel(4, 2, 2, rng.next_u64());
    am.in_wires = {{"own", 2}, {"tau", 2}};
    am.out_wires = {{"res", 2}};
    OnewaySuite suite = oneway_suite(bob_state, am);
    worst = std::max(worst,
                     comb_distance(comb_choi(suite.alice), comb_choi(suite.ideal)));
  }
  r.epsilon = worst;
  r.pass = worst <= tol;
  return r;
}

SecurityReport suite_metrics(int trials, double tol, std::uint64_t seed) {
  SecurityReport r = base_report("metrics", trials, tol, seed, "metric-two-sided-bound");
  Rng rng(seed);
  SecurityReport r2 = metric_lemma_check(trials, 2, rng.next_u64());
  SecurityReport r4 = metric_lemma_check(trials, 4, rng.next_u64());
  double worst = std::max(*r2.epsilon, *r4.epsilon);
  r.epsilon = worst;
  r.pass = worst <= tol;
  return r;
}

SecurityReport suite_teleport(int trials, double tol, std::uint64_t seed) {
  SecurityReport r =
      base_report("teleport", trials, tol, seed, "teleport-reduction-identity");
  Rng rng(seed);
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    if (t % 2 == 0) {
      KrausChannel ch = random_channel(4, 4, 2, rng.next_u64());
      ch.in_wires = {{"a0", 2}, {"b0", 2}};
      ch.out_wires = {{"o0", 2}, {"o1", 2}};
      DensityOperator psi = random_pure_on({{"a0", 2}, {"b0", 2}, {"tref", 2}}, rng);
      worst = std::max(worst, teleport_reduction_check(ch, 1, psi));
    } else {
      KrausChannel ch = random_channel(16, 16, 2, rng.next_u64());
      ch.in_wires = {{"a0", 2}, {"a1", 2}, {"b0", 2}, {"b1", 2}};
      ch.out_wires = {{"o0", 2}, {"o1", 2}, {"o2", 2}, {"o3", 2}};
      DensityOperator psi = random_pure_on(
          {{"a0", 2}, {"a1", 2}, {"b0", 2}, {"b1", 2}, {"tref", 2}}, rng);
      worst = std::max(worst, teleport_reduction_check(ch, 2, psi));
    }
  }
  r.epsilon = worst;
  r.pass = worst <= tol;
  return r;
}

SecurityReport suite_thm1(int trials, double tol, std::uint64_t seed) {
  SecurityReport r = base_report("thm1", trials, tol, seed, "simulator-2eps-bound");
  Rng rng(seed);
  double worst = 0.0;
  bool exact_ok = true;
  for (int tt : {10, 9, 7}) {
    VerifiableProtocol toy = toy_protocol(tt);
    VerifiableProtocol ideal = ideal_from_verifiability(toy);
    double eps0 = 0.0;
    for (const Mat& u : {gates::X(), gates::Y(), gates::Z()})
      eps0 = std::max(eps0, check_blind_verifiability(toy, pauli_tap(u)));
    std::vector<AdversaryStrategy> pool =
        strategy_pool(toy.alice, trials, rng.next_u64());
    for (const auto& s : pool)
      eps0 = std::max(eps0, check_blind_verifiability(toy, s.bob, {s.input}));
    for (const auto& s : pool) {
      double adv = advantage_lower_bound(toy.alice, ideal.alice, {s});
      worst = std::max(worst, adv - 2.0 * eps0);
    }
    if (tt == 10)
      exact_ok = comb_equal(comb_choi(toy.alice), comb_choi(ideal.alice), 1e-9);
  }
  r.epsilon = std::max(0.0, worst);
  r.pass = worst <= tol && exact_ok;
  return r;
}

SecurityReport suite_lemma1(int trials, double tol, std::uint64_t seed) {
  SecurityReport r = base_report("lemma1", trials, tol, seed, "construction-bound-lemma");
  Rng rng(seed);
  double worst = -1.0;
  for (int tt : {10, 9, 7}) {
    VerifiableProtocol toy = toy_protocol(tt);
    std::vector<PartyProgram> advs;
    advs.push_back(pauli_tap(gates::X()));
    advs.push_back(pauli_tap(gates::Y()));
    advs.push_back(pauli_tap(gates::Z()));
    advs.push_back(ProgramBuilder("echo").recv({"adv_w"}).send({"adv_w"}).build());
    while (static_cast<int>(advs.size()) < trials)
      advs.push_back(random_adversary(toy.alice, rng.next_u64()));
    for (const auto& adv : advs) {
      double eps_bl = check_sa_blindness(toy.alice, adv);
      double eps_ind = check_independence(toy.alice_precut, {"r"}, adv);
      double eps_ver = 0.0;
      for (const auto& psi : spanning_inputs(toy.alice))
        eps_ver = std::max(
            eps_ver,
            check_sa_verifiability(toy.alice, toy.computation, adv, psi).epsilon);
      double bv = check_blind_verifiability(toy, adv);
      double bound = 2.0 * std::sqrt(2.0 * eps_ver) + eps_bl + eps_ind;
      worst = std::max(worst, bv - bound);
    }
  }
  r.epsilon = std::max(0.0, worst);
  r.pass = worst <= tol;
  return r;
}

SecurityReport suite_fk(int trials, double tol, std::uint64_t seed) {
  SecurityReport r = fk_conversion_check(trials, seed);
  r.tol = tol;
  r.pass = *r.epsilon <= tol;
  return r;
}

}  // namespace

const std::vector<SuiteSpec>& suite_specs() {
  static const std::vector<SuiteSpec> specs = {
      {"correctness", 10, 1e-9, "ubqc-correctness"},
      {"chain-equality", 4, 1e-9, "composable-blindness-chain"},
      {"blindness", 20, 1e-9, "standalone-blindness-factorization"},
      {"qotp", 20, 1e-9, "qotp-equality"},
      {"oneway", 10, 1e-12, "oneway-blindness"},
      {"metrics", 1000, 1e-9, "metric-two-sided-bound"},
      {"teleport", 20, 1e-9, "teleport-reduction-identity"},
      {"thm1", 50, 1e-6, "simulator-2eps-bound"},
      {"lemma1", 6, 1e-6, "construction-bound-lemma"},
      {"fk", 1000, 1e-9, "accept-projector-conversion"},
  };
  return specs;
}

bool is_suite(const std::string& name) {
  for (const auto& s : suite_specs())
    if (s.name == name) return true;
  return false;
}

SecurityReport run_suite(const std::string& name, const SuiteOptions& opt) {
  const SuiteSpec* spec = nullptr;
  for (const auto& s : suite_specs())
    if (s.name == name) spec = &s;
  if (!spec) throw std::invalid_argument("unknown suite: " + name);
  int n = opt.trials > 0 ? opt.trials : spec->default_trials;
  double t = opt.tol > 0 ? opt.tol : spec->default_tol;
  std::uint64_t seed = opt.seed;
  if (name == "correctness") return suite_correctness(opt, n, t, seed);
  if (name == "chain-equality") return suite_chain_equality(opt, n, t, seed);
  if (name == "blindness") return suite_blindness(opt, n, t, seed);
  if (name == "qotp") return suite_qotp(n, t, seed);
  if (name == "oneway") return suite_oneway(n, t, seed);
  if (name == "metrics") return suite_metrics(n, t, seed);
  if (name == "teleport") return suite_teleport(n, t, seed);
  if (name == "thm1") return suite_thm1(n, t, seed);
  if (name == "lemma1") return suite_lemma1(n, t, seed);
  return suite_fk(n, t, seed);
}

SecurityReport run_suite(const std::string& name, int trials, double tol,
                         std::uint64_t seed) {
  SuiteOptions o;
  o.trials = trials;
  o.tol = tol;
  o.seed = seed;
  return run_suite(name, o);
}

std::vector<SecurityReport> run_all(std::uint64_t seed) {
  std::vector<SecurityReport> out;
  SuiteOptions o;
  o.seed = seed;
  for (const auto& s : suite_specs()) out.push_back(run_suite(s.name, o));
  return out;
}

}  // namespace dqp
