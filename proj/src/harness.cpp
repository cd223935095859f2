#include "dqp/harness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <variant>

#include "dqp/engine.hpp"
#include "dqp/gates.hpp"
#include "dqp/metrics.hpp"
#include "dqp/resources.hpp"
#include "dqp/rng.hpp"

namespace dqp {
namespace {

DensityOperator pure_state(const Wires& w, const Vec& v) {
  return DensityOperator::from_state(QuantumState(w, v));
}

DensityOperator single_wire_state(const std::string& label, const Vec& v) {
  return pure_state(Wires(std::vector<Wire>{{label, static_cast<int>(v.size())}}), v);
}

Vec basis_vec(int value, int dim) {
  Vec v = Vec::Zero(dim);
  v(value) = 1.0;
  return v;
}

DensityOperator tensor_all(const std::vector<DensityOperator>& parts) {
  DensityOperator acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = tensor(acc, parts[i]);
  return acc;
}

DensityOperator scaled(const DensityOperator& a, double s) {
  return DensityOperator(DensityOperator::Unchecked{}, a.wires(), Mat(a.mat() * s));
}

// Permutes b into a's wire order and adds the matrices.
DensityOperator aligned_sum(const DensityOperator& a, const DensityOperator& b) {
  DensityOperator bb = b.permuted(a.wires().labels());
  return DensityOperator(DensityOperator::Unchecked{}, a.wires(),
                         Mat(a.mat() + bb.mat()));
}

// Projects on computational outcome `v` of wire `label`; the wire is removed
// and the result keeps the branch weight (subnormalized).
DensityOperator project_out(const DensityOperator& rho, const std::string& label,
                            int v) {
  Wires w = rho.wires();
  int pos = w.pos(label);
  int dim = w.at(pos).dim;
  Mat m = apply_op_mat(z_bra(v, dim), rho.mat(), w, {pos}, {});
  return DensityOperator(DensityOperator::Unchecked{}, w, m);
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

bool power_of_two(long d) { return d > 0 && (d & (d - 1)) == 0; }

std::vector<std::string> payload_labels_of(const KrausChannel& computation) {
  std::vector<std::string> ls;
  for (const auto& w : computation.out_wires) ls.push_back(w.label);
  return ls;
}

// Wires of `state` that are not protocol inputs: reference wires that ride
// along untouched.
std::vector<std::string> reference_labels(const DensityOperator& state,
                                          const PartyProgram& alice) {
  std::vector<std::string> refs;
  for (const auto& w : state.wires().list())
    if (!contains(alice.input_wires, w.label)) refs.push_back(w.label);
  return refs;
}

DensityOperator run_view(const PartyProgram& alice, const PartyProgram& adv,
                         const DensityOperator& input,
                         const std::vector<std::string>& keep) {
  RunResult r = run_interaction(alice, adv, input, RunMode::exact, 0);
  return r.output.marginal(keep);
}

Mat random_subnormalized(int dim, Rng& rng) {
  Mat g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = rng.complex_normal();
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho *= rng.uniform();
  return rho;
}

Mat random_normalized(int dim, Rng& rng) {
  Mat g(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c) g(r, c) = rng.complex_normal();
  Mat rho = g * g.adjoint();
  rho /= rho.trace().real();
  return rho;
}

// Re-labels a channel onto explicit qubit wires (dimensions must agree).
KrausChannel on_qubits(KrausChannel ch, const std::vector<std::string>& in,
                       const std::vector<std::string>& out) {
  std::vector<Wire> iw, ow;
  for (const auto& l : in) iw.push_back({l, 2});
  for (const auto& l : out) ow.push_back({l, 2});
  ch.in_wires = std::move(iw);
  ch.out_wires = std::move(ow);
  return ch;
}

}  // namespace

// ---------------------------------------------------------------------------
// Input families
// ---------------------------------------------------------------------------

std::vector<DensityOperator> spanning_inputs(const PartyProgram& alice) {
  std::vector<Vec> basis = {gates::zero(), gates::one(), gates::plus(),
                            gates::plus_theta(Angle8(2))};
  const int w = static_cast<int>(alice.input_wires.size());
  long combos = 1;
  for (int i = 0; i < w; ++i) combos *= 4;
  std::vector<DensityOperator> out;
  for (long c = 0; c < combos; ++c) {
    std::vector<DensityOperator> parts;
    long t = c;
    for (int i = w - 1; i >= 0; --i) {
      parts.push_back(single_wire_state(alice.input_wires[i], basis[t % 4]));
      t /= 4;
    }
    std::reverse(parts.begin(), parts.end());
    out.push_back(tensor_all(parts));
  }
  return out;
}

DensityOperator mixed_input(const PartyProgram& alice) {
  std::vector<Wire> ws;
  long d = 1;
  for (const auto& l : alice.input_wires) {
    ws.push_back({l, 2});
    d *= 2;
  }
  return DensityOperator(Wires(ws), Mat(Mat::Identity(d, d) / double(d)));
}

DensityOperator probe_input(const PartyProgram& alice) {
  std::vector<DensityOperator> parts;
  for (const auto& l : alice.input_wires)
    parts.push_back(pure_state(Wires(std::vector<Wire>{{l, 2}, {"ref_" + l, 2}}),
                               gates::epr()));
  return tensor_all(parts);
}

// ---------------------------------------------------------------------------
// Concrete protocols
// ---------------------------------------------------------------------------

VerifiableProtocol toy_protocol(int test_tenths) {
  if (test_tenths < 0 || test_tenths > 10)
    throw std::invalid_argument("test rate is given in tenths, 0..10");
  const int tt = test_tenths;
  KrausChannel comp =
      KrausChannel::from_unitary(gates::H(), {{"d", 2}}).with_labels({"d"}, {"r"});

  Mat swap2 = Mat::Zero(4, 4);
  swap2(0, 0) = 1;
  swap2(1, 2) = 1;
  swap2(2, 1) = 1;
  swap2(3, 3) = 1;

  auto build = [&](bool precut) {
    ProgramBuilder b(precut ? "trap_client_precut" : "trap_client");
    b.inputs({"d"});
    b.sample("g", 10);
    b.compute("is_test", 2, {"g"},
              [tt](const RegArgs& v) { return v[0] < tt ? 1 : 0; });
    b.sample("x1");
    b.sample("z1");
    b.sample("x2");
    b.prepare(OpPrepare::Kind::basis, {"t"}, "x2");
    b.unitary({"d"}, {"x1", "z1"}, [](const RegArgs& v) {
      Mat u = Mat::Identity(2, 2);
      if (v[1]) u = gates::Z() * u;
      if (v[0]) u = gates::X() * u;
      return u;
    });
    // Compute rounds swap the padded input onto the travel wire; test rounds
    // send the decoy and keep the input home.
    b.unitary({"d", "t"}, {"is_test"}, [swap2](const RegArgs& v) {
      return v[0] ? Mat(Mat::Identity(4, 4)) : swap2;
    });
    b.send({"t"});
    b.recv({"t2"});
    b.unitary({"d", "t2"}, {"is_test"}, [swap2](const RegArgs& v) {
      return v[0] ? Mat(Mat::Identity(4, 4)) : swap2;
    });
    b.unitary({"d"}, {"x1", "z1"}, [](const RegArgs& v) {
      Mat u = Mat::Identity(2, 2);
      if (v[0]) u = gates::X() * u;
      if (v[1]) u = gates::Z() * u;
      return u;
    });
    b.kraus(KrausChannel::from_unitary(gates::H(), {{"d", 2}})
                .with_labels({"d"}, {"r"}));
    b.measure_z({"t2"}, "md");
    b.compute("fail", 2, {"is_test", "md", "x2"},
              [](const RegArgs& v) { return v[0] ? (v[1] ^ v[2]) : 0; });
    if (precut) {
      b.prepare(OpPrepare::Kind::basis, {"abar"}, "fail");
      b.forget({"g", "is_test", "x1", "z1", "x2", "md", "fail"});
      b.outputs({"r", "abar"});
    } else {
      emit_verifiable_output(b, {{"r", 2}}, "fail");
      b.forget({"g", "is_test", "x1", "z1", "x2", "md", "fail"});
      b.outputs({kErrFlagWire, "r"});
    }
    return b.build();
  };
  return {build(false), build(true), "abar", comp};
}

PartyProgram cleartext_alice() {
  ProgramBuilder b("cleartext");
  b.inputs({"a"});
  b.send({"a"});
  b.outputs({});
  return b.build();
}

VerifiableProtocol always_accept_protocol(const PartyProgram& alice,
                                          const KrausChannel& computation) {
  PartyProgram full = alice;
  full.name += "_stub";
  full.ops.push_back(OpPrepare{OpPrepare::Kind::zero, {kErrFlagWire}, ""});
  full.output_wires.insert(full.output_wires.begin(), kErrFlagWire);
  PartyProgram pre = alice;
  pre.name += "_stub_precut";
  pre.ops.push_back(OpPrepare{OpPrepare::Kind::zero, {"abar"}, ""});
  pre.output_wires.push_back("abar");
  return {std::move(full), std::move(pre), "abar", computation};
}

MeasurementPattern random_pattern(int n, int m, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<Angle8>> angles(n);
  for (int i = 0; i < n; ++i)
    for (int y = 0; y < m; ++y)
      angles[i].push_back(Angle8(static_cast<int>(rng.uniform_int(8))));
  return make_pattern(n, m, std::move(angles));
}

// ---------------------------------------------------------------------------
// Adversary generators
// ---------------------------------------------------------------------------

PartyProgram random_adversary(const PartyProgram& counterpart, std::uint64_t seed) {
  Rng rng(seed);
  ProgramBuilder b("rand_adv_" + std::to_string(seed));
  std::vector<std::string> pool{"advp_a", "advp_b"};
  b.prepare(OpPrepare::Kind::zero, {"advp_a"});
  b.prepare(OpPrepare::Kind::zero, {"advp_b"});
  b.kraus(on_qubits(random_channel(4, 4, 2, rng.next_u64()), pool, pool));

  std::vector<RegId> regs;
  auto stir = [&](int count) {
    int k = std::min<int>(count, static_cast<int>(pool.size()));
    if (k == 0) return;
    std::vector<std::string> last(pool.end() - k, pool.end());
    b.kraus(on_qubits(random_channel(1L << k, 1L << k, 2, rng.next_u64()), last,
                      last));
  };

  int mi = 0;
  for (const MsgSig& sig : message_signature(counterpart)) {
    ++mi;
    std::string tag = std::to_string(mi);
    if (sig.outgoing) {  // counterpart sends; we receive
      if (!sig.classical) {
        std::vector<std::string> got;
        for (int j = 0; j < sig.wire_count; ++j)
          got.push_back("advq" + tag + "_" + std::to_string(j));
        b.recv(got);
        pool.insert(pool.end(), got.begin(), got.end());
        stir(3);
      } else if (power_of_two(sig.dim) &&
                 static_cast<int>(pool.size()) + sig.wire_count <= 6 && rng.bit()) {
        // Keep the classical value verbatim as basis wires.
        std::vector<std::string> got;
        for (int j = 0; j < sig.wire_count; ++j)
          got.push_back("advc" + tag + "_" + std::to_string(j));
        b.recv(got);
        pool.insert(pool.end(), got.begin(), got.end());
        stir(2);
      } else {
        RegId k = "advk" + tag;
        b.recv_classical(k, sig.dim);
        regs.push_back(k);
        if (!pool.empty()) {
          std::string w = pool[rng.uniform_int(pool.size())];
          std::uint64_t s2 = rng.next_u64();
          b.unitary({w}, {k}, [s2](const RegArgs& v) {
            std::uint64_t mix = s2 ^ (0x9e3779b97f4a7c15ULL * (v[0] + 1));
            return random_channel(2, 2, 1, mix).ops[0];
          });
        }
      }
    } else {  // counterpart expects a message
      if (sig.classical) {
        RegId v = "advv" + tag;
        if (!pool.empty() && rng.bit()) {
          std::string w = pool.back();
          pool.pop_back();
          b.measure_z({w}, v);
        } else {
          int c = static_cast<int>(rng.uniform_int(sig.dim));
          b.compute(v, sig.dim, {}, [c](const RegArgs&) { return c; });
        }
        b.send_classical(v, sig.dim);
        regs.push_back(v);
      } else {
        std::vector<std::string> out;
        for (int j = 0; j < sig.wire_count; ++j) {
          if (!pool.empty()) {
            if (rng.bit()) {
              out.push_back(pool.front());
              pool.erase(pool.begin());
            } else {
              out.push_back(pool.back());
              pool.pop_back();
            }
          } else {
            std::string f = "advf" + tag + "_" + std::to_string(j);
            b.prepare(OpPrepare::Kind::zero, {f});
            out.push_back(f);
          }
        }
        b.send(out);
      }
    }
  }
  if (!regs.empty()) b.forget(regs);
  b.outputs(pool);
  return b.build();
}

PartyProgram passthrough_adversary(const PartyProgram& counterpart) {
  ProgramBuilder b("passthrough");
  std::vector<std::string> kept;
  std::vector<RegId> regs;
  int mi = 0;
  for (const MsgSig& sig : message_signature(counterpart)) {
    ++mi;
    std::string tag = std::to_string(mi);
    if (sig.outgoing) {
      if (!sig.classical || power_of_two(sig.dim)) {
        std::vector<std::string> got;
        for (int j = 0; j < sig.wire_count; ++j)
          got.push_back("advkeep" + tag + "_" + std::to_string(j));
        b.recv(got);
        kept.insert(kept.end(), got.begin(), got.end());
      } else {
        RegId k = "advk" + tag;
        b.recv_classical(k, sig.dim);
        regs.push_back(k);
      }
    } else if (sig.classical) {
      RegId z = "advz" + tag;
      b.compute(z, sig.dim, {}, [](const RegArgs&) { return 0; });
      b.send_classical(z, sig.dim);
      regs.push_back(z);
    } else {
      std::vector<std::string> fresh;
      for (int j = 0; j < sig.wire_count; ++j) {
        fresh.push_back("advfresh" + tag + "_" + std::to_string(j));
        b.prepare(OpPrepare::Kind::zero, {fresh.back()});
      }
      b.send(fresh);
    }
  }
  if (!regs.empty()) b.forget(regs);
  b.outputs(kept);
  return b.build();
}

namespace {

// Measures every incoming qubit, keeps a basis copy, and resends/replies
// from the measured values.
PartyProgram measure_resend_adversary(const PartyProgram& counterpart) {
  ProgramBuilder b("measure_resend");
  std::vector<std::string> kept;
  std::vector<RegId> regs;
  std::vector<std::pair<RegId, int>> values;  // reg, wire count
  int mi = 0;
  for (const MsgSig& sig : message_signature(counterpart)) {
    ++mi;
    std::string tag = std::to_string(mi);
    if (sig.outgoing) {
      if (!sig.classical) {
        std::vector<std::string> got;
        for (int j = 0; j < sig.wire_count; ++j)
          got.push_back("advq" + tag + "_" + std::to_string(j));
        b.recv(got);
        RegId k = "advm" + tag;
        b.measure_z(got, k);
        std::vector<std::string> copy;
        for (int j = 0; j < sig.wire_count; ++j)
          copy.push_back("advcopy" + tag + "_" + std::to_string(j));
        b.prepare(OpPrepare::Kind::basis, copy, k);
        kept.insert(kept.end(), copy.begin(), copy.end());
        values.push_back({k, sig.wire_count});
        regs.push_back(k);
      } else if (power_of_two(sig.dim)) {
        std::vector<std::string> got;
        for (int j = 0; j < sig.wire_count; ++j)
          got.push_back("advc" + tag + "_" + std::to_string(j));
        b.recv(got);
        kept.insert(kept.end(), got.begin(), got.end());
      } else {
        RegId k = "advk" + tag;
        b.recv_classical(k, sig.dim);
        regs.push_back(k);
      }
    } else if (sig.classical) {
      RegId z = "advr" + tag;
      if (!values.empty()) {
        int d = sig.dim;
        b.compute(z, sig.dim, {values.back().first},
                  [d](const RegArgs& v) { return v[0] % d; });
      } else {
        b.compute(z, sig.dim, {}, [](const RegArgs&) { return 0; });
      }
      b.send_classical(z, sig.dim);
      regs.push_back(z);
    } else {
      std::vector<std::string> out;
      if (!values.empty() && values.back().second == sig.wire_count) {
        for (int j = 0; j < sig.wire_count; ++j)
          out.push_back("advrs" + tag + "_" + std::to_string(j));
        b.prepare(OpPrepare::Kind::basis, out, values.back().first);
      } else {
        for (int j = 0; j < sig.wire_count; ++j) {
          out.push_back("advrs" + tag + "_" + std::to_string(j));
          b.prepare(OpPrepare::Kind::zero, {out.back()});
        }
      }
      b.send(out);
    }
  }
  if (!regs.empty()) b.forget(regs);
  b.outputs(kept);
  return b.build();
}

// Keeps incoming states untouched and swaps fresh |+> states into the
// channel.
PartyProgram freshswap_adversary(const PartyProgram& counterpart) {
  ProgramBuilder b("freshswap");
  std::vector<std::string> kept;
  std::vector<RegId> regs;
  int mi = 0;
  for (const MsgSig& sig : message_signature(counterpart)) {
    ++mi;
    std::string tag = std::to_string(mi);
    if (sig.outgoing) {
      if (!sig.classical || power_of_two(sig.dim)) {
        std::vector<std::string> got;
        for (int j = 0; j < sig.wire_count; ++j)
          got.push_back("advq" + tag + "_" + std::to_string(j));
        b.recv(got);
        kept.insert(kept.end(), got.begin(), got.end());
      } else {
        RegId k = "advk" + tag;
        b.recv_classical(k, sig.dim);
        regs.push_back(k);
      }
    } else if (sig.classical) {
      RegId z = "advz" + tag;
      b.compute(z, sig.dim, {}, [](const RegArgs&) { return 0; });
      b.send_classical(z, sig.dim);
      regs.push_back(z);
    } else {
      std::vector<std::string> fresh;
      for (int j = 0; j < sig.wire_count; ++j) {
        fresh.push_back("advpl" + tag + "_" + std::to_string(j));
        b.prepare(OpPrepare::Kind::plus, {fresh.back()});
      }
      b.send(fresh);
    }
  }
  if (!regs.empty()) b.forget(regs);
  b.outputs(kept);
  return b.build();
}

}  // namespace

std::vector<AdversaryStrategy> strategy_pool(const PartyProgram& alice, int count,
                                             std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Wire> iw;
  for (const auto& l : alice.input_wires) iw.push_back({l, 2});
  iw.push_back({"sref", 2});
  Wires input_wires(iw);
  auto next_input = [&]() {
    Rng sub(rng.next_u64());
    long d = input_wires.total_dim();
    Vec v(d);
    for (long i = 0; i < d; ++i) v(i) = sub.complex_normal();
    v.normalize();
    return pure_state(input_wires, v);
  };
  std::vector<AdversaryStrategy> out;
  for (int i = 0; i < count; ++i) {
    PartyProgram bob;
    if (i == 0)
      bob = passthrough_adversary(alice);
    else if (i == 1)
      bob = measure_resend_adversary(alice);
    else if (i == 2)
      bob = freshswap_adversary(alice);
    else
      bob = random_adversary(alice, rng.next_u64());
    out.push_back({std::move(bob), next_input()});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Definition checkers
// ---------------------------------------------------------------------------

double check_sa_blindness(const PartyProgram& alice, const PartyProgram& adversary) {
  const std::vector<std::string>& keep = adversary.output_wires;
  if (keep.empty()) return 0.0;
  DensityOperator ref = run_view(alice, adversary, mixed_input(alice), keep);
  double worst = 0.0;
  for (const auto& psi : spanning_inputs(alice))
    worst = std::max(worst,
                     trace_distance(run_view(alice, adversary, psi, keep), ref));
  return worst;
}

double probe_factorization_defect(const PartyProgram& alice,
                                  const PartyProgram& adversary) {
  std::vector<std::string> refs;
  std::vector<Wire> refw;
  for (const auto& l : alice.input_wires) {
    refs.push_back("ref_" + l);
    refw.push_back({"ref_" + l, 2});
  }
  std::vector<std::string> keep = adversary.output_wires;
  keep.insert(keep.end(), refs.begin(), refs.end());
  DensityOperator joint = run_view(alice, adversary, probe_input(alice), keep);
  long d = Wires(refw).total_dim();
  DensityOperator mixed_refs(Wires(refw), Mat(Mat::Identity(d, d) / double(d)));
  DensityOperator cand =
      adversary.output_wires.empty()
          ? mixed_refs
          : tensor(joint.traced_out(refs), mixed_refs);
  return trace_distance(joint, cand);
}

VerifiabilityFit check_sa_verifiability(const PartyProgram& alice,
                                        const KrausChannel& computation,
                                        const PartyProgram& adversary,
                                        const DensityOperator& alice_input,
                                        const std::optional<DensityOperator>& bob_input) {
  DensityOperator input =
      bob_input ? tensor(alice_input, *bob_input) : alice_input;
  RunResult r = run_interaction(alice, adversary, input, RunMode::exact, 0);

  std::vector<std::string> payload = payload_labels_of(computation);
  std::vector<std::string> refs = reference_labels(alice_input, alice);
  std::vector<std::string> keep{kErrFlagWire};
  keep.insert(keep.end(), payload.begin(), payload.end());
  keep.insert(keep.end(), refs.begin(), refs.end());
  DensityOperator rho = r.output.marginal(keep);

  DensityOperator ok = tensor(single_wire_state(kErrFlagWire, gates::zero()),
                              apply_channel(alice_input, computation));
  std::vector<DensityOperator> parts;
  parts.push_back(single_wire_state(kErrFlagWire, gates::one()));
  for (const auto& w : computation.out_wires)
    parts.push_back(single_wire_state(w.label, basis_vec(0, w.dim)));
  if (!refs.empty()) parts.push_back(alice_input.traced_out(alice.input_wires));
  DensityOperator err = tensor_all(parts);

  std::vector<std::string> order = rho.wires().labels();
  Mat R = rho.mat();
  Mat OK = ok.permuted(order).mat();
  Mat ER = err.permuted(order).mat();
  auto f = [&](double p) { return trace_distance(Mat(p * OK + (1 - p) * ER), R, true); };

  double lo = 0.0, hi = 1.0;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
  double fc = f(c), fd = f(d);
  while (hi - lo > 1e-6) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - gr * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + gr * (hi - lo);
      fd = f(d);
    }
  }
  double p = (lo + hi) / 2.0;
  double eps = f(p);
  if (double f1 = f(1.0); f1 <= eps) {
    p = 1.0;
    eps = f1;
  }
  if (double f0 = f(0.0); f0 <= eps) {
    p = 0.0;
    eps = f0;
  }
  return {p, eps};
}

double check_independence(const PartyProgram& alice_precut,
                          const std::vector<std::string>& payload_labels,
                          const PartyProgram& adversary) {
  std::vector<std::string> keep;
  for (const auto& l : alice_precut.output_wires)
    if (!contains(payload_labels, l)) keep.push_back(l);
  keep.insert(keep.end(), adversary.output_wires.begin(),
              adversary.output_wires.end());
  if (keep.empty()) return 0.0;
  DensityOperator ref =
      run_view(alice_precut, adversary, mixed_input(alice_precut), keep);
  double worst = 0.0;
  for (const auto& psi : spanning_inputs(alice_precut))
    worst = std::max(
        worst, trace_distance(run_view(alice_precut, adversary, psi, keep), ref));
  return worst;
}

double check_blind_verifiability(const VerifiableProtocol& proto,
                                 const PartyProgram& adversary,
                                 const std::vector<DensityOperator>& extra_inputs) {
  const PartyProgram& alice = proto.alice;
  std::vector<std::string> payload = payload_labels_of(proto.computation);
  const std::vector<std::string>& blabels = adversary.output_wires;

  // One reference run of the pre-cut variant at the maximally mixed input:
  // projecting its view on the accept wire yields the two candidate branch
  // states of the counterparty (subnormalized by the branch weights).
  std::vector<std::string> keepref{proto.accept_wire};
  keepref.insert(keepref.end(), blabels.begin(), blabels.end());
  DensityOperator refv =
      run_view(proto.alice_precut, adversary, mixed_input(alice), keepref);
  DensityOperator phi_ok = project_out(refv, proto.accept_wire, 0);
  DensityOperator phi_err = project_out(refv, proto.accept_wire, 1);
  double q_ok = phi_ok.trace();
  double q_err = phi_err.trace();

  std::vector<DensityOperator> family = spanning_inputs(alice);
  family.push_back(probe_input(alice));
  family.insert(family.end(), extra_inputs.begin(), extra_inputs.end());

  double worst = 0.0;
  for (const auto& psi : family) {
    std::vector<std::string> refs = reference_labels(psi, alice);
    std::vector<std::string> keep{kErrFlagWire};
    keep.insert(keep.end(), payload.begin(), payload.end());
    keep.insert(keep.end(), refs.begin(), refs.end());
    keep.insert(keep.end(), blabels.begin(), blabels.end());
    DensityOperator real = run_view(alice, adversary, psi, keep);

    DensityOperator okpart =
        tensor(single_wire_state(kErrFlagWire, gates::zero()),
               apply_channel(psi, proto.computation));
    okpart = blabels.empty() ? scaled(okpart, q_ok) : tensor(okpart, phi_ok);

    std::vector<DensityOperator> parts;
    parts.push_back(single_wire_state(kErrFlagWire, gates::one()));
    for (const auto& w : proto.computation.out_wires)
      parts.push_back(single_wire_state(w.label, basis_vec(0, w.dim)));
    if (!refs.empty()) parts.push_back(psi.traced_out(alice.input_wires));
    DensityOperator errpart = tensor_all(parts);
    errpart = blabels.empty() ? scaled(errpart, q_err) : tensor(errpart, phi_err);

    DensityOperator ideal = aligned_sum(okpart, errpart);
    worst = std::max(worst, trace_distance(real, ideal, true));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Simulator construction
// ---------------------------------------------------------------------------

PartyProgram rename_program(const PartyProgram& prog, const std::string& prefix) {
  auto rl = [&prefix](const std::string& s) { return prefix + s; };
  auto rlv = [&prefix](std::vector<std::string> v) {
    for (auto& s : v) s = prefix + s;
    return v;
  };
  PartyProgram out;
  out.name = prefix + prog.name;
  out.input_wires = rlv(prog.input_wires);
  out.output_wires = rlv(prog.output_wires);
  for (const Op& op : prog.ops) {
    Op o = op;
    std::visit(
        [&](auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, OpSample>) {
            x.reg = rl(x.reg);
          } else if constexpr (std::is_same_v<T, OpCompute>) {
            x.dst = rl(x.dst);
            x.args = rlv(x.args);
          } else if constexpr (std::is_same_v<T, OpForget>) {
            x.regs = rlv(x.regs);
          } else if constexpr (std::is_same_v<T, OpPrepare>) {
            x.labels = rlv(x.labels);
            if (!x.reg.empty()) x.reg = rl(x.reg);
          } else if constexpr (std::is_same_v<T, OpUnitary>) {
            x.wires = rlv(x.wires);
            x.args = rlv(x.args);
          } else if constexpr (std::is_same_v<T, OpKraus>) {
            for (auto& w : x.ch.in_wires) w.label = rl(w.label);
            for (auto& w : x.ch.out_wires) w.label = rl(w.label);
          } else if constexpr (std::is_same_v<T, OpMeasureXY>) {
            x.wire = rl(x.wire);
            x.result = rl(x.result);
            x.args = rlv(x.args);
          } else if constexpr (std::is_same_v<T, OpMeasureZ>) {
            x.wires = rlv(x.wires);
            x.result = rl(x.result);
          } else if constexpr (std::is_same_v<T, OpDiscard>) {
            x.wires = rlv(x.wires);
          } else if constexpr (std::is_same_v<T, OpSend>) {
            x.wires = rlv(x.wires);
          } else if constexpr (std::is_same_v<T, OpSendClassical>) {
            x.reg = rl(x.reg);
          } else if constexpr (std::is_same_v<T, OpRecv>) {
            x.labels = rlv(x.labels);
          } else if constexpr (std::is_same_v<T, OpRecvClassical>) {
            x.dst = rl(x.dst);
          }
        },
        o);
    out.ops.push_back(std::move(o));
  }
  return out;
}

VerifiableProtocol ideal_from_verifiability(const VerifiableProtocol& proto) {
  const std::string pre = "sim_";
  PartyProgram renamed = rename_program(proto.alice, pre);
  std::vector<std::string> payload = payload_labels_of(proto.computation);
  std::vector<std::string> sim_payload;
  for (std::size_t i = 1; i < proto.alice.output_wires.size(); ++i)
    sim_payload.push_back(pre + proto.alice.output_wires[i]);

  std::vector<Op> head;
  for (const auto& l : renamed.input_wires)
    head.push_back(OpPrepare{OpPrepare::Kind::zero, {l}, ""});

  auto assemble = [&](const std::vector<Op>& tail_ops, std::vector<std::string> outs,
                      const std::string& name) {
    PartyProgram p;
    p.name = name;
    p.input_wires = proto.alice.input_wires;
    p.output_wires = std::move(outs);
    p.ops = head;
    p.ops.insert(p.ops.end(), renamed.ops.begin(), renamed.ops.end());
    p.ops.insert(p.ops.end(), tail_ops.begin(), tail_ops.end());
    return p;
  };

  ProgramBuilder t("tail");
  t.measure_z({pre + kErrFlagWire}, "csim");
  t.discard(sim_payload);
  t.kraus(proto.computation);
  emit_verifiable_output(t, proto.computation.out_wires, "csim");
  t.forget({"csim"});
  PartyProgram full =
      assemble(t.build().ops, proto.alice.output_wires, "ideal_" + proto.alice.name);

  ProgramBuilder t2("tail_precut");
  t2.discard(sim_payload);
  t2.kraus(proto.computation);
  std::vector<std::string> pre_outs = payload;
  pre_outs.push_back(pre + kErrFlagWire);
  PartyProgram precut = assemble(t2.build().ops, std::move(pre_outs),
                                 "ideal_" + proto.alice.name + "_precut");

  return {std::move(full), std::move(precut), pre + kErrFlagWire, proto.computation};
}

PartyProgram simulator_from_verifiability(const VerifiableProtocol& proto) {
  return ideal_from_verifiability(proto).alice;
}

double advantage_lower_bound(const PartyProgram& real_alice,
                             const PartyProgram& ideal_alice,
                             const std::vector<AdversaryStrategy>& strategies) {
  double worst = 0.0;
  for (const auto& s : strategies) {
    RunResult a = run_interaction(real_alice, s.bob, s.input, RunMode::exact, 0);
    RunResult b = run_interaction(ideal_alice, s.bob, s.input, RunMode::exact, 0);
    worst = std::max(worst, trace_distance(a.output, b.output));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Reduction identities and metric reports
// ---------------------------------------------------------------------------

double teleport_reduction_check(const KrausChannel& channel, int n,
                                const DensityOperator& psi) {
  if (n < 1 || n > static_cast<int>(channel.in_wires.size()))
    throw std::invalid_argument("hand-off count out of range");
  for (int i = 0; i < n; ++i)
    if (channel.in_wires[i].dim != 2)
      throw std::invalid_argument("hand-off wires must be qubits");

  DensityOperator direct = apply_channel(psi, channel);

  Wires moved_wires = psi.wires();
  for (int i = 0; i < n; ++i)
    moved_wires = moved_wires.renamed(channel.in_wires[i].label,
                                      "tele_s" + std::to_string(i));
  DensityOperator moved(DensityOperator::Unchecked{}, moved_wires, psi.mat());

  std::vector<DensityOperator> parts;
  for (int i = 0; i < n; ++i)
    parts.push_back(pure_state(
        Wires(std::vector<Wire>{{"tele_q" + std::to_string(i), 2},
                                {channel.in_wires[i].label, 2}}),
        gates::epr()));
  parts.push_back(moved);
  DensityOperator out = apply_channel(tensor_all(parts), channel);

  Mat bra = gates::epr().adjoint();
  Mat om = out.mat();
  Wires ow = out.wires();
  for (int i = 0; i < n; ++i) {
    std::vector<int> tg = ow.positions(
        {"tele_q" + std::to_string(i), "tele_s" + std::to_string(i)});
    om = apply_op_mat(bra, om, ow, tg, {});
    om *= 4.0;
  }
  DensityOperator scaled_back(DensityOperator::Unchecked{}, ow, om);
  return trace_distance(scaled_back, direct, true);
}

SecurityReport metric_lemma_check(int samples, int dim, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Mat a = random_subnormalized(dim, rng);
    Mat b = random_subnormalized(dim, rng);
    double dbar = trace_distance(a, b, true);
    double p = purified_distance(a, b);
    worst = std::max(worst, dbar - p);
    worst = std::max(worst, p - std::sqrt(2.0 * dbar));
  }
  SecurityReport r;
  r.check = "metrics";
  r.epsilon = std::max(0.0, worst);
  r.pass = worst <= 1e-9;
  r.trials = samples;
  r.seed = seed;
  r.tol = 1e-9;
  r.citation = "metric-two-sided-bound";
  return r;
}

SecurityReport fk_conversion_check(int samples, std::uint64_t seed) {
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    Mat u = random_channel(2, 2, 1, rng.next_u64()).ops[0];
    Vec psi(4);
    for (int j = 0; j < 4; ++j) psi(j) = rng.complex_normal();
    psi.normalize();
    double p = (i == 0) ? 1.0 : (i == 1) ? 0.0 : rng.uniform();

    Mat u_on_a = kron(u, Mat(Mat::Identity(2, 2)));
    Vec target = u_on_a * psi;  // the correct output, still on (payload, ref)
    Mat sigma = (i == 0) ? Mat(target * target.adjoint()) : random_normalized(4, rng);

    // Space: accept flag (2) x payload (2) x reference (2); the flagged-error
    // state is |1,0> on (flag, payload).
    Mat psir = Mat::Zero(2, 2);
    for (int rr = 0; rr < 2; ++rr)
      for (int cc = 0; cc < 2; ++cc)
        for (int aa = 0; aa < 2; ++aa)
          psir(rr, cc) += psi(2 * aa + rr) * std::conj(psi(2 * aa + cc));

    Mat rho = Mat::Zero(8, 8);
    rho.block(0, 0, 4, 4) = p * sigma;
    rho.block(4, 4, 2, 2) += (1.0 - p) * psir;

    Vec good = Vec::Zero(8);
    good.segment(0, 4) = target;
    Mat proj = Mat::Identity(8, 8);
    proj -= good * good.adjoint();
    proj(4, 4) -= 1.0;
    proj(5, 5) -= 1.0;

    double mass = std::real((proj * rho).trace());
    double lhs = p * trace_distance(sigma, Mat(target * target.adjoint()));
    worst = std::max(worst, lhs - std::sqrt(std::max(0.0, mass)));
  }
  SecurityReport r;
  r.check = "fk";
  r.epsilon = std::max(0.0, worst);
  r.pass = worst <= 1e-9;
  r.trials = samples;
  r.seed = seed;
  r.tol = 1e-9;
  r.citation = "accept-projector-conversion";
  return r;
}

}  // namespace dqp
