#include "dqp/ubqc.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "dqp/gates.hpp"

namespace dqp {
namespace {

std::string row_col(const char* prefix, int x, int y) {
  return std::string(prefix) + std::to_string(x) + "_" + std::to_string(y);
}
std::string in_wire(int x) { return "in" + std::to_string(x); }
std::string out_wire(int x) { return "out" + std::to_string(x); }
std::string s_reg(VertexId v) { return row_col("s", v.x, v.y); }
std::string i_reg(int x) { return "i" + std::to_string(x); }

std::vector<std::string> in_wires(int n) {
  std::vector<std::string> ws;
  for (int x = 1; x <= n; ++x) ws.push_back(in_wire(x));
  return ws;
}
std::vector<std::string> out_wires(int n) {
  std::vector<std::string> ws;
  for (int x = 1; x <= n; ++x) ws.push_back(out_wire(x));
  return ws;
}

// The pad bit of row x folds into the first two columns' angles; earlier
// outcomes then set the sign and the pi offset.
int dressed_angle(int base_k, int y, int i_bit, int sx, int sz) {
  Angle8 phi(base_k);
  if (y == 0)
    phi = otp_compensate(phi, Angle8(0), i_bit).first;
  else if (y == 1)
    phi = otp_compensate(Angle8(0), phi, i_bit).second;
  return adapt_angle(phi, sx, sz).k();
}

// When to drop each outcome/pad register: positions are indexed in
// measurement order t = y*n + (x-1), the final correction step is t = n*m.
// A register is forgotten right after its last consumer, keeping the branch
// ensemble as small as the dependency structure allows.
struct ParitySchedule {
  int correction_step = 0;
  std::map<std::string, int> last_use;

  explicit ParitySchedule(const MeasurementPattern& pat) {
    correction_step = pat.n * pat.m;
    for (int y = 0; y < pat.m; ++y)
      for (int x = 1; x <= pat.n; ++x) {
        int t = y * pat.n + (x - 1);
        raise(s_reg({x, y}), t);
        if (y <= 1) raise(i_reg(x), t);
        for (const auto& v : pat.x_deps[x - 1][y]) raise(s_reg(v), t);
        for (const auto& v : pat.z_deps[x - 1][y]) raise(s_reg(v), t);
      }
    for (int x = 1; x <= pat.n; ++x) {
      for (const auto& v : pat.output_x_deps[x - 1]) raise(s_reg(v), correction_step);
      for (const auto& v : pat.output_z_deps[x - 1]) raise(s_reg(v), correction_step);
      if (pat.m == 1) raise(i_reg(x), correction_step);
    }
  }

  void raise(const std::string& reg, int t) {
    auto [it, fresh] = last_use.emplace(reg, t);
    if (!fresh && it->second < t) it->second = t;
  }

  std::vector<std::string> dying_at(int t) const {
    std::vector<std::string> regs;
    for (const auto& [reg, u] : last_use)
      if (u == t) regs.push_back(reg);
    return regs;
  }
};

// Static facts about one measured position, captured by value inside the
// angle-computing closures: base angle, column, whether the pad bit joins the
// dressing, and how many X/Z parity inputs follow it in the argument list.
struct PosInfo {
  int x = 1;
  int y = 0;
  int t = 0;
  int base_k = 0;
  bool has_i = false;
  int nx = 0;
  int nz = 0;
};

PosInfo pos_info(const MeasurementPattern& pat, int x, int y) {
  PosInfo p;
  p.x = x;
  p.y = y;
  p.t = y * pat.n + (x - 1);
  p.base_k = pat.angles[x - 1][y].k();
  p.has_i = (y <= 1);
  p.nx = static_cast<int>(pat.x_deps[x - 1][y].size());
  p.nz = static_cast<int>(pat.z_deps[x - 1][y].size());
  return p;
}

// Argument slots shared by every version: optional pad bit, then the X and Z
// parity outcomes. `off` is where they start.
std::vector<RegId> dep_args(const MeasurementPattern& pat, const PosInfo& p) {
  std::vector<RegId> args;
  if (p.has_i) args.push_back(i_reg(p.x));
  for (const auto& v : pat.x_deps[p.x - 1][p.y]) args.push_back(s_reg(v));
  for (const auto& v : pat.z_deps[p.x - 1][p.y]) args.push_back(s_reg(v));
  return args;
}

int dressed_from_args(const PosInfo& p, const RegArgs& v, int off) {
  int i = p.has_i ? v[off] : 0;
  int d = off + (p.has_i ? 1 : 0);
  int sx = 0;
  for (int j = 0; j < p.nx; ++j) sx ^= v[d + j];
  int sz = 0;
  for (int j = 0; j < p.nz; ++j) sz ^= v[d + p.nx + j];
  return dressed_angle(p.base_k, p.y, i, sx, sz);
}

int xor_bits(const RegArgs& v) { return v[0] ^ v[1]; }

// Receive the final column into out1..outN.
void emit_recv_outputs(ProgramBuilder& b, int n) { b.recv(out_wires(n)); }

// Undo the accumulated byproduct Paulis on each output qubit: X^{sx} first,
// then Z^{sz}; with a single measured column the pad bit of the row joins the
// Z parity, since its pi shift lands on the output column.
void emit_corrections(ProgramBuilder& b, const MeasurementPattern& pat,
                      const ParitySchedule& sched) {
  for (int x = 1; x <= pat.n; ++x) {
    bool pad_flip = (pat.m == 1);
    int nx = static_cast<int>(pat.output_x_deps[x - 1].size());
    int nz = static_cast<int>(pat.output_z_deps[x - 1].size());
    std::vector<RegId> args;
    if (pad_flip) args.push_back(i_reg(x));
    for (const auto& v : pat.output_x_deps[x - 1]) args.push_back(s_reg(v));
    for (const auto& v : pat.output_z_deps[x - 1]) args.push_back(s_reg(v));
    b.unitary({out_wire(x)}, args, [pad_flip, nx, nz](const RegArgs& v) {
      int off = pad_flip ? 1 : 0;
      int sx = 0;
      for (int j = 0; j < nx; ++j) sx ^= v[off + j];
      int sz = pad_flip ? v[0] : 0;
      for (int j = 0; j < nz; ++j) sz ^= v[off + nx + j];
      Mat u = Mat::Identity(2, 2);
      if (sx) u = gates::X() * u;
      if (sz) u = gates::Z() * u;
      return u;
    });
  }
  auto leftovers = sched.dying_at(sched.correction_step);
  if (!leftovers.empty()) b.forget(leftovers);
}

PartyProgram alice_v1(const MeasurementPattern& pat) {
  ParitySchedule sched(pat);
  ProgramBuilder b("alice");
  b.inputs(in_wires(pat.n)).outputs(out_wires(pat.n));

  // Pad and ship the input column: X^i then Z_theta on each qubit.
  for (int x = 1; x <= pat.n; ++x) {
    b.sample(i_reg(x));
    b.sample(row_col("th", x, 0), 8);
    b.unitary({in_wire(x)}, {i_reg(x), row_col("th", x, 0)}, [](const RegArgs& v) {
      Mat u = Mat::Identity(2, 2);
      if (v[0]) u = gates::X() * u;
      return Mat(gates::z_phase(Angle8(v[1])) * u);
    });
    b.send({in_wire(x)});
  }
  // Remaining measured columns as fresh rotated qubits.
  for (int y = 1; y < pat.m; ++y)
    for (int x = 1; x <= pat.n; ++x) {
      b.sample(row_col("th", x, y), 8);
      b.prepare(OpPrepare::Kind::plus_theta, {row_col("w", x, y)}, row_col("th", x, y));
      b.send({row_col("w", x, y)});
    }
  // Instruction rounds: delta = dressed angle + theta + pi*r, outcome
  // flipped back when r = 1.
  for (int y = 0; y < pat.m; ++y)
    for (int x = 1; x <= pat.n; ++x) {
      PosInfo p = pos_info(pat, x, y);
      std::string th = row_col("th", x, y);
      std::string r = row_col("r", x, y);
      std::string dl = row_col("dl", x, y);
      std::string sr = row_col("sr", x, y);
      b.sample(r);
      std::vector<RegId> args{th, r};
      for (auto& a : dep_args(pat, p)) args.push_back(std::move(a));
      b.compute(dl, 8, args, [p](const RegArgs& v) {
        return (dressed_from_args(p, v, 2) + v[0] + 4 * v[1]) % 8;
      });
      b.send_classical(dl, 8);
      b.recv_classical(sr, 2);
      b.compute(s_reg({x, y}), 2, {sr, r}, xor_bits);
      b.forget({sr, th, r, dl});
      auto dying = sched.dying_at(p.t);
      if (!dying.empty()) b.forget(dying);
    }
  emit_recv_outputs(b, pat.n);
  emit_corrections(b, pat, sched);
  return b.build();
}

PartyProgram alice_v2(const MeasurementPattern& pat) {
  ParitySchedule sched(pat);
  ProgramBuilder b("alice");
  b.inputs(in_wires(pat.n)).outputs(out_wires(pat.n));

  // Input column: send a pair half, rotate the input, teleport it through
  // the kept half. The two outcomes become the pad bit and the flip bit.
  for (int x = 1; x <= pat.n; ++x) {
    b.prepare(OpPrepare::Kind::epr, {row_col("t", x, 0), row_col("h", x, 0)});
    b.send({row_col("h", x, 0)});
    b.sample(row_col("th", x, 0), 8);
    b.unitary({in_wire(x)}, {row_col("th", x, 0)},
              [](const RegArgs& v) { return Mat(gates::z_phase(Angle8(v[0]))); });
    b.unitary({in_wire(x), row_col("t", x, 0)}, gates::CNOT());
    b.measure_z({row_col("t", x, 0)}, i_reg(x));
    b.unitary({in_wire(x)}, gates::H());
    b.measure_z({in_wire(x)}, row_col("r", x, 0));
  }
  // Later columns: steer each sent half into a rotated state by measuring
  // the kept half after Z_theta' and H.
  for (int y = 1; y < pat.m; ++y)
    for (int x = 1; x <= pat.n; ++x) {
      b.prepare(OpPrepare::Kind::epr, {row_col("t", x, y), row_col("h", x, y)});
      b.send({row_col("h", x, y)});
      b.sample(row_col("th", x, y), 8);
      b.unitary({row_col("t", x, y)}, {row_col("th", x, y)},
                [](const RegArgs& v) { return Mat(gates::z_phase(Angle8(v[0]))); });
      b.unitary({row_col("t", x, y)}, gates::H());
      b.measure_z({row_col("t", x, y)}, row_col("r", x, y));
    }
  // Instruction rounds: delta = dressed angle + theta' (sign-flipped by the
  // pad bit on the teleported column), outcomes flipped by r.
  for (int y = 0; y < pat.m; ++y)
    for (int x = 1; x <= pat.n; ++x) {
      PosInfo p = pos_info(pat, x, y);
      std::string th = row_col("th", x, y);
      std::string dl = row_col("dl", x, y);
      std::string sr = row_col("sr", x, y);
      std::vector<RegId> args{th};
      for (auto& a : dep_args(pat, p)) args.push_back(std::move(a));
      b.compute(dl, 8, args, [p](const RegArgs& v) {
        int i = p.has_i ? v[1] : 0;
        int te = (p.y == 0 && i) ? (8 - v[0]) % 8 : v[0];
        return (dressed_from_args(p, v, 1) + te) % 8;
      });
      b.send_classical(dl, 8);
      b.recv_classical(sr, 2);
      b.compute(s_reg({x, y}), 2, {sr, row_col("r", x, y)}, xor_bits);
      b.forget({sr, th, row_col("r", x, y), dl});
      auto dying = sched.dying_at(p.t);
      if (!dying.empty()) b.forget(dying);
    }
  emit_recv_outputs(b, pat.n);
  emit_corrections(b, pat, sched);
  return b.build();
}

// Shared by version 3 and the simulated client: given the instruction dl and
// the dressing inputs, the compensating rotation applied to the kept qubit,
// sign-flipped by the pad bit on the input column.
std::function<int(const RegArgs&)> residual_rotation(PosInfo p) {
  return [p](const RegArgs& v) {
    int base = (v[0] + 8 - dressed_from_args(p, v, 1)) % 8;
    int i = p.has_i ? v[1] : 0;
    return (p.y == 0 && i) ? (8 - base) % 8 : base;
  };
}

// One position of the delayed client's local processing: compensate, rotate,
// measure, fold the flip bit into the outcome.
void emit_delayed_position(ProgramBuilder& b, const MeasurementPattern& pat,
                           const ParitySchedule& sched, int x, int y) {
  PosInfo p = pos_info(pat, x, y);
  std::string dl = row_col("dl", x, y);
  std::string sr = row_col("sr", x, y);
  std::string tp = row_col("tp", x, y);
  std::string r = row_col("r", x, y);
  std::string wire = (y == 0) ? in_wire(x) : row_col("t", x, y);
  std::vector<RegId> args{dl};
  for (auto& a : dep_args(pat, p)) args.push_back(std::move(a));
  b.compute(tp, 8, args, residual_rotation(p));
  b.unitary({wire}, {tp},
            [](const RegArgs& v) { return Mat(gates::z_phase(Angle8(v[0]))); });
  b.unitary({wire}, gates::H());
  b.measure_z({wire}, r);
  b.compute(s_reg({x, y}), 2, {sr, r}, xor_bits);
  b.forget({sr, dl, tp, r});
  auto dying = sched.dying_at(p.t);
  if (!dying.empty()) b.forget(dying);
}

PartyProgram alice_v3(const MeasurementPattern& pat) {
  ParitySchedule sched(pat);
  ProgramBuilder b("alice");
  b.inputs(in_wires(pat.n)).outputs(out_wires(pat.n));

  // Input column: send a pair half, fold the input onto the kept half, and
  // read off the pad bit; the rotation happens later.
  for (int x = 1; x <= pat.n; ++x) {
    b.prepare(OpPrepare::Kind::epr, {row_col("t", x, 0), row_col("h", x, 0)});
    b.send({row_col("h", x, 0)});
    b.unitary({in_wire(x), row_col("t", x, 0)}, gates::CNOT());
    b.measure_z({row_col("t", x, 0)}, i_reg(x));
  }
  // Later columns: bare pair halves, nothing touched yet.
  for (int y = 1; y < pat.m; ++y)
    for (int x = 1; x <= pat.n; ++x) {
      b.prepare(OpPrepare::Kind::epr, {row_col("t", x, y), row_col("h", x, y)});
      b.send({row_col("h", x, y)});
    }
  // Instruction rounds: the instruction is drawn uniformly first; the kept
  // qubit is then rotated by instruction minus intent and measured.
  for (int y = 0; y < pat.m; ++y)
    for (int x = 1; x <= pat.n; ++x) {
      std::string dl = row_col("dl", x, y);
      b.sample(dl, 8);
      b.send_classical(dl, 8);
      b.recv_classical(row_col("sr", x, y), 2);
      emit_delayed_position(b, pat, sched, x, y);
    }
  emit_recv_outputs(b, pat.n);
  emit_corrections(b, pat, sched);
  return b.build();
}

void check_grid(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("grid must be at least 1x1");
}

}  // namespace

PartyProgram ubqc_alice(int version, const MeasurementPattern& pattern) {
  pattern.validate();
  switch (version) {
    case 1: return alice_v1(pattern);
    case 2: return alice_v2(pattern);
    case 3: return alice_v3(pattern);
    default: throw std::invalid_argument("ubqc_alice: version must be 1, 2 or 3");
  }
}

PartyProgram ubqc_bob_honest(int n, int m) {
  check_grid(n, m);
  ProgramBuilder b("bob");
  auto w = [](int x, int y) { return row_col("b", x, y); };

  for (int y = 0; y < m; ++y)
    for (int x = 1; x <= n; ++x) b.recv({w(x, y)});
  for (int x = 1; x <= n; ++x) b.prepare(OpPrepare::Kind::plus, {w(x, m)});

  // Entangling is deferred: each edge is applied just before the first
  // measurement touching an endpoint, so qubits of later columns stay
  // untouched as long as possible. Edges entirely inside the final column
  // are applied right before that column is sent.
  BrickworkGraph g = BrickworkGraph::build(n, m);
  auto step = [&](VertexId v) { return v.y == m ? n * m : v.y * n + (v.x - 1); };
  std::map<int, std::vector<std::pair<VertexId, VertexId>>> edges_at;
  for (const auto& e : g.edges)
    edges_at[std::min(step(e.first), step(e.second))].push_back(e);

  for (int y = 0; y < m; ++y)
    for (int x = 1; x <= n; ++x) {
      int t = y * n + (x - 1);
      std::string d = row_col("bd", x, y);
      std::string s = row_col("bs", x, y);
      b.recv_classical(d, 8);
      for (const auto& e : edges_at[t])
        b.unitary({w(e.first.x, e.first.y), w(e.second.x, e.second.y)}, gates::CZ());
      b.measure_xy(w(x, y), s, {d}, [](const RegArgs& v) { return Angle8(v[0]); });
      b.send_classical(s, 2);
      b.forget({d, s});
    }
  for (const auto& e : edges_at[n * m])
    b.unitary({w(e.first.x, e.first.y), w(e.second.x, e.second.y)}, gates::CZ());

  std::vector<std::string> final_column;
  for (int x = 1; x <= n; ++x) final_column.push_back(w(x, m));
  b.send(final_column);
  return b.build();
}

PartyProgram ubqc_simulator(int n, int m) {
  check_grid(n, m);
  ProgramBuilder b("sim");
  std::vector<std::string> kept;
  for (int y = 0; y < m; ++y)
    for (int x = 1; x <= n; ++x) {
      b.prepare(OpPrepare::Kind::epr, {row_col("t", x, y), row_col("h", x, y)});
      b.send({row_col("h", x, y)});
      kept.push_back(row_col("t", x, y));
    }
  for (int y = 0; y < m; ++y)
    for (int x = 1; x <= n; ++x) {
      b.sample(row_col("dl", x, y), 8);
      b.send_classical(row_col("dl", x, y), 8);
      b.recv_classical(row_col("sr", x, y), 2);
    }
  emit_recv_outputs(b, n);
  for (int y = 0; y < m; ++y)
    for (int x = 1; x <= n; ++x) b.forget({row_col("dl", x, y), row_col("sr", x, y)});
  for (int x = 1; x <= n; ++x) kept.push_back(out_wire(x));
  b.outputs(kept);
  return b.build();
}

PartyProgram ubqc_simulated_alice(const MeasurementPattern& pattern) {
  pattern.validate();
  ParitySchedule sched(pattern);
  ProgramBuilder b("alice");
  b.inputs(in_wires(pattern.n)).outputs(out_wires(pattern.n));

  // Grid-size-only half: pair halves out, uniform instructions out, outcome
  // bits and the final column in.
  for (int y = 0; y < pattern.m; ++y)
    for (int x = 1; x <= pattern.n; ++x) {
      b.prepare(OpPrepare::Kind::epr, {row_col("t", x, y), row_col("h", x, y)});
      b.send({row_col("h", x, y)});
    }
  for (int y = 0; y < pattern.m; ++y)
    for (int x = 1; x <= pattern.n; ++x) {
      b.sample(row_col("dl", x, y), 8);
      b.send_classical(row_col("dl", x, y), 8);
      b.recv_classical(row_col("sr", x, y), 2);
    }
  emit_recv_outputs(b, pattern.n);

  // Pattern-aware half, all local: teleport the inputs onto the column-0
  // halves, then process every position as the delayed client would.
  for (int x = 1; x <= pattern.n; ++x) {
    b.unitary({in_wire(x), row_col("t", x, 0)}, gates::CNOT());
    b.measure_z({row_col("t", x, 0)}, i_reg(x));
  }
  for (int y = 0; y < pattern.m; ++y)
    for (int x = 1; x <= pattern.n; ++x) emit_delayed_position(b, pattern, sched, x, y);
  emit_corrections(b, pattern, sched);
  return b.build();
}

}  // namespace dqp
