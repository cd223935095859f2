#pragma once
// Straight-line interactive programs for two-party protocol runs.
//
// A party is a flat list of ops over named classical registers and named
// wires. Classical control flow is expressed through register-parameterized
// gates and measurements rather than branching ops, so a program's message
// schedule (the sequence of send/receive ops and their shapes) is a static
// property; the engine checks the two parties' schedules against each other
// before running.
//
// Wire labels are global to a run. By convention each party prefixes its own
// labels ("a_...", "b_...") and receive ops rename incoming wires into the
// receiver's namespace.

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "dqp/angle8.hpp"
#include "dqp/channel.hpp"

namespace dqp {

using RegId = std::string;
using RegArgs = std::vector<int>;

// Uniformly random register in {0..dim-1}. Sampling is lazy: the branch split
// happens the first time the value is read.
struct OpSample {
  RegId reg;
  int dim = 2;
};

// dst = fn(args); dst ranges over {0..dim-1}.
struct OpCompute {
  RegId dst;
  int dim = 2;
  std::vector<RegId> args;
  std::function<int(const RegArgs&)> fn;
};

// Marginalize registers out of the run (merging branches that now agree).
struct OpForget {
  std::vector<RegId> regs;
};

// Fresh wires in a generator state, materialized lazily on first touch.
// zero/plus: one label. plus_theta: one label, angle pi/4 * reg. epr: two
// labels. basis: the labels hold the register value in binary, first label
// most significant.
struct OpPrepare {
  enum class Kind { zero, plus, plus_theta, basis, epr };
  Kind kind = Kind::zero;
  std::vector<std::string> labels;
  RegId reg;
};

// gate(args) applied to the listed wires (targets in list order).
struct OpUnitary {
  std::vector<std::string> wires;
  std::vector<RegId> args;
  std::function<Mat(const RegArgs&)> gate;
};

// Channel applied to its label-bound wires.
struct OpKraus {
  KrausChannel ch;
};

// XY-plane measurement of one wire at angle(args); outcome bit lands in
// `result` and the wire is removed.
struct OpMeasureXY {
  std::string wire;
  RegId result;
  std::vector<RegId> args;
  std::function<Angle8(const RegArgs&)> angle;
};

// Joint computational measurement; `result` holds the big-endian value and
// the wires are removed.
struct OpMeasureZ {
  std::vector<std::string> wires;
  RegId result;
};

struct OpDiscard {
  std::vector<std::string> wires;
};

// Quantum message: wires leave this party.
struct OpSend {
  std::vector<std::string> wires;
};

// Classical message of a register value in {0..dim-1}.
struct OpSendClassical {
  RegId reg;
  int dim = 2;
};

// Claim the next incoming quantum message, renaming its wires. A classical
// message may also be claimed this way; it arrives as computational-basis
// wires (one qubit per bit, big-endian), which is how a quantum adversary
// sees classical traffic.
struct OpRecv {
  std::vector<std::string> labels;
};

// Claim the next incoming message as classical data. A quantum message is
// measured in the computational basis to produce the value.
struct OpRecvClassical {
  RegId dst;
  int dim = 2;
};

using Op = std::variant<OpSample, OpCompute, OpForget, OpPrepare, OpUnitary, OpKraus,
                        OpMeasureXY, OpMeasureZ, OpDiscard, OpSend, OpSendClassical,
                        OpRecv, OpRecvClassical>;

struct PartyProgram {
  std::string name;
  std::vector<Op> ops;
  // Wires this party expects to find in the run's initial state.
  std::vector<std::string> input_wires;
  // Wires this party declares as protocol output (kept at finalize).
  std::vector<std::string> output_wires;
};

// One entry per message in program order.
struct MsgSig {
  bool outgoing = false;
  bool classical = false;
  long dim = 2;  // value range (classical) or joint wire dimension (quantum)
  int wire_count = 1;
  friend bool operator==(const MsgSig&, const MsgSig&) = default;
};

std::vector<MsgSig> message_signature(const PartyProgram& p);

// Throws std::invalid_argument when the two parties' message sequences cannot
// line up (per-direction counts or message capacities differ).
void check_schedules_compatible(const PartyProgram& a, const PartyProgram& b);

// Convenience builder so protocol constructors read top to bottom.
class ProgramBuilder {
 public:
  explicit ProgramBuilder(std::string name) { p_.name = std::move(name); }

  ProgramBuilder& inputs(std::vector<std::string> wires) {
    p_.input_wires = std::move(wires);
    return *this;
  }
  ProgramBuilder& outputs(std::vector<std::string> wires) {
    p_.output_wires = std::move(wires);
    return *this;
  }
  ProgramBuilder& sample(RegId reg, int dim = 2) {
    p_.ops.push_back(OpSample{std::move(reg), dim});
    return *this;
  }
  ProgramBuilder& compute(RegId dst, int dim, std::vector<RegId> args,
                          std::function<int(const RegArgs&)> fn) {
    p_.ops.push_back(OpCompute{std::move(dst), dim, std::move(args), std::move(fn)});
    return *this;
  }
  ProgramBuilder& forget(std::vector<RegId> regs) {
    p_.ops.push_back(OpForget{std::move(regs)});
    return *this;
  }
  ProgramBuilder& prepare(OpPrepare::Kind kind, std::vector<std::string> labels,
                          RegId reg = {}) {
    p_.ops.push_back(OpPrepare{kind, std::move(labels), std::move(reg)});
    return *this;
  }
  ProgramBuilder& unitary(std::vector<std::string> wires, Mat fixed) {
    p_.ops.push_back(OpUnitary{std::move(wires), {},
                               [m = std::move(fixed)](const RegArgs&) { return m; }});
    return *this;
  }
  ProgramBuilder& unitary(std::vector<std::string> wires, std::vector<RegId> args,
                          std::function<Mat(const RegArgs&)> gate) {
    p_.ops.push_back(OpUnitary{std::move(wires), std::move(args), std::move(gate)});
    return *this;
  }
  ProgramBuilder& kraus(KrausChannel ch) {
    p_.ops.push_back(OpKraus{std::move(ch)});
    return *this;
  }
  ProgramBuilder& measure_xy(std::string wire, RegId result, Angle8 fixed) {
    p_.ops.push_back(OpMeasureXY{std::move(wire), std::move(result), {},
                                 [fixed](const RegArgs&) { return fixed; }});
    return *this;
  }
  ProgramBuilder& measure_xy(std::string wire, RegId result, std::vector<RegId> args,
                             std::function<Angle8(const RegArgs&)> angle) {
    p_.ops.push_back(OpMeasureXY{std::move(wire), std::move(result), std::move(args),
                                 std::move(angle)});
    return *this;
  }
  ProgramBuilder& measure_z(std::vector<std::string> wires, RegId result) {
    p_.ops.push_back(OpMeasureZ{std::move(wires), std::move(result)});
    return *this;
  }
  ProgramBuilder& discard(std::vector<std::string> wires) {
    p_.ops.push_back(OpDiscard{std::move(wires)});
    return *this;
  }
  ProgramBuilder& send(std::vector<std::string> wires) {
    p_.ops.push_back(OpSend{std::move(wires)});
    return *this;
  }
  ProgramBuilder& send_classical(RegId reg, int dim = 2) {
    p_.ops.push_back(OpSendClassical{std::move(reg), dim});
    return *this;
  }
  ProgramBuilder& recv(std::vector<std::string> labels) {
    p_.ops.push_back(OpRecv{std::move(labels)});
    return *this;
  }
  ProgramBuilder& recv_classical(RegId dst, int dim = 2) {
    p_.ops.push_back(OpRecvClassical{std::move(dst), dim});
    return *this;
  }

  PartyProgram build() { return std::move(p_); }

 private:
  PartyProgram p_;
};

}  // namespace dqp
