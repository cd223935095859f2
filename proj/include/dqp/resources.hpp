#pragma once
// Ideal functionalities for delegated computation, as runnable programs.
//
// The blind functionality takes the client's state at its input wires and
// either evaluates the programmed computation on it (honest configuration)
// or, with the cheating interface active, announces the permitted leak and
// applies an adversary-described map to the client state together with
// forwarded server wires. The verifiable-blind functionality can never
// change the computation; its only dishonest freedom is an abort flag that
// replaces the result with a distinguished error state, orthogonal to every
// valid output via a dedicated flag wire.
//
// The cheating-interface selector `b` is a construction parameter rather
// than a message: attaching the honest filter is modeled as building the
// b = 0 program, whose schedule contains no server-side traffic at all. The
// abort flag of the verifiable variant, by contrast, is chosen at run time
// by the counterparty and travels as a classical bit.

#include <optional>

#include "dqp/channel.hpp"
#include "dqp/program.hpp"

namespace dqp {

enum class ResourceVariant { blind, blind_verifiable };

// What the server side is permitted to learn: grid size and whether the
// result stays quantum. Carried as one classical constant on the cheating
// schedule and never branched on.
struct LeakInfo {
  int n = 1;
  int m = 1;
  bool quantum_output = true;
  int encoded() const { return (n * 256 + m) * 2 + (quantum_output ? 1 : 0); }
};

// Value range of the encoded leak message.
inline constexpr int kLeakDim = 8192;

struct ResourceConfig {
  int b = 0;  // cheating interface active?
  // blind variant with b = 1: the adversary-described map, consuming the
  // functionality's input wires first, then any forwarded server wires.
  std::optional<KrausChannel> cheat;
};

// The label of the error-flag wire prepended to verifiable outputs.
inline constexpr const char* kErrFlagWire = "err_flag";

PartyProgram ideal_resource(ResourceVariant variant, const KrausChannel& computation,
                            LeakInfo leak, ResourceConfig config = {});

// Appends the verifiable variant's output stage to a program under
// construction: a flag wire plus a swap-to-blanks of the payload, controlled
// by an already-computed abort register (value 1 aborts). Exposed for
// compositions where the functionality and a simulator are glued into one
// party and the abort bit never travels. The caller declares
// {kErrFlagWire, payload...} as outputs.
void emit_verifiable_output(ProgramBuilder& b, const std::vector<Wire>& payload,
                            const RegId& abort_reg);

}  // namespace dqp
