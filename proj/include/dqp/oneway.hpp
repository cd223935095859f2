#pragma once
// One-message delegation: the server speaks first and once, sending a state
// tau; the client finishes locally by applying a channel to (own input, tau).
// Since nothing ever flows back, the server learns nothing — formally, the
// client program equals a composite that simply forwards whatever arrives into
// the same channel. Both sides of that equality are returned, plus the honest
// server for correctness runs.

#include "dqp/channel.hpp"
#include "dqp/program.hpp"
#include "dqp/state.hpp"

namespace dqp {

struct OnewaySuite {
  PartyProgram alice;  // receive tau, apply the channel
  PartyProgram bob;    // honest server: just sends tau
  PartyProgram ideal;  // forward-verbatim composite with identical ports
};

// `alice_map` consumes the client's own wires followed by the tau wires;
// `bob_state` fixes the tau labels/dimensions (it must match the trailing
// wires of `alice_map`) and is what the honest server sends. The run input
// must carry both parties' declared input wires.
OnewaySuite oneway_suite(const DensityOperator& bob_state, const KrausChannel& alice_map);

}  // namespace dqp
