#pragma once
// Pauli one-time pad over an untrusted single-qubit channel, in two
// implementations with identical ports:
//
//   real   — flip the message with uniformly keyed X^x Z^z, hand it to the
//            adversary, undo the flips on whatever comes back. The shared
//            key is internal (sampled once, used on both sides, forgotten).
//   ideal  — a confidential channel glued to the adversary-side simulator:
//            the adversary gets half of a fresh entangled pair, the message
//            is teleported through the kept half, and the teleportation's
//            bit/phase outcomes serve as the pad key for decrypting what the
//            adversary returns.
//
// Both programs take one input wire "in", emit one qubit, take one qubit
// back, and output wire "out"; their interaction combs are equal, which is
// the confidentiality statement.

#include "dqp/program.hpp"

namespace dqp {

struct QotpSuite {
  PartyProgram real;
  PartyProgram ideal;
};

QotpSuite qotp_suite();

}  // namespace dqp
