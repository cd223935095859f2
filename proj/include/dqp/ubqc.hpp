#pragma once
// Blind delegated execution of brickwork measurement patterns.
//
// Three client programs hide the pattern's angles from the server behind
// one-time-padded qubits and pi/4-granular instruction angles:
//   version 1  prepares and sends the padded qubits directly,
//   version 2  sends halves of entangled pairs and steers them by rotating
//              and measuring the retained halves,
//   version 3  sends bare halves plus uniformly random instruction angles and
//              reconstructs the pad afterwards from instruction minus intent.
// A fourth client, built from a server-facing part that knows only the grid
// size glued to the pattern-aware remainder, reproduces the same interaction
// comb; comparing the four combs is the blindness check.
//
// All clients share one message schedule, fixed by (n, m) alone:
//   n·m single-qubit messages out, then n·m rounds of (angle out, bit in),
//   then one n-qubit message in. Client input wires are named in1..inN and
// outputs out1..outN, so combs of different clients are directly comparable.

#include <vector>

#include "dqp/mbqc.hpp"
#include "dqp/program.hpp"

namespace dqp {

// Client program for the given pattern. version selects the preparation
// style described above; throws std::invalid_argument for other values or an
// ill-formed pattern.
PartyProgram ubqc_alice(int version, const MeasurementPattern& pattern);

// Honest server for an n-by-(m+1) session: entangles everything received
// into the brickwork graph (edges applied just before the first measurement
// touching them), measures each requested qubit at the instructed angle,
// returns the outcome bits, and finally sends the last column.
PartyProgram ubqc_bob_honest(int n, int m);

// Server-facing program that knows only the grid size: sends halves of fresh
// entangled pairs and uniform instruction angles, collects the outcome bits
// and the final column, and keeps everything for the pattern-aware half. Not
// independently meaningful; exposed for schedule and marginal checks, so the
// collected classical data is dropped at the end to make it runnable alone.
PartyProgram ubqc_simulator(int n, int m);

// ubqc_simulator glued to the pattern-aware remainder (input teleportation,
// pad reconstruction theta' = delta - phi', outcome flips, final Pauli
// fix-up). Behaves as a drop-in client; its comb equals the ubqc_alice ones.
PartyProgram ubqc_simulated_alice(const MeasurementPattern& pattern);

}  // namespace dqp
