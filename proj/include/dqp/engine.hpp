#pragma once
// Two-party interaction engine.
//
// Exact mode tracks the full ensemble: every classical register value that is
// still relevant labels a branch, and each branch carries a subnormalized
// pure or mixed state over one shared wire table. Forgetting a register
// merges branches that agree on everything else, which is exactly
// dephasing/marginalization. Sample mode keeps a single branch and draws
// every random choice from a seeded generator, so runs are reproducible.
//
// Wires declared by OpPrepare stay symbolic until something touches them
// (a gate, channel, measurement, discard, or receive-side claim); sends keep
// them symbolic, so states that are never inspected never enlarge the
// ensemble. Sub-branches whose weight is exactly zero (common when
// computational-basis data meets projective measurement) are dropped, as is
// anything below 1e-30, which only ever removes float dust.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dqp/program.hpp"
#include "dqp/state.hpp"

namespace dqp {

enum class RunMode { exact, sample };

struct TranscriptRound {
  std::string dir;   // "a->b" or "b->a"
  std::string kind;  // "bit", "angle8", "classical", or "qubits"
  std::optional<long> value;  // sample mode only, classical messages only
  long dim = 2;
};

struct Transcript {
  RunMode mode = RunMode::exact;
  std::uint64_t seed = 0;
  std::vector<TranscriptRound> rounds;
  long output_dim = 1;
};

struct RunStats {
  std::size_t max_branches = 1;
  std::size_t max_state_dim = 1;
};

struct RunResult {
  // Joint state over [a.output_wires..., b.output_wires..., untouched input
  // wires...], averaged over all randomness in exact mode, one trajectory in
  // sample mode. Registers are fully marginalized.
  DensityOperator output;
  Transcript transcript;
  RunStats stats;
};

// Runs a against b from `input` (which must contain every wire either party
// lists in input_wires; extra wires ride along as references). Parties
// alternate whenever one blocks on an empty message queue.
RunResult run_interaction(const PartyProgram& a, const PartyProgram& b,
                          const DensityOperator& input, RunMode mode,
                          std::uint64_t seed = 0);

// The interface behaviour of one party, as a collection of blocks indexed by
// the classical interface data. Quantum ports (the party's declared inputs
// and outputs, plus mirror/probe wires for each quantum message) are probed
// with maximally entangled pairs; classical ports are enumerated uniformly.
// Two parties with the same message schedule and the same input/output labels
// are interchangeable in any context iff their blocks agree.
struct CombChoi {
  std::vector<std::pair<std::string, int>> reg_ports;  // name, dim; key order
  std::vector<Wire> wire_ports;
  std::map<std::vector<int>, Mat> blocks;

  long classical_dim() const;
  long wire_dim() const;
  // Block-diagonal assembly, classical keys ordered lexicographically.
  Mat dense() const;
};

// Frobenius distance treating absent blocks as zero. Throws if the port
// specs differ.
double comb_distance(const CombChoi& x, const CombChoi& y);
bool comb_equal(const CombChoi& x, const CombChoi& y, double tol);

// Extracts the comb of `party` by running it against an automatically built
// probe: fresh maximally entangled halves feed every quantum input (including
// the party's declared input wires), uniform values feed every classical
// input, and everything the party emits is kept. Exact mode only.
CombChoi comb_choi(const PartyProgram& party);

}  // namespace dqp
