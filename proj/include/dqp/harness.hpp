#pragma once
// Security checkers: executable factorization/verifiability witnesses,
// simulator constructions, distinguisher pools, and the algebraic reduction
// identities used by the acceptance suites. All checkers run the parties in
// exact mode, so a returned witness epsilon is a value at which the tested
// property provably holds for the supplied inputs — never a sampled estimate.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dqp/channel.hpp"
#include "dqp/mbqc.hpp"
#include "dqp/program.hpp"
#include "dqp/state.hpp"

namespace dqp {

// A client program carrying an accept/reject flag as its first output wire,
// together with the map it is meant to apply and a pre-measurement variant
// exposing the accept decision as an extra output wire (before the output
// stage replaces the payload on abort).
struct VerifiableProtocol {
  PartyProgram alice;        // outputs: [err-flag wire, payload wires...]
  PartyProgram alice_precut; // outputs: [payload wires..., accept_wire]
  std::string accept_wire;   // accept-decision wire label in alice_precut
  KrausChannel computation;  // the map the client wants applied
};

// One interactive counterparty plus the joint initial state it plays
// against; the state covers the client's input wires and may entangle them
// with extra reference wires that ride along untouched.
struct AdversaryStrategy {
  PartyProgram bob;
  DensityOperator input;
};
using DistinguisherStrategy = AdversaryStrategy;

// Result of fitting a run to "correct with weight p, flagged error with
// weight 1-p": the minimizing p and the residual distance at the minimum.
struct VerifiabilityFit {
  double p = 0.0;
  double epsilon = 0.0;
};

struct SecurityReport {
  std::string check;
  std::optional<double> epsilon;
  bool pass = false;
  int trials = 0;
  std::uint64_t seed = 0;
  double tol = 0.0;
  std::string citation;  // stable label of the claim the check exercises
};

// --- Canonical input families ---------------------------------------------
// Product states drawn per input wire from {|0>, |1>, |+>, |+i>}; the family
// spans the full operator space, so a channel-valued quantity vanishing on
// all of them vanishes on every input, entangled ones included.
std::vector<DensityOperator> spanning_inputs(const PartyProgram& alice);
// Maximally mixed state over the client's input wires.
DensityOperator mixed_input(const PartyProgram& alice);
// Maximally entangled pairs: each input wire paired with a mirror wire
// labelled "ref_" + label that never enters the interaction.
DensityOperator probe_input(const PartyProgram& alice);

// --- Concrete protocols used by the suites --------------------------------
// One-qubit compute-with-trap family: the input travels one round trip under
// a Pauli one-time pad, except that with probability test_tenths/10 a decoy
// basis state is sent instead and checked on return, while the real input
// stays home. The programmed map is a Hadamard. Larger test rates catch
// tampering more often: the blind-verifiability witness of the Pauli-tamper
// adversaries is exactly 1 - test_tenths/10.
VerifiableProtocol toy_protocol(int test_tenths);
// Client that sends its input qubit in the clear and takes it back.
PartyProgram cleartext_alice();
// Wraps a client with no verification of its own: a constant accept flag is
// prepended to its outputs (the wrapped protocol can only ever accept).
VerifiableProtocol always_accept_protocol(const PartyProgram& alice,
                                          const KrausChannel& computation);
// Brickwork pattern with uniformly random instruction angles.
MeasurementPattern random_pattern(int n, int m, std::uint64_t seed);

// --- Adversary generators ---------------------------------------------------
// Schedule-compatible counterparty that receives everything it can, stirs a
// private pool with seeded random channels, answers classical queries from
// pool measurements, and keeps the leftover pool as its view.
PartyProgram random_adversary(const PartyProgram& counterpart, std::uint64_t seed);
// Counterparty that keeps every incoming message verbatim (classical data
// claimed as basis wires) and answers with blank states / zero bits.
PartyProgram passthrough_adversary(const PartyProgram& counterpart);
// Fixed library (passthrough, measure-and-resend, swap-in-fresh) padded with
// seeded random adversaries; each strategy carries a random pure joint input
// over the client's input wires plus one entangled reference wire "sref".
std::vector<AdversaryStrategy> strategy_pool(const PartyProgram& alice, int count,
                                             std::uint64_t seed);

// --- Definition checkers ----------------------------------------------------
// Witness for "the counterparty's view factors through discarding the
// client's input": max over the spanning family of the distance between the
// view at that input and the view at the maximally mixed reference input.
// Zero iff the view channel is input-independent.
double check_sa_blindness(const PartyProgram& alice, const PartyProgram& adversary);

// Same factorization defect measured with the single maximally entangled
// probe: distance of the joint (view, mirror) state from (view marginal)
// tensor (maximally mixed mirror). Zero iff check_sa_blindness is zero; the
// numeric values differ away from zero.
double probe_factorization_defect(const PartyProgram& alice,
                                  const PartyProgram& adversary);

// Fits the final client-side state to p * [accept flag, computation(input)]
// + (1-p) * [reject flag, blank payload, input's reference marginal],
// minimizing the trace distance over p in [0,1] by golden-section search to
// 1e-6. `alice_input` covers the client's input wires plus any reference
// wires; `bob_input`, if given, covers the adversary's declared input wires
// plus its own references (which are traced out of the fitted state).
VerifiabilityFit check_sa_verifiability(const PartyProgram& alice,
                                        const KrausChannel& computation,
                                        const PartyProgram& adversary,
                                        const DensityOperator& alice_input,
                                        const std::optional<DensityOperator>& bob_input = {});

// Witness that the joint (accept wire, counterparty view) state is
// input-independent: the blindness test run on the pre-measurement variant
// with the payload wires traced out and the accept wire kept.
double check_independence(const PartyProgram& alice_precut,
                          const std::vector<std::string>& payload_labels,
                          const PartyProgram& adversary);

// Witness for the combined statement "accept implies the programmed map ran,
// reject implies a flagged error, and the counterparty's branch states are
// input-independent". The candidate ideal decomposition is built from one
// reference run of the pre-measurement variant at the maximally mixed input
// (its view projected on the accept wire gives the two branch states); the
// returned value is the worst distance between the real output and the
// candidate over the spanning family, the entangled probe, and any supplied
// extra inputs.
double check_blind_verifiability(const VerifiableProtocol& proto,
                                 const PartyProgram& adversary,
                                 const std::vector<DensityOperator>& extra_inputs = {});

// Ideal-side counterpart of `proto` with identical ports and schedule: it
// replays the client's messages on an internal dummy input, measures the
// replay's flag to decide accept/abort, and applies the programmed map to
// the real input directly. Its view towards the adversary is exactly the
// dummy replay, so the accept decision never depends on the real input.
VerifiableProtocol ideal_from_verifiability(const VerifiableProtocol& proto);
PartyProgram simulator_from_verifiability(const VerifiableProtocol& proto);

// Max over the supplied strategies of the trace distance between the final
// joint states of the two clients run against that strategy — a lower bound
// on the true distinguishing advantage.
double advantage_lower_bound(const PartyProgram& real_alice,
                             const PartyProgram& ideal_alice,
                             const std::vector<AdversaryStrategy>& strategies);

// Algebraic hand-off identity: applying `channel` to psi directly equals
// feeding it maximally entangled halves and projecting the mirror halves
// against psi's first n wires, up to the 4^n post-selection factor. Returns
// the trace-distance gap between the two evaluations. The first n input
// wires of `channel` are the hand-off wires.
double teleport_reduction_check(const KrausChannel& channel, int n,
                                const DensityOperator& psi);

// Samples subnormalized pairs and checks both metric inequalities
// (generalized trace distance <= purified distance <= sqrt of twice the
// former) within 1e-9 slack; epsilon reports the worst violation.
SecurityReport metric_lemma_check(int samples, int dim, std::uint64_t seed);

// Samples accept-projector instances and checks that the weighted output
// deviation p * D(sigma, U psi) is bounded by the square root of the
// projector mass tr(Pi rho) within 1e-9 slack.
SecurityReport fk_conversion_check(int samples, std::uint64_t seed);

// Deep-renames a program: every wire label and register id gains `prefix`
// (message schedule and gate payloads are unchanged).
PartyProgram rename_program(const PartyProgram& prog, const std::string& prefix);

}  // namespace dqp
