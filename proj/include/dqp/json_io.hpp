#pragma once
// JSON serialization: one object per file, keys in fixed order, so emitted
// artifacts diff cleanly and reruns compare byte-for-byte.
//
// Pattern files: {"n", "m", "angles", "x_deps", "z_deps"}. Angles are the
// integers 0..7 (units of pi/4). Dependencies are either the string "flow"
// (derive them from the standard flow) or explicit per-vertex lists of
// [row, column] pairs with m+1 columns per row — the extra final column
// holds the output-correction dependencies.
//
// Transcripts: {"mode", "seed", "rounds", "output_dim"} with each round as
// {"dir": "A→B"|"B→A", "kind": "qubit"|"angle8"|"bit"|"classical",
//  "value": int|null, "dim": int}.
//
// Reports: {"check", "epsilon" (float or null), "pass", "trials", "seed",
// "tol", "citation"}.

#include <cstdint>
#include <string>
#include <vector>

#include "dqp/engine.hpp"
#include "dqp/harness.hpp"
#include "dqp/mbqc.hpp"

namespace dqp {

std::string pattern_to_json(const MeasurementPattern& p);
// Throws std::invalid_argument on malformed input.
MeasurementPattern pattern_from_json(const std::string& text);

std::string transcript_to_json(const Transcript& t);

std::string report_to_json(const SecurityReport& r);

// Aggregate for verify-all: {"seed", "pass", "criteria": [reports...]}.
std::string reports_to_json(std::uint64_t seed,
                            const std::vector<SecurityReport>& reports);

}  // namespace dqp
