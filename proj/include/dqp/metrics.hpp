#pragma once
// Distance and fidelity measures between (possibly subnormalized) density
// operators.
//
//   D(a, b)      = 0.5 ||a - b||_1                      (trace distance)
//   Dbar(a, b)   = D(a, b) + 0.5 |tr a - tr b|          (generalized)
//   F(a, b)      = || sqrt(a) sqrt(b) ||_1              (fidelity)
//   Fbar(a, b)   = F + sqrt((1 - tr a)(1 - tr b))       (generalized)
//   P(a, b)      = sqrt(1 - Fbar^2)                     (purified distance)
//
// The plain trace distance refuses to compare operators with different traces
// unless the generalized flag is set; everything else accepts subnormalized
// inputs directly.

#include "dqp/state.hpp"

namespace dqp {

inline constexpr double kTraceMismatchTol = 1e-9;

double trace_distance(const Mat& a, const Mat& b, bool generalized = false);
double fidelity(const Mat& a, const Mat& b, bool generalized = false);
double purified_distance(const Mat& a, const Mat& b);

// Label-aware overloads; b is permuted to a's wire order first.
double trace_distance(const DensityOperator& a, const DensityOperator& b,
                      bool generalized = false);
double fidelity(const DensityOperator& a, const DensityOperator& b,
                bool generalized = false);
double purified_distance(const DensityOperator& a, const DensityOperator& b);

}  // namespace dqp
