#pragma once
// Fixed gate matrices and elementary state vectors. The only place in the
// library where angle integers are converted to radians.

#include "dqp/angle8.hpp"
#include "dqp/linalg.hpp"

namespace dqp::gates {

Mat X();
Mat Y();
Mat Z();
Mat H();
Mat CZ();    // diag(1, 1, 1, -1), symmetric in its two wires
Mat CNOT();  // control first, target second

// diag(1, e^{i theta}): phase rotation about Z.
Mat z_phase(double theta);
Mat z_phase(Angle8 a);

Vec zero();
Vec one();
Vec plus();
// (|0> + e^{i theta} |1>) / sqrt(2)
Vec plus_theta(double theta);
Vec plus_theta(Angle8 a);
// (|00> + |11>) / sqrt(2)
Vec epr();

}  // namespace dqp::gates
