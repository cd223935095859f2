#include "dqp/gates.hpp"

#include <cmath>
#include <numbers>

namespace dqp::gates {

namespace {
constexpr cplx kI{0.0, 1.0};
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
}  // namespace

Mat X() {
  Mat m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Mat Y() {
  Mat m(2, 2);
  m << 0, -kI, kI, 0;
  return m;
}

Mat Z() {
  Mat m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Mat H() {
  Mat m(2, 2);
  m << 1, 1, 1, -1;
  return kInvSqrt2 * m;
}

Mat CZ() {
  Mat m = Mat::Identity(4, 4);
  m(3, 3) = -1;
  return m;
}

Mat CNOT() {
  Mat m = Mat::Zero(4, 4);
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return m;
}

Mat z_phase(double theta) {
  Mat m = Mat::Identity(2, 2);
  m(1, 1) = std::exp(kI * theta);
  return m;
}

Mat z_phase(Angle8 a) { return z_phase(a.radians()); }

Vec zero() { return basis_state(2, 0); }
Vec one() { return basis_state(2, 1); }

Vec plus() {
  Vec v(2);
  v << kInvSqrt2, kInvSqrt2;
  return v;
}

Vec plus_theta(double theta) {
  Vec v(2);
  v << kInvSqrt2, kInvSqrt2 * std::exp(kI * theta);
  return v;
}

Vec plus_theta(Angle8 a) { return plus_theta(a.radians()); }

Vec epr() {
  Vec v = Vec::Zero(4);
  v(0) = kInvSqrt2;
  v(3) = kInvSqrt2;
  return v;
}

}  // namespace dqp::gates
