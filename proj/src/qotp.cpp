#include "dqp/qotp.hpp"

#include "dqp/gates.hpp"

namespace dqp {
namespace {

// Pad with X^x first, then Z^z; undoing reverses the order. Both closures
// take the key bits as (x, z).
Mat pad_on(const RegArgs& v) {
  Mat u = Mat::Identity(2, 2);
  if (v[0]) u = gates::X() * u;
  if (v[1]) u = gates::Z() * u;
  return u;
}
Mat pad_off(const RegArgs& v) {
  Mat u = Mat::Identity(2, 2);
  if (v[1]) u = gates::Z() * u;
  if (v[0]) u = gates::X() * u;
  return u;
}

PartyProgram real_program() {
  ProgramBuilder b("qotp");
  b.inputs({"in"}).outputs({"out"});
  b.sample("x");
  b.sample("z");
  b.unitary({"in"}, {"x", "z"}, pad_on);
  b.send({"in"});
  b.recv({"out"});
  b.unitary({"out"}, {"x", "z"}, pad_off);
  b.forget({"x", "z"});
  return b.build();
}

// The adversary-facing qubit is half of a fresh pair — independent of the
// message by construction. Teleporting the message through the kept half
// yields outcome bits distributed exactly like a fresh pad key, and leaves
// the adversary's half carrying the padded message, so the same unpad map
// applies on the way back.
PartyProgram ideal_program() {
  ProgramBuilder b("qotp");
  b.inputs({"in"}).outputs({"out"});
  b.prepare(OpPrepare::Kind::epr, {"keep", "half"});
  b.send({"half"});
  b.unitary({"in", "keep"}, gates::CNOT());
  b.unitary({"in"}, gates::H());
  b.measure_z({"in"}, "z");
  b.measure_z({"keep"}, "x");
  b.recv({"out"});
  b.unitary({"out"}, {"x", "z"}, pad_off);
  b.forget({"x", "z"});
  return b.build();
}

}  // namespace

QotpSuite qotp_suite() { return QotpSuite{real_program(), ideal_program()}; }

}  // namespace dqp
