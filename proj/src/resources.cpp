#include "dqp/resources.hpp"

#include <stdexcept>
#include <string>

namespace dqp {
namespace {

std::vector<std::string> labels_of(const std::vector<Wire>& ws) {
  std::vector<std::string> ls;
  for (const auto& w : ws) ls.push_back(w.label);
  return ls;
}

void emit_leak(ProgramBuilder& b, LeakInfo leak) {
  int v = leak.encoded();
  if (v < 0 || v >= kLeakDim)
    throw std::invalid_argument("leak parameters out of encodable range");
  b.compute("leak", kLeakDim, {}, [v](const RegArgs&) { return v; });
  b.send_classical("leak", kLeakDim);
  b.forget({"leak"});
}

// On abort: flip the flag and swap the k payload wires with k blank |0>
// wires (the payload leaves through the discarded blanks).
Mat abort_swap(int k, int abort) {
  long d = 1L << (1 + 2 * k);
  if (!abort) return Mat::Identity(d, d);
  Mat u = Mat::Zero(d, d);
  long pk = 1L << k;
  for (long f = 0; f < 2; ++f)
    for (long p = 0; p < pk; ++p)
      for (long z = 0; z < pk; ++z)
        u(((f ^ 1) << (2 * k)) | (z << k) | p, (f << (2 * k)) | (p << k) | z) = 1.0;
  return u;
}

}  // namespace

void emit_verifiable_output(ProgramBuilder& b, const std::vector<Wire>& payload,
                            const RegId& abort_reg) {
  for (const auto& w : payload)
    if (w.dim != 2)
      throw std::invalid_argument("verifiable output stage expects qubit payload wires");
  int k = static_cast<int>(payload.size());
  b.prepare(OpPrepare::Kind::zero, {kErrFlagWire});
  std::vector<std::string> blanks;
  for (int j = 0; j < k; ++j) {
    blanks.push_back("blank" + std::to_string(j));
    b.prepare(OpPrepare::Kind::zero, {blanks.back()});
  }
  std::vector<std::string> group{kErrFlagWire};
  for (const auto& w : payload) group.push_back(w.label);
  for (const auto& l : blanks) group.push_back(l);
  b.unitary(group, {abort_reg},
            [k](const RegArgs& v) { return abort_swap(k, v[0]); });
  b.discard(blanks);
}

PartyProgram ideal_resource(ResourceVariant variant, const KrausChannel& computation,
                            LeakInfo leak, ResourceConfig config) {
  computation.validate();
  if (config.b != 0 && config.b != 1)
    throw std::invalid_argument("cheating selector must be a bit");

  ProgramBuilder b("resource");
  b.inputs(labels_of(computation.in_wires));

  if (variant == ResourceVariant::blind) {
    if (config.b == 0) {
      b.kraus(computation);
      b.outputs(labels_of(computation.out_wires));
      return b.build();
    }
    if (!config.cheat)
      throw std::invalid_argument("cheating branch needs a map description");
    const KrausChannel& e = *config.cheat;
    e.validate();
    if (e.in_wires.size() < computation.in_wires.size())
      throw std::invalid_argument("cheat map must consume the client wires");
    for (std::size_t i = 0; i < computation.in_wires.size(); ++i)
      if (e.in_wires[i].label != computation.in_wires[i].label ||
          e.in_wires[i].dim != computation.in_wires[i].dim)
        throw std::invalid_argument("cheat map must consume the client wires first");
    emit_leak(b, leak);
    std::vector<std::string> forwarded;
    for (std::size_t i = computation.in_wires.size(); i < e.in_wires.size(); ++i)
      forwarded.push_back(e.in_wires[i].label);
    if (!forwarded.empty()) b.recv(forwarded);
    b.kraus(e);
    b.outputs(labels_of(e.out_wires));
    return b.build();
  }

  // Verifiable variant: the counterparty may only abort, never redirect.
  if (config.b == 1) {
    emit_leak(b, leak);
    b.recv_classical("c", 2);
  } else {
    b.compute("c", 2, {}, [](const RegArgs&) { return 0; });
  }
  b.kraus(computation);
  emit_verifiable_output(b, computation.out_wires, "c");
  b.forget({"c"});
  std::vector<std::string> outs{kErrFlagWire};
  for (const auto& w : computation.out_wires) outs.push_back(w.label);
  b.outputs(outs);
  return b.build();
}

}  // namespace dqp
