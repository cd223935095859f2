#include "dqp/oneway.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace dqp {
namespace {

std::vector<std::string> labels_of(const std::vector<Wire>& ws) {
  std::vector<std::string> out;
  out.reserve(ws.size());
  for (const auto& w : ws) out.push_back(w.label);
  return out;
}

}  // namespace

OnewaySuite oneway_suite(const DensityOperator& bob_state, const KrausChannel& alice_map) {
  alice_map.validate();
  const auto& tau = bob_state.wires().list();
  const auto& all_in = alice_map.in_wires;
  if (tau.size() > all_in.size())
    throw std::invalid_argument("oneway_suite: channel takes fewer wires than tau has");
  std::size_t own = all_in.size() - tau.size();
  for (std::size_t j = 0; j < tau.size(); ++j)
    if (!(all_in[own + j] == tau[j]))
      throw std::invalid_argument(
          "oneway_suite: tau wires must match the channel's trailing inputs");

  std::vector<std::string> own_labels;
  for (std::size_t j = 0; j < own; ++j) own_labels.push_back(all_in[j].label);
  std::vector<std::string> tau_labels = labels_of(
      std::vector<Wire>(all_in.begin() + static_cast<long>(own), all_in.end()));
  std::vector<std::string> out_labels = labels_of(alice_map.out_wires);

  OnewaySuite suite;
  {
    ProgramBuilder b("alice");
    b.inputs(own_labels).outputs(out_labels);
    b.recv(tau_labels);
    b.kraus(alice_map);
    suite.alice = b.build();
  }
  {
    ProgramBuilder b("bob");
    b.inputs(tau_labels);
    b.send(tau_labels);
    suite.bob = b.build();
  }
  {
    // What arrives is dropped into the channel unexamined; renaming the
    // received wires makes the forwarding explicit without changing ports.
    std::vector<std::string> fwd;
    for (const auto& l : tau_labels) fwd.push_back("fwd_" + l);
    std::vector<std::string> ch_in = own_labels;
    ch_in.insert(ch_in.end(), fwd.begin(), fwd.end());
    ProgramBuilder b("alice");
    b.inputs(own_labels).outputs(out_labels);
    b.recv(fwd);
    b.kraus(alice_map.with_labels(ch_in, out_labels));
    suite.ideal = b.build();
  }
  return suite;
}

}  // namespace dqp
