#pragma once
// Wire-labelled quantum states and the primitive operations on them.
//
// A state lives on an ordered list of wires; wires[0] is the most significant
// index digit (big-endian), so for qubits the basis index of |b0 b1 ... b_{w-1}>
// is the usual binary reading. Wires may have any dimension >= 1; the library
// uses dimension 2 throughout except where classical data rides along.
//
// The workhorse is apply_op: a (d_out x d_in) matrix applied to an ordered
// subset of wires. d_out need not equal d_in; the target wires are replaced,
// at the position of the first target, by the operator's declared output
// wires. A 1 x d row vector therefore implements "project and remove", which
// is how measurements are expressed.

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dqp/angle8.hpp"
#include "dqp/linalg.hpp"

namespace dqp {

struct Wire {
  std::string label;
  int dim = 2;
  friend bool operator==(const Wire&, const Wire&) = default;
};

class Wires {
 public:
  Wires() = default;
  explicit Wires(std::vector<Wire> w);
  // All-qubit convenience.
  static Wires qubits(const std::vector<std::string>& labels);

  int count() const { return static_cast<int>(wires_.size()); }
  long total_dim() const;
  const Wire& at(int pos) const { return wires_.at(pos); }
  const std::vector<Wire>& list() const { return wires_; }

  bool has(const std::string& label) const;
  int pos(const std::string& label) const;  // throws if absent
  std::vector<int> positions(const std::vector<std::string>& labels) const;
  std::vector<std::string> labels() const;

  // Wires at `targets` are removed and `replacement` is spliced in at the
  // position of the first target (at the end if targets is empty).
  Wires replaced(const std::vector<int>& targets, const std::vector<Wire>& replacement) const;
  Wires removed(const std::vector<int>& targets) const;
  Wires appended(const std::vector<Wire>& extra) const;
  Wires renamed(const std::string& from, const std::string& to) const;

  friend bool operator==(const Wires&, const Wires&) = default;

 private:
  void check_unique() const;
  std::vector<Wire> wires_;
};

// --- raw primitives (no validation; engine-facing) ------------------------

// Apply op (d_out x d_in) to the given wire positions of a pure state.
// Returns the new amplitude vector; `wires` is updated in place.
Vec apply_op_vec(const Mat& op, const Vec& v, Wires& wires,
                 const std::vector<int>& targets, const std::vector<Wire>& out_wires);

// Same for a density matrix: rho -> op rho op^dagger.
Mat apply_op_mat(const Mat& op, const Mat& rho, Wires& wires,
                 const std::vector<int>& targets, const std::vector<Wire>& out_wires);

// Square-op conveniences (wires unchanged).
Vec apply_unitary_vec(const Mat& u, const Vec& v, const Wires& wires,
                      const std::vector<int>& targets);
Mat apply_unitary_mat(const Mat& u, const Mat& rho, const Wires& wires,
                      const std::vector<int>& targets);

// Trace out the wires at `targets` (density form).
Mat partial_trace_mat(const Mat& rho, Wires& wires, const std::vector<int>& targets);
// Pure-state version of the same (result is a density matrix in general).
Mat partial_trace_vec(const Vec& v, Wires& wires, const std::vector<int>& targets);

// Reorder wires into the given new order (a permutation of 0..count-1 giving,
// for each output slot, the current position it takes).
Vec permute_vec(const Vec& v, Wires& wires, const std::vector<int>& order);
Mat permute_mat(const Mat& rho, Wires& wires, const std::vector<int>& order);

// Measurement bra <s| in the XY-plane basis {|+_delta>, |-_delta>}:
// <s| = (<0| + (-1)^s e^{-i delta} <1|) / sqrt(2).
Mat xy_bra(int outcome, double delta);
Mat xy_bra(int outcome, Angle8 delta);
// Computational-basis bra <s| for a wire of dimension dim.
Mat z_bra(int outcome, int dim = 2);

// --- validated public types ------------------------------------------------

class QuantumState {
 public:
  QuantumState(Wires wires, Vec amplitudes, double tol = 1e-10);

  const Wires& wires() const { return wires_; }
  const Vec& vec() const { return amp_; }
  double norm() const { return amp_.norm(); }

 private:
  Wires wires_;
  Vec amp_;
};

class DensityOperator {
 public:
  // Validates: Hermitian within hermitian_tol, eigenvalues >= -eig_clip
  // (values in [-eig_clip, 0) are clipped to zero), trace <= 1 + trace_tol.
  // Subnormalized operators (trace < 1) are legal.
  DensityOperator(Wires wires, Mat rho, double hermitian_tol = 1e-10,
                  double eig_clip = 1e-10, double trace_tol = 1e-10);

  struct Unchecked {};
  DensityOperator(Unchecked, Wires wires, Mat rho);

  static DensityOperator from_state(const QuantumState& s);

  const Wires& wires() const { return wires_; }
  const Mat& mat() const { return rho_; }
  double trace() const { return rho_.trace().real(); }

  DensityOperator traced_out(const std::vector<std::string>& labels) const;
  // Keep only these wires, in this order.
  DensityOperator marginal(const std::vector<std::string>& keep) const;
  DensityOperator permuted(const std::vector<std::string>& new_order) const;

 private:
  Wires wires_;
  Mat rho_;
};

// --- public wrapped operations ---------------------------------------------

QuantumState apply_unitary(const QuantumState& s, const Mat& u,
                           const std::vector<std::string>& target_labels);
DensityOperator apply_unitary(const DensityOperator& rho, const Mat& u,
                              const std::vector<std::string>& target_labels);

// Both subnormalized post-measurement branches (outcome 0, outcome 1), with
// the measured wire removed. Branch traces are the outcome probabilities.
std::pair<DensityOperator, DensityOperator> measure_xy(
    const DensityOperator& rho, const std::string& wire, Angle8 delta);

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b);
QuantumState tensor(const QuantumState& a, const QuantumState& b);

}  // namespace dqp
