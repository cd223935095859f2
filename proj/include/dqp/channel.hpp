#pragma once
// Completely positive maps in Kraus form, their Choi representation, and a
// seeded pseudo-random channel generator.

#include <cstdint>
#include <vector>

#include "dqp/state.hpp"

namespace dqp {

// A channel from the wires `in_wires` to the wires `out_wires`. Each Kraus
// operator is (out_dim x in_dim) with indices read big-endian in the declared
// wire order. Output labels may reuse input labels (inputs are consumed), but
// must not collide with bystander wires of the state it is applied to.
struct KrausChannel {
  std::vector<Wire> in_wires;
  std::vector<Wire> out_wires;
  std::vector<Mat> ops;
  bool trace_preserving = true;

  long in_dim() const;
  long out_dim() const;

  // sum E^dagger E == I within tol when trace_preserving, <= I otherwise.
  void validate(double tol = 1e-9) const;

  KrausChannel with_labels(const std::vector<std::string>& in_labels,
                           const std::vector<std::string>& out_labels) const;

  static KrausChannel from_unitary(const Mat& u, const std::vector<Wire>& wires);
  static KrausChannel identity(const std::vector<Wire>& wires);
  // Composition: `second` after `first` (dimensions must chain; wire labels
  // taken from first's inputs and second's outputs).
  static KrausChannel compose(const KrausChannel& second, const KrausChannel& first);
};

DensityOperator apply_channel(const DensityOperator& rho, const KrausChannel& ch);
// Raw form used by inner loops; `wires` is updated.
Mat apply_channel_mat(const Mat& rho, Wires& wires, const KrausChannel& ch);

// Choi state of a channel: (id ⊗ ch) applied to the normalized maximally
// entangled pair of two in_dim systems; wire order [reference, output], so
// the matrix is (in_dim*out_dim) square with trace 1 for TP channels.
struct ChoiOperator {
  long in_dim = 1;
  long out_dim = 1;
  Mat m;

  bool is_psd(double tol = 1e-9) const;
  // For trace-preserving channels the reference marginal is I/in_dim.
  bool is_trace_preserving(double tol = 1e-9) const;
};

ChoiOperator choi(const KrausChannel& ch);
double choi_distance(const ChoiOperator& a, const ChoiOperator& b);  // Frobenius

// Pseudo-random channel: a Haar-like isometry V: in -> env ⊗ out obtained by
// QR-orthonormalizing a seeded complex Gaussian matrix (columns phase-fixed so
// the result is canonical), cut into env_dim Kraus operators
// E_k = (<k|_env ⊗ I_out) V. Requires env_dim * out_dim >= in_dim.
// env_dim == 1 and in_dim == out_dim yields a pseudo-random unitary.
// Deterministic: the seed fully determines every matrix entry.
KrausChannel random_channel(long in_dim, long out_dim, long env_dim,
                            std::uint64_t seed);

}  // namespace dqp
