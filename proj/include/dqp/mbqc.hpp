#pragma once
// Measurement-based computation on brickwork graphs: graph construction,
// measurement patterns with correction dependencies, and an honest reference
// executor.
//
// Vertices are addressed as (x, y) with rows x = 1..n and columns y = 0..m.
// Column 0 carries the logical input qubits, columns 1..m are prepared as
// |+>, columns 0..m-1 are measured (column-major: all of column y before
// column y+1, rows top to bottom), and column m is the output.

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "dqp/angle8.hpp"
#include "dqp/state.hpp"

namespace dqp {

struct VertexId {
  int x = 1;  // row, 1-based
  int y = 0;  // column, 0-based
  friend auto operator<=>(const VertexId&, const VertexId&) = default;
};

struct BrickworkGraph {
  int n = 1;
  int m = 1;
  std::vector<std::pair<VertexId, VertexId>> edges;

  // Horizontal edges join row neighbours. Vertical edges join (x,j)-(x+1,j)
  // and (x,j+2)-(x+1,j+2) for odd x when j = 3 (mod 8), and for even x when
  // j = 7 (mod 8); pairs falling outside the grid are skipped.
  static BrickworkGraph build(int n, int m);

  bool has_edge(VertexId a, VertexId b) const;
  std::vector<VertexId> neighbors(VertexId v) const;
};

using DepList = std::vector<VertexId>;

struct MeasurementPattern {
  int n = 1;
  int m = 1;
  // angles[x-1][y], y in 0..m-1.
  std::vector<std::vector<Angle8>> angles;
  // Correction dependencies per measured vertex; outcomes of the listed
  // vertices are XORed to form the sign / pi offset of the adapted angle.
  // x_deps[x-1][y] and z_deps[x-1][y] hold vertices from earlier columns.
  std::vector<std::vector<DepList>> x_deps;
  std::vector<std::vector<DepList>> z_deps;
  // Byproduct corrections on the output column m, one list per row.
  std::vector<DepList> output_x_deps;
  std::vector<DepList> output_z_deps;

  BrickworkGraph graph() const { return BrickworkGraph::build(n, m); }
  // Structural sanity: shapes match (n, m) and every dependency points to a
  // vertex measured strictly earlier.
  void validate() const;
};

// Dependencies induced by the standard flow f(x, y) = (x, y+1) on the
// brickwork graph: the X correction of vertex v comes from f^{-1}(v), the Z
// corrections from the other neighbours' preimages; the output column uses
// the same rule read at y = m.
void derive_flow_dependencies(MeasurementPattern& p);

// Pattern with the given angles and flow-derived dependencies.
MeasurementPattern make_pattern(int n, int m, std::vector<std::vector<Angle8>> angles);

// ((-1)^{s_x} k + 4 s_z) mod 8.
Angle8 adapt_angle(Angle8 phi, int s_x, int s_z);

// Compensation applied to the first two columns of a row when the input qubit
// arrives with an extra X^i flip: ( (-1)^i phi0 , phi1 + i*pi ).
std::pair<Angle8, Angle8> otp_compensate(Angle8 phi0, Angle8 phi1, int i_bit);

enum class ExecMode { exact, sample };
// `full` entangles the whole graph up front and traverses every outcome
// branch; `merged` keeps a two-column window and merges branches per column.
// Both are exact; they exist to cross-check each other.
enum class ExecStrategy { full, merged };

struct MbqcResult {
  // Output wires out1..outN (column m, top to bottom), then any untouched
  // wires of the input state (references) in their original order.
  DensityOperator output;
  // Sample mode only: measured outcome per vertex.
  std::optional<std::map<VertexId, int>> outcomes;
};

// Runs the pattern on `input`, whose wires listed in `input_labels` (length n)
// are consumed as the column-0 qubits; remaining wires ride along untouched.
// Exact mode returns the average over all measurement branches; sample mode
// follows one Born-sampled trajectory (seeded) and returns its outcomes.
MbqcResult honest_mbqc_execute(const MeasurementPattern& pattern,
                               const DensityOperator& input,
                               const std::vector<std::string>& input_labels,
                               ExecMode mode,
                               ExecStrategy strategy = ExecStrategy::full,
                               std::uint64_t seed = 0);

}  // namespace dqp
