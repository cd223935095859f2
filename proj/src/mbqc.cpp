#include "dqp/mbqc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "dqp/gates.hpp"
#include "dqp/rng.hpp"

namespace dqp {

// --- graph -----------------------------------------------------------------

BrickworkGraph BrickworkGraph::build(int n, int m) {
  if (n < 1 || m < 1) throw std::invalid_argument("BrickworkGraph: need n,m >= 1");
  BrickworkGraph g;
  g.n = n;
  g.m = m;
  std::set<std::pair<VertexId, VertexId>> edges;
  auto add = [&](VertexId a, VertexId b) {
    if (b < a) std::swap(a, b);
    edges.insert({a, b});
  };
  for (int x = 1; x <= n; ++x)
    for (int y = 0; y < m; ++y) add({x, y}, {x, y + 1});
  for (int j = 0; j <= m; ++j) {
    const bool odd_rows = (j % 8 == 3);
    const bool even_rows = (j % 8 == 7);
    if (!odd_rows && !even_rows) continue;
    for (int x = 1; x <= n; ++x) {
      if (odd_rows && x % 2 == 0) continue;
      if (even_rows && x % 2 == 1) continue;
      if (x + 1 > n) continue;
      add({x, j}, {x + 1, j});
      if (j + 2 <= m) add({x, j + 2}, {x + 1, j + 2});
    }
  }
  g.edges.assign(edges.begin(), edges.end());
  return g;
}

bool BrickworkGraph::has_edge(VertexId a, VertexId b) const {
  if (b < a) std::swap(a, b);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(a, b));
}

std::vector<VertexId> BrickworkGraph::neighbors(VertexId v) const {
  std::vector<VertexId> out;
  for (const auto& [a, b] : edges) {
    if (a == v) out.push_back(b);
    if (b == v) out.push_back(a);
  }
  std::sort(out.begin(), out.end());
  return out;
}

// --- pattern -----------------------------------------------------------------

void MeasurementPattern::validate() const {
  if (n < 1 || m < 1) throw std::invalid_argument("pattern: need n,m >= 1");
  auto check_shape = [&](const auto& rows, const char* what) {
    if (static_cast<int>(rows.size()) != n)
      throw std::invalid_argument(std::string("pattern: ") + what + " row count");
    for (const auto& row : rows)
      if (static_cast<int>(row.size()) != m)
        throw std::invalid_argument(std::string("pattern: ") + what + " column count");
  };
  check_shape(angles, "angles");
  check_shape(x_deps, "x_deps");
  check_shape(z_deps, "z_deps");
  if (static_cast<int>(output_x_deps.size()) != n ||
      static_cast<int>(output_z_deps.size()) != n)
    throw std::invalid_argument("pattern: output dep row count");

  auto check_dep = [&](VertexId dep, int y_limit) {
    if (dep.x < 1 || dep.x > n || dep.y < 0 || dep.y >= y_limit)
      throw std::invalid_argument("pattern: dependency out of range");
  };
  for (int x = 1; x <= n; ++x) {
    for (int y = 0; y < m; ++y) {
      for (VertexId d : x_deps[x - 1][y]) check_dep(d, y);
      for (VertexId d : z_deps[x - 1][y]) check_dep(d, y);
    }
    for (VertexId d : output_x_deps[x - 1]) check_dep(d, m);
    for (VertexId d : output_z_deps[x - 1]) check_dep(d, m);
  }
}

void derive_flow_dependencies(MeasurementPattern& p) {
  const BrickworkGraph g = BrickworkGraph::build(p.n, p.m);
  auto flow = [](VertexId v) { return VertexId{v.x, v.y + 1}; };

  p.x_deps.assign(p.n, std::vector<DepList>(p.m));
  p.z_deps.assign(p.n, std::vector<DepList>(p.m));
  p.output_x_deps.assign(p.n, {});
  p.output_z_deps.assign(p.n, {});

  auto fill = [&](VertexId j, DepList& xd, DepList& zd) {
    for (int xi = 1; xi <= p.n; ++xi) {
      for (int yi = 0; yi < p.m; ++yi) {
        const VertexId i{xi, yi};
        if (i == j) continue;
        if (flow(i) == j) xd.push_back(i);
        if (g.has_edge(flow(i), j)) zd.push_back(i);
      }
    }
  };

  for (int x = 1; x <= p.n; ++x) {
    for (int y = 0; y < p.m; ++y)
      fill({x, y}, p.x_deps[x - 1][y], p.z_deps[x - 1][y]);
    fill({x, p.m}, p.output_x_deps[x - 1], p.output_z_deps[x - 1]);
  }
}

MeasurementPattern make_pattern(int n, int m, std::vector<std::vector<Angle8>> angles) {
  MeasurementPattern p;
  p.n = n;
  p.m = m;
  p.angles = std::move(angles);
  derive_flow_dependencies(p);
  p.validate();
  return p;
}

Angle8 adapt_angle(Angle8 phi, int s_x, int s_z) {
  const int sign = (s_x % 2 == 0) ? 1 : -1;
  return Angle8(sign * phi.k() + 4 * (s_z % 2));
}

std::pair<Angle8, Angle8> otp_compensate(Angle8 phi0, Angle8 phi1, int i_bit) {
  if (i_bit % 2 == 0) return {phi0, phi1};
  return {phi0.negated(), phi1.plus_pi()};
}

// --- executor ----------------------------------------------------------------

namespace {

std::string vlabel(VertexId v) {
  return "v" + std::to_string(v.x) + "_" + std::to_string(v.y);
}

struct ExecContext {
  const MeasurementPattern* pattern = nullptr;
  BrickworkGraph graph;
  std::vector<std::string> input_labels;

  std::string label_of(VertexId v) const {
    return v.y == 0 ? input_labels[v.x - 1] : vlabel(v);
  }

  int xor_deps(const DepList& deps, const std::map<VertexId, int>& outcomes) const {
    int s = 0;
    for (VertexId d : deps) s ^= outcomes.at(d);
    return s;
  }

  Angle8 adapted(VertexId v, const std::map<VertexId, int>& outcomes) const {
    const int sx = xor_deps(pattern->x_deps[v.x - 1][v.y], outcomes);
    const int sz = xor_deps(pattern->z_deps[v.x - 1][v.y], outcomes);
    return adapt_angle(pattern->angles[v.x - 1][v.y], sx, sz);
  }
};

// Corrections Z^{sz} X^{sx} on each output qubit (X applied first).
template <typename StateT, typename ApplyFn>
void apply_output_corrections(const ExecContext& ctx, StateT& state, Wires& wires,
                              const std::map<VertexId, int>& outcomes, ApplyFn apply) {
  for (int x = 1; x <= ctx.pattern->n; ++x) {
    const int sx = ctx.xor_deps(ctx.pattern->output_x_deps[x - 1], outcomes);
    const int sz = ctx.xor_deps(ctx.pattern->output_z_deps[x - 1], outcomes);
    const int pos = wires.pos(vlabel({x, ctx.pattern->m}));
    if (sx) state = apply(gates::X(), state, wires, pos);
    if (sz) state = apply(gates::Z(), state, wires, pos);
  }
}

Vec apply_gate_vec(const Mat& g, const Vec& v, const Wires& w, int pos) {
  return apply_unitary_vec(g, v, w, {pos});
}

// Final wire order: out1..outN, then everything else in its current order.
DensityOperator finalize_output(const ExecContext& ctx, Mat rho, Wires wires) {
  for (int x = 1; x <= ctx.pattern->n; ++x) {
    wires = wires.renamed(vlabel({x, ctx.pattern->m}), "out" + std::to_string(x));
  }
  std::vector<std::string> order;
  for (int x = 1; x <= ctx.pattern->n; ++x) order.push_back("out" + std::to_string(x));
  for (const std::string& l : wires.labels())
    if (std::find(order.begin(), order.end(), l) == order.end()) order.push_back(l);
  Mat out = permute_mat(rho, wires, wires.positions(order));
  return DensityOperator(std::move(wires), std::move(out));
}

// Pure components of a density operator (weights folded into the vectors).
std::vector<Vec> pure_components(const Mat& rho, double cutoff = 1e-14) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(rho);
  std::vector<Vec> out;
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    const double w = solver.eigenvalues()(i);
    if (w > cutoff) out.push_back(std::sqrt(w) * solver.eigenvectors().col(i));
  }
  return out;
}

// Measurement order: column-major, rows top to bottom.
std::vector<VertexId> measurement_order(int n, int m) {
  std::vector<VertexId> order;
  for (int y = 0; y < m; ++y)
    for (int x = 1; x <= n; ++x) order.push_back({x, y});
  return order;
}

void run_full_recursive(const ExecContext& ctx, const Vec& v, const Wires& wires,
                        const std::vector<VertexId>& order, size_t depth,
                        std::map<VertexId, int>& outcomes, Mat& acc, Wires& acc_wires) {
  if (depth == order.size()) {
    Vec corrected = v;
    Wires w = wires;
    apply_output_corrections(ctx, corrected, w, outcomes, apply_gate_vec);
    if (acc.size() == 0) {
      acc = Mat::Zero(w.total_dim(), w.total_dim());
      acc_wires = w;
    }
    acc += corrected * corrected.adjoint();
    return;
  }
  const VertexId vtx = order[depth];
  const Angle8 delta = ctx.adapted(vtx, outcomes);
  for (int s = 0; s < 2; ++s) {
    Wires w = wires;
    Vec branch = apply_op_vec(xy_bra(s, delta), v, w, {wires.pos(ctx.label_of(vtx))}, {});
    outcomes[vtx] = s;
    if (branch.squaredNorm() > 0.0)
      run_full_recursive(ctx, branch, w, order, depth + 1, outcomes, acc, acc_wires);
    outcomes.erase(vtx);
  }
}

MbqcResult run_full_exact(const ExecContext& ctx, const DensityOperator& input) {
  const int n = ctx.pattern->n, m = ctx.pattern->m;
  // Graph wires for columns 1..m.
  std::vector<Wire> fresh;
  for (int y = 1; y <= m; ++y)
    for (int x = 1; x <= n; ++x) fresh.push_back({vlabel({x, y}), 2});
  Wires wires = input.wires().appended(fresh);

  Vec plus_block = gates::plus();
  for (size_t i = 1; i < fresh.size(); ++i) plus_block = kron(plus_block, gates::plus());

  Mat acc;
  Wires acc_wires;
  const auto order = measurement_order(n, m);
  for (const Vec& comp : pure_components(input.mat())) {
    Vec v = kron(comp, plus_block);
    Wires w = wires;
    for (const auto& [a, b] : ctx.graph.edges)
      v = apply_unitary_vec(gates::CZ(), v, w,
                            {w.pos(ctx.label_of(a)), w.pos(ctx.label_of(b))});
    std::map<VertexId, int> outcomes;
    run_full_recursive(ctx, v, w, order, 0, outcomes, acc, acc_wires);
  }
  return {finalize_output(ctx, std::move(acc), std::move(acc_wires)), std::nullopt};
}

MbqcResult run_sample(const ExecContext& ctx, const DensityOperator& input,
                      std::uint64_t seed) {
  const int n = ctx.pattern->n, m = ctx.pattern->m;
  Rng rng(seed);

  // Pick a pure component of the input by weight.
  auto comps = pure_components(input.mat());
  std::vector<double> weights;
  double total = 0.0;
  for (const Vec& c : comps) {
    weights.push_back(c.squaredNorm());
    total += weights.back();
  }
  double pick = rng.uniform() * total;
  size_t chosen = 0;
  for (; chosen + 1 < comps.size(); ++chosen) {
    if (pick < weights[chosen]) break;
    pick -= weights[chosen];
  }
  Vec v = comps[chosen] / comps[chosen].norm();

  std::vector<Wire> fresh;
  for (int y = 1; y <= m; ++y)
    for (int x = 1; x <= n; ++x) fresh.push_back({vlabel({x, y}), 2});
  Wires w = input.wires().appended(fresh);
  for (size_t i = 0; i < fresh.size(); ++i) v = kron(v, gates::plus());
  for (const auto& [a, b] : ctx.graph.edges)
    v = apply_unitary_vec(gates::CZ(), v, w,
                          {w.pos(ctx.label_of(a)), w.pos(ctx.label_of(b))});

  std::map<VertexId, int> outcomes;
  for (VertexId vtx : measurement_order(n, m)) {
    const Angle8 delta = ctx.adapted(vtx, outcomes);
    Wires w0 = w;
    Vec b0 = apply_op_vec(xy_bra(0, delta), v, w0, {w.pos(ctx.label_of(vtx))}, {});
    const double p0 = b0.squaredNorm();
    const int s = rng.uniform() < p0 ? 0 : 1;
    if (s == 0) {
      v = b0 / std::sqrt(std::max(p0, 1e-300));
      w = w0;
    } else {
      Wires w1 = w;
      Vec b1 = apply_op_vec(xy_bra(1, delta), v, w1, {w.pos(ctx.label_of(vtx))}, {});
      v = b1 / b1.norm();
      w = w1;
    }
    outcomes[vtx] = s;
  }
  apply_output_corrections(ctx, v, w, outcomes, apply_gate_vec);
  Mat rho = v * v.adjoint();
  MbqcResult r{finalize_output(ctx, std::move(rho), std::move(w)), outcomes};
  return r;
}

// Two-column-window exact executor. Branches are keyed by the outcome bits
// still relevant to future angle adaptations or output corrections; merged
// per column.
MbqcResult run_merged_exact(const ExecContext& ctx, const DensityOperator& input) {
  const int n = ctx.pattern->n, m = ctx.pattern->m;
  const MeasurementPattern& p = *ctx.pattern;

  // relevant_after[y] = vertices whose outcomes are still needed once all
  // columns <= y are measured.
  std::vector<std::set<VertexId>> relevant_after(m);
  {
    for (int x = 1; x <= n; ++x) {
      for (int y = 0; y < m; ++y) {
        // Deps of vertex (x, y) stay relevant after columns d.y .. y-1.
        for (VertexId d : p.x_deps[x - 1][y])
          for (int c = d.y; c < y; ++c) relevant_after[c].insert(d);
        for (VertexId d : p.z_deps[x - 1][y])
          for (int c = d.y; c < y; ++c) relevant_after[c].insert(d);
      }
      for (VertexId d : p.output_x_deps[x - 1])
        for (int c = d.y; c < m; ++c) relevant_after[c].insert(d);
      for (VertexId d : p.output_z_deps[x - 1])
        for (int c = d.y; c < m; ++c) relevant_after[c].insert(d);
    }
  }

  struct Branch {
    std::map<VertexId, int> outcomes;
    Mat rho;
  };
  std::vector<Branch> branches;
  branches.push_back({{}, input.mat()});
  Wires wires = input.wires();

  // Materialize columns one at a time; an edge is applied as soon as both of
  // its endpoints exist (all edges span at most one column step, so this is
  // when its higher column is materialized).
  int frontier = -1;
  auto ensure_column = [&](int c) {
    while (frontier < std::min(c, m)) {
      ++frontier;
      if (frontier >= 1) {
        Mat block = projector(gates::plus());
        std::vector<Wire> fresh{{vlabel({1, frontier}), 2}};
        for (int x = 2; x <= n; ++x) {
          fresh.push_back({vlabel({x, frontier}), 2});
          block = kron(block, projector(gates::plus()));
        }
        wires = wires.appended(fresh);
        for (Branch& b : branches) b.rho = kron(b.rho, block);
      }
      for (const auto& [a, bb] : ctx.graph.edges) {
        if (std::max(a.y, bb.y) != frontier) continue;
        const std::vector<int> t{wires.pos(ctx.label_of(a)),
                                 wires.pos(ctx.label_of(bb))};
        for (Branch& b : branches)
          b.rho = apply_unitary_mat(gates::CZ(), b.rho, wires, t);
      }
    }
  };

  for (int y = 0; y < m; ++y) {
    ensure_column(y + 1);

    for (int x = 1; x <= n; ++x) {
      const VertexId vtx{x, y};
      std::vector<Branch> next;
      for (Branch& b : branches) {
        const Angle8 delta = ctx.adapted(vtx, b.outcomes);
        for (int s = 0; s < 2; ++s) {
          Wires w2 = wires;
          Mat rho2 = apply_op_mat(xy_bra(s, delta), b.rho, w2,
                                  {wires.pos(ctx.label_of(vtx))}, {});
          Branch nb{b.outcomes, std::move(rho2)};
          nb.outcomes[vtx] = s;
          next.push_back(std::move(nb));
        }
      }
      wires = wires.removed({wires.pos(ctx.label_of(vtx))});
      branches = std::move(next);
    }

    // Project keys onto still-relevant outcomes and merge equal keys.
    std::map<std::vector<int>, size_t> index;
    std::vector<Branch> merged;
    for (Branch& b : branches) {
      std::map<VertexId, int> kept;
      std::vector<int> key;
      for (VertexId r : relevant_after[y]) {
        if (auto it = b.outcomes.find(r); it != b.outcomes.end()) {
          kept[r] = it->second;
          key.push_back(r.x * 1000 + r.y);
          key.push_back(it->second);
        }
      }
      if (auto it = index.find(key); it != index.end()) {
        merged[it->second].rho += b.rho;
      } else {
        index[key] = merged.size();
        merged.push_back({std::move(kept), std::move(b.rho)});
      }
    }
    branches = std::move(merged);
  }

  Mat acc = Mat::Zero(wires.total_dim(), wires.total_dim());
  for (Branch& b : branches) {
    Mat rho = std::move(b.rho);
    Wires w = wires;
    apply_output_corrections(
        ctx, rho, w, b.outcomes,
        [](const Mat& g, const Mat& r, const Wires& ws, int pos) {
          return apply_unitary_mat(g, r, ws, {pos});
        });
    acc += rho;
  }
  return {finalize_output(ctx, std::move(acc), std::move(wires)), std::nullopt};
}

}  // namespace

MbqcResult honest_mbqc_execute(const MeasurementPattern& pattern,
                               const DensityOperator& input,
                               const std::vector<std::string>& input_labels,
                               ExecMode mode, ExecStrategy strategy,
                               std::uint64_t seed) {
  pattern.validate();
  if (static_cast<int>(input_labels.size()) != pattern.n)
    throw std::invalid_argument("honest_mbqc_execute: need one input label per row");
  for (const auto& l : input_labels)
    if (input.wires().at(input.wires().pos(l)).dim != 2)
      throw std::invalid_argument("honest_mbqc_execute: input wires must be qubits");

  ExecContext ctx;
  ctx.pattern = &pattern;
  ctx.graph = pattern.graph();
  ctx.input_labels = input_labels;

  if (mode == ExecMode::sample) return run_sample(ctx, input, seed);
  if (strategy == ExecStrategy::merged) return run_merged_exact(ctx, input);
  return run_full_exact(ctx, input);
}

}  // namespace dqp
