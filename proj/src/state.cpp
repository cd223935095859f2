#include "dqp/state.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>

namespace dqp {

// --- Wires -------------------------------------------------------------

Wires::Wires(std::vector<Wire> w) : wires_(std::move(w)) {
  for (const Wire& wire : wires_) {
    if (wire.dim < 1) throw std::invalid_argument("Wires: dimension must be >= 1");
    if (wire.label.empty()) throw std::invalid_argument("Wires: empty label");
  }
  check_unique();
}

Wires Wires::qubits(const std::vector<std::string>& labels) {
  std::vector<Wire> w;
  w.reserve(labels.size());
  for (const auto& l : labels) w.push_back({l, 2});
  return Wires(std::move(w));
}

long Wires::total_dim() const {
  long d = 1;
  for (const Wire& w : wires_) d *= w.dim;
  return d;
}

bool Wires::has(const std::string& label) const {
  return std::any_of(wires_.begin(), wires_.end(),
                     [&](const Wire& w) { return w.label == label; });
}

int Wires::pos(const std::string& label) const {
  for (int i = 0; i < count(); ++i)
    if (wires_[i].label == label) return i;
  throw std::out_of_range("Wires: no wire labelled '" + label + "'");
}

std::vector<int> Wires::positions(const std::vector<std::string>& labels) const {
  std::vector<int> p;
  p.reserve(labels.size());
  for (const auto& l : labels) p.push_back(pos(l));
  return p;
}

std::vector<std::string> Wires::labels() const {
  std::vector<std::string> out;
  out.reserve(wires_.size());
  for (const Wire& w : wires_) out.push_back(w.label);
  return out;
}

Wires Wires::replaced(const std::vector<int>& targets,
                      const std::vector<Wire>& replacement) const {
  std::set<int> tset(targets.begin(), targets.end());
  if (tset.size() != targets.size())
    throw std::invalid_argument("Wires::replaced: duplicate target");
  for (int t : targets)
    if (t < 0 || t >= count()) throw std::out_of_range("Wires::replaced: bad target");
  const int insert_at = targets.empty() ? count() : *tset.begin();
  std::vector<Wire> out;
  out.reserve(wires_.size() - targets.size() + replacement.size());
  for (int p = 0; p <= count(); ++p) {
    if (p == insert_at)
      out.insert(out.end(), replacement.begin(), replacement.end());
    if (p == count()) break;
    if (!tset.contains(p)) out.push_back(wires_[p]);
  }
  return Wires(std::move(out));
}

Wires Wires::removed(const std::vector<int>& targets) const {
  return replaced(targets, {});
}

Wires Wires::appended(const std::vector<Wire>& extra) const {
  std::vector<Wire> out = wires_;
  out.insert(out.end(), extra.begin(), extra.end());
  return Wires(std::move(out));
}

Wires Wires::renamed(const std::string& from, const std::string& to) const {
  std::vector<Wire> out = wires_;
  out[pos(from)].label = to;
  return Wires(std::move(out));
}

void Wires::check_unique() const {
  std::set<std::string> seen;
  for (const Wire& w : wires_)
    if (!seen.insert(w.label).second)
      throw std::invalid_argument("Wires: duplicate label '" + w.label + "'");
}

// --- index plans ---------------------------------------------------------

namespace {

std::vector<long> strides_of(const Wires& w) {
  std::vector<long> s(w.count());
  long acc = 1;
  for (int i = w.count() - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= w.at(i).dim;
  }
  return s;
}

// Flat offsets of every digit combination over the wires at `positions`
// (digits ordered as given), using the supplied per-position strides.
std::vector<long> enumerate_offsets(const std::vector<int>& positions,
                                    const std::vector<int>& dims,
                                    const std::vector<long>& strides) {
  long total = 1;
  for (int d : dims) total *= d;
  std::vector<long> out(total);
  std::vector<int> digit(dims.size(), 0);
  for (long i = 0; i < total; ++i) {
    long off = 0;
    for (size_t k = 0; k < positions.size(); ++k)
      off += static_cast<long>(digit[k]) * strides[positions[k]];
    out[i] = off;
    for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
      if (++digit[k] < dims[k]) break;
      digit[k] = 0;
    }
  }
  return out;
}

struct OpPlan {
  long d_in = 1, d_out = 1, d_rest = 1;
  std::vector<long> in_off;    // d_in offsets into the old flat index
  std::vector<long> rest_in;   // d_rest bases into the old flat index
  std::vector<long> out_off;   // d_out offsets into the new flat index
  std::vector<long> rest_out;  // d_rest bases into the new flat index
  Wires new_wires;
};

// in_place: the k-th output wire takes over the position (and dimension) of
// the k-th target; the wire layout is otherwise untouched. Used for square
// ops so that out-of-order targets never permute the state.
OpPlan make_plan(const Wires& wires, const std::vector<int>& targets,
                 const std::vector<Wire>& out_wires, bool in_place) {
  OpPlan plan;
  const std::vector<long> strides = strides_of(wires);

  std::vector<int> tdims;
  for (int t : targets) {
    tdims.push_back(wires.at(t).dim);
    plan.d_in *= wires.at(t).dim;
  }
  plan.in_off = enumerate_offsets(targets, tdims, strides);

  std::set<int> tset(targets.begin(), targets.end());
  if (tset.size() != targets.size())
    throw std::invalid_argument("make_plan: duplicate target");
  std::vector<int> rest, rdims;
  for (int p = 0; p < wires.count(); ++p) {
    if (!tset.contains(p)) {
      rest.push_back(p);
      rdims.push_back(wires.at(p).dim);
      plan.d_rest *= wires.at(p).dim;
    }
  }
  plan.rest_in = enumerate_offsets(rest, rdims, strides);

  if (in_place) {
    if (out_wires.size() != targets.size())
      throw std::invalid_argument("make_plan: in-place op must keep wire count");
    std::vector<Wire> nw = wires.list();
    for (size_t k = 0; k < targets.size(); ++k) {
      if (out_wires[k].dim != wires.at(targets[k]).dim)
        throw std::invalid_argument("make_plan: in-place op must keep dimensions");
      nw[targets[k]] = out_wires[k];
    }
    plan.new_wires = Wires(std::move(nw));
    plan.d_out = plan.d_in;
    plan.out_off = plan.in_off;
    plan.rest_out = plan.rest_in;
    return plan;
  }

  plan.new_wires = wires.replaced(targets, out_wires);
  const std::vector<long> nstrides = strides_of(plan.new_wires);

  std::vector<int> opos, odims;
  const int insert_at =
      targets.empty() ? static_cast<int>(rest.size()) : *tset.begin();
  for (size_t k = 0; k < out_wires.size(); ++k) {
    opos.push_back(insert_at + static_cast<int>(k));
    odims.push_back(out_wires[k].dim);
    plan.d_out *= out_wires[k].dim;
  }
  plan.out_off = enumerate_offsets(opos, odims, nstrides);

  std::vector<int> rest_new;
  for (int p : rest) {
    int below = 0;
    for (int t : tset)
      if (t < p) ++below;
    int np = p - below;
    if (!targets.empty() && p > insert_at) np += static_cast<int>(out_wires.size());
    rest_new.push_back(np);
  }
  plan.rest_out = enumerate_offsets(rest_new, rdims, nstrides);
  return plan;
}

}  // namespace

// --- raw primitives --------------------------------------------------------

namespace {

Vec apply_vec_plan(const Mat& op, const Vec& v, const OpPlan& plan) {
  Vec out = Vec::Zero(plan.new_wires.total_dim());
  Vec x(plan.d_in);
  for (long r = 0; r < plan.d_rest; ++r) {
    const long bi = plan.rest_in[r];
    for (long t = 0; t < plan.d_in; ++t) x(t) = v(bi + plan.in_off[t]);
    Vec y = op * x;
    const long bo = plan.rest_out[r];
    for (long o = 0; o < plan.d_out; ++o) out(bo + plan.out_off[o]) = y(o);
  }
  return out;
}

Mat apply_mat_plan(const Mat& op, const Mat& rho, const OpPlan& plan) {
  const long n_new = plan.new_wires.total_dim();
  auto apply_rows = [&](const Mat& src) {
    Mat dst = Mat::Zero(n_new, src.cols());
    Vec x(plan.d_in);
    for (Eigen::Index c = 0; c < src.cols(); ++c) {
      for (long r = 0; r < plan.d_rest; ++r) {
        const long bi = plan.rest_in[r];
        for (long t = 0; t < plan.d_in; ++t) x(t) = src(bi + plan.in_off[t], c);
        Vec y = op * x;
        const long bo = plan.rest_out[r];
        for (long o = 0; o < plan.d_out; ++o) dst(bo + plan.out_off[o], c) = y(o);
      }
    }
    return dst;
  };
  Mat a = apply_rows(rho);          // op * rho
  Mat b = apply_rows(a.adjoint());  // op * (op * rho)^dagger, undone below
  return b.adjoint();               // = op * rho * op^dagger
}

void check_op_shape(const Mat& op, long rows, const OpPlan& plan, long state_dim,
                    const char* who) {
  if (op.cols() != plan.d_in || op.rows() != plan.d_out)
    throw std::invalid_argument(std::string(who) + ": operator shape mismatch");
  if (rows != state_dim)
    throw std::invalid_argument(std::string(who) + ": state size mismatch");
}

}  // namespace

Vec apply_op_vec(const Mat& op, const Vec& v, Wires& wires,
                 const std::vector<int>& targets, const std::vector<Wire>& out_wires) {
  OpPlan plan = make_plan(wires, targets, out_wires, /*in_place=*/false);
  check_op_shape(op, v.size(), plan, wires.total_dim(), "apply_op_vec");
  Vec out = apply_vec_plan(op, v, plan);
  wires = plan.new_wires;
  return out;
}

Mat apply_op_mat(const Mat& op, const Mat& rho, Wires& wires,
                 const std::vector<int>& targets, const std::vector<Wire>& out_wires) {
  OpPlan plan = make_plan(wires, targets, out_wires, /*in_place=*/false);
  check_op_shape(op, rho.rows(), plan, wires.total_dim(), "apply_op_mat");
  Mat out = apply_mat_plan(op, rho, plan);
  wires = plan.new_wires;
  return out;
}

Vec apply_unitary_vec(const Mat& u, const Vec& v, const Wires& wires,
                      const std::vector<int>& targets) {
  std::vector<Wire> same;
  for (int t : targets) same.push_back(wires.at(t));
  OpPlan plan = make_plan(wires, targets, same, /*in_place=*/true);
  check_op_shape(u, v.size(), plan, wires.total_dim(), "apply_unitary_vec");
  return apply_vec_plan(u, v, plan);
}

Mat apply_unitary_mat(const Mat& u, const Mat& rho, const Wires& wires,
                      const std::vector<int>& targets) {
  std::vector<Wire> same;
  for (int t : targets) same.push_back(wires.at(t));
  OpPlan plan = make_plan(wires, targets, same, /*in_place=*/true);
  check_op_shape(u, rho.rows(), plan, wires.total_dim(), "apply_unitary_mat");
  return apply_mat_plan(u, rho, plan);
}

Mat partial_trace_mat(const Mat& rho, Wires& wires, const std::vector<int>& targets) {
  OpPlan plan = make_plan(wires, targets, {}, false);
  Mat out = Mat::Zero(plan.d_rest, plan.d_rest);
  for (long r1 = 0; r1 < plan.d_rest; ++r1)
    for (long r2 = 0; r2 < plan.d_rest; ++r2) {
      cplx acc = 0.0;
      for (long t = 0; t < plan.d_in; ++t)
        acc += rho(plan.rest_in[r1] + plan.in_off[t], plan.rest_in[r2] + plan.in_off[t]);
      out(plan.rest_out[r1], plan.rest_out[r2]) = acc;
    }
  wires = plan.new_wires;
  return out;
}

Mat partial_trace_vec(const Vec& v, Wires& wires, const std::vector<int>& targets) {
  OpPlan plan = make_plan(wires, targets, {}, false);
  Mat out = Mat::Zero(plan.d_rest, plan.d_rest);
  for (long r1 = 0; r1 < plan.d_rest; ++r1)
    for (long r2 = 0; r2 < plan.d_rest; ++r2) {
      cplx acc = 0.0;
      for (long t = 0; t < plan.d_in; ++t)
        acc += v(plan.rest_in[r1] + plan.in_off[t]) *
               std::conj(v(plan.rest_in[r2] + plan.in_off[t]));
      out(plan.rest_out[r1], plan.rest_out[r2]) = acc;
    }
  wires = plan.new_wires;
  return out;
}

Vec permute_vec(const Vec& v, Wires& wires, const std::vector<int>& order) {
  if (static_cast<int>(order.size()) != wires.count())
    throw std::invalid_argument("permute_vec: order size mismatch");
  std::vector<Wire> nw;
  for (int p : order) nw.push_back(wires.at(p));
  Wires new_wires(nw);
  const auto old_strides = strides_of(wires);
  const auto new_strides = strides_of(new_wires);
  Vec out(v.size());
  std::vector<int> digit(order.size(), 0);
  for (long i = 0; i < v.size(); ++i) {
    long old_idx = 0;
    for (size_t k = 0; k < order.size(); ++k)
      old_idx += static_cast<long>(digit[k]) * old_strides[order[k]];
    out(i) = v(old_idx);
    for (int k = static_cast<int>(order.size()) - 1; k >= 0; --k) {
      if (++digit[k] < new_wires.at(k).dim) break;
      digit[k] = 0;
    }
  }
  wires = new_wires;
  return out;
}

Mat permute_mat(const Mat& rho, Wires& wires, const std::vector<int>& order) {
  // Build the index map once by permuting a vector of flat indices.
  const long n = rho.rows();
  Vec index(n);
  for (long i = 0; i < n; ++i) index(i) = static_cast<double>(i);
  Wires tmp = wires;
  Vec perm = permute_vec(index, tmp, order);
  Mat out(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j)
      out(i, j) = rho(static_cast<long>(perm(i).real()), static_cast<long>(perm(j).real()));
  wires = tmp;
  return out;
}

Mat xy_bra(int outcome, double delta) {
  Mat bra(1, 2);
  const double s = 1.0 / std::sqrt(2.0);
  bra(0, 0) = s;
  bra(0, 1) = s * std::exp(cplx(0.0, -delta)) * (outcome ? -1.0 : 1.0);
  return bra;
}

Mat xy_bra(int outcome, Angle8 delta) { return xy_bra(outcome, delta.radians()); }

Mat z_bra(int outcome, int dim) {
  Mat bra = Mat::Zero(1, dim);
  bra(0, outcome) = 1.0;
  return bra;
}

// --- validated types ---------------------------------------------------

QuantumState::QuantumState(Wires wires, Vec amplitudes, double tol)
    : wires_(std::move(wires)), amp_(std::move(amplitudes)) {
  if (amp_.size() != wires_.total_dim())
    throw std::invalid_argument("QuantumState: size does not match wires");
  if (std::abs(amp_.norm() - 1.0) > tol)
    throw std::invalid_argument("QuantumState: not normalized");
}

DensityOperator::DensityOperator(Wires wires, Mat rho, double hermitian_tol,
                                 double eig_clip, double trace_tol)
    : wires_(std::move(wires)), rho_(std::move(rho)) {
  if (rho_.rows() != wires_.total_dim() || rho_.cols() != rho_.rows())
    throw std::invalid_argument("DensityOperator: shape does not match wires");
  if (!is_hermitian(rho_, hermitian_tol))
    throw std::invalid_argument("DensityOperator: not Hermitian");
  const auto evals = hermitian_eigenvalues(rho_);
  if (evals.size() > 0 && evals(0) < -eig_clip)
    throw std::invalid_argument("DensityOperator: negative eigenvalue");
  if (rho_.trace().real() > 1.0 + trace_tol)
    throw std::invalid_argument("DensityOperator: trace exceeds one");
}

DensityOperator::DensityOperator(Unchecked, Wires wires, Mat rho)
    : wires_(std::move(wires)), rho_(std::move(rho)) {}

DensityOperator DensityOperator::from_state(const QuantumState& s) {
  return DensityOperator(Unchecked{}, s.wires(), s.vec() * s.vec().adjoint());
}

DensityOperator DensityOperator::traced_out(const std::vector<std::string>& labels) const {
  Wires w = wires_;
  Mat m = partial_trace_mat(rho_, w, wires_.positions(labels));
  return DensityOperator(Unchecked{}, std::move(w), std::move(m));
}

DensityOperator DensityOperator::marginal(const std::vector<std::string>& keep) const {
  std::vector<std::string> drop;
  for (const auto& l : wires_.labels())
    if (std::find(keep.begin(), keep.end(), l) == keep.end()) drop.push_back(l);
  return traced_out(drop).permuted(keep);
}

DensityOperator DensityOperator::permuted(const std::vector<std::string>& new_order) const {
  std::vector<int> order = wires_.positions(new_order);
  if (static_cast<int>(new_order.size()) != wires_.count())
    throw std::invalid_argument("DensityOperator::permuted: order must cover all wires");
  Wires w = wires_;
  Mat m = permute_mat(rho_, w, order);
  return DensityOperator(Unchecked{}, std::move(w), std::move(m));
}

// --- wrapped operations --------------------------------------------------

QuantumState apply_unitary(const QuantumState& s, const Mat& u,
                           const std::vector<std::string>& target_labels) {
  Vec v = apply_unitary_vec(u, s.vec(), s.wires(), s.wires().positions(target_labels));
  return QuantumState(s.wires(), std::move(v));
}

DensityOperator apply_unitary(const DensityOperator& rho, const Mat& u,
                              const std::vector<std::string>& target_labels) {
  Mat m = apply_unitary_mat(u, rho.mat(), rho.wires(), rho.wires().positions(target_labels));
  return DensityOperator(DensityOperator::Unchecked{}, rho.wires(), std::move(m));
}

std::pair<DensityOperator, DensityOperator> measure_xy(
    const DensityOperator& rho, const std::string& wire, Angle8 delta) {
  auto branch = [&](int outcome) {
    Wires w = rho.wires();
    Mat m = apply_op_mat(xy_bra(outcome, delta), rho.mat(), w, {rho.wires().pos(wire)}, {});
    return DensityOperator(DensityOperator::Unchecked{}, std::move(w), std::move(m));
  };
  return {branch(0), branch(1)};
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  return DensityOperator(DensityOperator::Unchecked{},
                         a.wires().appended(b.wires().list()),
                         kron(a.mat(), b.mat()));
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  return QuantumState(a.wires().appended(b.wires().list()), kron(a.vec(), b.vec()));
}

}  // namespace dqp
