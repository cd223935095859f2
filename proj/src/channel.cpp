#include "dqp/channel.hpp"

#include <cmath>

#include "dqp/rng.hpp"

namespace dqp {

namespace {

long dims_product(const std::vector<Wire>& ws) {
  long d = 1;
  for (const Wire& w : ws) d *= w.dim;
  return d;
}

}  // namespace

long KrausChannel::in_dim() const { return dims_product(in_wires); }
long KrausChannel::out_dim() const { return dims_product(out_wires); }

void KrausChannel::validate(double tol) const {
  if (ops.empty()) throw std::invalid_argument("KrausChannel: no operators");
  const long din = in_dim(), dout = out_dim();
  Mat sum = Mat::Zero(din, din);
  for (const Mat& e : ops) {
    if (e.rows() != dout || e.cols() != din)
      throw std::invalid_argument("KrausChannel: operator shape mismatch");
    sum += e.adjoint() * e;
  }
  if (trace_preserving) {
    if (max_abs_diff(sum, Mat::Identity(din, din)) > tol)
      throw std::invalid_argument("KrausChannel: not trace preserving");
  } else {
    const auto evals = hermitian_eigenvalues(sum);
    if (evals(evals.size() - 1) > 1.0 + tol)
      throw std::invalid_argument("KrausChannel: trace increasing");
  }
}

KrausChannel KrausChannel::with_labels(const std::vector<std::string>& in_labels,
                                       const std::vector<std::string>& out_labels) const {
  if (in_labels.size() != in_wires.size() || out_labels.size() != out_wires.size())
    throw std::invalid_argument("KrausChannel::with_labels: label count mismatch");
  KrausChannel c = *this;
  for (size_t i = 0; i < in_labels.size(); ++i) c.in_wires[i].label = in_labels[i];
  for (size_t i = 0; i < out_labels.size(); ++i) c.out_wires[i].label = out_labels[i];
  return c;
}

KrausChannel KrausChannel::from_unitary(const Mat& u, const std::vector<Wire>& wires) {
  KrausChannel c;
  c.in_wires = wires;
  c.out_wires = wires;
  c.ops = {u};
  c.trace_preserving = true;
  return c;
}

KrausChannel KrausChannel::identity(const std::vector<Wire>& wires) {
  return from_unitary(Mat::Identity(dims_product(wires), dims_product(wires)), wires);
}

KrausChannel KrausChannel::compose(const KrausChannel& second, const KrausChannel& first) {
  if (second.in_dim() != first.out_dim())
    throw std::invalid_argument("KrausChannel::compose: dimension mismatch");
  KrausChannel c;
  c.in_wires = first.in_wires;
  c.out_wires = second.out_wires;
  c.trace_preserving = first.trace_preserving && second.trace_preserving;
  for (const Mat& b : second.ops)
    for (const Mat& a : first.ops) c.ops.push_back(b * a);
  return c;
}

DensityOperator apply_channel(const DensityOperator& rho, const KrausChannel& ch) {
  Wires w = rho.wires();
  Mat out = apply_channel_mat(rho.mat(), w, ch);
  return DensityOperator(DensityOperator::Unchecked{}, std::move(w), std::move(out));
}

Mat apply_channel_mat(const Mat& rho, Wires& wires, const KrausChannel& ch) {
  std::vector<std::string> in_labels;
  for (const Wire& w : ch.in_wires) in_labels.push_back(w.label);
  const std::vector<int> targets = wires.positions(in_labels);

  Mat acc;
  Wires new_wires;
  for (size_t k = 0; k < ch.ops.size(); ++k) {
    Wires w = wires;
    Mat term = apply_op_mat(ch.ops[k], rho, w, targets, ch.out_wires);
    if (k == 0) {
      acc = std::move(term);
      new_wires = std::move(w);
    } else {
      acc += term;
    }
  }
  wires = new_wires;
  return acc;
}

ChoiOperator choi(const KrausChannel& ch) {
  const long din = ch.in_dim(), dout = ch.out_dim();
  Vec phi = Vec::Zero(din * din);
  const double amp = 1.0 / std::sqrt(static_cast<double>(din));
  for (long i = 0; i < din; ++i) phi(i * din + i) = amp;

  ChoiOperator c;
  c.in_dim = din;
  c.out_dim = dout;
  c.m = Mat::Zero(din * dout, din * dout);
  Wires base(std::vector<Wire>{{"ref", static_cast<int>(din)},
                               {"in", static_cast<int>(din)}});
  for (const Mat& e : ch.ops) {
    Wires w = base;
    Vec v = apply_op_vec(e, phi, w, {1}, {{"out", static_cast<int>(dout)}});
    c.m += v * v.adjoint();
  }
  return c;
}

bool ChoiOperator::is_psd(double tol) const {
  if (!is_hermitian(m, tol)) return false;
  const auto evals = hermitian_eigenvalues(m);
  return evals(0) >= -tol;
}

bool ChoiOperator::is_trace_preserving(double tol) const {
  Wires w(std::vector<Wire>{{"ref", static_cast<int>(in_dim)},
                            {"out", static_cast<int>(out_dim)}});
  Mat ref = partial_trace_mat(m, w, {1});
  return max_abs_diff(ref, Mat::Identity(in_dim, in_dim) /
                               static_cast<double>(in_dim)) <= tol;
}

double choi_distance(const ChoiOperator& a, const ChoiOperator& b) {
  if (a.in_dim != b.in_dim || a.out_dim != b.out_dim)
    throw std::invalid_argument("choi_distance: dimension mismatch");
  return frob_dist(a.m, b.m);
}

KrausChannel random_channel(long in_dim, long out_dim, long env_dim,
                            std::uint64_t seed) {
  if (in_dim < 1 || out_dim < 1 || env_dim < 1)
    throw std::invalid_argument("random_channel: dimensions must be positive");
  if (env_dim * out_dim < in_dim)
    throw std::invalid_argument("random_channel: env_dim * out_dim < in_dim");

  Rng rng(seed);
  const long rows = env_dim * out_dim;
  Mat g(rows, in_dim);
  for (long r = 0; r < rows; ++r)
    for (long c = 0; c < in_dim; ++c) g(r, c) = rng.complex_normal();

  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ() * Mat::Identity(rows, in_dim);
  Mat r = qr.matrixQR().topLeftCorner(in_dim, in_dim).triangularView<Eigen::Upper>();
  // Canonical form: make the R diagonal real positive.
  for (long j = 0; j < in_dim; ++j) {
    const cplx d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 1e-300) q.col(j) *= std::conj(d) / mag;
  }

  KrausChannel c;
  c.in_wires = {{"in", static_cast<int>(in_dim)}};
  c.out_wires = {{"out", static_cast<int>(out_dim)}};
  c.trace_preserving = true;
  for (long k = 0; k < env_dim; ++k)
    c.ops.push_back(q.middleRows(k * out_dim, out_dim));
  return c;
}

}  // namespace dqp
