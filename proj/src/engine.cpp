#include "dqp/engine.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <set>
#include <stdexcept>
#include <utility>

#include "dqp/gates.hpp"
#include "dqp/rng.hpp"

namespace dqp {

namespace {

using gates::epr;
using gates::plus;
using gates::plus_theta;
using gates::zero;

// Sub-branches at or below this weight carry no information (exact zeros from
// basis-aligned projections, or float dust many orders below any tolerance).
constexpr double kPruneWeight = 1e-30;

long ipow2(int k) { return 1L << k; }

int bits_for(long dim) {
  int k = 0;
  while (ipow2(k) < dim) ++k;
  return k;
}

std::string kind_of(long dim) {
  if (dim == 2) return "bit";
  if (dim == 8) return "angle8";
  return "classical";
}

struct Branch {
  std::map<RegId, int> regs;
  bool pure = true;
  Vec v;
  Mat m;

  double weight() const { return pure ? v.squaredNorm() : m.trace().real(); }
  Mat density() const { return pure ? Mat(v * v.adjoint()) : m; }
  // Multiply the density by p.
  void scale(double p) {
    if (pure)
      v *= std::sqrt(p);
    else
      m *= p;
  }
};

struct Message {
  bool classical = false;
  std::vector<std::string> wire_labels;  // quantum payload
  RegId snapshot;                        // classical payload (internal register)
  long dim = 2;
};

class Interpreter {
 public:
  Interpreter(RunMode mode, std::uint64_t seed) : mode_(mode), rng_(seed) {
    transcript_.mode = mode;
    transcript_.seed = seed;
    Branch b;
    b.v = Vec::Ones(1);
    branches_.push_back(std::move(b));
  }

  void load_input(const DensityOperator& input) {
    wires_ = input.wires();
    Branch& b = branches_.front();
    const Mat& rho = input.mat();
    // Keep pure inputs pure; it makes branch bookkeeping much cheaper.
    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    int significant = 0, which = -1;
    for (int i = 0; i < rho.rows(); ++i) {
      if (es.eigenvalues()(i) > 1e-14) {
        ++significant;
        which = i;
      }
    }
    if (significant == 1) {
      b.v = std::sqrt(es.eigenvalues()(which)) * es.eigenvectors().col(which);
    } else {
      b.pure = false;
      b.v = Vec();
      b.m = rho;
    }
  }

  void run(const PartyProgram& a, const PartyProgram& b) {
    std::size_t pc_a = 0, pc_b = 0;
    while (pc_a < a.ops.size() || pc_b < b.ops.size()) {
      bool progress = false;
      progress |= run_until_block(a, pc_a, true);
      progress |= run_until_block(b, pc_b, false);
      if (!progress) fail("run", "deadlock: both parties are waiting for a message");
    }
    if (!q_ab_.empty() || !q_ba_.empty()) fail("run", "unconsumed messages at end of run");
  }

  // Traces everything except kept_wires, marginalizes everything except
  // kept_regs, and returns the resulting density blocks keyed by the kept
  // register values (in kept_regs order). Wires come out in kept_wires order.
  std::map<std::vector<int>, Mat> finalize_blocks(
      const std::vector<std::string>& kept_wires,
      const std::vector<std::pair<std::string, int>>& kept_regs) {
    for (const auto& l : kept_wires) materialize(l);
    // Remaining deferred wires were never touched, so each is an independent
    // product factor of unit trace: tracing it out is a no-op. Drop them.
    deferred_.clear();
    for (const auto& [name, dim] : kept_regs) force_reg(name);
    lazy_.clear();  // same reasoning: an unread sample marginalizes silently

    std::vector<int> drop;
    for (int p = 0; p < wires_.count(); ++p) {
      const std::string& l = wires_.at(p).label;
      if (std::find(kept_wires.begin(), kept_wires.end(), l) == kept_wires.end())
        drop.push_back(p);
    }
    if (!drop.empty()) {
      Wires after = wires_;
      for (auto& b : branches_) {
        Wires scratch = wires_;
        if (b.pure) {
          b.m = partial_trace_vec(b.v, scratch, drop);
          b.pure = false;
          b.v = Vec();
        } else {
          b.m = partial_trace_mat(b.m, scratch, drop);
        }
        after = scratch;
      }
      wires_ = after;
    }

    std::vector<int> order;
    order.reserve(kept_wires.size());
    for (const auto& l : kept_wires) order.push_back(wires_.pos(l));

    std::map<std::vector<int>, Mat> blocks;
    long dim = wires_.total_dim();
    for (auto& b : branches_) {
      std::vector<int> key;
      key.reserve(kept_regs.size());
      for (const auto& [name, kdim] : kept_regs) {
        int val = b.regs.at(name);
        if (val < 0 || val >= kdim) fail("finalize", "register " + name + " out of range");
        key.push_back(val);
      }
      Wires scratch = wires_;
      Mat rho = permute_mat(b.density(), scratch, order);
      auto [it, fresh] = blocks.try_emplace(std::move(key), Mat::Zero(dim, dim));
      it->second += rho;
    }
    return blocks;
  }

  const Wires& wires() const { return wires_; }
  Transcript& transcript() { return transcript_; }
  const RunStats& stats() const { return stats_; }

 private:
  [[noreturn]] void fail(const std::string& ctx, const std::string& what) const {
    throw std::runtime_error("engine[" + party_ + "] " + ctx + ": " + what);
  }

  std::deque<Message>& out_queue(bool is_a) { return is_a ? q_ab_ : q_ba_; }
  std::deque<Message>& in_queue(bool is_a) { return is_a ? q_ba_ : q_ab_; }

  bool run_until_block(const PartyProgram& p, std::size_t& pc, bool is_a) {
    party_ = p.name;
    bool progress = false;
    while (pc < p.ops.size()) {
      bool advanced =
          std::visit([&](const auto& o) { return exec(o, is_a); }, p.ops[pc]);
      if (!advanced) break;
      ++pc;
      progress = true;
      stats_.max_branches = std::max(stats_.max_branches, branches_.size());
      stats_.max_state_dim =
          std::max(stats_.max_state_dim, static_cast<std::size_t>(wires_.total_dim()));
    }
    return progress;
  }

  // --- register bookkeeping -------------------------------------------------

  void assert_new_reg(const RegId& r) const {
    if (r.empty()) throw std::runtime_error("engine: empty register name");
    if (lazy_.count(r) || branches_.front().regs.count(r))
      fail("reg", "register already in use: " + r);
  }

  void assert_new_label(const std::string& l) const {
    if (l.empty()) throw std::runtime_error("engine: empty wire label");
    if (wires_.has(l) || deferred_.count(l)) fail("wire", "label already in use: " + l);
  }

  void force_reg(const RegId& r) {
    auto it = lazy_.find(r);
    if (it == lazy_.end()) {
      if (!branches_.front().regs.count(r)) fail("reg", "unknown register: " + r);
      return;
    }
    int d = it->second;
    lazy_.erase(it);
    if (mode_ == RunMode::sample) {
      int val = rng_.uniform_int(d);
      for (auto& b : branches_) b.regs[r] = val;
      return;
    }
    std::vector<Branch> out;
    out.reserve(branches_.size() * d);
    for (auto& b : branches_) {
      for (int val = 0; val < d; ++val) {
        Branch nb = b;
        nb.regs[r] = val;
        nb.scale(1.0 / d);
        out.push_back(std::move(nb));
      }
    }
    branches_ = std::move(out);
  }

  std::vector<RegArgs> forced_args(const std::vector<RegId>& args) {
    for (const auto& r : args) force_reg(r);
    std::vector<RegArgs> per_branch;
    per_branch.reserve(branches_.size());
    for (const auto& b : branches_) {
      RegArgs vals;
      vals.reserve(args.size());
      for (const auto& r : args) vals.push_back(b.regs.at(r));
      per_branch.push_back(std::move(vals));
    }
    return per_branch;
  }

  void merge_branches() {
    std::map<std::map<RegId, int>, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < branches_.size(); ++i)
      groups[branches_[i].regs].push_back(i);
    if (groups.size() == branches_.size()) return;
    std::vector<Branch> out;
    out.reserve(groups.size());
    for (auto& [key, idxs] : groups) {
      if (idxs.size() == 1) {
        out.push_back(std::move(branches_[idxs.front()]));
        continue;
      }
      Branch nb;
      nb.regs = key;
      nb.pure = false;
      nb.m = branches_[idxs.front()].density();
      for (std::size_t j = 1; j < idxs.size(); ++j) nb.m += branches_[idxs[j]].density();
      out.push_back(std::move(nb));
    }
    branches_ = std::move(out);
  }

  void forget_concrete(const RegId& r) {
    for (auto& b : branches_) b.regs.erase(r);
    merge_branches();
  }

  // --- deferred wires ---------------------------------------------------------

  bool reg_referenced(const RegId& r) const {
    for (const auto& [label, gi] : deferred_) {
      const OpPrepare& g = groups_[gi];
      if ((g.kind == OpPrepare::Kind::plus_theta || g.kind == OpPrepare::Kind::basis) &&
          g.reg == r)
        return true;
    }
    return false;
  }

  void materialize(const std::string& label) {
    auto it = deferred_.find(label);
    if (it == deferred_.end()) {
      if (!wires_.has(label)) fail("wire", "unknown wire: " + label);
      return;
    }
    OpPrepare g = groups_[it->second];
    for (const auto& l : g.labels) deferred_.erase(l);
    if (g.kind == OpPrepare::Kind::plus_theta || g.kind == OpPrepare::Kind::basis)
      force_reg(g.reg);

    long gdim = (g.kind == OpPrepare::Kind::epr) ? 4 : ipow2(static_cast<int>(g.labels.size()));
    for (auto& b : branches_) {
      Vec comp;
      switch (g.kind) {
        case OpPrepare::Kind::zero:
          comp = zero();
          break;
        case OpPrepare::Kind::plus:
          comp = plus();
          break;
        case OpPrepare::Kind::plus_theta:
          comp = plus_theta(Angle8(b.regs.at(g.reg)).radians());
          break;
        case OpPrepare::Kind::epr:
          comp = epr();
          break;
        case OpPrepare::Kind::basis: {
          int val = b.regs.at(g.reg);
          if (val < 0 || val >= gdim)
            fail("wire", "register value " + std::to_string(val) +
                             " does not fit in " + std::to_string(g.labels.size()) +
                             " basis wires");
          comp = basis_state(gdim, val);
          break;
        }
      }
      if (b.pure)
        b.v = kron(b.v, comp);
      else
        b.m = kron(b.m, Mat(comp * comp.adjoint()));
    }
    std::vector<Wire> ws;
    for (const auto& l : g.labels) ws.push_back(Wire{l, 2});
    wires_ = wires_.appended(ws);
  }

  void touch(const std::vector<std::string>& labels) {
    for (const auto& l : labels) materialize(l);
  }

  void rename_wire(const std::string& from, const std::string& to) {
    if (from == to) return;
    assert_new_label(to);
    auto it = deferred_.find(from);
    if (it != deferred_.end()) {
      std::size_t gi = it->second;
      deferred_.erase(it);
      deferred_[to] = gi;
      for (auto& l : groups_[gi].labels)
        if (l == from) l = to;
      return;
    }
    wires_ = wires_.renamed(from, to);
  }

  long label_dim(const std::string& l) const {
    if (deferred_.count(l)) return 2;
    return wires_.at(wires_.pos(l)).dim;
  }

  // --- op execution (returns false only when blocked on an empty queue) ------

  bool exec(const OpSample& op, bool) {
    assert_new_reg(op.reg);
    if (op.dim < 1) fail("sample", "dimension must be positive");
    lazy_[op.reg] = op.dim;
    return true;
  }

  bool exec(const OpCompute& op, bool) {
    assert_new_reg(op.dst);
    auto vals = forced_args(op.args);
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      int out = op.fn(vals[i]);
      if (out < 0 || out >= op.dim)
        fail("compute", op.dst + " value " + std::to_string(out) + " out of range");
      branches_[i].regs[op.dst] = out;
    }
    return true;
  }

  bool exec(const OpForget& op, bool) {
    for (const auto& r : op.regs) {
      if (reg_referenced(r)) {
        // A prepared-but-untouched wire depends on this register; give the
        // wire its state now, then marginalize.
        std::vector<std::string> dependents;
        for (const auto& [label, gi] : deferred_)
          if (groups_[gi].reg == r) dependents.push_back(label);
        touch(dependents);
      } else if (lazy_.count(r)) {
        lazy_.erase(r);
        continue;
      }
      force_reg(r);  // validates existence
      forget_concrete(r);
    }
    return true;
  }

  bool exec(const OpPrepare& op, bool) {
    if (op.labels.empty()) fail("prepare", "no labels");
    std::size_t expected = (op.kind == OpPrepare::Kind::epr) ? 2 : op.labels.size();
    if (op.kind != OpPrepare::Kind::basis && op.labels.size() != expected)
      fail("prepare", "wrong label count");
    if ((op.kind == OpPrepare::Kind::zero || op.kind == OpPrepare::Kind::plus ||
         op.kind == OpPrepare::Kind::plus_theta) &&
        op.labels.size() != 1)
      fail("prepare", "single-wire generator takes one label");
    if ((op.kind == OpPrepare::Kind::plus_theta || op.kind == OpPrepare::Kind::basis)) {
      if (!lazy_.count(op.reg) && !branches_.front().regs.count(op.reg))
        fail("prepare", "unknown register: " + op.reg);
    }
    for (const auto& l : op.labels) assert_new_label(l);
    groups_.push_back(op);
    for (const auto& l : op.labels) deferred_[l] = groups_.size() - 1;
    return true;
  }

  bool exec(const OpUnitary& op, bool) {
    touch(op.wires);
    auto targets = wires_.positions(op.wires);
    long din = 1;
    for (int t : targets) din *= wires_.at(t).dim;
    auto vals = forced_args(op.args);
    std::map<RegArgs, Mat> cache;
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      auto [it, fresh] = cache.try_emplace(vals[i]);
      if (fresh) {
        it->second = op.gate(vals[i]);
        if (it->second.rows() != din || it->second.cols() != din)
          fail("unitary", "gate shape does not match targets");
      }
      Branch& b = branches_[i];
      if (b.pure)
        b.v = apply_unitary_vec(it->second, b.v, wires_, targets);
      else
        b.m = apply_unitary_mat(it->second, b.m, wires_, targets);
    }
    return true;
  }

  bool exec(const OpKraus& op, bool) {
    const KrausChannel& ch = op.ch;
    std::vector<std::string> in_labels;
    for (const auto& w : ch.in_wires) in_labels.push_back(w.label);
    touch(in_labels);
    auto targets = wires_.positions(in_labels);
    Wires after = wires_;

    if (mode_ == RunMode::sample) {
      for (auto& b : branches_) {
        std::vector<double> w(ch.ops.size());
        std::vector<Branch> cand(ch.ops.size());
        for (std::size_t k = 0; k < ch.ops.size(); ++k) {
          Branch nb = b;
          Wires scratch = wires_;
          if (nb.pure)
            nb.v = apply_op_vec(ch.ops[k], nb.v, scratch, targets, ch.out_wires);
          else
            nb.m = apply_op_mat(ch.ops[k], nb.m, scratch, targets, ch.out_wires);
          after = scratch;
          w[k] = nb.weight();
          cand[k] = std::move(nb);
        }
        double total = 0;
        for (double x : w) total += x;
        if (total <= 0) fail("kraus", "zero-weight channel application");
        double u = rng_.uniform() * total;
        std::size_t pick = 0;
        for (; pick + 1 < w.size(); ++pick) {
          if (u < w[pick]) break;
          u -= w[pick];
        }
        b = std::move(cand[pick]);
        b.scale(1.0 / w[pick]);
      }
      wires_ = after;
      return true;
    }

    for (auto& b : branches_) {
      if (ch.ops.size() == 1 && b.pure) {
        Wires scratch = wires_;
        b.v = apply_op_vec(ch.ops.front(), b.v, scratch, targets, ch.out_wires);
        after = scratch;
        continue;
      }
      Mat rho = b.density();
      Mat acc;
      for (std::size_t k = 0; k < ch.ops.size(); ++k) {
        Wires scratch = wires_;
        Mat term = apply_op_mat(ch.ops[k], rho, scratch, targets, ch.out_wires);
        after = scratch;
        if (k == 0)
          acc = std::move(term);
        else
          acc += term;
      }
      b.pure = false;
      b.v = Vec();
      b.m = std::move(acc);
    }
    wires_ = after;
    return true;
  }

  bool exec(const OpMeasureXY& op, bool) {
    assert_new_reg(op.result);
    touch({op.wire});
    std::vector<int> targets{wires_.pos(op.wire)};
    auto vals = forced_args(op.args);
    std::map<RegArgs, std::array<Mat, 2>> cache;
    Wires after = wires_;
    std::vector<Branch> out;
    out.reserve(branches_.size() * 2);
    for (std::size_t i = 0; i < branches_.size(); ++i) {
      auto [it, fresh] = cache.try_emplace(vals[i]);
      if (fresh) {
        Angle8 delta = op.angle(vals[i]);
        it->second = {xy_bra(0, delta), xy_bra(1, delta)};
      }
      split_measure(branches_[i], it->second[0], it->second[1], targets, op.result, 2,
                    out, after);
    }
    branches_ = std::move(out);
    wires_ = after;
    merge_branches();
    return true;
  }

  bool exec(const OpMeasureZ& op, bool) {
    assert_new_reg(op.result);
    measure_z_into(op.wires, op.result);
    return true;
  }

  void measure_z_into(const std::vector<std::string>& labels, const RegId& result) {
    touch(labels);
    auto targets = wires_.positions(labels);
    long dim = 1;
    for (int t : targets) dim *= wires_.at(t).dim;
    Wires after = wires_;
    std::vector<Branch> out;
    out.reserve(branches_.size() * dim);
    for (auto& b : branches_) {
      if (mode_ == RunMode::sample) {
        std::vector<double> w(dim);
        std::vector<Branch> cand(dim);
        for (long s = 0; s < dim; ++s) {
          Branch nb = b;
          Wires scratch = wires_;
          Mat bra = z_bra(static_cast<int>(s), static_cast<int>(dim));
          if (nb.pure)
            nb.v = apply_op_vec(bra, nb.v, scratch, targets, {});
          else
            nb.m = apply_op_mat(bra, nb.m, scratch, targets, {});
          after = scratch;
          nb.regs[result] = static_cast<int>(s);
          w[s] = nb.weight();
          cand[s] = std::move(nb);
        }
        double total = 0;
        for (double x : w) total += x;
        if (total <= 0) fail("measure", "zero-weight state");
        double u = rng_.uniform() * total;
        long pick = 0;
        for (; pick + 1 < dim; ++pick) {
          if (u < w[pick]) break;
          u -= w[pick];
        }
        Branch nb = std::move(cand[pick]);
        nb.scale(1.0 / w[pick]);
        out.push_back(std::move(nb));
        continue;
      }
      for (long s = 0; s < dim; ++s) {
        Branch nb = b;
        Wires scratch = wires_;
        Mat bra = z_bra(static_cast<int>(s), static_cast<int>(dim));
        if (nb.pure)
          nb.v = apply_op_vec(bra, nb.v, scratch, targets, {});
        else
          nb.m = apply_op_mat(bra, nb.m, scratch, targets, {});
        after = scratch;
        if (nb.weight() <= kPruneWeight) continue;
        nb.regs[result] = static_cast<int>(s);
        out.push_back(std::move(nb));
      }
    }
    branches_ = std::move(out);
    wires_ = after;
  }

  void split_measure(Branch& b, const Mat& bra0, const Mat& bra1,
                     const std::vector<int>& targets, const RegId& result, int dim,
                     std::vector<Branch>& out, Wires& after) {
    (void)dim;
    if (mode_ == RunMode::sample) {
      std::array<Branch, 2> cand;
      std::array<double, 2> w{};
      for (int s = 0; s < 2; ++s) {
        Branch nb = b;
        Wires scratch = wires_;
        const Mat& bra = s == 0 ? bra0 : bra1;
        if (nb.pure)
          nb.v = apply_op_vec(bra, nb.v, scratch, targets, {});
        else
          nb.m = apply_op_mat(bra, nb.m, scratch, targets, {});
        after = scratch;
        nb.regs[result] = s;
        w[s] = nb.weight();
        cand[s] = std::move(nb);
      }
      double total = w[0] + w[1];
      if (total <= 0) fail("measure", "zero-weight state");
      int pick = (rng_.uniform() * total < w[0]) ? 0 : 1;
      Branch nb = std::move(cand[pick]);
      nb.scale(1.0 / w[pick]);
      out.push_back(std::move(nb));
      return;
    }
    for (int s = 0; s < 2; ++s) {
      Branch nb = b;
      Wires scratch = wires_;
      const Mat& bra = s == 0 ? bra0 : bra1;
      if (nb.pure)
        nb.v = apply_op_vec(bra, nb.v, scratch, targets, {});
      else
        nb.m = apply_op_mat(bra, nb.m, scratch, targets, {});
      after = scratch;
      if (nb.weight() <= kPruneWeight) continue;
      nb.regs[result] = s;
      out.push_back(std::move(nb));
    }
  }

  bool exec(const OpDiscard& op, bool) {
    touch(op.wires);
    auto targets = wires_.positions(op.wires);
    Wires after = wires_;
    for (auto& b : branches_) {
      Wires scratch = wires_;
      if (b.pure) {
        b.m = partial_trace_vec(b.v, scratch, targets);
        b.pure = false;
        b.v = Vec();
      } else {
        b.m = partial_trace_mat(b.m, scratch, targets);
      }
      after = scratch;
    }
    wires_ = after;
    merge_branches();
    return true;
  }

  bool exec(const OpSend& op, bool is_a) {
    long dim = 1;
    for (const auto& l : op.wires) dim *= label_dim(l);
    out_queue(is_a).push_back(Message{false, op.wires, {}, dim});
    transcript_.rounds.push_back(
        TranscriptRound{is_a ? "a->b" : "b->a", "qubits", std::nullopt, dim});
    return true;
  }

  bool exec(const OpSendClassical& op, bool is_a) {
    force_reg(op.reg);
    RegId snap = "#m" + std::to_string(msg_counter_++);
    for (auto& b : branches_) {
      int val = b.regs.at(op.reg);
      if (val < 0 || val >= op.dim)
        fail("send", "register " + op.reg + " value out of declared range");
      b.regs[snap] = val;
    }
    out_queue(is_a).push_back(Message{true, {}, snap, op.dim});
    std::optional<long> val;
    if (mode_ == RunMode::sample) val = branches_.front().regs.at(op.reg);
    transcript_.rounds.push_back(
        TranscriptRound{is_a ? "a->b" : "b->a", kind_of(op.dim), val, op.dim});
    return true;
  }

  bool exec(const OpRecv& op, bool is_a) {
    auto& q = in_queue(is_a);
    if (q.empty()) return false;
    Message msg = std::move(q.front());
    q.pop_front();
    if (!msg.classical) {
      if (msg.wire_labels.size() != op.labels.size())
        fail("recv", "wire count mismatch");
      for (std::size_t i = 0; i < op.labels.size(); ++i)
        rename_wire(msg.wire_labels[i], op.labels[i]);
      return true;
    }
    // Classical data claimed as wires: it arrives as computational-basis
    // qubits carrying the value in binary.
    if (ipow2(static_cast<int>(op.labels.size())) != msg.dim)
      fail("recv", "label count cannot encode a message of dimension " +
                       std::to_string(msg.dim));
    for (const auto& l : op.labels) assert_new_label(l);
    groups_.push_back(OpPrepare{OpPrepare::Kind::basis, op.labels, msg.snapshot});
    for (const auto& l : op.labels) deferred_[l] = groups_.size() - 1;
    return true;
  }

  bool exec(const OpRecvClassical& op, bool is_a) {
    auto& q = in_queue(is_a);
    if (q.empty()) return false;
    assert_new_reg(op.dst);
    Message msg = std::move(q.front());
    q.pop_front();
    if (msg.classical) {
      if (msg.dim != op.dim) fail("recv", "classical dimension mismatch");
      force_reg(msg.snapshot);  // snapshots are always concrete; belt and braces
      for (auto& b : branches_) b.regs[op.dst] = b.regs.at(msg.snapshot);
      forget_concrete(msg.snapshot);
      return true;
    }
    // Quantum payload read as classical data: computational measurement.
    long dim = 1;
    for (const auto& l : msg.wire_labels) dim *= label_dim(l);
    if (dim != op.dim) fail("recv", "message dimension mismatch");
    measure_z_into(msg.wire_labels, op.dst);
    return true;
  }

  RunMode mode_;
  Rng rng_;
  std::string party_ = "-";
  Wires wires_;
  std::vector<Branch> branches_;
  std::vector<OpPrepare> groups_;
  std::map<std::string, std::size_t> deferred_;  // wire label -> groups_ index
  std::map<RegId, int> lazy_;                    // declared, not yet sampled
  std::deque<Message> q_ab_, q_ba_;
  long msg_counter_ = 0;
  Transcript transcript_;
  RunStats stats_;
};

}  // namespace

std::vector<MsgSig> message_signature(const PartyProgram& p) {
  std::vector<MsgSig> out;
  for (const Op& op : p.ops) {
    if (const auto* s = std::get_if<OpSend>(&op)) {
      out.push_back(MsgSig{true, false, ipow2(static_cast<int>(s->wires.size())),
                           static_cast<int>(s->wires.size())});
    } else if (const auto* sc = std::get_if<OpSendClassical>(&op)) {
      out.push_back(MsgSig{true, true, sc->dim, bits_for(sc->dim)});
    } else if (const auto* r = std::get_if<OpRecv>(&op)) {
      out.push_back(MsgSig{false, false, ipow2(static_cast<int>(r->labels.size())),
                           static_cast<int>(r->labels.size())});
    } else if (const auto* rc = std::get_if<OpRecvClassical>(&op)) {
      out.push_back(MsgSig{false, true, rc->dim, bits_for(rc->dim)});
    }
  }
  return out;
}

void check_schedules_compatible(const PartyProgram& a, const PartyProgram& b) {
  auto sig_a = message_signature(a);
  auto sig_b = message_signature(b);
  auto lane = [](const std::vector<MsgSig>& sig, bool outgoing) {
    std::vector<MsgSig> out;
    for (const auto& m : sig)
      if (m.outgoing == outgoing) out.push_back(m);
    return out;
  };
  auto check_lane = [&](const std::vector<MsgSig>& send, const std::vector<MsgSig>& recv,
                        const std::string& dir) {
    if (send.size() != recv.size())
      throw std::invalid_argument("schedule mismatch (" + dir + "): " +
                                  std::to_string(send.size()) + " sends vs " +
                                  std::to_string(recv.size()) + " receives");
    for (std::size_t i = 0; i < send.size(); ++i) {
      if (send[i].dim != recv[i].dim)
        throw std::invalid_argument(
            "schedule mismatch (" + dir + ", message " + std::to_string(i) +
            "): dimension " + std::to_string(send[i].dim) + " vs " +
            std::to_string(recv[i].dim));
    }
  };
  check_lane(lane(sig_a, true), lane(sig_b, false), a.name + "->" + b.name);
  check_lane(lane(sig_b, true), lane(sig_a, false), b.name + "->" + a.name);
}

RunResult run_interaction(const PartyProgram& a, const PartyProgram& b,
                          const DensityOperator& input, RunMode mode,
                          std::uint64_t seed) {
  check_schedules_compatible(a, b);
  for (const auto& l : a.input_wires)
    if (!input.wires().has(l))
      throw std::invalid_argument("run_interaction: missing input wire " + l);
  for (const auto& l : b.input_wires)
    if (!input.wires().has(l))
      throw std::invalid_argument("run_interaction: missing input wire " + l);

  Interpreter interp(mode, seed);
  interp.load_input(input);
  interp.run(a, b);

  std::vector<std::string> kept = a.output_wires;
  kept.insert(kept.end(), b.output_wires.begin(), b.output_wires.end());
  for (const auto& w : input.wires().list()) {
    bool claimed =
        std::find(a.input_wires.begin(), a.input_wires.end(), w.label) !=
            a.input_wires.end() ||
        std::find(b.input_wires.begin(), b.input_wires.end(), w.label) !=
            b.input_wires.end() ||
        std::find(kept.begin(), kept.end(), w.label) != kept.end();
    if (!claimed) kept.push_back(w.label);
  }

  auto blocks = interp.finalize_blocks(kept, {});
  if (blocks.size() != 1)
    throw std::logic_error("run_interaction: expected a single merged block");
  Mat rho = blocks.begin()->second;

  // finalize_blocks already ordered the matrix by `kept`.
  std::vector<Wire> ordered;
  ordered.reserve(kept.size());
  for (const auto& l : kept) ordered.push_back(interp.wires().at(interp.wires().pos(l)));

  RunResult res{DensityOperator(Wires(ordered), rho), interp.transcript(),
                interp.stats()};
  res.transcript.output_dim = res.output.wires().total_dim();
  return res;
}

long CombChoi::classical_dim() const {
  long d = 1;
  for (const auto& [name, dim] : reg_ports) d *= dim;
  return d;
}

long CombChoi::wire_dim() const {
  long d = 1;
  for (const auto& w : wire_ports) d *= w.dim;
  return d;
}

Mat CombChoi::dense() const {
  long cd = classical_dim();
  long wd = wire_dim();
  Mat out = Mat::Zero(cd * wd, cd * wd);
  for (const auto& [key, block] : blocks) {
    long idx = 0;
    for (std::size_t i = 0; i < reg_ports.size(); ++i)
      idx = idx * reg_ports[i].second + key[i];
    out.block(idx * wd, idx * wd, wd, wd) = block;
  }
  return out;
}

double comb_distance(const CombChoi& x, const CombChoi& y) {
  if (x.reg_ports != y.reg_ports)
    throw std::invalid_argument("comb_distance: classical port mismatch");
  if (!(x.wire_ports == y.wire_ports))
    throw std::invalid_argument("comb_distance: wire port mismatch");
  std::set<std::vector<int>> keys;
  for (const auto& [k, v] : x.blocks) keys.insert(k);
  for (const auto& [k, v] : y.blocks) keys.insert(k);
  long wd = x.wire_dim();
  Mat zero = Mat::Zero(wd, wd);
  double sq = 0;
  for (const auto& k : keys) {
    auto ix = x.blocks.find(k);
    auto iy = y.blocks.find(k);
    const Mat& bx = ix == x.blocks.end() ? zero : ix->second;
    const Mat& by = iy == y.blocks.end() ? zero : iy->second;
    sq += (bx - by).squaredNorm();
  }
  return std::sqrt(sq);
}

bool comb_equal(const CombChoi& x, const CombChoi& y, double tol) {
  return comb_distance(x, y) <= tol;
}

CombChoi comb_choi(const PartyProgram& party) {
  auto sig = message_signature(party);
  ProgramBuilder probe("probe");
  std::vector<std::pair<std::string, int>> reg_ports;
  std::vector<std::string> probe_wires;
  int k = 0;
  for (const auto& m : sig) {
    std::string tag = std::to_string(k++);
    if (m.outgoing) {  // party sends -> probe receives and keeps
      if (m.classical) {
        std::string r = "p_c" + tag;
        probe.recv_classical(r, static_cast<int>(m.dim));
        reg_ports.emplace_back(r, static_cast<int>(m.dim));
      } else {
        std::vector<std::string> labels;
        for (int i = 0; i < m.wire_count; ++i)
          labels.push_back("p_r" + tag + "_" + std::to_string(i));
        probe.recv(labels);
        probe_wires.insert(probe_wires.end(), labels.begin(), labels.end());
      }
    } else {  // party receives -> probe feeds entangled halves / uniform values
      if (m.classical) {
        std::string r = "p_u" + tag;
        probe.sample(r, static_cast<int>(m.dim));
        probe.send_classical(r, static_cast<int>(m.dim));
        reg_ports.emplace_back(r, static_cast<int>(m.dim));
      } else {
        std::vector<std::string> halves;
        for (int i = 0; i < m.wire_count; ++i) {
          std::string mirror = "p_m" + tag + "_" + std::to_string(i);
          std::string half = "p_h" + tag + "_" + std::to_string(i);
          probe.prepare(OpPrepare::Kind::epr, {mirror, half});
          probe_wires.push_back(mirror);
          halves.push_back(half);
        }
        probe.send(halves);
      }
    }
  }

  // Entangled probes for the party's declared input wires.
  Wires init_wires;
  Vec init_amp = Vec::Ones(1);
  std::vector<std::string> mirrors;
  {
    std::vector<Wire> ws;
    for (const auto& l : party.input_wires) {
      std::string mirror = "p_ref_" + l;
      ws.push_back(Wire{l, 2});
      ws.push_back(Wire{mirror, 2});
      mirrors.push_back(mirror);
      init_amp = kron(init_amp, epr());
    }
    init_wires = Wires(ws);
  }

  std::vector<std::string> kept = party.output_wires;
  kept.insert(kept.end(), mirrors.begin(), mirrors.end());
  kept.insert(kept.end(), probe_wires.begin(), probe_wires.end());

  PartyProgram probe_p = probe.build();
  check_schedules_compatible(party, probe_p);

  Interpreter interp(RunMode::exact, 0);
  interp.load_input(DensityOperator(DensityOperator::Unchecked{}, init_wires,
                                    Mat(init_amp * init_amp.adjoint())));
  interp.run(party, probe_p);
  auto blocks = interp.finalize_blocks(kept, reg_ports);

  CombChoi comb;
  comb.reg_ports = std::move(reg_ports);
  for (const auto& l : kept) comb.wire_ports.push_back(Wire{l, 2});
  comb.blocks = std::move(blocks);
  return comb;
}

}  // namespace dqp
