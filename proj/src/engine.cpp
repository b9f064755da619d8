#include "msteiner/engine.hpp"

#include <algorithm>
#include <random>

#include "msteiner/errors.hpp"
#include "msteiner/extended.hpp"

namespace msteiner::maxsum {

using ext::add;
using ext::floor_neg;
using ext::is_neg;
using ext::kNeg;

void normalize(std::span<double> row) {
  double best = kNeg;
  for (double v : row) best = std::max(best, v);
  if (is_neg(best)) return;
  for (double& v : row)
    if (!is_neg(v)) v -= best;
}

namespace {

// Sum of per-neighbour default terms, keeping sentinel terms out of the
// running total so a single neighbour can be excluded without subtracting -inf.
struct DefaultSum {
  double finite = 0.0;
  int negs = 0;
  int neg_idx[3] = {-1, -1, -1};

  void push(int a, double x) {
    if (is_neg(x)) {
      if (negs < 3) neg_idx[negs] = a;
      ++negs;
    } else {
      finite += x;
    }
  }
  int negs_without(int j, double xj) const { return negs - (j >= 0 && is_neg(xj) ? 1 : 0); }
  double base_without(int j, double xj) const { return (j >= 0 && !is_neg(xj)) ? finite - xj : finite; }
  // k-th sentinel index different from j
  int neg_other(int j, int k) const {
    for (int t = 0; t < std::min(negs, 3); ++t) {
      if (neg_idx[t] == j) continue;
      if (k-- == 0) return neg_idx[t];
    }
    return -1;
  }
};

// Three largest gains with their neighbour index; first-come wins ties.
struct Top3 {
  double v[3] = {kNeg, kNeg, kNeg};
  int idx[3] = {-1, -1, -1};

  void push(int a, double g) {
    for (int t = 0; t < 3; ++t) {
      if (idx[t] < 0 || g > v[t]) {
        for (int s = 2; s > t; --s) {
          v[s] = v[s - 1];
          idx[s] = idx[s - 1];
        }
        v[t] = g;
        idx[t] = a;
        return;
      }
    }
  }
  double best_excluding(int ex1, int ex2 = -1) const {
    for (int t = 0; t < 3; ++t)
      if (idx[t] >= 0 && idx[t] != ex1 && idx[t] != ex2) return v[t];
    return kNeg;
  }
};

// gains y_a - x_a over neighbours whose default term is finite
Top3 gains_of(std::span<const double> x, std::span<const double> y) {
  Top3 top;
  for (int a = 0; a < static_cast<int>(x.size()); ++a)
    if (!is_neg(x[a])) top.push(a, floor_neg(y[a] - x[a]));
  return top;
}

// sum_{l != j} x_l
double sum_excluding(const DefaultSum& s, int j, double xj) {
  return s.negs_without(j, xj) > 0 ? kNeg : s.base_without(j, xj);
}

// max_{k != j} [ y_k + sum_{l != j,k} x_l ]
double single_swap(const DefaultSum& s, const Top3& gains, std::span<const double> x,
                   std::span<const double> y, int j) {
  const double xj = j >= 0 ? x[j] : 0.0;
  const int n = s.negs_without(j, xj);
  if (n >= 2) return kNeg;
  const double base = s.base_without(j, xj);
  if (n == 1) return add(base, y[s.neg_other(j, 0)]);
  return add(base, gains.best_excluding(j));
}

// max_{k != l; k,l != j} [ y_k + u_l + sum_{m != j,k,l} x_m ]
double double_swap(const DefaultSum& s, const Top3& gy, const Top3& gu, std::span<const double> x,
                   std::span<const double> y, std::span<const double> u, int j) {
  const double xj = j >= 0 ? x[j] : 0.0;
  const int n = s.negs_without(j, xj);
  if (n >= 3) return kNeg;
  const double base = s.base_without(j, xj);
  if (n == 2) {
    const int a = s.neg_other(j, 0);
    const int b = s.neg_other(j, 1);
    return add(base, std::max(add(y[a], u[b]), add(y[b], u[a])));
  }
  if (n == 1) {
    const int a = s.neg_other(j, 0);
    const double as_parent = add(y[a], gu.best_excluding(j, a));
    const double as_child = add(u[a], gy.best_excluding(j, a));
    return add(base, std::max(as_parent, as_child));
  }
  double best = kNeg;
  for (int p = 0; p < 3; ++p) {
    if (gy.idx[p] < 0 || gy.idx[p] == j) continue;
    for (int c = 0; c < 3; ++c) {
      if (gu.idx[c] < 0 || gu.idx[c] == j || gu.idx[c] == gy.idx[p]) continue;
      best = std::max(best, add(gy.v[p], gu.v[c]));
    }
  }
  return add(base, best);
}

struct Scratch {
  std::vector<double> z, x, y, yc, yp;
  void resize(std::size_t deg) {
    for (auto* v : {&z, &x, &y, &yc, &yp}) v->resize(deg);
  }
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

}  // namespace

void update_vertex(const VertexProblem& pb, std::span<double> out) {
  const int depth = pb.depth;
  const int width = 2 * depth + 1;
  const int deg = static_cast<int>(pb.weights.size());
  auto q = [&](int a, int d) { return pb.inputs[static_cast<std::size_t>(a) * width + d + depth]; };
  auto o = [&](int a, int d) -> double& { return out[static_cast<std::size_t>(a) * width + d + depth]; };
  std::fill(out.begin(), out.end(), kNeg);
  if (deg == 0) return;

  Scratch& sc = scratch();
  sc.resize(deg);
  std::span<double> z(sc.z), x(sc.x), y(sc.y);

  if (pb.is_root) {
    // neighbours hang at depth 1 or stay out
    DefaultSum s;
    for (int a = 0; a < deg; ++a) {
      x[a] = std::max(q(a, 1), q(a, 0));
      s.push(a, x[a]);
    }
    for (int j = 0; j < deg; ++j) {
      const double v = sum_excluding(s, j, x[j]);
      o(j, 0) = v;
      o(j, -1) = v;
    }
  } else {
    DefaultSum zs;
    for (int a = 0; a < deg; ++a) {
      z[a] = q(a, 0);
      zs.push(a, z[a]);
    }
    for (int j = 0; j < deg; ++j) o(j, 0) = add(-pb.prize, sum_excluding(zs, j, z[j]));

    // i sits at depth p; neighbours other than the parent are children at p+1 or absent
    for (int p = 1; p <= depth; ++p) {
      DefaultSum xs;
      for (int a = 0; a < deg; ++a) {
        x[a] = p < depth ? std::max(q(a, p + 1), q(a, 0)) : q(a, 0);
        y[a] = floor_neg(q(a, -p) - pb.weights[a]);
        xs.push(a, x[a]);
      }
      const Top3 gains = gains_of(x, y);
      for (int j = 0; j < deg; ++j) {
        o(j, p) = add(-pb.weights[j], sum_excluding(xs, j, x[j]));
        const double via_other_parent = single_swap(xs, gains, x, y, j);
        if (p < depth) o(j, -(p + 1)) = via_other_parent;
        o(j, 0) = std::max(o(j, 0), via_other_parent);
      }
    }

    if (pb.model == Model::Flat && pb.prize == 0.0) {
      std::span<double> yc(sc.yc), yp(sc.yp);
      for (int e = 1; e <= depth; ++e) {
        for (int a = 0; a < deg; ++a) {
          yc[a] = q(a, e);
          yp[a] = floor_neg(q(a, -e) - pb.weights[a]);
        }
        const Top3 gc = gains_of(z, yc);
        const Top3 gp = gains_of(z, yp);
        for (int j = 0; j < deg; ++j) {
          // j parent, one other neighbour continues at the same depth
          o(j, e) = std::max(o(j, e), add(-pb.weights[j], single_swap(zs, gc, z, yc, j)));
          // j child at depth e, parent among the others at depth e
          o(j, -e) = std::max(o(j, -e), single_swap(zs, gp, z, yp, j));
          // flat pass-through between two other neighbours
          o(j, 0) = std::max(o(j, 0), double_swap(zs, gp, gc, z, yp, yc, j));
        }
      }
    }
  }
  for (int a = 0; a < deg; ++a) normalize(out.subspan(static_cast<std::size_t>(a) * width, width));
}

EngineState init_state(const Instance& inst, const EngineOptions& options) {
  if (options.depth < 1) throw ConfigError("depth bound must be at least 1");
  if (options.gamma1 < 0.0) throw ConfigError("reinforcement slope must be non-negative");
  EngineState st;
  st.options = options;
  st.root = inst.require_root();
  const double eps = options.noise_scale * inst.max_weight();
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  st.noise.resize(inst.num_edges());
  st.weights.resize(inst.num_slots());
  for (std::int32_t k = 0; k < inst.num_edges(); ++k) {
    st.noise[k] = eps * unif(rng);
    st.weights[2 * k] = inst.weight(2 * k) + st.noise[k];
    st.weights[2 * k + 1] = inst.weight(2 * k + 1) + st.noise[k];
  }
  st.messages = FieldTable(inst.num_slots(), options.depth, 0.0);
  st.feedback = FieldTable(inst.num_slots(), options.depth, 0.0);
  st.local = FieldTable(inst.num_slots(), options.depth, 0.0);
  return st;
}

namespace {

void gather_inputs(const EngineState& st, const Instance& inst, Vertex i, std::vector<double>& in,
                   std::vector<double>& w) {
  const auto slots = inst.out_slots(i);
  const int width = st.messages.width();
  in.resize(slots.size() * width);
  w.resize(slots.size());
  for (std::size_t a = 0; a < slots.size(); ++a) {
    const Slot back = Instance::reverse(slots[a]);
    const auto h = st.messages.row(back);
    const auto f = st.feedback.row(back);
    for (int d = 0; d < width; ++d) in[a * width + d] = add(h[d], f[d]);
    w[a] = st.weights[slots[a]];
  }
}

void run_sweep(EngineState& st, const Instance& inst) {
  const int width = st.messages.width();
  const bool sync = st.options.schedule == Schedule::Synchronous;
  FieldTable next;
  if (sync) next = st.messages;
  FieldTable& target = sync ? next : st.messages;
  std::vector<double> in, w, out;
  for (Vertex i = 0; i < inst.num_vertices(); ++i) {
    const auto slots = inst.out_slots(i);
    if (slots.empty()) continue;
    gather_inputs(st, inst, i, in, w);
    out.resize(in.size());
    const VertexProblem pb{st.options.depth, st.options.model, i == st.root, inst.prize(i), w, in};
    update_vertex(pb, out);
    for (std::size_t a = 0; a < slots.size(); ++a)
      std::copy_n(out.begin() + static_cast<std::ptrdiff_t>(a * width), width, target.row(slots[a]).begin());
    st.updates += slots.size() * static_cast<std::uint64_t>(width);
  }
  if (sync) st.messages = std::move(next);
}

}  // namespace

void ms_sweep_normal(EngineState& state, const Instance& inst) {
  if (state.options.model != Model::Normal) throw ConfigError("normal sweep on a flat-model state");
  run_sweep(state, inst);
}

void ms_sweep_flat(EngineState& state, const Instance& inst) {
  if (state.options.model != Model::Flat) throw ConfigError("flat sweep on a normal-model state");
  run_sweep(state, inst);
}

void sweep(EngineState& state, const Instance& inst) { run_sweep(state, inst); }

void reinforce(EngineState& state) {
  const int depth = state.local.depth();
  const int width = state.local.width();
  for (Slot s = 0; s < state.local.rows(); ++s) {
    auto out = state.local.row(s);
    const auto mine = state.messages.row(s);
    const auto theirs = state.messages.row(Instance::reverse(s));
    const auto fb = state.feedback.row(s);
    for (int k = 0; k < width; ++k) {
      // entry k is depth k - D; the reverse orientation sees -d at index 2D - k
      out[k] = add(add(mine[k], theirs[2 * depth - k]), fb[k]);
    }
    normalize(out);
  }
  ++state.iteration;
  const double g = state.gamma();
  auto& fb = state.feedback.values();
  const auto& loc = state.local.values();
  if (g == 0.0) {
    std::fill(fb.begin(), fb.end(), 0.0);
  } else {
    for (std::size_t k = 0; k < fb.size(); ++k) fb[k] = ext::scale(g, loc[k]);
  }
}

Representation decisional_variables(const FieldTable& local) {
  Representation rep;
  const int depth = local.depth();
  rep.bound = depth;
  rep.depth.resize(local.rows());
  for (Slot s = 0; s < local.rows(); ++s) {
    int best_d = 0;
    double best = local.at(s, 0);
    for (int a = 1; a <= depth; ++a) {
      for (int d : {-a, a}) {
        if (local.at(s, d) > best) {
          best = local.at(s, d);
          best_d = d;
        }
      }
    }
    rep.depth[s] = best_d;
  }
  return rep;
}

double NodeFields::inclusion(Vertex i) const noexcept {
  double best = kNeg;
  for (int d = 1; d <= depth; ++d) best = std::max(best, at(i, d));
  const double h0 = at(i, 0);
  if (is_neg(best)) return is_neg(h0) ? 0.0 : kNeg;
  if (is_neg(h0)) return -kNeg;
  return best - h0;
}

NodeFields node_fields(const EngineState& state, const Instance& inst) {
  const int depth = state.options.depth;
  NodeFields nf;
  nf.depth = depth;
  nf.root = state.root;
  nf.values.assign(static_cast<std::size_t>(inst.num_vertices()) * (depth + 1), kNeg);
  std::vector<double> in, w, z, x, y, yc, yp;
  const int width = 2 * depth + 1;
  for (Vertex i = 0; i < inst.num_vertices(); ++i) {
    double* row = nf.values.data() + static_cast<std::size_t>(i) * (depth + 1);
    const auto deg = static_cast<int>(inst.degree(i));
    gather_inputs(state, inst, i, in, w);
    auto q = [&](int a, int d) { return in[static_cast<std::size_t>(a) * width + d + depth]; };
    z.resize(deg);
    DefaultSum zs;
    if (i == state.root) {
      double total = 0.0;
      for (int a = 0; a < deg; ++a) total = add(total, std::max(q(a, 1), q(a, 0)));
      row[0] = total;
      continue;
    }
    for (int a = 0; a < deg; ++a) {
      z[a] = q(a, 0);
      zs.push(a, z[a]);
    }
    row[0] = add(-inst.prize(i), sum_excluding(zs, -1, 0.0));
    x.resize(deg);
    y.resize(deg);
    for (int p = 1; p <= depth; ++p) {
      DefaultSum xs;
      for (int a = 0; a < deg; ++a) {
        x[a] = p < depth ? std::max(q(a, p + 1), q(a, 0)) : q(a, 0);
        y[a] = floor_neg(q(a, -p) - w[a]);
        xs.push(a, x[a]);
      }
      row[p] = single_swap(xs, gains_of(x, y), x, y, -1);
    }
    if (state.options.model == Model::Flat && inst.prize(i) == 0.0) {
      yc.resize(deg);
      yp.resize(deg);
      for (int e = 1; e <= depth; ++e) {
        for (int a = 0; a < deg; ++a) {
          yc[a] = q(a, e);
          yp[a] = floor_neg(q(a, -e) - w[a]);
        }
        row[e] = std::max(row[e], double_swap(zs, gains_of(z, yp), gains_of(z, yc), z, yp, yc, -1));
      }
    }
  }
  return nf;
}

FieldSnapshot snapshot(const EngineState& state, const Instance& inst, bool with_node_fields) {
  FieldSnapshot snap;
  snap.model = state.options.model;
  snap.root = state.root;
  snap.iteration = state.iteration;
  snap.local = state.local;
  if (with_node_fields) snap.nodes = node_fields(state, inst);
  return snap;
}

bool StabilityMonitor::push(const Representation& rep) {
  if (run_ > 0 && rep == last_) {
    ++run_;
  } else {
    last_ = rep;
    run_ = 1;
  }
  return converged();
}

}  // namespace msteiner::maxsum
