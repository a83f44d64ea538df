#include "ftriad/diagram.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <map>
#include <queue>
#include <sstream>
#include <tuple>

namespace ftriad {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::shared_ptr<const DslExpr> make_expr(DslExpr e) {
  return std::make_shared<const DslExpr>(std::move(e));
}

bool is_empty_diagram(const Diagram& d) {
  return d.nodes.empty() && d.wires.empty() && d.input_dims.empty() &&
         d.output_dims.empty();
}

Diagram atom(Generator gen, DslExpr expr) {
  Diagram d;
  std::vector<std::size_t> ins = gen.input_dims();
  std::vector<std::size_t> outs = gen.output_dims();
  d.nodes.push_back(std::move(gen));
  for (std::size_t i = 0; i < ins.size(); ++i) {
    d.wires.push_back(Wire{{Endpoint::Kind::BoundaryIn, 0, i},
                           {Endpoint::Kind::NodeIn, 0, i},
                           ins[i]});
  }
  for (std::size_t j = 0; j < outs.size(); ++j) {
    d.wires.push_back(Wire{{Endpoint::Kind::NodeOut, 0, j},
                           {Endpoint::Kind::BoundaryOut, 0, j},
                           outs[j]});
  }
  d.input_dims = std::move(ins);
  d.output_dims = std::move(outs);
  d.expr = make_expr(std::move(expr));
  return d;
}

Endpoint shifted(Endpoint e, std::size_t node_off, std::size_t in_off,
                 std::size_t out_off) {
  switch (e.kind) {
    case Endpoint::Kind::NodeIn:
    case Endpoint::Kind::NodeOut:
      e.node += node_off;
      break;
    case Endpoint::Kind::BoundaryIn:
      e.port += in_off;
      break;
    case Endpoint::Kind::BoundaryOut:
      e.port += out_off;
      break;
  }
  return e;
}

Tensor swap_payload(std::size_t d0, std::size_t d1) {
  Tensor s = Tensor::zeros({d1, d0, d0, d1});
  for (std::size_t x = 0; x < d0; ++x) {
    for (std::size_t y = 0; y < d1; ++y) {
      s.set({y, x, x, y}, Scalar(1.0));
    }
  }
  return s;
}

void validate_algebra_shape(const Cfa& a) {
  std::size_t d = a.dim;
  std::vector<std::size_t> cube{d, d, d};
  std::vector<std::size_t> vec{d};
  if (d == 0 || a.mu.shape() != cube || a.delta.shape() != cube ||
      a.eta.shape() != vec || a.epsilon.shape() != vec) {
    throw DimensionMismatch("malformed algebra '" + a.name + "'");
  }
}

}  // namespace

std::size_t Generator::input_count() const { return input_dims().size(); }
std::size_t Generator::output_count() const { return output_dims().size(); }

std::vector<std::size_t> Generator::input_dims() const {
  switch (kind) {
    case GenKind::Mul: return {dim, dim};
    case GenKind::Unit: return {};
    case GenKind::Comul: return {dim};
    case GenKind::Counit: return {dim};
    case GenKind::Identity: return {dim};
    case GenKind::Swap: return {dim, dim2};
    case GenKind::State: return {};
    case GenKind::Effect: return {dim};
    case GenKind::Box: return {dim2};
  }
  return {};
}

std::vector<std::size_t> Generator::output_dims() const {
  switch (kind) {
    case GenKind::Mul: return {dim};
    case GenKind::Unit: return {dim};
    case GenKind::Comul: return {dim, dim};
    case GenKind::Counit: return {};
    case GenKind::Identity: return {dim};
    case GenKind::Swap: return {dim2, dim};
    case GenKind::State: return {dim};
    case GenKind::Effect: return {};
    case GenKind::Box: return {dim};
  }
  return {};
}

Diagram empty_diagram() {
  Diagram d;
  d.expr = make_expr(DslExpr{});
  return d;
}

Diagram wire_diagram(std::size_t dim) {
  if (dim == 0) throw DimensionMismatch("wire dimension must be positive");
  Diagram d;
  d.wires.push_back(Wire{{Endpoint::Kind::BoundaryIn, 0, 0},
                         {Endpoint::Kind::BoundaryOut, 0, 0},
                         dim});
  d.input_dims = {dim};
  d.output_dims = {dim};
  DslExpr e;
  e.kind = DslExpr::Kind::Id;
  e.dim = dim;
  d.expr = make_expr(std::move(e));
  return d;
}

Diagram swap_diagram(std::size_t d0, std::size_t d1) {
  if (d0 == 0 || d1 == 0) {
    throw DimensionMismatch("swap dimensions must be positive");
  }
  Generator g;
  g.kind = GenKind::Swap;
  g.dim = d0;
  g.dim2 = d1;
  g.payload = swap_payload(d0, d1);
  DslExpr e;
  e.kind = DslExpr::Kind::Swap;
  e.dim = d0;
  e.dim2 = d1;
  return atom(std::move(g), std::move(e));
}

namespace {

Diagram algebra_atom(const Cfa& a, GenKind kind, DslExpr::Kind ek,
                     Tensor payload) {
  validate_algebra_shape(a);
  Generator g;
  g.kind = kind;
  g.algebra = a.name;
  g.dim = a.dim;
  g.payload = std::move(payload);
  DslExpr e;
  e.kind = ek;
  e.name = a.name;
  e.dim = a.dim;
  return atom(std::move(g), std::move(e));
}

}  // namespace

Diagram mul_node(const Cfa& a) {
  return algebra_atom(a, GenKind::Mul, DslExpr::Kind::Mu, a.mu);
}
Diagram unit_node(const Cfa& a) {
  return algebra_atom(a, GenKind::Unit, DslExpr::Kind::Eta, a.eta);
}
Diagram comul_node(const Cfa& a) {
  return algebra_atom(a, GenKind::Comul, DslExpr::Kind::Delta, a.delta);
}
Diagram counit_node(const Cfa& a) {
  return algebra_atom(a, GenKind::Counit, DslExpr::Kind::Eps, a.epsilon);
}

Diagram state_node(const Tensor& v) {
  if (v.ndim() != 1) {
    throw DimensionMismatch("state nodes carry a single-index tensor");
  }
  Generator g;
  g.kind = GenKind::State;
  g.dim = v.shape()[0];
  g.payload = v;
  DslExpr e;
  e.kind = DslExpr::Kind::Ket;
  e.dim = g.dim;
  e.payload = v;
  return atom(std::move(g), std::move(e));
}

Diagram effect_node(const Tensor& v) {
  if (v.ndim() != 1) {
    throw DimensionMismatch("effect nodes carry a single-index tensor");
  }
  Generator g;
  g.kind = GenKind::Effect;
  g.dim = v.shape()[0];
  g.payload = v;
  DslExpr e;
  e.kind = DslExpr::Kind::Bra;
  e.dim = g.dim;
  e.payload = v;
  return atom(std::move(g), std::move(e));
}

Diagram box_node(const std::string& label, const Tensor& m) {
  if (m.ndim() != 2) {
    throw DimensionMismatch("box nodes carry a two-index tensor");
  }
  Generator g;
  g.kind = GenKind::Box;
  g.dim = m.shape()[0];
  g.dim2 = m.shape()[1];
  g.payload = m;
  g.label = label;
  DslExpr e;
  e.kind = DslExpr::Kind::Box;
  e.name = label;
  e.dim = g.dim;
  e.dim2 = g.dim2;
  return atom(std::move(g), std::move(e));
}

Diagram par(const Diagram& f, const Diagram& g) {
  if (is_empty_diagram(f)) return g;
  if (is_empty_diagram(g)) return f;
  Diagram r;
  r.nodes = f.nodes;
  r.nodes.insert(r.nodes.end(), g.nodes.begin(), g.nodes.end());
  std::size_t node_off = f.nodes.size();
  std::size_t in_off = f.input_dims.size();
  std::size_t out_off = f.output_dims.size();
  r.wires = f.wires;
  for (Wire w : g.wires) {
    w.from = shifted(w.from, node_off, in_off, out_off);
    w.to = shifted(w.to, node_off, in_off, out_off);
    r.wires.push_back(w);
  }
  r.input_dims = f.input_dims;
  r.input_dims.insert(r.input_dims.end(), g.input_dims.begin(),
                      g.input_dims.end());
  r.output_dims = f.output_dims;
  r.output_dims.insert(r.output_dims.end(), g.output_dims.begin(),
                       g.output_dims.end());
  DslExpr e;
  e.kind = DslExpr::Kind::Par;
  e.children = {f.expr, g.expr};
  r.expr = make_expr(std::move(e));
  return r;
}

Diagram seq(const Diagram& f, const Diagram& g) {
  if (f.output_dims != g.input_dims) {
    throw DimensionMismatch(
        "sequential composition mismatch: " +
        std::to_string(f.output_dims.size()) + " outputs vs " +
        std::to_string(g.input_dims.size()) + " inputs");
  }
  if (is_empty_diagram(f)) return g;
  if (is_empty_diagram(g)) return f;
  Diagram r;
  r.nodes = f.nodes;
  r.nodes.insert(r.nodes.end(), g.nodes.begin(), g.nodes.end());
  std::size_t node_off = f.nodes.size();

  std::vector<std::size_t> f_out(f.output_dims.size(), kNone);
  std::vector<std::size_t> g_in(g.input_dims.size(), kNone);
  for (std::size_t i = 0; i < f.wires.size(); ++i) {
    if (f.wires[i].to.kind == Endpoint::Kind::BoundaryOut) {
      f_out[f.wires[i].to.port] = i;
    }
  }
  for (std::size_t i = 0; i < g.wires.size(); ++i) {
    if (g.wires[i].from.kind == Endpoint::Kind::BoundaryIn) {
      g_in[g.wires[i].from.port] = i;
    }
  }
  for (const Wire& w : f.wires) {
    if (w.to.kind != Endpoint::Kind::BoundaryOut) r.wires.push_back(w);
  }
  for (const Wire& w : g.wires) {
    if (w.from.kind == Endpoint::Kind::BoundaryIn) continue;
    Wire sw = w;
    sw.from = shifted(sw.from, node_off, 0, 0);
    sw.to = shifted(sw.to, node_off, 0, 0);
    r.wires.push_back(sw);
  }
  for (std::size_t k = 0; k < f.output_dims.size(); ++k) {
    const Wire& wf = f.wires[f_out[k]];
    const Wire& wg = g.wires[g_in[k]];
    r.wires.push_back(
        Wire{wf.from, shifted(wg.to, node_off, 0, 0), wf.dim});
  }
  r.input_dims = f.input_dims;
  r.output_dims = g.output_dims;
  DslExpr e;
  e.kind = DslExpr::Kind::Seq;
  e.children = {f.expr, g.expr};
  r.expr = make_expr(std::move(e));
  return r;
}

Diagram permutation_wiring(const std::vector<std::size_t>& dims,
                           const std::vector<std::size_t>& perm) {
  std::size_t n = dims.size();
  if (perm.size() != n) {
    throw DimensionMismatch("permutation size does not match wire count");
  }
  std::vector<bool> seen(n, false);
  for (std::size_t v : perm) {
    if (v >= n || seen[v]) throw DomainError("not a permutation");
    seen[v] = true;
  }
  if (n == 0) return empty_diagram();

  // inv[j] = which input exits at output slot j.
  std::vector<std::size_t> inv(n);
  for (std::size_t s = 0; s < n; ++s) inv[perm[s]] = s;

  std::vector<std::size_t> cur(n);
  for (std::size_t i = 0; i < n; ++i) cur[i] = i;

  auto identity_layer = [&]() {
    Diagram layer = empty_diagram();
    for (std::size_t i = 0; i < n; ++i) {
      layer = par(layer, wire_diagram(dims[cur[i]]));
    }
    return layer;
  };

  Diagram acc = identity_layer();
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t t = j;
    while (cur[t] != inv[j]) ++t;
    for (std::size_t k = t; k > j; --k) {
      Diagram layer = empty_diagram();
      for (std::size_t i = 0; i + 1 < k; ++i) {
        layer = par(layer, wire_diagram(dims[cur[i]]));
      }
      layer = par(layer, swap_diagram(dims[cur[k - 1]], dims[cur[k]]));
      for (std::size_t i = k + 1; i < n; ++i) {
        layer = par(layer, wire_diagram(dims[cur[i]]));
      }
      acc = seq(acc, layer);
      std::swap(cur[k - 1], cur[k]);
    }
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

namespace {

struct Dsu {
  std::vector<std::size_t> parent;
  explicit Dsu(std::size_t n) : parent(n) {
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

bool is_wiring(const Generator& g) {
  return g.kind == GenKind::Identity || g.kind == GenKind::Swap;
}

struct PoolEntry {
  Tensor tensor;
  std::vector<std::size_t> labels;
  bool alive = true;
};

// Contraction cost of a candidate pair: the size of the merged tensor
// (product of both operands' non-shared dimensions).
std::size_t merged_size(const PoolEntry& a, const PoolEntry& b) {
  std::size_t cost = 1;
  for (std::size_t k = 0; k < a.labels.size(); ++k) {
    if (std::find(b.labels.begin(), b.labels.end(), a.labels[k]) ==
        b.labels.end()) {
      cost *= a.tensor.shape()[k];
    }
  }
  for (std::size_t k = 0; k < b.labels.size(); ++k) {
    if (std::find(a.labels.begin(), a.labels.end(), b.labels[k]) ==
        a.labels.end()) {
      cost *= b.tensor.shape()[k];
    }
  }
  return cost;
}

}  // namespace

Tensor evaluate(const Diagram& d) {
  if (d.nodes.empty() && d.wires.empty()) return Tensor::scalar(Scalar(1.0));

  const std::vector<Generator>& nodes = d.nodes;
  const std::vector<Wire>& wires = d.wires;

  // Port-to-wire tables.
  std::vector<std::vector<std::size_t>> node_out_wire(nodes.size());
  std::vector<std::vector<std::size_t>> node_in_wire(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    node_out_wire[n].assign(nodes[n].output_count(), kNone);
    node_in_wire[n].assign(nodes[n].input_count(), kNone);
  }
  std::vector<std::size_t> in_wire(d.input_dims.size(), kNone);
  std::vector<std::size_t> out_wire(d.output_dims.size(), kNone);
  for (std::size_t w = 0; w < wires.size(); ++w) {
    const Endpoint& a = wires[w].from;
    const Endpoint& b = wires[w].to;
    if (a.kind == Endpoint::Kind::NodeOut) node_out_wire[a.node][a.port] = w;
    if (a.kind == Endpoint::Kind::BoundaryIn) in_wire[a.port] = w;
    if (b.kind == Endpoint::Kind::NodeIn) node_in_wire[b.node][b.port] = w;
    if (b.kind == Endpoint::Kind::BoundaryOut) out_wire[b.port] = w;
  }

  // Fuse wires through Identity/Swap nodes so pure routing never enters the
  // contraction pool; each surviving net is one contraction label.
  Dsu nets(wires.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (nodes[n].kind == GenKind::Identity) {
      nets.unite(node_in_wire[n][0], node_out_wire[n][0]);
    } else if (nodes[n].kind == GenKind::Swap) {
      nets.unite(node_in_wire[n][0], node_out_wire[n][1]);
      nets.unite(node_in_wire[n][1], node_out_wire[n][0]);
    }
  }

  std::vector<PoolEntry> pool;
  pool.reserve(nodes.size() * 2);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (is_wiring(nodes[n])) continue;
    PoolEntry e;
    e.tensor = nodes[n].payload;
    e.labels.reserve(node_out_wire[n].size() + node_in_wire[n].size());
    for (std::size_t w : node_out_wire[n]) e.labels.push_back(nets.find(w));
    for (std::size_t w : node_in_wire[n]) e.labels.push_back(nets.find(w));
    pool.push_back(std::move(e));
  }

  std::vector<std::size_t> in_label(in_wire.size());
  std::vector<std::size_t> out_label(out_wire.size());
  for (std::size_t s = 0; s < in_wire.size(); ++s) {
    in_label[s] = nets.find(in_wire[s]);
  }
  for (std::size_t s = 0; s < out_wire.size(); ++s) {
    out_label[s] = nets.find(out_wire[s]);
  }

  // A net running from an input slot straight to an output slot has no
  // tensor carrying it; materialize it as an identity matrix with a fresh
  // label on the output side.
  std::size_t label_count = wires.size();
  {
    std::vector<std::size_t> net_in_slot(wires.size(), kNone);
    for (std::size_t s = 0; s < in_label.size(); ++s) {
      net_in_slot[in_label[s]] = s;
    }
    for (std::size_t t = 0; t < out_label.size(); ++t) {
      std::size_t s = net_in_slot[out_label[t]];
      if (s == kNone) continue;
      net_in_slot[out_label[t]] = kNone;
      PoolEntry e;
      e.tensor = Tensor::identity(d.output_dims[t]);
      e.labels = {label_count, in_label[s]};
      out_label[t] = label_count;
      ++label_count;
      pool.push_back(std::move(e));
    }
  }

  // Closed loops of pure wiring contribute a dimension factor each.
  double loop_factor = 1.0;
  {
    std::vector<char> open_net(wires.size(), 0);
    for (const PoolEntry& e : pool) {
      for (std::size_t lab : e.labels) {
        if (lab < wires.size()) open_net[lab] = 1;
      }
    }
    for (std::size_t lab : in_label) open_net[lab] = 1;
    for (std::size_t w = 0; w < wires.size(); ++w) {
      std::size_t root = nets.find(w);
      if (!open_net[root]) {
        loop_factor *= static_cast<double>(wires[w].dim);
        open_net[root] = 1;
      }
    }
  }
  if (pool.empty()) return Tensor::scalar(Scalar(loop_factor));

  std::size_t alive = pool.size();
  // owners[label] = up to two alive pool entries carrying it (labels are
  // dense net indices, so a flat table beats a map here). Kept current
  // incrementally: when two entries merge, their surviving labels are
  // re-pointed at the merged entry.
  std::vector<std::array<std::size_t, 2>> owners(label_count,
                                                 {kNone, kNone});
  for (std::size_t i = 0; i < pool.size(); ++i) {
    for (std::size_t lab : pool[i].labels) {
      if (owners[lab][0] == kNone) {
        owners[lab][0] = i;
      } else {
        owners[lab][1] = i;
      }
    }
  }

  // Min-heap of candidate contractions ordered by (cost, i, j). Pool entries
  // never change after creation, so a pair's cost is fixed for its lifetime;
  // pairs whose operands have since been consumed are skipped lazily on pop.
  // Popping therefore yields the same pair a full rescan would select.
  struct Cand {
    std::size_t cost, i, j;
  };
  struct CandAfter {
    bool operator()(const Cand& x, const Cand& y) const {
      return std::tie(x.cost, x.i, x.j) > std::tie(y.cost, y.i, y.j);
    }
  };
  std::priority_queue<Cand, std::vector<Cand>, CandAfter> heap;
  // Queue the pairs joining entry m to older alive entries; every sharing
  // pair is enqueued exactly once, when its younger member appears.
  std::vector<std::size_t> partners;
  auto enqueue_pairs_of = [&](std::size_t m) {
    partners.clear();
    for (std::size_t lab : pool[m].labels) {
      const auto& who = owners[lab];
      std::size_t other = who[0] == m ? who[1] : who[0];
      if (other != kNone && other < m && pool[other].alive) {
        partners.push_back(other);
      }
    }
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()),
                   partners.end());
    for (std::size_t o : partners) {
      heap.push(Cand{merged_size(pool[o], pool[m]), o, m});
    }
  };
  for (std::size_t i = 0; i < pool.size(); ++i) enqueue_pairs_of(i);

  while (alive > 1) {
    std::size_t best_i = kNone, best_j = kNone;
    while (!heap.empty()) {
      Cand c = heap.top();
      heap.pop();
      if (pool[c.i].alive && pool[c.j].alive) {
        best_i = c.i;
        best_j = c.j;
        break;
      }
    }
    if (best_i == kNone) {
      // Disconnected remainder: outer-product the two smallest tensors.
      std::size_t si = kNone, sj = kNone;
      for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!pool[i].alive) continue;
        if (si == kNone || pool[i].tensor.size() < pool[si].tensor.size()) {
          sj = si;
          si = i;
        } else if (sj == kNone ||
                   pool[i].tensor.size() < pool[sj].tensor.size()) {
          sj = i;
        }
      }
      best_i = std::min(si, sj);
      best_j = std::max(si, sj);
    }

    PoolEntry& a = pool[best_i];
    PoolEntry& b = pool[best_j];
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    std::vector<std::size_t> new_labels;
    for (std::size_t ka = 0; ka < a.labels.size(); ++ka) {
      auto it = std::find(b.labels.begin(), b.labels.end(), a.labels[ka]);
      if (it != b.labels.end()) {
        pairs.emplace_back(ka, static_cast<std::size_t>(it - b.labels.begin()));
      } else {
        new_labels.push_back(a.labels[ka]);
      }
    }
    for (std::size_t kb = 0; kb < b.labels.size(); ++kb) {
      auto it = std::find(a.labels.begin(), a.labels.end(), b.labels[kb]);
      if (it == a.labels.end()) new_labels.push_back(b.labels[kb]);
    }
    PoolEntry merged;
#ifdef FTRIAD_EVAL_STATS
    {
      std::size_t psz = 1;
      for (auto& pr : pairs) psz *= a.tensor.shape()[pr.first];
      std::size_t osz = merged_size(a, b);
      extern std::size_t g_eval_flops, g_eval_max, g_eval_steps;
      g_eval_flops += osz * psz;
      g_eval_max = std::max(g_eval_max, osz);
      ++g_eval_steps;
    }
#endif
    merged.tensor = contract(a.tensor, b.tensor, pairs);
    merged.labels = std::move(new_labels);
    a.alive = false;
    b.alive = false;
    pool.push_back(std::move(merged));
    const std::size_t m = pool.size() - 1;
    for (std::size_t lab : pool[m].labels) {
      auto& who = owners[lab];
      if (who[0] == best_i || who[0] == best_j) {
        who[0] = m;
      } else if (who[1] == best_i || who[1] == best_j) {
        who[1] = m;
      }
    }
    enqueue_pairs_of(m);
    --alive;
  }

  std::size_t last = kNone;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (pool[i].alive) last = i;
  }
  Tensor result = pool[last].tensor;
  if (loop_factor != 1.0) result = result * Scalar(loop_factor);
  const std::vector<std::size_t>& labels = pool[last].labels;

  std::vector<std::size_t> desired = in_label;
  desired.insert(desired.end(), out_label.begin(), out_label.end());
  if (desired.empty()) return result;
  std::vector<std::size_t> axes(desired.size());
  for (std::size_t k = 0; k < desired.size(); ++k) {
    auto it = std::find(labels.begin(), labels.end(), desired[k]);
    axes[k] = static_cast<std::size_t>(it - labels.begin());
  }
  return result.transpose(axes);
}

Tensor eval_to_matrix(const Diagram& d) {
  Tensor t = evaluate(d);
  std::size_t ni = d.input_dims.size();
  std::size_t no = d.output_dims.size();
  std::vector<std::size_t> axes;
  axes.reserve(ni + no);
  for (std::size_t k = 0; k < no; ++k) axes.push_back(ni + k);
  for (std::size_t k = 0; k < ni; ++k) axes.push_back(k);
  Tensor reordered = axes.empty() ? t : t.transpose(axes);
  std::size_t rows = 1, cols = 1;
  for (std::size_t v : d.output_dims) rows *= v;
  for (std::size_t v : d.input_dims) cols *= v;
  return reordered.reshape({rows, cols});
}

// ---------------------------------------------------------------------------
// Spider machinery
// ---------------------------------------------------------------------------

namespace {

// A wire net = maximal chain of wires fused through Identity/Swap nodes.
// Each net has two true ends (real-node ports or boundary slots) or none
// (closed wiring cycle).
struct NetEnd {
  enum class Kind { Node, BoundaryIn, BoundaryOut } kind;
  std::size_t index = 0;  // node id or boundary slot
};

struct Net {
  std::vector<NetEnd> ends;  // 0 or 2 entries
  std::size_t dim = 0;
};

struct ComponentInfo {
  std::vector<std::size_t> in_slots;   // sorted boundary-in slots
  std::vector<std::size_t> out_slots;  // sorted boundary-out slots
  std::size_t real_nodes = 0;
  std::size_t internal_nets = 0;
  std::size_t loops = 0;
  std::size_t min_node = kNone;
  bool pure = false;  // no real nodes: bare through-wire or closed cycle

  std::array<std::size_t, 3> order_key() const {
    return {in_slots.empty() ? kNone : in_slots.front(),
            out_slots.empty() ? kNone : out_slots.front(), min_node};
  }
};

std::vector<ComponentInfo> analyze_components(const Diagram& d) {
  const std::vector<Generator>& nodes = d.nodes;
  const std::vector<Wire>& wires = d.wires;

  // Fuse wires through wiring nodes.
  Dsu wire_dsu(wires.size());
  std::vector<std::vector<std::size_t>> nin(nodes.size()), nout(nodes.size());
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    nin[n].assign(nodes[n].input_count(), kNone);
    nout[n].assign(nodes[n].output_count(), kNone);
  }
  for (std::size_t w = 0; w < wires.size(); ++w) {
    if (wires[w].from.kind == Endpoint::Kind::NodeOut) {
      nout[wires[w].from.node][wires[w].from.port] = w;
    }
    if (wires[w].to.kind == Endpoint::Kind::NodeIn) {
      nin[wires[w].to.node][wires[w].to.port] = w;
    }
  }
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (nodes[n].kind == GenKind::Identity) {
      wire_dsu.unite(nin[n][0], nout[n][0]);
    } else if (nodes[n].kind == GenKind::Swap) {
      wire_dsu.unite(nin[n][0], nout[n][1]);
      wire_dsu.unite(nin[n][1], nout[n][0]);
    }
  }

  std::map<std::size_t, Net> nets;
  for (std::size_t w = 0; w < wires.size(); ++w) {
    Net& net = nets[wire_dsu.find(w)];
    net.dim = wires[w].dim;
    auto consider = [&](const Endpoint& e) {
      if (e.kind == Endpoint::Kind::BoundaryIn) {
        net.ends.push_back({NetEnd::Kind::BoundaryIn, e.port});
      } else if (e.kind == Endpoint::Kind::BoundaryOut) {
        net.ends.push_back({NetEnd::Kind::BoundaryOut, e.port});
      } else if (!is_wiring(nodes[e.node])) {
        net.ends.push_back({NetEnd::Kind::Node, e.node});
      }
    };
    consider(wires[w].from);
    consider(wires[w].to);
  }

  // Group real nodes into components via nets.
  Dsu node_dsu(nodes.size());
  for (const auto& [root, net] : nets) {
    if (net.ends.size() == 2 && net.ends[0].kind == NetEnd::Kind::Node &&
        net.ends[1].kind == NetEnd::Kind::Node) {
      node_dsu.unite(net.ends[0].index, net.ends[1].index);
    }
  }

  std::map<std::size_t, ComponentInfo> comps;  // keyed by node-dsu root
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (is_wiring(nodes[n])) continue;
    ComponentInfo& c = comps[node_dsu.find(n)];
    c.real_nodes += 1;
    c.min_node = std::min(c.min_node, n);
  }
  std::vector<ComponentInfo> pure_components;
  for (const auto& [root, net] : nets) {
    if (net.ends.empty()) {
      // Closed wiring cycle.
      ComponentInfo c;
      c.pure = true;
      c.loops = 1;
      c.min_node = kNone;
      pure_components.push_back(c);
      continue;
    }
    bool n0 = net.ends[0].kind == NetEnd::Kind::Node;
    bool n1 = net.ends[1].kind == NetEnd::Kind::Node;
    if (!n0 && !n1) {
      // Bare through-wire.
      ComponentInfo c;
      c.pure = true;
      for (const NetEnd& e : net.ends) {
        if (e.kind == NetEnd::Kind::BoundaryIn) c.in_slots.push_back(e.index);
        else c.out_slots.push_back(e.index);
      }
      pure_components.push_back(c);
      continue;
    }
    std::size_t comp_root =
        node_dsu.find(n0 ? net.ends[0].index : net.ends[1].index);
    ComponentInfo& c = comps[comp_root];
    if (n0 && n1) {
      c.internal_nets += 1;
    } else {
      const NetEnd& b = n0 ? net.ends[1] : net.ends[0];
      if (b.kind == NetEnd::Kind::BoundaryIn) c.in_slots.push_back(b.index);
      else c.out_slots.push_back(b.index);
    }
  }

  std::vector<ComponentInfo> out;
  for (auto& [root, c] : comps) {
    std::sort(c.in_slots.begin(), c.in_slots.end());
    std::sort(c.out_slots.begin(), c.out_slots.end());
    c.loops = c.internal_nets + 1 - c.real_nodes;
    out.push_back(std::move(c));
  }
  for (auto& c : pure_components) {
    std::sort(c.in_slots.begin(), c.in_slots.end());
    std::sort(c.out_slots.begin(), c.out_slots.end());
    out.push_back(std::move(c));
  }
  std::sort(out.begin(), out.end(),
            [](const ComponentInfo& a, const ComponentInfo& b) {
              return a.order_key() < b.order_key();
            });
  return out;
}

}  // namespace

SpiderSignature spider_signature(const Diagram& d) {
  SpiderSignature sig;
  for (const ComponentInfo& c : analyze_components(d)) {
    SpiderComponent sc;
    sc.m = c.in_slots.size();
    sc.n = c.out_slots.size();
    sc.loops = c.loops;
    sig.m += sc.m;
    sig.n += sc.n;
    sig.loops += sc.loops;
    sig.components.push_back(sc);
  }
  return sig;
}

Diagram spider_normal_form(std::size_t m, std::size_t n, std::size_t loops,
                           const Cfa& algebra) {
  validate_algebra_shape(algebra);
  std::size_t d = algebra.dim;
  Diagram acc;
  if (m == 0) {
    acc = unit_node(algebra);
  } else {
    acc = wire_diagram(d);
    for (std::size_t k = m; k >= 2; --k) {
      // One layer with k inputs and k-1 outputs.
      Diagram layer = mul_node(algebra);
      for (std::size_t i = 0; i + 2 < k; ++i) {
        layer = par(layer, wire_diagram(d));
      }
      acc = (k == m) ? layer : seq(acc, layer);
    }
  }
  for (std::size_t l = 0; l < loops; ++l) {
    acc = seq(acc, seq(comul_node(algebra), mul_node(algebra)));
  }
  if (n == 0) {
    acc = seq(acc, counit_node(algebra));
  } else {
    for (std::size_t k = 1; k + 1 <= n; ++k) {
      Diagram layer = comul_node(algebra);
      for (std::size_t i = 1; i < k; ++i) layer = par(layer, wire_diagram(d));
      acc = seq(acc, layer);
    }
  }
  return acc;
}

Diagram normalize_fgraph(const Diagram& d, const Cfa& algebra) {
  validate_algebra_shape(algebra);
  for (const Generator& g : d.nodes) {
    switch (g.kind) {
      case GenKind::Identity:
      case GenKind::Swap:
        break;
      case GenKind::Mul:
      case GenKind::Unit:
      case GenKind::Comul:
      case GenKind::Counit:
        if (g.algebra != algebra.name) {
          throw ForeignNode("diagram mixes algebra '" + g.algebra +
                            "' with '" + algebra.name + "'");
        }
        break;
      default:
        throw ForeignNode(
            "diagram contains non-algebra nodes (state/effect/box)");
    }
  }
  std::vector<ComponentInfo> comps = analyze_components(d);
  if (comps.empty()) return empty_diagram();

  Diagram middle = empty_diagram();
  std::vector<std::size_t> concat_in, concat_out;
  for (const ComponentInfo& c : comps) {
    Diagram nf;
    if (c.pure && c.loops == 0) {
      // Bare through-wire: unchanged.
      std::size_t dim = d.input_dims[c.in_slots.front()];
      nf = wire_diagram(dim);
    } else {
      nf = spider_normal_form(c.in_slots.size(), c.out_slots.size(), c.loops,
                              algebra);
    }
    middle = par(middle, nf);
    concat_in.insert(concat_in.end(), c.in_slots.begin(), c.in_slots.end());
    concat_out.insert(concat_out.end(), c.out_slots.begin(),
                      c.out_slots.end());
  }

  // Route original input slot s to its position in the component order, and
  // component outputs back to the original output slots.
  std::vector<std::size_t> perm_in(concat_in.size());
  for (std::size_t t = 0; t < concat_in.size(); ++t) perm_in[concat_in[t]] = t;
  Diagram p_in = permutation_wiring(d.input_dims, perm_in);

  std::vector<std::size_t> out_dims_in_comp_order(concat_out.size());
  for (std::size_t j = 0; j < concat_out.size(); ++j) {
    out_dims_in_comp_order[j] = d.output_dims[concat_out[j]];
  }
  Diagram p_out = permutation_wiring(out_dims_in_comp_order, concat_out);

  return seq(seq(p_in, middle), p_out);
}

// ---------------------------------------------------------------------------
// Graphviz export
// ---------------------------------------------------------------------------

namespace {

std::string node_label(const Generator& g) {
  switch (g.kind) {
    case GenKind::Mul: return "mu[" + g.algebra + "]";
    case GenKind::Unit: return "eta[" + g.algebra + "]";
    case GenKind::Comul: return "delta[" + g.algebra + "]";
    case GenKind::Counit: return "eps[" + g.algebra + "]";
    case GenKind::Identity: return "id(" + std::to_string(g.dim) + ")";
    case GenKind::Swap:
      return "swap(" + std::to_string(g.dim) + "," + std::to_string(g.dim2) +
             ")";
    case GenKind::State: return "state";
    case GenKind::Effect: return "effect";
    case GenKind::Box: return "box:" + g.label;
  }
  return "?";
}

std::string endpoint_name(const Endpoint& e) {
  switch (e.kind) {
    case Endpoint::Kind::BoundaryIn: return "in_" + std::to_string(e.port);
    case Endpoint::Kind::BoundaryOut: return "out_" + std::to_string(e.port);
    default: return "n" + std::to_string(e.node);
  }
}

}  // namespace

std::string export_dot(const Diagram& d) {
  std::ostringstream os;
  os << "digraph ftriad {\n  rankdir=TB;\n";
  if (!d.input_dims.empty()) {
    os << "  { rank=source;";
    for (std::size_t i = 0; i < d.input_dims.size(); ++i) {
      os << " in_" << i << " [shape=plaintext,label=\"in " << i << "\"];";
    }
    os << " }\n";
  }
  if (!d.output_dims.empty()) {
    os << "  { rank=sink;";
    for (std::size_t i = 0; i < d.output_dims.size(); ++i) {
      os << " out_" << i << " [shape=plaintext,label=\"out " << i << "\"];";
    }
    os << " }\n";
  }
  for (std::size_t n = 0; n < d.nodes.size(); ++n) {
    os << "  n" << n << " [shape=box,label=\"" << node_label(d.nodes[n])
       << "\"];\n";
  }
  for (const Wire& w : d.wires) {
    os << "  " << endpoint_name(w.from) << " -> " << endpoint_name(w.to)
       << " [label=\"" << w.dim << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

void DiagramRegistry::register_algebra(
    const Cfa& cfa, const std::vector<std::string>& extra_aliases) {
  validate_algebra_shape(cfa);
  algebras[cfa.name] = cfa;
  for (const std::string& a : extra_aliases) aliases[a] = cfa.name;
}

void DiagramRegistry::register_box(const std::string& name, const Tensor& m) {
  if (m.ndim() != 2) {
    throw DimensionMismatch("box tensors must have two indices");
  }
  boxes[name] = m;
}

const Cfa* DiagramRegistry::find_algebra(const std::string& name) const {
  auto it = algebras.find(name);
  if (it != algebras.end()) return &it->second;
  auto al = aliases.find(name);
  if (al != aliases.end()) {
    auto c = algebras.find(al->second);
    if (c != algebras.end()) return &c->second;
  }
  return nullptr;
}

DiagramRegistry make_default_registry() {
  DiagramRegistry reg;
  reg.register_algebra(builtin_g3(), {"G3"});
  reg.register_algebra(builtin_w3(), {"W3"});
  reg.register_algebra(builtin_i3(), {"I3"});
  reg.register_algebra(builtin_ghz2());
  reg.register_algebra(builtin_w2());
  return reg;
}

}  // namespace ftriad
