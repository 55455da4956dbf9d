#include "resamp/wdag.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace resamp {

void wdag_validate(const Wdag& w, const DependencyRelation& dep) {
  int n = w.size();
  std::set<std::pair<int, int>> seen;
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (const auto& [a, b] : w.edges) {
    if (a < 0 || a >= n || b < 0 || b >= n || a == b)
      throw std::runtime_error("wdag: bad edge endpoints");
    if (!seen.insert({a, b}).second) throw std::runtime_error("wdag: duplicate edge");
    adj[a][b] = 1;
  }
  for (int a = 0; a < n; ++a) {
    if (w.labels[a] < 0 || w.labels[a] >= dep.flaw_count())
      throw std::runtime_error("wdag: label out of range");
    for (int b = a + 1; b < n; ++b) {
      bool linked = adj[a][b] || adj[b][a];
      if (adj[a][b] && adj[b][a]) throw std::runtime_error("wdag: edge in both directions");
      if (linked != dep.related(w.labels[a], w.labels[b]))
        throw std::runtime_error("wdag: adjacency must match label relation");
    }
  }
  if (static_cast<int>(topo_order(w).size()) != n)
    throw std::runtime_error("wdag: cycle detected");
}

std::vector<std::vector<int>> wdag_preds(const Wdag& w) {
  std::vector<std::vector<int>> p(w.size());
  for (const auto& [a, b] : w.edges) p[b].push_back(a);
  return p;
}

std::vector<std::vector<int>> wdag_succs(const Wdag& w) {
  std::vector<std::vector<int>> s(w.size());
  for (const auto& [a, b] : w.edges) s[a].push_back(b);
  return s;
}

std::vector<int> topo_order(const Wdag& w) {
  int n = w.size();
  std::vector<int> indeg(n, 0);
  auto succs = wdag_succs(w);
  for (const auto& [a, b] : w.edges) {
    (void)a;
    ++indeg[b];
  }
  std::set<int> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.insert(v);
  std::vector<int> order;
  while (!ready.empty()) {
    int v = *ready.begin();
    ready.erase(ready.begin());
    order.push_back(v);
    for (int u : succs[v])
      if (--indeg[u] == 0) ready.insert(u);
  }
  return order;
}

std::vector<int> source_nodes(const Wdag& w) {
  std::vector<char> has_in(w.size(), 0);
  for (const auto& [a, b] : w.edges) {
    (void)a;
    has_in[b] = 1;
  }
  std::vector<int> out;
  for (int v = 0; v < w.size(); ++v)
    if (!has_in[v]) out.push_back(v);
  return out;
}

std::vector<int> sink_nodes(const Wdag& w) {
  std::vector<char> has_out(w.size(), 0);
  for (const auto& [a, b] : w.edges) {
    (void)b;
    has_out[a] = 1;
  }
  std::vector<int> out;
  for (int v = 0; v < w.size(); ++v)
    if (!has_out[v]) out.push_back(v);
  return out;
}

std::vector<int> sink_labels(const Wdag& w) {
  std::vector<int> out;
  for (int v : sink_nodes(w)) out.push_back(w.labels[v]);
  std::sort(out.begin(), out.end());
  return out;
}

int wdag_depth(const Wdag& w) {
  auto order = topo_order(w);
  auto preds = wdag_preds(w);
  std::vector<int> d(w.size(), 0);
  int best = 0;
  for (int v : order) {
    d[v] = 1;
    for (int u : preds[v]) d[v] = std::max(d[v], d[u] + 1);
    best = std::max(best, d[v]);
  }
  return best;
}

SparseMatrix wdag_matrix(const Wdag& w, const OracleSystem& sys) {
  SparseMatrix m = SparseMatrix::identity(sys.space.n);
  for (int v : topo_order(w)) m = mat_mul(m, sys.matrix(w.labels[v]));
  return m;
}

ExactVec wdag_apply(const Wdag& w, const OracleSystem& sys, const ExactVec& v) {
  ExactVec u = v;
  auto order = topo_order(w);
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    u = mat_apply(sys.matrix(w.labels[*it]), u);
  return u;
}

Rat appearance_bound(const Wdag& w, const OracleSystem& sys) {
  return dot(sys.mu.p, wdag_apply(w, sys, ones_vec(sys.space.n)));
}

Rat event_bound(const Wdag& w, const OracleSystem& sys, const Event& e) {
  return dot(sys.mu.p, wdag_apply(w, sys, indicator(sys.space.n, e)));
}

Rat wdag_weight(const Wdag& w, const std::vector<Rat>& gamma) {
  Rat out = 1;
  for (int f : w.labels) out *= gamma[f];
  return out;
}

bool flaw_dominated(const OracleSystem& sys, int f, const Wdag& w) {
  ExactVec u = wdag_apply(w, sys, ones_vec(sys.space.n));
  return vec_dominated(mat_apply(sys.matrix(f), u), u);
}

std::vector<int> canonical_key(const Wdag& w) {
  int n = w.size();
  auto succs = wdag_succs(w);
  std::vector<int> indeg(n, 0);
  for (const auto& [a, b] : w.edges) {
    (void)a;
    ++indeg[b];
  }
  // (label, node) pairs of current sources; labels are distinct among sources.
  std::set<std::pair<int, int>> ready;
  for (int v = 0; v < n; ++v)
    if (indeg[v] == 0) ready.insert({w.labels[v], v});
  std::vector<int> seq;
  while (!ready.empty()) {
    auto [lab, v] = *ready.begin();
    ready.erase(ready.begin());
    seq.push_back(lab);
    for (int u : succs[v])
      if (--indeg[u] == 0) ready.insert({w.labels[u], u});
  }
  if (static_cast<int>(seq.size()) != n) throw std::runtime_error("canonical_key: cycle");
  return seq;
}

Wdag wdag_from_labels(const std::vector<int>& seq, const DependencyRelation& dep) {
  Wdag w;
  w.labels = seq;
  for (size_t i = 0; i < seq.size(); ++i)
    for (size_t j = i + 1; j < seq.size(); ++j)
      if (dep.related(seq[i], seq[j]))
        w.edges.push_back({static_cast<int>(i), static_cast<int>(j)});
  return w;
}

bool wdag_isomorphic(const Wdag& a, const Wdag& b) {
  return canonical_key(a) == canonical_key(b);
}

namespace {

// State for backward witness construction.  New nodes are sources, so node
// index k is the (k+1)-th most recent resampling and edges run new -> old.
struct BackwardBuilder {
  Wdag w;
  std::vector<int> source_labels;

  void add(int f, const DependencyRelation& dep) {
    int v = w.size();
    w.labels.push_back(f);
    for (int u = 0; u < v; ++u)
      if (dep.related(w.labels[u], f)) w.edges.push_back({v, u});
    std::vector<int> kept{f};
    for (int g : source_labels)
      if (!dep.related(g, f)) kept.push_back(g);
    source_labels = std::move(kept);
  }
};

}  // namespace

namespace {

std::optional<Wdag> gen_witness_impl(const OracleSystem& sys,
                                     const std::vector<int>& trajectory, int t,
                                     WitnessRule rule, int max_nodes) {
  if (t < 1 || t > static_cast<int>(trajectory.size()))
    throw std::invalid_argument("gen_witness: t out of range");
  BackwardBuilder b;
  b.add(trajectory[t - 1], sys.dep);
  ExactVec u = mat_apply(sys.matrix(trajectory[t - 1]), ones_vec(sys.space.n));
  for (int s = t - 2; s >= 0; --s) {
    if (b.w.size() > max_nodes) return std::nullopt;
    int f = trajectory[s];
    bool fires = false;
    switch (rule) {
      case WitnessRule::kSourceLabel:
        for (int g : b.source_labels) fires = fires || (g == f);
        break;
      case WitnessRule::kSourceNeighbor:
        for (int g : b.source_labels) fires = fires || sys.dep.related(g, f);
        break;
      case WitnessRule::kAlways:
        fires = true;
        break;
    }
    ExactVec next = mat_apply(sys.matrix(f), u);
    if (fires || !vec_dominated(next, u)) {
      b.add(f, sys.dep);
      u = std::move(next);
    }
  }
  if (b.w.size() > max_nodes) return std::nullopt;
  return b.w;
}

}  // namespace

Wdag gen_witness(const OracleSystem& sys, const std::vector<int>& trajectory,
                 int t, WitnessRule rule) {
  return *gen_witness_impl(sys, trajectory, t, rule,
                           static_cast<int>(trajectory.size()));
}

std::optional<Wdag> gen_witness_capped(const OracleSystem& sys,
                                       const std::vector<int>& trajectory, int t,
                                       WitnessRule rule, int max_nodes) {
  return gen_witness_impl(sys, trajectory, t, rule, max_nodes);
}

Wdag simple_witness(const DependencyRelation& dep,
                    const std::vector<int>& trajectory, int t) {
  if (t < 1 || t > static_cast<int>(trajectory.size()))
    throw std::invalid_argument("simple_witness: t out of range");
  BackwardBuilder b;
  b.add(trajectory[t - 1], dep);
  for (int s = t - 2; s >= 0; --s) {
    int f = trajectory[s];
    bool related = false;
    for (int g : b.w.labels) related = related || dep.related(g, f);
    if (related) b.add(f, dep);
  }
  return b.w;
}

namespace {

// Labels related to at least one member of the set.
std::vector<int> related_labels(const DependencyRelation& dep, const std::vector<int>& set) {
  std::vector<int> out;
  for (int g = 0; g < dep.flaw_count(); ++g)
    for (int f : set)
      if (dep.related(g, f)) {
        out.push_back(g);
        break;
      }
  return out;
}

// Appends sink nodes labeled by `sinks` to base; every base node with a
// related label gets an edge into the new node.
Wdag attach_sinks(const Wdag& base, const std::vector<int>& sinks,
                  const DependencyRelation& dep) {
  Wdag w = base;
  for (int f : sinks) {
    int v = w.size();
    w.labels.push_back(f);
    for (int u = 0; u < static_cast<int>(base.labels.size()); ++u)
      if (dep.related(base.labels[u], f)) w.edges.push_back({u, v});
  }
  return w;
}

}  // namespace

std::vector<Wdag> enumerate_sink_wdags(const DependencyRelation& dep,
                                       const std::vector<int>& sinks,
                                       int max_nodes) {
  if (sinks.empty()) return {Wdag{}};
  if (!dep.is_stable(sinks) || static_cast<int>(sinks.size()) > max_nodes) return {};
  std::vector<Wdag> out;
  int budget = max_nodes - static_cast<int>(sinks.size());
  for (const auto& j : dep.stable_subsets(related_labels(dep, sinks)))
    for (const Wdag& base : enumerate_sink_wdags(dep, j, budget))
      out.push_back(attach_sinks(base, sinks, dep));
  std::map<std::vector<int>, size_t> dedupe;
  std::vector<Wdag> unique;
  for (auto& w : out)
    if (dedupe.emplace(canonical_key(w), unique.size()).second)
      unique.push_back(std::move(w));
  return unique;
}

WeightSum weight_sum(const DependencyRelation& dep, const std::vector<Rat>& gamma,
                     const std::vector<int>& sinks, int max_nodes) {
  if (max_nodes < 0) throw std::invalid_argument("weight_sum: max_nodes must be >= 0");
  WeightSum out;
  out.level_sums.assign(max_nodes + 1, Rat(0));

  if (sinks.empty()) {
    // Only the empty wdag, with weight 1.
    out.level_sums[0] = 1;
    out.truncated = 1;
    out.converged = true;
    return out;
  }
  if (!dep.is_stable(sinks)) {
    out.converged = true;  // no wdag has an unstable sink set
    return out;
  }

  // Stable sets reachable by repeatedly stripping sink layers, interned by id.
  std::map<std::vector<int>, int> ids;
  std::vector<std::vector<int>> sets;
  std::vector<std::vector<int>> subs;  // admissible previous-layer sink sets
  std::vector<std::vector<int>> pending;
  auto intern = [&](const std::vector<int>& s) {
    auto [it, fresh] = ids.emplace(s, static_cast<int>(sets.size()));
    if (fresh) {
      sets.push_back(s);
      subs.emplace_back();
      pending.push_back(s);
    }
    return it->second;
  };
  intern(sinks);
  while (!pending.empty()) {
    std::vector<int> cur = std::move(pending.back());
    pending.pop_back();
    int i = ids[cur];
    if (cur.empty()) continue;
    for (const auto& j : dep.stable_subsets(related_labels(dep, cur))) {
      int jid = intern(j);  // may grow subs, so take the id first
      subs[i].push_back(jid);
    }
  }

  // psi[i][k]: total weight of wdags with sink set sets[i] and exactly k
  // nodes.  Each term pulls from a strictly smaller node count, so filling k
  // in increasing order is well-defined even when a set reaches itself.
  std::vector<std::vector<Rat>> psi(sets.size(), std::vector<Rat>(max_nodes + 1, Rat(0)));
  std::vector<Rat> layer_weight(sets.size(), Rat(1));
  for (size_t i = 0; i < sets.size(); ++i)
    for (int f : sets[i]) layer_weight[i] *= gamma[f];
  for (int k = 0; k <= max_nodes; ++k) {
    for (size_t i = 0; i < sets.size(); ++i) {
      int si = static_cast<int>(sets[i].size());
      if (si == 0) {
        if (k == 0) psi[i][0] = 1;
        continue;
      }
      if (k < si) continue;
      Rat total = 0;
      for (int j : subs[i]) total += psi[j][k - si];
      psi[i][k] = layer_weight[i] * total;
    }
  }
  out.level_sums = psi[ids[sinks]];
  for (const Rat& x : out.level_sums) out.truncated += x;

  int last = -1;
  for (int k = 0; k <= max_nodes; ++k)
    if (out.level_sums[k] != 0) last = k;
  if (last < 0) {
    // All levels vanish: either the sink layer does not fit the budget (a
    // truncation artifact) or some sink label has zero charge (exact zero).
    out.converged = static_cast<int>(sinks.size()) <= max_nodes;
    return out;
  }
  if (last < max_nodes) {
    // Levels past `last` are exactly zero, so the enumeration is complete.
    out.converged = true;
    return out;
  }
  int checked = 0;
  Rat worst_ratio = 0;
  for (int k = max_nodes; k - 1 >= 0 && checked < 3; --k) {
    if (out.level_sums[k - 1] == 0) break;
    Rat r = out.level_sums[k] / out.level_sums[k - 1];
    if (r > worst_ratio) worst_ratio = r;
    ++checked;
  }
  // Geometric extrapolation from the worst of the last three observed ratios,
  // padded by an extra factor of two in case the decay has not settled yet.
  if (checked == 3 && worst_ratio <= Rat(15, 16)) {
    out.converged = true;
    out.tail_bound =
        2 * out.level_sums[max_nodes] * worst_ratio / (1 - worst_ratio);
  }
  return out;
}

std::vector<std::vector<int>> prefix_node_sets(const Wdag& w) {
  int n = w.size();
  if (n > 20) throw std::runtime_error("prefix_node_sets: wdag too large");
  auto preds = wdag_preds(w);
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    bool closed = true;
    for (int v = 0; v < n && closed; ++v) {
      if (!(mask >> v & 1)) continue;
      for (int u : preds[v])
        if (!(mask >> u & 1)) {
          closed = false;
          break;
        }
    }
    if (!closed) continue;
    std::vector<int> nodes;
    for (int v = 0; v < n; ++v)
      if (mask >> v & 1) nodes.push_back(v);
    out.push_back(nodes);
  }
  return out;
}

Wdag induced_subgraph(const Wdag& w, const std::vector<int>& nodes) {
  std::vector<int> pos(w.size(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) pos[nodes[i]] = static_cast<int>(i);
  Wdag out;
  for (int v : nodes) out.labels.push_back(w.labels[v]);
  for (const auto& [a, b] : w.edges)
    if (pos[a] >= 0 && pos[b] >= 0) out.edges.push_back({pos[a], pos[b]});
  return out;
}

}  // namespace resamp
