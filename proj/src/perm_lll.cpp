#include "resamp/perm_lll.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "resamp/criteria.hpp"

namespace resamp {

std::vector<std::vector<int>> all_perms(int n) {
  std::vector<int> pi(n);
  std::iota(pi.begin(), pi.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(pi);
  } while (std::next_permutation(pi.begin(), pi.end()));
  return out;
}

int perm_index(const std::vector<int>& pi) {
  // Lexicographic rank via the factorial number system.
  const int n = static_cast<int>(pi.size());
  int idx = 0;
  for (int i = 0; i < n; ++i) {
    int smaller = 0;
    for (int j = i + 1; j < n; ++j)
      if (pi[j] < pi[i]) ++smaller;
    int fact = 1;
    for (int k = 2; k <= n - 1 - i; ++k) fact *= k;
    idx += smaller * fact;
  }
  return idx;
}

StateSpace perm_space(int n) {
  StateSpace sp;
  for (const auto& pi : all_perms(n)) {
    std::string name;
    for (int v : pi) name += static_cast<char>('1' + v);
    sp.names.push_back(name);
  }
  sp.n = static_cast<int>(sp.names.size());
  return sp;
}

bool cells_stable(const std::vector<Cell>& cells) {
  for (size_t i = 0; i < cells.size(); ++i)
    for (size_t j = i + 1; j < cells.size(); ++j)
      if (cells[i].x == cells[j].x || cells[i].y == cells[j].y) return false;
  return true;
}

namespace {

void stable_cells_rec(int n, int max_size, Cell from, std::vector<Cell>& cur,
                      std::vector<std::vector<Cell>>& out) {
  out.push_back(cur);
  if (static_cast<int>(cur.size()) == max_size) return;
  for (int x = from.x; x < n; ++x) {
    for (int y = (x == from.x ? from.y : 0); y < n; ++y) {
      Cell c{x, y};
      bool ok = true;
      for (Cell d : cur)
        if (d.x == c.x || d.y == c.y) {
          ok = false;
          break;
        }
      if (!ok) continue;
      cur.push_back(c);
      stable_cells_rec(n, max_size, {x, y + 1}, cur, out);
      cur.pop_back();
    }
  }
}

}  // namespace

std::vector<std::vector<Cell>> stable_cell_sets(int n, int max_size) {
  std::vector<std::vector<Cell>> out;
  std::vector<Cell> cur;
  stable_cells_rec(n, max_size, {0, 0}, cur, out);
  return out;
}

Event perm_event(int n, const std::vector<Cell>& cells) {
  const auto perms = all_perms(n);
  Event e;
  for (size_t idx = 0; idx < perms.size(); ++idx) {
    bool ok = true;
    for (Cell c : cells)
      if (perms[idx][c.x] != c.y) {
        ok = false;
        break;
      }
    if (ok) e.push_back(static_cast<int>(idx));
  }
  return e;
}

namespace {

std::string cell_name(Cell c) {
  return "p" + std::to_string(c.x + 1) + std::to_string(c.y + 1);
}

// pi' = (y z) pi: swap the values y and z in the image row.
std::vector<int> swap_values(const std::vector<int>& pi, int y, int z) {
  std::vector<int> out = pi;
  for (int& v : out) {
    if (v == y)
      v = z;
    else if (v == z)
      v = y;
  }
  return out;
}

}  // namespace

SeededSystem perm_seeded_system(int n, const std::vector<Cell>& cells) {
  SeededSystem sys;
  sys.space = perm_space(n);
  sys.mu.p.assign(sys.space.n, Rat(1, static_cast<unsigned long>(sys.space.n)));
  const auto perms = all_perms(n);

  sys.dep = DependencyRelation(static_cast<int>(cells.size()));
  for (size_t i = 0; i < cells.size(); ++i) {
    sys.dep.set_unrelated(static_cast<int>(i), static_cast<int>(i));
    for (size_t j = i + 1; j < cells.size(); ++j)
      if (cells[i].x == cells[j].x || cells[i].y == cells[j].y)
        sys.dep.set_related(static_cast<int>(i), static_cast<int>(j));
  }

  for (Cell c : cells) {
    PreFlaw pf;
    pf.name = cell_name(c);
    for (size_t idx = 0; idx < perms.size(); ++idx)
      if (perms[idx][c.x] == c.y) pf.support.push_back(static_cast<int>(idx));
    for (int z = 0; z < n; ++z) {
      Seed s;
      s.prob = Rat(1, static_cast<unsigned long>(n));
      s.action.resize(sys.space.n);
      for (size_t idx = 0; idx < perms.size(); ++idx)
        s.action[idx] = perm_index(swap_values(perms[idx], c.y, z));
      pf.seeds.push_back(std::move(s));
    }
    sys.pre.push_back(std::move(pf));
  }
  return sys;
}

OracleSystem perm_atomic_system(int n) {
  std::vector<Cell> cells;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) cells.push_back({x, y});
  SeededSystem seeded = perm_seeded_system(n, cells);

  OracleSystem sys;
  sys.space = seeded.space;
  sys.mu = seeded.mu;
  sys.dep = DependencyRelation(static_cast<int>(cells.size()));
  for (size_t i = 0; i < cells.size(); ++i) {
    sys.flaws.push_back({seeded.pre[i].name, seeded.pre[i].support,
                         induced_matrix(seeded, static_cast<int>(i))});
    for (size_t j = i + 1; j < cells.size(); ++j)
      if (cells[i].x == cells[j].x || cells[i].y == cells[j].y)
        sys.dep.set_related(static_cast<int>(i), static_cast<int>(j));
  }
  return sys;
}

namespace {

struct CellGraph {
  std::vector<Cell> nodes;           // C-cells first, then I-cells
  int c_count = 0;
  std::vector<std::vector<int>> adj;

  bool is_c(int v) const { return v < c_count; }
};

CellGraph build_graph(const std::vector<Cell>& i_cells, const std::vector<Cell>& c_cells) {
  CellGraph g;
  g.nodes = c_cells;
  g.c_count = static_cast<int>(c_cells.size());
  g.nodes.insert(g.nodes.end(), i_cells.begin(), i_cells.end());
  g.adj.resize(g.nodes.size());
  for (int c = 0; c < g.c_count; ++c) {
    for (int i = g.c_count; i < static_cast<int>(g.nodes.size()); ++i) {
      if (g.nodes[c].x == g.nodes[i].x || g.nodes[c].y == g.nodes[i].y) {
        g.adj[c].push_back(i);
        g.adj[i].push_back(c);
      }
    }
  }
  return g;
}

// Maximal paths with both endpoints in C, each as the (A, B) endpoint pair
// where A joins the path through its row and B through its column.  An
// isolated C-cell is the degenerate path with A = B.
std::vector<std::pair<Cell, Cell>> c_paths(const CellGraph& g) {
  std::vector<std::pair<Cell, Cell>> out;
  std::vector<char> seen(g.nodes.size(), 0);
  for (int start = 0; start < static_cast<int>(g.nodes.size()); ++start) {
    if (seen[start] || g.adj[start].size() >= 2) continue;
    // Walk the path from this endpoint to the other.
    int prev = -1, cur = start;
    seen[cur] = 1;
    while (true) {
      int next = -1;
      for (int w : g.adj[cur])
        if (w != prev) next = w;
      if (next < 0) break;
      prev = cur;
      cur = next;
      seen[cur] = 1;
    }
    if (!g.is_c(start) || !g.is_c(cur)) continue;
    Cell a = g.nodes[start], b = g.nodes[cur];
    if (start == cur) {
      out.emplace_back(a, a);
      continue;
    }
    // Each endpoint has exactly one incident edge; its shared coordinate says
    // which role the endpoint plays.
    Cell a_nbr = g.nodes[g.adj[start].front()];
    if (a.x == a_nbr.x) {
      out.emplace_back(a, b);
    } else {
      out.emplace_back(b, a);
    }
  }
  return out;
}

}  // namespace

std::vector<Cell> c_path_endpoints(const std::vector<Cell>& i_cells,
                                   const std::vector<Cell>& c_cells) {
  std::vector<Cell> out;
  for (const auto& [a, b] : c_paths(build_graph(i_cells, c_cells))) {
    out.push_back(a);
    if (!(a == b)) out.push_back(b);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Cell> active_conditions(const std::vector<Cell>& i_cells,
                                    const std::vector<Cell>& c_cells) {
  if (!cells_stable(i_cells) || !cells_stable(c_cells))
    throw std::invalid_argument("active_conditions: cell sets must be stable");
  std::vector<Cell> out = i_cells;
  for (const auto& [a, b] : c_paths(build_graph(i_cells, c_cells)))
    out.push_back({b.x, a.y});
  std::sort(out.begin(), out.end());
  return out;
}

Rat closed_form_entry(int n, const std::vector<int>& pi,
                      const std::vector<Cell>& i_cells,
                      const std::vector<Cell>& c_cells) {
  const std::vector<Cell> active = active_conditions(i_cells, c_cells);
  for (Cell c : active)
    if (pi[c.x] != c.y) return 0;
  return factorial(static_cast<unsigned>(n - static_cast<int>(c_cells.size()))) /
         (rat_pow(Rat(n), static_cast<unsigned long>(i_cells.size())) *
          factorial(static_cast<unsigned>(n - static_cast<int>(active.size()))));
}

PermEventBound perm_event_bound(const OracleSystem& composed, int n,
                                const std::vector<std::vector<Cell>>& flaw_cells,
                                const std::vector<Rat>& gamma,
                                const std::vector<Cell>& target, int max_nodes) {
  if (static_cast<int>(flaw_cells.size()) != composed.flaw_count())
    throw std::invalid_argument("perm_event_bound: one cell set per flaw required");

  PermEventBound out;
  out.mu_e = measure(composed.mu, perm_event(n, target));

  out.value = out.mu_e;
  for (Cell t : target) {
    Rat related_sum = 0;
    for (int f = 0; f < composed.flaw_count(); ++f) {
      bool rel = false;
      for (Cell c : flaw_cells[f])
        if (c.x == t.x || c.y == t.y) {
          rel = true;
          break;
        }
      if (!rel) continue;
      WeightSum ws = psi(composed, gamma, f, max_nodes);
      out.converged = out.converged && ws.converged;
      related_sum += ws.upper();
    }
    out.value *= 1 + related_sum;
  }
  return out;
}

}  // namespace resamp
