#pragma once

#include <vector>

#include "resamp/compose.hpp"

namespace resamp {

// One required mapping pi(x) = y, coordinates 0-based.
struct Cell {
  int x = 0;
  int y = 0;

  friend bool operator==(Cell a, Cell b) { return a.x == b.x && a.y == b.y; }
  friend bool operator<(Cell a, Cell b) {
    return a.x != b.x ? a.x < b.x : a.y < b.y;
  }
};

// Permutations of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> all_perms(int n);
int perm_index(const std::vector<int>& pi);
StateSpace perm_space(int n);

// Pairwise distinct rows and columns.
bool cells_stable(const std::vector<Cell>& cells);

// All stable cell sets over [n] x [n] with at most max_size cells, the empty
// set included.
std::vector<std::vector<Cell>> stable_cell_sets(int n, int max_size);

// Permutations satisfying every cell.
Event perm_event(int n, const std::vector<Cell>& cells);

// Pre-flaw per cell: support pi(x) = y, seeds z in [n] acting by pi' = (y z)pi.
// Distinct cells are related iff they share a row or column; cells are not
// related to themselves.
SeededSystem perm_seeded_system(int n, const std::vector<Cell>& cells);

// Flaw system over all n^2 cells under the reflexive share-a-coordinate
// relation, for direct use without composition.
OracleSystem perm_atomic_system(int n);

// Cells of C that terminate an alternating shared-coordinate path whose both
// endpoints lie in C (an isolated C-cell counts as such a path).
std::vector<Cell> c_path_endpoints(const std::vector<Cell>& i_cells,
                                   const std::vector<Cell>& c_cells);

// Conditions pinned on the starting permutation when resampling the stable
// set I against target C: every I-cell, plus one derived cell per path with
// both endpoints in C.
std::vector<Cell> active_conditions(const std::vector<Cell>& i_cells,
                                    const std::vector<Cell>& c_cells);

// Exact entry e_pi^T A_I e_E for E the permutations satisfying C: zero unless
// pi meets every active condition, else (n-|C|)! / (n^|I| (n-a)!).
Rat closed_form_entry(int n, const std::vector<int>& pi,
                      const std::vector<Cell>& i_cells,
                      const std::vector<Cell>& c_cells);

// Distributional bound for the event of the target cells: mu(E) times the
// product over target cells of (1 + sum of truncated flaw weights over
// composed flaws sharing a coordinate with the cell).
struct PermEventBound {
  Rat mu_e = 0;
  Rat value = 0;
  bool converged = true;
};

PermEventBound perm_event_bound(const OracleSystem& composed, int n,
                                const std::vector<std::vector<Cell>>& flaw_cells,
                                const std::vector<Rat>& gamma,
                                const std::vector<Cell>& target, int max_nodes);

}  // namespace resamp
