#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "resamp/oracle.hpp"

namespace resamp {

// Witness DAG: nodes carry flaw labels, and two nodes are adjacent (in exactly
// one direction) precisely when their labels are related.  Edges point from
// earlier resamplings to later ones, so sink nodes are the most recent events
// and their labels form a stable set.
struct Wdag {
  std::vector<int> labels;
  std::vector<std::pair<int, int>> edges;

  int size() const { return static_cast<int>(labels.size()); }
  bool empty() const { return labels.empty(); }
};

// Throws if w is not a well-formed witness DAG for the relation.
void wdag_validate(const Wdag& w, const DependencyRelation& dep);

std::vector<std::vector<int>> wdag_preds(const Wdag& w);
std::vector<std::vector<int>> wdag_succs(const Wdag& w);

// Topological order; among ready nodes the smallest index goes first.
std::vector<int> topo_order(const Wdag& w);

std::vector<int> source_nodes(const Wdag& w);
std::vector<int> sink_nodes(const Wdag& w);

// Sorted labels of the sink nodes.
std::vector<int> sink_labels(const Wdag& w);

// Node count of the longest directed path; a singleton has depth 1.
int wdag_depth(const Wdag& w);

// Product of the label matrices along any topological order, source nodes
// leftmost.  The result does not depend on the order chosen.
SparseMatrix wdag_matrix(const Wdag& w, const OracleSystem& sys);

// A_H v without forming the product matrix.
ExactVec wdag_apply(const Wdag& w, const OracleSystem& sys, const ExactVec& v);

// mu^T A_H 1, an upper bound on the probability that H ever appears.
Rat appearance_bound(const Wdag& w, const OracleSystem& sys);

// mu^T A_H e_E.
Rat event_bound(const Wdag& w, const OracleSystem& sys, const Event& e);

// Product of gamma over the node labels.
Rat wdag_weight(const Wdag& w, const std::vector<Rat>& gamma);

// True when A_f A_H 1 <= A_H 1 entrywise: prepending a resampling of f cannot
// raise the transition mass of the dag.
bool flaw_dominated(const OracleSystem& sys, int f, const Wdag& w);

// Canonical label sequence, obtained by repeatedly stripping the source node
// with the least label (source labels are always distinct).  Isomorphic wdags
// give equal sequences, and the wdag can be rebuilt from its sequence, so the
// sequence works as a dictionary key.
std::vector<int> canonical_key(const Wdag& w);

// Rebuilds a wdag from a label sequence: edge i -> j whenever i < j and the
// labels are related.
Wdag wdag_from_labels(const std::vector<int>& seq, const DependencyRelation& dep);

bool wdag_isomorphic(const Wdag& a, const Wdag& b);

// Rules for growing a witness while scanning a trajectory backward.  A node
// for flaw f is added when the rule fires or when f is not dominated by the
// current dag (that is, A_f A_G 1 has some entry exceeding A_G 1).
//   kSourceLabel:    add when some source node is labeled f.
//   kSourceNeighbor: add when some source node's label is related to f.
//   kAlways:         add unconditionally.
enum class WitnessRule { kSourceLabel, kSourceNeighbor, kAlways };

// Witness for the resampling at position t (1-based) of the trajectory.
Wdag gen_witness(const OracleSystem& sys, const std::vector<int>& trajectory,
                 int t, WitnessRule rule);

// Same, but gives up (returns nothing) as soon as the witness grows beyond
// max_nodes, which lets appearance scans skip oversized witnesses early.
std::optional<Wdag> gen_witness_capped(const OracleSystem& sys,
                                       const std::vector<int>& trajectory, int t,
                                       WitnessRule rule, int max_nodes);

// Simpler construction used for plain convergence bounds: a node is added
// exactly when some existing node has a related label.
Wdag simple_witness(const DependencyRelation& dep,
                    const std::vector<int>& trajectory, int t);

// All wdags with the given sink labels and at most max_nodes nodes.  The empty
// sink set yields the empty wdag; an unstable sink set yields nothing.
std::vector<Wdag> enumerate_sink_wdags(const DependencyRelation& dep,
                                       const std::vector<int>& sinks,
                                       int max_nodes);

// Truncated sum of wdag weights, grouped by node count.
struct WeightSum {
  std::vector<Rat> level_sums;  // index = node count
  Rat truncated = 0;            // sum over all enumerated levels
  Rat tail_bound = 0;           // geometric estimate for the dropped tail
  bool converged = false;       // decay observed before hitting the cap

  Rat upper() const { return truncated + tail_bound; }
};

// Sum of weights over all wdags with the given sink labels, truncated at
// max_nodes nodes.  The tail is estimated geometrically from the worst of the
// last three level ratios (padded by a factor of two) once that ratio stays
// at or below 15/16; otherwise converged stays false and the truncated value
// is only a lower bound.
WeightSum weight_sum(const DependencyRelation& dep, const std::vector<Rat>& gamma,
                     const std::vector<int>& sinks, int max_nodes);

// Downward-closed node sets (prefixes), as sorted node-index lists.
std::vector<std::vector<int>> prefix_node_sets(const Wdag& w);

// Subgraph induced by the given sorted node list, indices compacted.
Wdag induced_subgraph(const Wdag& w, const std::vector<int>& nodes);

}  // namespace resamp
