#pragma once

#include <vector>

#include "resamp/oracle.hpp"
#include "resamp/wdag.hpp"

namespace resamp {

// Flaws that can carry some state outside E to the state sigma inside E.
std::vector<int> cause_flaws_at(const OracleSystem& sys, const Event& e, int sigma);

// Flaws that can carry some state outside E into E.
std::vector<int> cause_flaws(const OracleSystem& sys, const Event& e);

// Stable sets of causing flaws admitting an enumeration g_1, ..., g_r where
// each A_{g_i} applied to the suffix product against the indicator of E
// strictly increases some entry.  Includes the empty set.
std::vector<std::vector<int>> orderable_sets(const OracleSystem& sys, const Event& e);

// Bounds on the probability that E ever holds during a run, each truncated at
// max_nodes wdag nodes.  They are listed from sharpest to loosest; the
// inequalities hold term by term at matched truncation.
struct EventBounds {
  Rat mu_e = 0;
  std::vector<int> cause_set;
  std::vector<std::vector<int>> orderable;
  Rat matrix_sum = 0;    // sum over orderable I, wdags H: mu^T A_H e_E
  Rat psi_sum = 0;       // mu(E) * sum over orderable I of Psi(I)
  Rat psi_bar_sum = 0;   // mu(E) * PsiBar(cause set)
  Rat psi_bar_tail = 0;  // tail estimate for psi_bar_sum
  bool converged = true;
};

EventBounds event_bounds(const OracleSystem& sys, const std::vector<Rat>& gamma,
                         const Event& e, int max_nodes);

// Closed-form counterparts (rational upper brackets where the exact value is
// irrational).
Rat dist_bound_symmetric(const Rat& mu_e, const Rat& p, int cause_count);
Rat dist_bound_neighborhood(const Rat& mu_e, const Rat& cause_gamma_sum);
Rat dist_bound_asymmetric(const Rat& mu_e, const std::vector<Rat>& cause_x);
Rat dist_bound_cluster(const Rat& mu_e, const std::vector<std::vector<int>>& orderable,
                       const std::vector<Rat>& eta);

// For injective oracles: pairs (H, sigma) with sigma in E such that no proper
// prefix H' of H satisfies e_E^T A_{H - H'} e_sigma > 0.  The empty wdag pairs
// with every sigma in E.  Truncated at max_nodes nodes.
struct MinimalPair {
  Wdag h;
  int sigma;
};

std::vector<MinimalPair> minimal_pairs(const OracleSystem& sys, const Event& e,
                                       int max_nodes);

// Chain of bounds for injective oracles, truncated at max_nodes; again ordered
// sharpest to loosest with term-by-term domination at matched truncation.
struct InjectiveBounds {
  Rat pair_sum = 0;         // sum over pairs of mu^T A_H e_sigma
  Rat pair_weight_sum = 0;  // sum over pairs of mu(sigma) w(H)
  Rat per_state_sum = 0;    // sum_sigma mu(sigma) PsiBar(causes at sigma)
  Rat uniform_bound = 0;    // mu(E) max_sigma PsiBar(causes at sigma)
  Rat uniform_tail = 0;     // tail estimate for uniform_bound
  bool converged = true;
};

InjectiveBounds injective_event_bounds(const OracleSystem& sys,
                                       const std::vector<Rat>& gamma, const Event& e,
                                       int max_nodes);

// For E given as a union of components: mu(E) * max over components C of
// PsiBar(cause flaws of C).
struct DisjunctionBound {
  Rat value = 0;
  Rat tail = 0;
  bool converged = true;
};

DisjunctionBound disjunction_bound(const OracleSystem& sys, const std::vector<Rat>& gamma,
                                   const std::vector<Event>& components, int max_nodes);

}  // namespace resamp
