#pragma once

#include <string>
#include <vector>

#include "resamp/oracle.hpp"
#include "resamp/wdag.hpp"

namespace resamp {

// Truncated weight sum over all wdags with sink set {f}.
WeightSum psi(const OracleSystem& sys, const std::vector<Rat>& gamma, int f,
              int max_nodes);

// Truncated weight sum over all wdags with the given sink set.
WeightSum psi_set(const OracleSystem& sys, const std::vector<Rat>& gamma,
                  const std::vector<int>& sinks, int max_nodes);

// Sum of psi_set over every subset of the label set (the empty subset
// contributes 1; unstable subsets contribute nothing).
WeightSum psi_bar(const OracleSystem& sys, const std::vector<Rat>& gamma,
                  const std::vector<int>& labels, int max_nodes);

// A bound value that is either a plain rational or e times a rational, so
// comparisons against exact quantities stay decidable.
struct BoundValue {
  bool euler_multiple = false;
  Rat q = 0;

  static BoundValue exact(Rat v) { return {false, std::move(v)}; }
  static BoundValue euler_times(Rat v) { return {true, std::move(v)}; }

  // Decides value <= bound exactly.
  bool admits(const Rat& value) const;
  double approx() const;
  std::string str() const;
};

struct CriterionResult {
  bool premise_holds = false;
  std::vector<BoundValue> flaw_bounds;  // claimed bound on each total flaw weight
  BoundValue runtime_bound;             // claimed bound on expected resamplings
  std::string note;                     // first premise failure, empty otherwise
};

// gamma_f <= p and |closed neighborhood| <= d with e*p*d <= 1 imply a per-flaw
// weight bound of e*gamma_f and expected runtime at most e * sum gamma.
// p and d are taken as the worst case over flaws.
CriterionResult symmetric_criterion(const OracleSystem& sys,
                                    const std::vector<Rat>& gamma);

// Closed-neighborhood charge sums at most 1/4 give bounds 4*gamma_f and
// runtime 4 * sum gamma.
CriterionResult neighborhood_criterion(const OracleSystem& sys,
                                       const std::vector<Rat>& gamma);

// gamma_f <= x_f * prod over neighbors (1 - x_g), with x in [0,1), gives
// bounds x_f / (1 - x_f).
CriterionResult asymmetric_criterion(const OracleSystem& sys,
                                     const std::vector<Rat>& gamma,
                                     const std::vector<Rat>& x);

// eta_f >= gamma_f * sum over stable subsets of the closed neighborhood of
// prod eta gives bounds eta_f.
CriterionResult cluster_expansion_criterion(const OracleSystem& sys,
                                            const std::vector<Rat>& gamma,
                                            const std::vector<Rat>& eta);

// The relation is covered by cliques and zeta(v) >= 1 + sum_{f in v} gamma_f *
// prod_{u owning f} zeta(u); the bound for f is the product of zeta over the
// cliques owning f, and the runtime bound is sum zeta.
CriterionResult clique_criterion(const OracleSystem& sys, const std::vector<Rat>& gamma,
                                 const std::vector<std::vector<int>>& cliques,
                                 const std::vector<Rat>& zeta);

// Checks that each truncated per-flaw weight sum stays within the claimed
// bound.  Only meaningful when the premise holds.
struct CriterionCheck {
  bool premise_holds = false;
  bool bounds_hold = false;     // truncated sums all admitted by the bounds
  bool all_converged = false;   // every truncated sum showed decay
  std::vector<WeightSum> sums;  // per flaw
};

CriterionCheck check_criterion(const OracleSystem& sys, const std::vector<Rat>& gamma,
                               const CriterionResult& crit, int max_nodes);

// Smallest t with (1+eps)^(-t) * W / t <= delta, where W upper-bounds the
// inflated weight sum  sum_f sum_H w(H) (1+eps)^|H|  over single-sink wdags.
// With probability at least 1 - delta the parallel scheme finishes within
// 2 * rounds rounds.
struct RoundBound {
  Rat w_eps_upper = 0;
  bool converged = false;
  long long rounds = -1;  // -1 when no t up to the cap works
};

RoundBound parallel_round_bound(const OracleSystem& sys, const std::vector<Rat>& gamma,
                                const Rat& eps, const Rat& delta, int max_nodes,
                                long long max_rounds = 1000000);

}  // namespace resamp
