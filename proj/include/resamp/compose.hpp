#pragma once

#include <string>
#include <vector>

#include "resamp/oracle.hpp"

namespace resamp {

// One random seed of a pre-flaw's resampling rule: its probability and the
// deterministic state it produces from each support state.  Entries outside
// the support are -1.
struct Seed {
  Rat prob;
  std::vector<int> action;
};

// Pre-flaw: an event with an explicit seeded resampling rule.  Pre-flaws have
// the structure of flaws but need not be self-related, and the system built
// from them need not converge anywhere.
struct PreFlaw {
  std::string name;
  Event support;
  std::vector<Seed> seeds;
};

struct SeededSystem {
  StateSpace space;
  Distribution mu;
  std::vector<PreFlaw> pre;
  DependencyRelation dep;  // possibly irreflexive

  int pre_count() const { return static_cast<int>(pre.size()); }

  // Throws on structural inconsistencies (sizes, seed probabilities not
  // summing to 1, actions undefined on the support or out of range).
  void validate() const;
};

// Transition matrix induced by the seeds of pre-flaw f.
SparseMatrix induced_matrix(const SeededSystem& sys, int f);

struct ObliviousViolation {
  int f;
  int g;
  size_t seed;
  int stays;   // state in both events that the seed keeps inside g
  int leaves;  // state in both events that the same seed takes outside g
};

struct ObliviousReport {
  bool ok = true;
  std::vector<ObliviousViolation> violations;
};

// For every pair f, g with f unrelated to g (including f paired with itself
// when f lacks a self-loop), each seed of f must treat the overlap uniformly:
// it maps all of it into g, or all of it out of g.
ObliviousReport check_oblivious(const SeededSystem& sys);

// A_f A_g = A_g A_f for every unrelated pair of pre-flaws.
CommutativityReport check_pre_commutative(const SeededSystem& sys, int jobs = 1);

// Seeds of f that keep every one of the listed events true, together with
// their total mass.  Well defined only for oblivious systems with the listed
// pre-flaws unrelated to f; throws if the probe set is empty.
struct ConditionedSeeds {
  std::vector<size_t> kept;
  Rat mass = 0;
};

ConditionedSeeds conditioned_seeds(const SeededSystem& sys, int f,
                                   const std::vector<int>& later);

// Flaw composed from a stable set of pre-flaws: resample each member in the
// given order, drawing each seed conditioned on keeping the later members
// true.
struct ComposedFlaw {
  std::string name;
  std::vector<int> members;
  Event support;       // intersection of the member events
  SparseMatrix matrix; // exact matrix of the composed rule
  Rat scale;           // product of the reciprocal kept masses
};

ComposedFlaw compose_flaw(const SeededSystem& sys, const std::vector<int>& members);

// Whether the composed matrix equals scale times the product of the member
// matrices taken in composition order.
bool matches_member_product(const SeededSystem& sys, const ComposedFlaw& g);

// Full system over the given member sets using the lifted relation: two
// composed flaws are related iff their member sets are equal or some pair of
// members is related.
OracleSystem composed_system(const SeededSystem& sys,
                             const std::vector<std::vector<int>>& member_sets);

// Whether every reordering of the members yields the same matrix.
bool enumeration_invariant(const SeededSystem& sys, const std::vector<int>& members);

}  // namespace resamp
