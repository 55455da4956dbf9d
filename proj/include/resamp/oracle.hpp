#pragma once

#include <string>
#include <vector>

#include "resamp/matrix.hpp"
#include "resamp/space.hpp"

namespace resamp {

// A flaw is a subset of states together with the transition matrix of its
// resampling action: row sigma gives the distribution of the next state when
// the flaw is resampled at sigma.  Rows outside the support are zero.
struct Flaw {
  std::string name;
  Event support;
  SparseMatrix matrix;

  bool holds(int state) const { return event_contains(support, state); }
};

// Symmetric, reflexive relation on flaw indices.
class DependencyRelation {
 public:
  DependencyRelation() = default;
  explicit DependencyRelation(int flaw_count);

  int flaw_count() const { return n_; }
  bool related(int f, int g) const { return rel_[f][g] != 0; }
  void set_related(int f, int g);
  // Pre-flaw relations are allowed to drop self-loops.
  void set_unrelated(int f, int g);

  // Neighborhood of f excluding f itself.
  std::vector<int> neighbors(int f) const;
  // Neighborhood of f including f.
  std::vector<int> closed_neighbors(int f) const;

  bool is_stable(const std::vector<int>& set) const;
  bool operator==(const DependencyRelation& o) const { return rel_ == o.rel_; }

  // All subsets of pool (given sorted, returned sorted) whose members are
  // pairwise unrelated; includes the empty set.
  std::vector<std::vector<int>> stable_subsets(const std::vector<int>& pool) const;

 private:
  int n_ = 0;
  std::vector<std::vector<char>> rel_;
};

struct OracleSystem {
  StateSpace space;
  Distribution mu;
  std::vector<Flaw> flaws;
  DependencyRelation dep;

  int flaw_count() const { return static_cast<int>(flaws.size()); }
  const SparseMatrix& matrix(int f) const { return flaws[f].matrix; }
  Rat mu_of(int f) const { return measure(mu, flaws[f].support); }
  std::vector<int> flaws_holding(int state) const;

  // Throws on structural inconsistencies (sizes, unsorted supports, relation
  // shape).  Probabilistic properties are checked separately below.
  void validate() const;
};

struct RowIssue {
  int flaw;
  int state;
  std::string what;
};

struct FlawMatrixReport {
  bool ok = true;
  std::vector<RowIssue> issues;
};

// Each row on the support must be a probability distribution; rows off the
// support must be absent.
FlawMatrixReport check_flaw_matrices(const OracleSystem& sys);

struct CausalityViolation {
  int resampled;    // flaw that was resampled
  int introduced;   // unrelated flaw it caused
  int from_state;   // state outside `introduced`
  int to_state;     // reachable state inside `introduced`
};

struct SoundnessReport {
  bool ok = true;
  std::vector<CausalityViolation> violations;
};

// For every unrelated pair f, g: resampling f at a state outside g must never
// land inside g, and vice versa.
SoundnessReport check_dependency_sound(const OracleSystem& sys);

struct CommutePair {
  int f;
  int g;
};

struct CommutativityReport {
  bool ok = true;
  std::vector<CommutePair> violations;
};

// A_f A_g must equal A_g A_f for every unrelated pair.
CommutativityReport check_t_commutative(const OracleSystem& sys, int jobs = 1);

// Smallest relation under which the system is commutative: f ~ g iff f = g or
// the transition matrices do not commute.
DependencyRelation minimal_dependency(const OracleSystem& sys, int jobs = 1);

struct RegenIssue {
  int flaw;
  int state;
  Rat got;
  Rat want;
};

struct RegenReport {
  bool ok = true;
  std::vector<RegenIssue> issues;
};

// mu^T A_f = mu(f) mu^T for every flaw.
RegenReport check_regenerating(const OracleSystem& sys);

struct InjectivityIssue {
  int flaw;
  int column;
  int nnz;
};

struct InjectivityReport {
  bool ok = true;
  std::vector<InjectivityIssue> issues;
};

// Every column of every transition matrix has at most one nonzero entry.
InjectivityReport check_injective(const OracleSystem& sys);

// Charge of a flaw: max over target states tau of
//   sum_sigma mu(sigma) A_f[sigma, tau] / mu(tau).
Rat charge(const OracleSystem& sys, int f);
std::vector<Rat> charges(const OracleSystem& sys);

// Distortion: charge divided by the measure of the flaw (at least 1 for
// regenerating oracles).  Throws if the flaw has measure zero.
Rat distortion(const OracleSystem& sys, int f);

struct LopsidedReport {
  bool ok = true;
  Rat charge_bound;             // gamma_f
  Rat worst_ratio;              // largest conditional measure seen
  std::vector<int> worst_set;   // conditioning set attaining it
  long long sets_checked = 0;
  bool truncated = false;       // true if the size cap cut off enumeration
};

// Checks mu(f | intersection of complements of g in S) <= gamma_f over all
// sets S of flaws outside the open neighborhood of f, up to max_set_size
// elements (negative = no cap).  Sets whose complement intersection has
// measure zero are skipped.
LopsidedReport check_lopsided(const OracleSystem& sys, int f, int max_set_size = -1);

struct SystemReport {
  FlawMatrixReport matrices;
  SoundnessReport soundness;
  CommutativityReport commutativity;
  RegenReport regeneration;
  InjectivityReport injectivity;
  std::vector<Rat> charge_values;

  bool sound_and_commutative() const {
    return matrices.ok && soundness.ok && commutativity.ok;
  }
};

SystemReport check_system(const OracleSystem& sys, int jobs = 1);

}  // namespace resamp
