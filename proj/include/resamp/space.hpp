#pragma once

#include <string>
#include <vector>

#include "resamp/rational.hpp"

namespace resamp {

using State = int;
using FlawId = int;

// Finite explicit state space. Names are optional; when absent, states are
// addressed by index only.
struct StateSpace {
  int n = 0;
  std::vector<std::string> names;  // empty or size n

  std::string name_of(State s) const;
  State index_of(const std::string& name) const;  // -1 if unknown
  void validate() const;
};

// Strictly positive exact distribution over a StateSpace.
struct Distribution {
  std::vector<Rat> p;

  int size() const { return static_cast<int>(p.size()); }
  void validate() const;  // positive entries, total mass exactly 1
};

// An event is a sorted duplicate-free list of state indices.
using Event = std::vector<State>;

Event make_event(std::vector<State> states, int n);
bool event_contains(const Event& e, State s);
Event event_complement(const Event& e, int n);
Event event_intersect(const Event& a, const Event& b);
Event event_union(const Event& a, const Event& b);

Rat measure(const Distribution& mu, const Event& e);

using ExactVec = std::vector<Rat>;

ExactVec indicator(int n, const Event& e);
ExactVec unit_vec(int n, State s);
ExactVec ones_vec(int n);
Rat dot(const ExactVec& a, const ExactVec& b);

enum class VecOrder { Equal, LessEq, GreaterEq, Incomparable };

// Exact entrywise comparison. LessEq / GreaterEq are strict in at least one
// coordinate; Equal means identical vectors.
VecOrder compare_vec(const ExactVec& a, const ExactVec& b);

// a[i] <= b[i] for all i (equality allowed).
bool vec_dominated(const ExactVec& a, const ExactVec& b);

}  // namespace resamp
