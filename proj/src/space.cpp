#include "resamp/space.hpp"

#include <algorithm>
#include <stdexcept>

namespace resamp {

std::string StateSpace::name_of(State s) const {
  if (s < 0 || s >= n) throw std::out_of_range("state index");
  if (!names.empty()) return names[s];
  return std::to_string(s);
}

State StateSpace::index_of(const std::string& name) const {
  for (int i = 0; i < static_cast<int>(names.size()); ++i)
    if (names[i] == name) return i;
  return -1;
}

void StateSpace::validate() const {
  if (n <= 0) throw std::invalid_argument("state space must be nonempty");
  if (names.empty()) return;
  if (static_cast<int>(names.size()) != n)
    throw std::invalid_argument("name list size mismatch");
  std::vector<std::string> sorted = names;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("state names must be distinct");
}

void Distribution::validate() const {
  Rat total = 0;
  for (const Rat& x : p) {
    if (x <= 0) throw std::invalid_argument("distribution must be strictly positive");
    total += x;
  }
  if (total != 1) throw std::invalid_argument("distribution mass is not 1");
}

Event make_event(std::vector<State> states, int n) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
  if (!states.empty() && (states.front() < 0 || states.back() >= n))
    throw std::out_of_range("event state out of range");
  return states;
}

bool event_contains(const Event& e, State s) {
  return std::binary_search(e.begin(), e.end(), s);
}

Event event_complement(const Event& e, int n) {
  Event out;
  out.reserve(n - e.size());
  size_t j = 0;
  for (State s = 0; s < n; ++s) {
    if (j < e.size() && e[j] == s) {
      ++j;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

Event event_intersect(const Event& a, const Event& b) {
  Event out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Event event_union(const Event& a, const Event& b) {
  Event out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

Rat measure(const Distribution& mu, const Event& e) {
  Rat total = 0;
  for (State s : e) total += mu.p[s];
  return total;
}

ExactVec indicator(int n, const Event& e) {
  ExactVec v(n, Rat(0));
  for (State s : e) v[s] = 1;
  return v;
}

ExactVec unit_vec(int n, State s) {
  ExactVec v(n, Rat(0));
  v[s] = 1;
  return v;
}

ExactVec ones_vec(int n) { return ExactVec(n, Rat(1)); }

Rat dot(const ExactVec& a, const ExactVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
  Rat total = 0;
  for (size_t i = 0; i < a.size(); ++i) total += a[i] * b[i];
  return total;
}

VecOrder compare_vec(const ExactVec& a, const ExactVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("compare_vec: length mismatch");
  bool le = true, ge = true;
  for (size_t i = 0; i < a.size(); ++i) {
    int c = cmp(a[i], b[i]);
    if (c < 0) ge = false;
    if (c > 0) le = false;
  }
  if (le && ge) return VecOrder::Equal;
  if (le) return VecOrder::LessEq;
  if (ge) return VecOrder::GreaterEq;
  return VecOrder::Incomparable;
}

bool vec_dominated(const ExactVec& a, const ExactVec& b) {
  if (a.size() != b.size()) throw std::invalid_argument("vec_dominated: length mismatch");
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace resamp
