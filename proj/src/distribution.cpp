#include "resamp/distribution.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "resamp/criteria.hpp"

namespace resamp {

std::vector<int> cause_flaws_at(const OracleSystem& sys, const Event& e, int sigma) {
  std::vector<char> in_e(sys.space.n, 0);
  for (int s : e) in_e[s] = 1;
  if (sigma < 0 || sigma >= sys.space.n || !in_e[sigma]) {
    throw std::invalid_argument("cause_flaws_at: sigma must lie in the event");
  }
  std::vector<int> out;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    const SparseMatrix& a = sys.matrix(f);
    bool causes = false;
    for (int from = 0; from < a.n && !causes; ++from) {
      if (in_e[from]) continue;
      for (const auto& [to, p] : a.rows[from]) {
        if (to == sigma && p > 0) {
          causes = true;
          break;
        }
      }
    }
    if (causes) out.push_back(f);
  }
  return out;
}

std::vector<int> cause_flaws(const OracleSystem& sys, const Event& e) {
  std::vector<char> in_e(sys.space.n, 0);
  for (int s : e) in_e[s] = 1;
  std::vector<char> hit(sys.flaw_count(), 0);
  for (int f = 0; f < sys.flaw_count(); ++f) {
    const SparseMatrix& a = sys.matrix(f);
    for (int from = 0; from < a.n && !hit[f]; ++from) {
      if (in_e[from]) continue;
      for (const auto& [to, p] : a.rows[from]) {
        if (in_e[to] && p > 0) {
          hit[f] = 1;
          break;
        }
      }
    }
  }
  std::vector<int> out;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    if (hit[f]) out.push_back(f);
  }
  return out;
}

std::vector<std::vector<int>> orderable_sets(const OracleSystem& sys, const Event& e) {
  const std::vector<int> causes = cause_flaws(sys, e);
  const ExactVec e_ind = indicator(sys.space.n, e);

  // Flaws in a stable set commute, so the product applied to the indicator is
  // determined by the set alone.
  std::map<std::vector<int>, ExactVec> prod;
  std::map<std::vector<int>, bool> orderable;
  prod[{}] = e_ind;
  orderable[{}] = true;

  std::vector<std::vector<int>> pool = sys.dep.stable_subsets(causes);
  std::sort(pool.begin(), pool.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              if (a.size() != b.size()) return a.size() < b.size();
              return a < b;
            });

  std::vector<std::vector<int>> out;
  for (const auto& set : pool) {
    if (set.empty()) {
      out.push_back(set);
      continue;
    }
    std::vector<int> rest(set.begin(), set.end() - 1);
    prod[set] = mat_apply(sys.matrix(set.back()), prod.at(rest));
    // Some enumeration must put each flaw first with its suffix already
    // orderable and the extension not dominated.
    bool ok = false;
    for (size_t i = 0; i < set.size() && !ok; ++i) {
      std::vector<int> sub = set;
      sub.erase(sub.begin() + static_cast<long>(i));
      ok = orderable.at(sub) && !vec_dominated(prod.at(set), prod.at(sub));
    }
    orderable[set] = ok;
    if (ok) out.push_back(set);
  }
  return out;
}

EventBounds event_bounds(const OracleSystem& sys, const std::vector<Rat>& gamma,
                         const Event& e, int max_nodes) {
  EventBounds out;
  out.mu_e = measure(sys.mu, e);
  out.cause_set = cause_flaws(sys, e);
  out.orderable = orderable_sets(sys, e);

  for (const auto& set : out.orderable) {
    for (const Wdag& h : enumerate_sink_wdags(sys.dep, set, max_nodes)) {
      out.matrix_sum += event_bound(h, sys, e);
    }
    WeightSum ws = psi_set(sys, gamma, set, max_nodes);
    out.psi_sum += ws.truncated;
    out.converged = out.converged && ws.converged;
  }
  out.psi_sum *= out.mu_e;

  WeightSum bar = psi_bar(sys, gamma, out.cause_set, max_nodes);
  out.psi_bar_sum = out.mu_e * bar.truncated;
  out.psi_bar_tail = out.mu_e * bar.tail_bound;
  out.converged = out.converged && bar.converged;
  return out;
}

Rat dist_bound_symmetric(const Rat& mu_e, const Rat& p, int cause_count) {
  return mu_e * exp_upper(euler_upper() * cause_count * p);
}

Rat dist_bound_neighborhood(const Rat& mu_e, const Rat& cause_gamma_sum) {
  return mu_e * exp_upper(4 * cause_gamma_sum);
}

Rat dist_bound_asymmetric(const Rat& mu_e, const std::vector<Rat>& cause_x) {
  Rat prod = 1;
  for (const Rat& xf : cause_x) {
    if (xf < 0 || xf >= 1) {
      throw std::invalid_argument("dist_bound_asymmetric: x must lie in [0,1)");
    }
    prod *= 1 / (1 - xf);
  }
  return mu_e * prod;
}

Rat dist_bound_cluster(const Rat& mu_e, const std::vector<std::vector<int>>& orderable,
                       const std::vector<Rat>& eta) {
  Rat total = 0;
  for (const auto& set : orderable) {
    Rat prod = 1;
    for (int g : set) prod *= eta.at(static_cast<size_t>(g));
    total += prod;
  }
  return mu_e * total;
}

namespace {

// True when no proper prefix of h leaves a residual that can carry a state of
// e to sigma.  The empty prefix covers the whole of h, so membership requires
// that h itself never routes e back to sigma.
bool pair_is_minimal(const OracleSystem& sys, const Event& e, const Wdag& h,
                     int sigma) {
  const int n = h.size();
  ExactVec unit = unit_vec(sys.space.n, sigma);
  for (const auto& prefix : prefix_node_sets(h)) {
    if (static_cast<int>(prefix.size()) == n) continue;
    std::vector<char> in_prefix(n, 0);
    for (int v : prefix) in_prefix[v] = 1;
    std::vector<int> residual_nodes;
    for (int v = 0; v < n; ++v) {
      if (!in_prefix[v]) residual_nodes.push_back(v);
    }
    ExactVec vec = wdag_apply(induced_subgraph(h, residual_nodes), sys, unit);
    Rat from_e = 0;
    for (int s : e) from_e += vec[s];
    if (from_e > 0) return false;
  }
  return true;
}

}  // namespace

std::vector<MinimalPair> minimal_pairs(const OracleSystem& sys, const Event& e,
                                       int max_nodes) {
  std::vector<MinimalPair> out;
  for (int sigma : e) {
    const std::vector<int> causes = cause_flaws_at(sys, e, sigma);
    for (const auto& sinks : sys.dep.stable_subsets(causes)) {
      for (const Wdag& h : enumerate_sink_wdags(sys.dep, sinks, max_nodes)) {
        if (pair_is_minimal(sys, e, h, sigma)) out.push_back({h, sigma});
      }
    }
  }
  return out;
}

InjectiveBounds injective_event_bounds(const OracleSystem& sys,
                                       const std::vector<Rat>& gamma, const Event& e,
                                       int max_nodes) {
  InjectiveBounds out;
  for (const MinimalPair& mp : minimal_pairs(sys, e, max_nodes)) {
    ExactVec col = wdag_apply(mp.h, sys, unit_vec(sys.space.n, mp.sigma));
    out.pair_sum += dot(sys.mu.p, col);
    out.pair_weight_sum += sys.mu.p[mp.sigma] * wdag_weight(mp.h, gamma);
  }
  Rat mu_e = measure(sys.mu, e);
  Rat best = 0;
  Rat best_tail = 0;
  for (int sigma : e) {
    WeightSum bar = psi_bar(sys, gamma, cause_flaws_at(sys, e, sigma), max_nodes);
    out.per_state_sum += sys.mu.p[sigma] * bar.truncated;
    out.converged = out.converged && bar.converged;
    if (bar.truncated > best) {
      best = bar.truncated;
      best_tail = bar.tail_bound;
    }
  }
  out.uniform_bound = mu_e * best;
  out.uniform_tail = mu_e * best_tail;
  return out;
}

DisjunctionBound disjunction_bound(const OracleSystem& sys, const std::vector<Rat>& gamma,
                                   const std::vector<Event>& components, int max_nodes) {
  Event whole;
  for (const Event& c : components) whole = event_union(whole, c);
  DisjunctionBound out;
  Rat mu_e = measure(sys.mu, whole);
  Rat best = 0;
  Rat best_tail = 0;
  for (const Event& c : components) {
    WeightSum bar = psi_bar(sys, gamma, cause_flaws(sys, c), max_nodes);
    out.converged = out.converged && bar.converged;
    if (bar.truncated > best) {
      best = bar.truncated;
      best_tail = bar.tail_bound;
    }
  }
  out.value = mu_e * best;
  out.tail = mu_e * best_tail;
  return out;
}

}  // namespace resamp
