#include "resamp/criteria.hpp"

#include <algorithm>

#include "resamp/rational.hpp"

namespace resamp {

WeightSum psi(const OracleSystem& sys, const std::vector<Rat>& gamma, int f,
              int max_nodes) {
  return weight_sum(sys.dep, gamma, {f}, max_nodes);
}

WeightSum psi_set(const OracleSystem& sys, const std::vector<Rat>& gamma,
                  const std::vector<int>& sinks, int max_nodes) {
  return weight_sum(sys.dep, gamma, sinks, max_nodes);
}

WeightSum psi_bar(const OracleSystem& sys, const std::vector<Rat>& gamma,
                  const std::vector<int>& labels, int max_nodes) {
  WeightSum total;
  total.level_sums.assign(max_nodes + 1, Rat(0));
  total.converged = true;
  size_t n = labels.size();
  if (n > 20) throw std::runtime_error("psi_bar: label set too large");
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> subset;
    for (size_t i = 0; i < n; ++i)
      if (mask >> i & 1) subset.push_back(labels[i]);
    if (!sys.dep.is_stable(subset)) continue;
    WeightSum part = weight_sum(sys.dep, gamma, subset, max_nodes);
    for (int k = 0; k <= max_nodes; ++k) total.level_sums[k] += part.level_sums[k];
    total.truncated += part.truncated;
    total.tail_bound += part.tail_bound;
    total.converged = total.converged && part.converged;
  }
  return total;
}

bool BoundValue::admits(const Rat& value) const {
  if (!euler_multiple) return value <= q;
  if (q == 0) return value <= 0;
  // value <= e*q  iff  not (e*q <= value), since e*q is irrational for q != 0.
  return !euler_times_leq(q, value);
}

double BoundValue::approx() const {
  double v = rat_double(q);
  return euler_multiple ? v * rat_double(euler_upper()) : v;
}

std::string BoundValue::str() const {
  return euler_multiple ? "e*" + rat_str(q) : rat_str(q);
}

CriterionResult symmetric_criterion(const OracleSystem& sys,
                                    const std::vector<Rat>& gamma) {
  CriterionResult out;
  Rat p = 0;
  int d = 0;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    p = std::max(p, gamma[f]);
    d = std::max(d, static_cast<int>(sys.dep.closed_neighbors(f).size()));
  }
  out.premise_holds = euler_times_leq(p * d, 1);
  if (!out.premise_holds)
    out.note = "e * " + rat_str(p) + " * " + std::to_string(d) + " exceeds 1";
  Rat total = 0;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    out.flaw_bounds.push_back(BoundValue::euler_times(gamma[f]));
    total += gamma[f];
  }
  out.runtime_bound = BoundValue::euler_times(total);
  return out;
}

CriterionResult neighborhood_criterion(const OracleSystem& sys,
                                       const std::vector<Rat>& gamma) {
  CriterionResult out;
  out.premise_holds = true;
  Rat total = 0;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    Rat s = 0;
    for (int g : sys.dep.closed_neighbors(f)) s += gamma[g];
    if (s > Rat(1, 4) && out.note.empty()) {
      out.premise_holds = false;
      out.note = "closed neighborhood of flaw " + std::to_string(f) +
                 " has charge sum " + rat_str(s);
    }
    out.flaw_bounds.push_back(BoundValue::exact(4 * gamma[f]));
    total += gamma[f];
  }
  out.runtime_bound = BoundValue::exact(4 * total);
  return out;
}

CriterionResult asymmetric_criterion(const OracleSystem& sys,
                                     const std::vector<Rat>& gamma,
                                     const std::vector<Rat>& x) {
  CriterionResult out;
  out.premise_holds = true;
  Rat total = 0;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    if (x[f] < 0 || x[f] >= 1) {
      out.premise_holds = false;
      if (out.note.empty())
        out.note = "x for flaw " + std::to_string(f) + " is outside [0,1)";
      out.flaw_bounds.push_back(BoundValue::exact(0));
      continue;
    }
    Rat rhs = x[f];
    for (int g : sys.dep.neighbors(f)) rhs *= 1 - x[g];
    if (gamma[f] > rhs && out.note.empty()) {
      out.premise_holds = false;
      out.note = "flaw " + std::to_string(f) + ": charge " + rat_str(gamma[f]) +
                 " exceeds " + rat_str(rhs);
    }
    Rat bound = x[f] / (1 - x[f]);
    out.flaw_bounds.push_back(BoundValue::exact(bound));
    total += bound;
  }
  out.runtime_bound = BoundValue::exact(total);
  return out;
}

CriterionResult cluster_expansion_criterion(const OracleSystem& sys,
                                            const std::vector<Rat>& gamma,
                                            const std::vector<Rat>& eta) {
  CriterionResult out;
  out.premise_holds = true;
  Rat total = 0;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    Rat s = 0;
    for (const auto& stable : sys.dep.stable_subsets(sys.dep.closed_neighbors(f))) {
      Rat prod = 1;
      for (int g : stable) prod *= eta[g];
      s += prod;
    }
    if (eta[f] < gamma[f] * s && out.note.empty()) {
      out.premise_holds = false;
      out.note = "flaw " + std::to_string(f) + ": eta " + rat_str(eta[f]) +
                 " is below " + rat_str(gamma[f] * s);
    }
    out.flaw_bounds.push_back(BoundValue::exact(eta[f]));
    total += eta[f];
  }
  out.runtime_bound = BoundValue::exact(total);
  return out;
}

CriterionResult clique_criterion(const OracleSystem& sys, const std::vector<Rat>& gamma,
                                 const std::vector<std::vector<int>>& cliques,
                                 const std::vector<Rat>& zeta) {
  CriterionResult out;
  out.premise_holds = true;
  int m = sys.flaw_count();

  std::vector<std::vector<int>> owning(m);
  std::vector<std::vector<char>> covered(m, std::vector<char>(m, 0));
  for (size_t v = 0; v < cliques.size(); ++v) {
    for (int f : cliques[v]) {
      owning[f].push_back(static_cast<int>(v));
      for (int g : cliques[v]) covered[f][g] = 1;
    }
  }
  for (int f = 0; f < m && out.premise_holds; ++f)
    for (int g = 0; g < m; ++g)
      if (covered[f][g] != (sys.dep.related(f, g) ? 1 : 0)) {
        out.premise_holds = false;
        out.note = "cliques do not cover the relation at pair (" +
                   std::to_string(f) + "," + std::to_string(g) + ")";
        break;
      }

  auto flaw_product = [&](int f) {
    Rat prod = 1;
    for (int v : owning[f]) prod *= zeta[v];
    return prod;
  };
  for (size_t v = 0; v < cliques.size(); ++v) {
    Rat rhs = 1;
    for (int f : cliques[v]) rhs += gamma[f] * flaw_product(f);
    if (zeta[v] < rhs && out.note.empty()) {
      out.premise_holds = false;
      out.note = "clique " + std::to_string(v) + ": zeta " + rat_str(zeta[v]) +
                 " is below " + rat_str(rhs);
    }
  }

  Rat total = 0;
  for (const Rat& z : zeta) total += z;
  for (int f = 0; f < m; ++f) out.flaw_bounds.push_back(BoundValue::exact(flaw_product(f)));
  out.runtime_bound = BoundValue::exact(total);
  return out;
}

CriterionCheck check_criterion(const OracleSystem& sys, const std::vector<Rat>& gamma,
                               const CriterionResult& crit, int max_nodes) {
  CriterionCheck out;
  out.premise_holds = crit.premise_holds;
  out.bounds_hold = true;
  out.all_converged = true;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    WeightSum s = psi(sys, gamma, f, max_nodes);
    out.bounds_hold = out.bounds_hold && crit.flaw_bounds[f].admits(s.truncated);
    out.all_converged = out.all_converged && s.converged;
    out.sums.push_back(std::move(s));
  }
  return out;
}

RoundBound parallel_round_bound(const OracleSystem& sys, const std::vector<Rat>& gamma,
                                const Rat& eps, const Rat& delta, int max_nodes,
                                long long max_rounds) {
  RoundBound out;
  std::vector<Rat> inflated(gamma.size());
  for (size_t f = 0; f < gamma.size(); ++f) inflated[f] = gamma[f] * (1 + eps);
  out.converged = true;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    WeightSum s = weight_sum(sys.dep, inflated, {f}, max_nodes);
    out.converged = out.converged && s.converged;
    out.w_eps_upper += s.upper();
  }
  Rat growth = 1 + eps;
  Rat power = 1;
  for (long long t = 1; t <= max_rounds; ++t) {
    power *= growth;
    if (out.w_eps_upper <= delta * static_cast<long>(t) * power) {
      out.rounds = t;
      break;
    }
  }
  return out;
}

}  // namespace resamp
