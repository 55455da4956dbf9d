#include "resamp/compose.hpp"

#include <algorithm>
#include <stdexcept>

#include "resamp/parallel.hpp"

namespace resamp {

void SeededSystem::validate() const {
  space.validate();
  mu.validate();
  if (mu.size() != space.n)
    throw std::runtime_error("seeded system: distribution size does not match space");
  if (dep.flaw_count() != pre_count())
    throw std::runtime_error("seeded system: relation size does not match pre-flaw count");
  for (const PreFlaw& pf : pre) {
    if (!std::is_sorted(pf.support.begin(), pf.support.end()) ||
        std::adjacent_find(pf.support.begin(), pf.support.end()) != pf.support.end())
      throw std::runtime_error("pre-flaw " + pf.name + ": support must be sorted and unique");
    if (!pf.support.empty() && (pf.support.front() < 0 || pf.support.back() >= space.n))
      throw std::runtime_error("pre-flaw " + pf.name + ": support state out of range");
    Rat total = 0;
    for (const Seed& s : pf.seeds) {
      if (s.prob <= 0)
        throw std::runtime_error("pre-flaw " + pf.name + ": seed probability must be positive");
      total += s.prob;
      if (static_cast<int>(s.action.size()) != space.n)
        throw std::runtime_error("pre-flaw " + pf.name + ": seed action size mismatch");
      for (int sigma : pf.support)
        if (s.action[sigma] < 0 || s.action[sigma] >= space.n)
          throw std::runtime_error("pre-flaw " + pf.name + ": seed action out of range");
    }
    if (total != 1)
      throw std::runtime_error("pre-flaw " + pf.name + ": seed probabilities must sum to 1");
  }
}

SparseMatrix induced_matrix(const SeededSystem& sys, int f) {
  SparseMatrix a = SparseMatrix::zero(sys.space.n);
  const PreFlaw& pf = sys.pre[f];
  for (int sigma : pf.support)
    for (const Seed& s : pf.seeds) a.set(sigma, s.action[sigma], a.at(sigma, s.action[sigma]) + s.prob);
  return a;
}

ObliviousReport check_oblivious(const SeededSystem& sys) {
  ObliviousReport rep;
  for (int f = 0; f < sys.pre_count(); ++f) {
    for (int g = 0; g < sys.pre_count(); ++g) {
      if (sys.dep.related(f, g)) continue;
      Event overlap = event_intersect(sys.pre[f].support, sys.pre[g].support);
      if (overlap.size() < 2) continue;
      for (size_t r = 0; r < sys.pre[f].seeds.size(); ++r) {
        const Seed& s = sys.pre[f].seeds[r];
        int stays = -1, leaves = -1;
        for (int sigma : overlap) {
          if (event_contains(sys.pre[g].support, s.action[sigma]))
            stays = sigma;
          else
            leaves = sigma;
        }
        if (stays >= 0 && leaves >= 0) rep.violations.push_back({f, g, r, stays, leaves});
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

CommutativityReport check_pre_commutative(const SeededSystem& sys, int jobs) {
  std::vector<SparseMatrix> mats;
  mats.reserve(sys.pre_count());
  for (int f = 0; f < sys.pre_count(); ++f) mats.push_back(induced_matrix(sys, f));

  std::vector<CommutePair> pairs;
  for (int f = 0; f < sys.pre_count(); ++f)
    for (int g = f + 1; g < sys.pre_count(); ++g)
      if (!sys.dep.related(f, g)) pairs.push_back({f, g});

  std::vector<char> bad(pairs.size(), 0);
  parallel_for(static_cast<long long>(pairs.size()), jobs, [&](long long i) {
    const auto& [f, g] = pairs[i];
    if (!(mat_mul(mats[f], mats[g]) == mat_mul(mats[g], mats[f]))) bad[i] = 1;
  });

  CommutativityReport rep;
  for (size_t i = 0; i < pairs.size(); ++i)
    if (bad[i]) rep.violations.push_back(pairs[i]);
  rep.ok = rep.violations.empty();
  return rep;
}

ConditionedSeeds conditioned_seeds(const SeededSystem& sys, int f,
                                   const std::vector<int>& later) {
  Event probe = sys.pre[f].support;
  for (int g : later) probe = event_intersect(probe, sys.pre[g].support);
  if (probe.empty())
    throw std::runtime_error("conditioned seeds: member events have empty intersection");
  int sigma = probe.front();
  ConditionedSeeds out;
  for (size_t r = 0; r < sys.pre[f].seeds.size(); ++r) {
    int next = sys.pre[f].seeds[r].action[sigma];
    bool keeps = true;
    for (int g : later)
      if (!event_contains(sys.pre[g].support, next)) {
        keeps = false;
        break;
      }
    if (keeps) {
      out.kept.push_back(r);
      out.mass += sys.pre[f].seeds[r].prob;
    }
  }
  if (out.mass == 0)
    throw std::runtime_error("conditioned seeds: no seed keeps the later events");
  return out;
}

namespace {

void walk_tuples(const SeededSystem& sys, const std::vector<int>& members,
                 const std::vector<ConditionedSeeds>& stages, size_t i, int state,
                 const Rat& weight, SparseMatrix& a, int from) {
  if (i == members.size()) {
    a.set(from, state, a.at(from, state) + weight);
    return;
  }
  const PreFlaw& pf = sys.pre[members[i]];
  for (size_t r : stages[i].kept) {
    const Seed& s = pf.seeds[r];
    walk_tuples(sys, members, stages, i + 1, s.action[state],
                weight * s.prob / stages[i].mass, a, from);
  }
}

}  // namespace

ComposedFlaw compose_flaw(const SeededSystem& sys, const std::vector<int>& members) {
  if (members.empty())
    throw std::invalid_argument("compose_flaw: member list must be nonempty");
  if (!sys.dep.is_stable(members))
    throw std::invalid_argument("compose_flaw: members must be pairwise unrelated");

  ComposedFlaw out;
  out.members = members;
  out.support = sys.pre[members[0]].support;
  out.name = sys.pre[members[0]].name;
  for (size_t i = 1; i < members.size(); ++i) {
    out.support = event_intersect(out.support, sys.pre[members[i]].support);
    out.name += "&" + sys.pre[members[i]].name;
  }
  if (out.support.empty())
    throw std::invalid_argument("compose_flaw: member events have empty intersection");

  std::vector<ConditionedSeeds> stages(members.size());
  out.scale = 1;
  for (size_t i = 0; i < members.size(); ++i) {
    std::vector<int> later(members.begin() + static_cast<long>(i) + 1, members.end());
    stages[i] = conditioned_seeds(sys, members[i], later);
    out.scale /= stages[i].mass;
  }

  out.matrix = SparseMatrix::zero(sys.space.n);
  for (int sigma : out.support) walk_tuples(sys, members, stages, 0, sigma, 1, out.matrix, sigma);
  return out;
}

bool matches_member_product(const SeededSystem& sys, const ComposedFlaw& g) {
  SparseMatrix prod = induced_matrix(sys, g.members[0]);
  for (size_t i = 1; i < g.members.size(); ++i)
    prod = mat_mul(prod, induced_matrix(sys, g.members[i]));
  prod = mat_scale(prod, g.scale);
  // The identity is row-wise on the composed support; the raw product may
  // carry mass on rows where only a proper subset of the members holds.
  for (int sigma : g.support)
    if (g.matrix.rows[sigma] != prod.rows[sigma]) return false;
  return true;
}

OracleSystem composed_system(const SeededSystem& sys,
                             const std::vector<std::vector<int>>& member_sets) {
  for (size_t i = 0; i < member_sets.size(); ++i) {
    std::vector<int> a = member_sets[i];
    std::sort(a.begin(), a.end());
    for (size_t j = i + 1; j < member_sets.size(); ++j) {
      std::vector<int> b = member_sets[j];
      std::sort(b.begin(), b.end());
      if (a == b) throw std::invalid_argument("composed_system: duplicate member set");
    }
  }

  OracleSystem out;
  out.space = sys.space;
  out.mu = sys.mu;
  const int n = static_cast<int>(member_sets.size());
  out.dep = DependencyRelation(n);
  for (int i = 0; i < n; ++i) {
    ComposedFlaw cf = compose_flaw(sys, member_sets[i]);
    out.flaws.push_back({cf.name, cf.support, cf.matrix});
    for (int j = 0; j < i; ++j) {
      bool rel = false;
      for (int f : member_sets[i]) {
        for (int fp : member_sets[j])
          if (sys.dep.related(f, fp)) {
            rel = true;
            break;
          }
        if (rel) break;
      }
      if (rel) out.dep.set_related(i, j);
    }
  }
  return out;
}

bool enumeration_invariant(const SeededSystem& sys, const std::vector<int>& members) {
  std::vector<int> order = members;
  std::sort(order.begin(), order.end());
  SparseMatrix first = compose_flaw(sys, order).matrix;
  while (std::next_permutation(order.begin(), order.end())) {
    if (!(compose_flaw(sys, order).matrix == first)) return false;
  }
  return true;
}

}  // namespace resamp
