#include "resamp/oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "resamp/parallel.hpp"

namespace resamp {

DependencyRelation::DependencyRelation(int flaw_count)
    : n_(flaw_count), rel_(flaw_count, std::vector<char>(flaw_count, 0)) {
  for (int i = 0; i < n_; ++i) rel_[i][i] = 1;
}

void DependencyRelation::set_related(int f, int g) {
  rel_[f][g] = 1;
  rel_[g][f] = 1;
}

void DependencyRelation::set_unrelated(int f, int g) {
  rel_[f][g] = 0;
  rel_[g][f] = 0;
}

std::vector<int> DependencyRelation::neighbors(int f) const {
  std::vector<int> out;
  for (int g = 0; g < n_; ++g)
    if (g != f && rel_[f][g]) out.push_back(g);
  return out;
}

std::vector<int> DependencyRelation::closed_neighbors(int f) const {
  std::vector<int> out;
  for (int g = 0; g < n_; ++g)
    if (rel_[f][g]) out.push_back(g);
  return out;
}

bool DependencyRelation::is_stable(const std::vector<int>& set) const {
  for (size_t i = 0; i < set.size(); ++i)
    for (size_t j = i + 1; j < set.size(); ++j)
      if (rel_[set[i]][set[j]]) return false;
  return true;
}

namespace {

void stable_rec(const DependencyRelation& dep, const std::vector<int>& pool, size_t idx,
                std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (idx == pool.size()) {
    out.push_back(cur);
    return;
  }
  stable_rec(dep, pool, idx + 1, cur, out);
  int g = pool[idx];
  for (int h : cur)
    if (dep.related(g, h)) return;
  cur.push_back(g);
  stable_rec(dep, pool, idx + 1, cur, out);
  cur.pop_back();
}

}  // namespace

std::vector<std::vector<int>> DependencyRelation::stable_subsets(
    const std::vector<int>& pool) const {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  stable_rec(*this, pool, 0, cur, out);
  return out;
}

std::vector<int> OracleSystem::flaws_holding(int state) const {
  std::vector<int> out;
  for (int f = 0; f < flaw_count(); ++f)
    if (flaws[f].holds(state)) out.push_back(f);
  return out;
}

void OracleSystem::validate() const {
  space.validate();
  mu.validate();
  if (mu.size() != space.n)
    throw std::runtime_error("oracle system: distribution size does not match space");
  if (dep.flaw_count() != flaw_count())
    throw std::runtime_error("oracle system: relation size does not match flaw count");
  for (int f = 0; f < flaw_count(); ++f) {
    const Flaw& fl = flaws[f];
    if (!std::is_sorted(fl.support.begin(), fl.support.end()) ||
        std::adjacent_find(fl.support.begin(), fl.support.end()) != fl.support.end())
      throw std::runtime_error("flaw " + fl.name + ": support must be sorted and unique");
    if (!fl.support.empty() &&
        (fl.support.front() < 0 || fl.support.back() >= space.n))
      throw std::runtime_error("flaw " + fl.name + ": support state out of range");
    if (fl.matrix.n != space.n)
      throw std::runtime_error("flaw " + fl.name + ": matrix size does not match space");
  }
}

FlawMatrixReport check_flaw_matrices(const OracleSystem& sys) {
  FlawMatrixReport rep;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    const Flaw& fl = sys.flaws[f];
    for (int s = 0; s < sys.space.n; ++s) {
      bool on = fl.holds(s);
      if (!on) {
        if (!fl.matrix.row_empty(s))
          rep.issues.push_back({f, s, "nonzero row outside the support"});
        continue;
      }
      Rat sum = 0;
      bool neg = false;
      for (const auto& [col, val] : fl.matrix.rows[s]) {
        (void)col;
        if (val < 0) neg = true;
        sum += val;
      }
      if (neg) rep.issues.push_back({f, s, "negative transition probability"});
      if (sum != 1) rep.issues.push_back({f, s, "row does not sum to 1"});
    }
  }
  rep.ok = rep.issues.empty();
  return rep;
}

SoundnessReport check_dependency_sound(const OracleSystem& sys) {
  SoundnessReport rep;
  int m = sys.flaw_count();
  for (int f = 0; f < m; ++f) {
    for (int g = 0; g < m; ++g) {
      if (f == g || sys.dep.related(f, g)) continue;
      const Flaw& ff = sys.flaws[f];
      const Flaw& gg = sys.flaws[g];
      for (int s : ff.support) {
        if (gg.holds(s)) continue;
        for (const auto& [t, p] : ff.matrix.rows[s]) {
          if (p > 0 && gg.holds(t)) rep.violations.push_back({f, g, s, t});
        }
      }
    }
  }
  rep.ok = rep.violations.empty();
  return rep;
}

namespace {

std::vector<CommutePair> unrelated_pairs(const DependencyRelation& dep) {
  std::vector<CommutePair> pairs;
  for (int f = 0; f < dep.flaw_count(); ++f)
    for (int g = f + 1; g < dep.flaw_count(); ++g)
      if (!dep.related(f, g)) pairs.push_back({f, g});
  return pairs;
}

}  // namespace

CommutativityReport check_t_commutative(const OracleSystem& sys, int jobs) {
  CommutativityReport rep;
  auto pairs = unrelated_pairs(sys.dep);
  std::vector<char> bad(pairs.size(), 0);
  parallel_for(static_cast<long long>(pairs.size()), jobs, [&](long long i) {
    const auto& [f, g] = pairs[i];
    SparseMatrix fg = mat_mul(sys.matrix(f), sys.matrix(g));
    SparseMatrix gf = mat_mul(sys.matrix(g), sys.matrix(f));
    if (!(fg == gf)) bad[i] = 1;
  });
  for (size_t i = 0; i < pairs.size(); ++i)
    if (bad[i]) rep.violations.push_back(pairs[i]);
  rep.ok = rep.violations.empty();
  return rep;
}

DependencyRelation minimal_dependency(const OracleSystem& sys, int jobs) {
  int m = sys.flaw_count();
  std::vector<CommutePair> pairs;
  for (int f = 0; f < m; ++f)
    for (int g = f + 1; g < m; ++g) pairs.push_back({f, g});
  std::vector<char> noncommuting(pairs.size(), 0);
  parallel_for(static_cast<long long>(pairs.size()), jobs, [&](long long i) {
    const auto& [f, g] = pairs[i];
    SparseMatrix fg = mat_mul(sys.matrix(f), sys.matrix(g));
    SparseMatrix gf = mat_mul(sys.matrix(g), sys.matrix(f));
    if (!(fg == gf)) noncommuting[i] = 1;
  });
  DependencyRelation rel(m);
  for (size_t i = 0; i < pairs.size(); ++i)
    if (noncommuting[i]) rel.set_related(pairs[i].f, pairs[i].g);
  return rel;
}

RegenReport check_regenerating(const OracleSystem& sys) {
  RegenReport rep;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    Rat mf = sys.mu_of(f);
    ExactVec left = mat_apply_left(sys.mu.p, sys.matrix(f));
    for (int s = 0; s < sys.space.n; ++s) {
      Rat want = mf * sys.mu.p[s];
      if (left[s] != want) rep.issues.push_back({f, s, left[s], want});
    }
  }
  rep.ok = rep.issues.empty();
  return rep;
}

InjectivityReport check_injective(const OracleSystem& sys) {
  InjectivityReport rep;
  for (int f = 0; f < sys.flaw_count(); ++f) {
    std::vector<int> nnz(sys.space.n, 0);
    for (int s = 0; s < sys.space.n; ++s)
      for (const auto& [col, val] : sys.matrix(f).rows[s])
        if (val != 0) ++nnz[col];
    for (int c = 0; c < sys.space.n; ++c)
      if (nnz[c] > 1) rep.issues.push_back({f, c, nnz[c]});
  }
  rep.ok = rep.issues.empty();
  return rep;
}

Rat charge(const OracleSystem& sys, int f) {
  ExactVec weighted = mat_apply_left(sys.mu.p, sys.matrix(f));
  Rat best = 0;
  for (int t = 0; t < sys.space.n; ++t) {
    Rat r = weighted[t] / sys.mu.p[t];
    if (r > best) best = r;
  }
  return best;
}

std::vector<Rat> charges(const OracleSystem& sys) {
  std::vector<Rat> out(sys.flaw_count());
  for (int f = 0; f < sys.flaw_count(); ++f) out[f] = charge(sys, f);
  return out;
}

Rat distortion(const OracleSystem& sys, int f) {
  Rat mf = sys.mu_of(f);
  if (mf == 0) throw std::runtime_error("distortion: flaw has measure zero");
  return charge(sys, f) / mf;
}

namespace {

void lopsided_rec(const OracleSystem& sys, const std::vector<int>& candidates,
                  size_t idx, int remaining, const Event& flaw_support,
                  const Event& body, std::vector<int>& chosen, LopsidedReport& rep) {
  Rat mass = measure(sys.mu, body);
  if (mass > 0) {
    Rat ratio = measure(sys.mu, event_intersect(flaw_support, body)) / mass;
    ++rep.sets_checked;
    if (ratio > rep.worst_ratio) {
      rep.worst_ratio = ratio;
      rep.worst_set = chosen;
    }
  }
  if (remaining == 0 || idx == candidates.size()) {
    if (idx < candidates.size() && remaining == 0) rep.truncated = true;
    return;
  }
  for (size_t i = idx; i < candidates.size(); ++i) {
    int g = candidates[i];
    Event next = event_intersect(body, event_complement(sys.flaws[g].support, sys.space.n));
    chosen.push_back(g);
    lopsided_rec(sys, candidates, i + 1, remaining - 1, flaw_support, next, chosen, rep);
    chosen.pop_back();
  }
}

}  // namespace

LopsidedReport check_lopsided(const OracleSystem& sys, int f, int max_set_size) {
  LopsidedReport rep;
  rep.charge_bound = charge(sys, f);
  rep.worst_ratio = 0;

  std::vector<int> candidates;
  for (int g = 0; g < sys.flaw_count(); ++g)
    if (g == f || !sys.dep.related(f, g)) candidates.push_back(g);

  Event whole(sys.space.n);
  for (int s = 0; s < sys.space.n; ++s) whole[s] = s;

  int cap = max_set_size < 0 ? static_cast<int>(candidates.size()) : max_set_size;
  std::vector<int> chosen;
  lopsided_rec(sys, candidates, 0, cap, sys.flaws[f].support, whole, chosen, rep);
  rep.ok = rep.worst_ratio <= rep.charge_bound;
  return rep;
}

SystemReport check_system(const OracleSystem& sys, int jobs) {
  SystemReport rep;
  rep.matrices = check_flaw_matrices(sys);
  rep.soundness = check_dependency_sound(sys);
  rep.commutativity = check_t_commutative(sys, jobs);
  rep.regeneration = check_regenerating(sys);
  rep.injectivity = check_injective(sys);
  rep.charge_values = charges(sys);
  return rep;
}

}  // namespace resamp
