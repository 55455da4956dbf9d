#include "resamp/instances.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "resamp/compose.hpp"
#include "resamp/perm_lll.hpp"
#include "resamp/rng.hpp"
#include "resamp/search.hpp"

namespace resamp {

Cnf parse_dimacs(std::istream& in) {
  Cnf out;
  int clause_count = -1;
  bool header = false;
  std::string line;
  std::vector<int> cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c') continue;
    std::istringstream ls(line);
    if (line[0] == 'p') {
      std::string p, fmt;
      if (!(ls >> p >> fmt >> out.var_count >> clause_count) || fmt != "cnf")
        throw std::runtime_error("dimacs: malformed problem line");
      header = true;
      continue;
    }
    if (!header) throw std::runtime_error("dimacs: clause before problem line");
    int lit;
    while (ls >> lit) {
      if (lit == 0) {
        if (cur.empty()) throw std::runtime_error("dimacs: empty clause");
        out.clauses.push_back(cur);
        cur.clear();
      } else {
        if (std::abs(lit) > out.var_count)
          throw std::runtime_error("dimacs: literal out of range");
        cur.push_back(lit);
      }
    }
  }
  if (!header) throw std::runtime_error("dimacs: missing problem line");
  if (!cur.empty()) throw std::runtime_error("dimacs: unterminated clause");
  if (clause_count >= 0 && static_cast<int>(out.clauses.size()) != clause_count)
    throw std::runtime_error("dimacs: clause count mismatch");
  return out;
}

Cnf random_cnf(int vars, int clauses, int width, std::uint64_t seed) {
  if (width > vars) throw std::invalid_argument("random_cnf: width exceeds variable count");
  Cnf out;
  out.var_count = vars;
  SplitMix64 gen(seed);
  for (int c = 0; c < clauses; ++c) {
    std::vector<int> clause;
    while (static_cast<int>(clause.size()) < width) {
      int v = static_cast<int>(gen.below(static_cast<std::uint64_t>(vars))) + 1;
      bool fresh = true;
      for (int l : clause)
        if (std::abs(l) == v) fresh = false;
      if (!fresh) continue;
      clause.push_back(gen.below(2) == 0 ? v : -v);
    }
    std::sort(clause.begin(), clause.end(),
              [](int a, int b) { return std::abs(a) < std::abs(b); });
    out.clauses.push_back(clause);
  }
  return out;
}

OracleSystem from_cnf(const Cnf& f) {
  if (f.var_count < 1 || f.var_count > 20)
    throw std::invalid_argument("from_cnf: variable count out of range");
  const int n = 1 << f.var_count;

  OracleSystem sys;
  sys.space.n = n;
  sys.space.names.reserve(n);
  for (int s = 0; s < n; ++s) {
    std::string name(static_cast<size_t>(f.var_count), '0');
    for (int v = 0; v < f.var_count; ++v)
      if (s & (1 << v)) name[static_cast<size_t>(v)] = '1';
    sys.space.names.push_back(std::move(name));
  }
  sys.mu.p.assign(n, Rat(1, static_cast<unsigned long>(n)));

  const int m = static_cast<int>(f.clauses.size());
  sys.dep = DependencyRelation(m);
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      bool share = false;
      for (int a : f.clauses[i]) {
        for (int b : f.clauses[j])
          if (std::abs(a) == std::abs(b)) {
            share = true;
            break;
          }
        if (share) break;
      }
      if (share) sys.dep.set_related(i, j);
    }
  }

  for (int c = 0; c < m; ++c) {
    const auto& clause = f.clauses[c];
    const int k = static_cast<int>(clause.size());
    Flaw fl;
    fl.name = "c" + std::to_string(c + 1);
    fl.matrix = SparseMatrix::zero(n);
    int mask = 0;
    for (int lit : clause) mask |= 1 << (std::abs(lit) - 1);
    const Rat step(1, 1ul << k);
    for (int s = 0; s < n; ++s) {
      bool violated = true;
      for (int lit : clause) {
        bool bit = (s >> (std::abs(lit) - 1)) & 1;
        if (bit == (lit > 0)) {
          violated = false;
          break;
        }
      }
      if (!violated) continue;
      fl.support.push_back(s);
      int base = s & ~mask;
      // Every assignment of the clause's variables, spread over the mask bits.
      for (int pat = 0; pat < (1 << k); ++pat) {
        int t = base;
        int bit = 0;
        for (int v = 0; v < f.var_count; ++v) {
          if (!(mask & (1 << v))) continue;
          if (pat & (1 << bit)) t |= 1 << v;
          ++bit;
        }
        fl.matrix.set(s, t, fl.matrix.at(s, t) + step);
      }
    }
    sys.flaws.push_back(std::move(fl));
  }
  return sys;
}

OracleSystem geometric_instance(const Rat& q) {
  if (q <= 0 || q > 1) throw std::invalid_argument("geometric_instance: q must be in (0,1]");
  OracleSystem sys;
  sys.space.n = 2;
  sys.space.names = {"0", "1"};
  sys.mu.p = {Rat(1, 2), Rat(1, 2)};
  Flaw fl;
  fl.name = "loop";
  fl.support = {1};
  fl.matrix = SparseMatrix::zero(2);
  fl.matrix.set(1, 0, q);
  fl.matrix.set(1, 1, 1 - q);
  sys.flaws.push_back(std::move(fl));
  sys.dep = DependencyRelation(1);
  return sys;
}

OracleSystem noncommuting_fixture() {
  OracleSystem sys;
  sys.space.n = 4;
  sys.space.names = {"0", "1", "2", "3"};
  sys.mu.p.assign(4, Rat(1, 4));

  Flaw f;
  f.name = "f";
  f.support = {0, 1, 2};
  f.matrix = SparseMatrix::zero(4);
  f.matrix.set(0, 0, Rat(1, 2));
  f.matrix.set(0, 3, Rat(1, 2));
  f.matrix.set(1, 0, Rat(1, 4));
  f.matrix.set(1, 1, Rat(1, 2));
  f.matrix.set(1, 2, Rat(1, 4));
  f.matrix.set(2, 1, Rat(1, 4));
  f.matrix.set(2, 2, Rat(1, 2));
  f.matrix.set(2, 3, Rat(1, 4));

  Flaw g;
  g.name = "g";
  g.support = {1, 2};
  g.matrix = SparseMatrix::zero(4);
  g.matrix.set(1, 0, Rat(1, 2));
  g.matrix.set(1, 1, Rat(1, 2));
  g.matrix.set(2, 2, Rat(1, 2));
  g.matrix.set(2, 3, Rat(1, 2));

  Flaw h;
  h.name = "h";
  h.support = {0};
  h.matrix = SparseMatrix::zero(4);
  for (int t = 0; t < 4; ++t) h.matrix.set(0, t, Rat(1, 4));

  sys.flaws = {std::move(f), std::move(g), std::move(h)};
  sys.dep = DependencyRelation(3);
  sys.dep.set_related(0, 2);
  sys.dep.set_related(1, 2);
  return sys;
}

OracleSystem appendix_a_complete() {
  OracleSystem base = noncommuting_fixture();
  OracleSystem sys;
  sys.space = base.space;
  sys.mu = base.mu;
  sys.flaws = {base.flaws[0], base.flaws[1]};
  for (int s = 0; s < 4; ++s) {
    Flaw h;
    h.name = "h" + std::to_string(s);
    h.support = {s};
    h.matrix = SparseMatrix::zero(4);
    for (int t = 0; t < 4; ++t) h.matrix.set(s, t, Rat(1, 4));
    sys.flaws.push_back(std::move(h));
  }
  sys.dep = DependencyRelation(6);
  for (int i = 2; i < 6; ++i)
    for (int j = 0; j < 6; ++j)
      if (i != j) sys.dep.set_related(i, j);
  return sys;
}

Rat fixture_cycle_probability() {
  OracleSystem sys = noncommuting_fixture();
  ExactVec e0 = unit_vec(4, 0);
  ExactVec x = mat_apply(sys.matrix(0), mat_apply(sys.matrix(1), e0));
  ExactVec y = mat_apply(sys.matrix(1), mat_apply(sys.matrix(0), e0));
  return dot(sys.mu.p, x) + sys.mu.p[1] * (y[1] - x[1]);
}

Rat fixture_cycle_weight() {
  OracleSystem sys = noncommuting_fixture();
  return charge(sys, 0) * charge(sys, 1) * charge(sys, 2);
}

AdversarialRun run_adversarial(const OracleSystem& sys, std::uint64_t seed, int cycles) {
  static const int kPlain[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  static const int kSwapped[3][3] = {{1, 0, 2}, {0, 2, 1}, {2, 1, 0}};

  SamplerTable table(sys);
  SplitMix64 gen(seed);
  AdversarialRun out;
  out.completed = true;
  int state = table.initial(gen);
  for (int cyc = 0; cyc < cycles; ++cyc) {
    const auto& prio = (state == 1) ? kSwapped : kPlain;
    for (int k = 0; k < 3; ++k) {
      int pick = -1;
      for (int cand : prio[k])
        if (sys.flaws[cand].holds(state)) {
          pick = cand;
          break;
        }
      if (pick < 0) {
        out.completed = false;
        return out;
      }
      if (pick != prio[k][0]) out.completed = false;
      state = table.resample(pick, state, gen);
      out.trajectory.push_back(pick);
    }
  }
  return out;
}

Wdag fixture_pattern_wdag(const OracleSystem& sys, int cycles) {
  std::vector<int> labels;
  for (int c = 0; c < cycles; ++c) {
    labels.push_back(0);
    labels.push_back(1);
    labels.push_back(2);
  }
  return wdag_from_labels(labels, sys.dep);
}

namespace {

OracleSystem perm4_pairs() {
  const std::vector<std::vector<Cell>> sets = {
      {{0, 0}},
      {{1, 1}, {2, 2}},
      {{0, 1}, {1, 0}},
      {{2, 3}, {3, 2}},
      {{0, 2}, {1, 3}, {2, 0}},
  };
  std::vector<Cell> cells;
  for (const auto& set : sets)
    for (Cell c : set)
      if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
  SeededSystem seeded = perm_seeded_system(4, cells);

  std::vector<std::vector<int>> member_sets;
  for (const auto& set : sets) {
    std::vector<int> ids;
    for (Cell c : set) {
      auto it = std::find(cells.begin(), cells.end(), c);
      ids.push_back(static_cast<int>(it - cells.begin()));
    }
    member_sets.push_back(ids);
  }
  return composed_system(seeded, member_sets);
}

}  // namespace

std::vector<std::string> builtin_names() {
  return {"cnf-a",        "cnf-b", "sat-symmetric", "geometric",
          "noncommuting", "perm3", "perm4-pairs",   "appendix-a"};
}

OracleSystem builtin_instance(const std::string& name) {
  if (name == "cnf-a") return from_cnf(random_cnf(6, 5, 3, 101));
  if (name == "cnf-b") return from_cnf(random_cnf(8, 7, 3, 202));
  if (name == "sat-symmetric") return from_cnf(random_cnf(12, 8, 5, 303));
  if (name == "geometric") return geometric_instance(Rat(1, 2));
  if (name == "noncommuting") return noncommuting_fixture();
  if (name == "perm3") return perm_atomic_system(3);
  if (name == "perm4-pairs") return perm4_pairs();
  if (name == "appendix-a") return appendix_a_complete();
  throw std::invalid_argument("unknown instance: " + name);
}

}  // namespace resamp
