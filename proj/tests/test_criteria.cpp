#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <resamp/criteria.hpp>
#include <resamp/instances.hpp>

using namespace resamp;

namespace {

// Two states, one flaw on state 1 that resamples from the measure itself, so
// the system regenerates and the charge equals the flaw's mass.
OracleSystem lone_flaw(const Rat& mass) {
  OracleSystem sys;
  sys.space.n = 2;
  sys.mu.p = {1 - mass, mass};
  Flaw f;
  f.name = "f";
  f.support = {1};
  f.matrix = SparseMatrix::zero(2);
  f.matrix.set(1, 0, 1 - mass);
  f.matrix.set(1, 1, mass);
  sys.flaws.push_back(std::move(f));
  sys.dep = DependencyRelation(1);
  sys.validate();
  return sys;
}

Cnf path_cnf() {
  Cnf f;
  f.var_count = 3;
  f.clauses = {{1, 2}, {2, 3}};
  return f;
}

Cnf triangle_cnf() {
  Cnf f;
  f.var_count = 3;
  f.clauses = {{1, 2}, {-1, 3}, {2, 3}};
  return f;
}

}  // namespace

TEST_CASE("single-sink weight sums match the generic routine") {
  OracleSystem sys = noncommuting_fixture();
  std::vector<Rat> gamma = charges(sys);
  for (int f = 0; f < sys.flaw_count(); ++f) {
    WeightSum a = psi(sys, gamma, f, 6);
    WeightSum b = weight_sum(sys.dep, gamma, {f}, 6);
    CHECK(a.level_sums == b.level_sums);
    CHECK(a.truncated == b.truncated);
  }
  CHECK(psi_set(sys, gamma, {}, 6).truncated == 1);
  CHECK(psi_set(sys, gamma, {0, 2}, 6).truncated == 0);
}

TEST_CASE("subset-summed weights add up over stable subsets") {
  OracleSystem sys = noncommuting_fixture();
  std::vector<Rat> gamma = charges(sys);
  WeightSum bar = psi_bar(sys, gamma, {0, 1}, 6);
  Rat expect = Rat(1) + psi(sys, gamma, 0, 6).truncated + psi(sys, gamma, 1, 6).truncated +
               psi_set(sys, gamma, {0, 1}, 6).truncated;
  CHECK(bar.truncated == expect);
  CHECK(bar.level_sums[0] == 1);

  OracleSystem geo = geometric_instance(Rat(1, 2));
  std::vector<Rat> g = charges(geo);
  WeightSum gb = psi_bar(geo, g, {0}, 10);
  CHECK(gb.truncated == 1 + psi(geo, g, 0, 10).truncated);
  CHECK(gb.converged);
}

TEST_CASE("bound values compare exactly, including euler multiples") {
  BoundValue half = BoundValue::exact(Rat(1, 2));
  CHECK(half.admits(Rat(1, 2)));
  CHECK(half.admits(Rat(1, 4)));
  CHECK(!half.admits(Rat(2, 3)));
  CHECK(half.str() == "1/2");

  BoundValue e4 = BoundValue::euler_times(Rat(1, 4));  // about 0.6796
  CHECK(e4.admits(Rat(1, 2)));
  CHECK(e4.admits(Rat(27, 40)));
  CHECK(!e4.admits(Rat(7, 10)));
  CHECK(e4.str() == "e*1/4");
  CHECK(e4.approx() > 0.6795);
  CHECK(e4.approx() < 0.6796);

  BoundValue zero = BoundValue::euler_times(Rat(0));
  CHECK(zero.admits(Rat(0)));
  CHECK(!zero.admits(Rat(1, 10)));
}

TEST_CASE("worst-case product rule accepts charges below 1/e") {
  OracleSystem ok = lone_flaw(Rat(9, 25));
  std::vector<Rat> g = charges(ok);
  REQUIRE(g[0] == Rat(9, 25));
  CriterionResult crit = symmetric_criterion(ok, g);
  CHECK(crit.premise_holds);
  CHECK(crit.note.empty());
  CHECK(crit.flaw_bounds[0].euler_multiple);
  CHECK(crit.flaw_bounds[0].q == Rat(9, 25));
  CHECK(crit.runtime_bound.q == Rat(9, 25));
  CriterionCheck chk = check_criterion(ok, g, crit, 30);
  CHECK(chk.premise_holds);
  CHECK(chk.bounds_hold);
  CHECK(chk.all_converged);

  OracleSystem bad = lone_flaw(Rat(2, 5));
  CriterionResult fail = symmetric_criterion(bad, charges(bad));
  CHECK(!fail.premise_holds);
  CHECK(!fail.note.empty());
}

TEST_CASE("worst-case product rule on the symmetric formula") {
  OracleSystem sys = builtin_instance("sat-symmetric");
  std::vector<Rat> g = charges(sys);
  for (const Rat& v : g) CHECK(v == Rat(1, 32));
  // Every clause pair shares a variable, so the degree is the flaw count.
  for (int f = 0; f < sys.flaw_count(); ++f)
    CHECK(sys.dep.closed_neighbors(f).size() == 8);
  CriterionResult crit = symmetric_criterion(sys, g);
  CHECK(crit.premise_holds);
  CHECK(crit.runtime_bound.q == Rat(1, 4));
  CriterionCheck chk = check_criterion(sys, g, crit, 30);
  CHECK(chk.bounds_hold);
  CHECK(chk.all_converged);
  // With a complete relation the per-flaw sum is a geometric series.
  CHECK(chk.sums[0].truncated < Rat(1, 24));
  CHECK(chk.sums[0].upper() >= Rat(1, 24));

  CriterionResult fix = symmetric_criterion(noncommuting_fixture(),
                                            charges(noncommuting_fixture()));
  CHECK(!fix.premise_holds);
}

TEST_CASE("quarter-sum rule sits exactly on its boundary for the symmetric formula") {
  OracleSystem sys = builtin_instance("sat-symmetric");
  std::vector<Rat> g = charges(sys);
  CriterionResult crit = neighborhood_criterion(sys, g);
  CHECK(crit.premise_holds);  // closed-neighborhood sums equal 1/4 exactly
  CHECK(crit.flaw_bounds[0].q == Rat(1, 8));
  CHECK(!crit.flaw_bounds[0].euler_multiple);
  CHECK(crit.runtime_bound.q == 1);
  CriterionCheck chk = check_criterion(sys, g, crit, 30);
  CHECK(chk.bounds_hold);

  OracleSystem fix = noncommuting_fixture();
  CriterionResult fail = neighborhood_criterion(fix, charges(fix));
  CHECK(!fail.premise_holds);
  CHECK(fail.note.find("flaw 0") != std::string::npos);
}

TEST_CASE("per-flaw allocation rule with a saturating allocation") {
  OracleSystem sys = lone_flaw(Rat(1, 2));
  std::vector<Rat> g = charges(sys);
  CriterionResult crit = asymmetric_criterion(sys, g, {Rat(1, 2)});
  CHECK(crit.premise_holds);
  CHECK(crit.flaw_bounds[0].q == 1);
  CriterionCheck chk = check_criterion(sys, g, crit, 20);
  CHECK(chk.bounds_hold);  // truncated strictly below the limit 1
  CHECK(chk.all_converged);
  CHECK(chk.sums[0].truncated == 1 - rat_pow(Rat(1, 2), 20));

  CHECK(!asymmetric_criterion(sys, g, {Rat(2, 5)}).premise_holds);
  CriterionResult range = asymmetric_criterion(sys, g, {Rat(1)});
  CHECK(!range.premise_holds);
  CHECK(range.note.find("outside") != std::string::npos);
  CHECK(range.flaw_bounds[0].q == 0);
}

TEST_CASE("per-flaw allocation across overlapping clauses") {
  OracleSystem sys = from_cnf(path_cnf());
  std::vector<Rat> g = charges(sys);
  REQUIRE(g == std::vector<Rat>{Rat(1, 4), Rat(1, 4)});
  // Each flaw has one neighbor; gamma <= x(1-x) needs x(1-x) >= 1/4, forcing 1/2.
  CriterionResult crit = asymmetric_criterion(sys, g, {Rat(1, 2), Rat(1, 2)});
  CHECK(crit.premise_holds);
  CHECK(crit.runtime_bound.q == 2);
  CHECK(!asymmetric_criterion(sys, g, {Rat(49, 100), Rat(49, 100)}).premise_holds);
}

TEST_CASE("fixpoint allocation rule at its stationary point") {
  OracleSystem sys = lone_flaw(Rat(1, 2));
  std::vector<Rat> g = charges(sys);
  CriterionResult crit = cluster_expansion_criterion(sys, g, {Rat(1)});
  CHECK(crit.premise_holds);  // 1 = (1/2) * (1 + 1) exactly
  CHECK(crit.flaw_bounds[0].q == 1);
  CHECK(!cluster_expansion_criterion(sys, g, {Rat(1, 2)}).premise_holds);

  OracleSystem sym = builtin_instance("sat-symmetric");
  std::vector<Rat> sg = charges(sym);
  std::vector<Rat> eta(8, Rat(1, 24));
  CriterionResult tight = cluster_expansion_criterion(sym, sg, eta);
  CHECK(tight.premise_holds);  // 1/24 = (1/32)(1 + 8/24) exactly
  CriterionCheck chk = check_criterion(sym, sg, tight, 30);
  CHECK(chk.bounds_hold);
  CHECK(chk.all_converged);
  std::vector<Rat> low(8, Rat(1, 25));
  CHECK(!cluster_expansion_criterion(sym, sg, low).premise_holds);
}

TEST_CASE("clique cover rule with exact fixpoints") {
  OracleSystem tri = from_cnf(triangle_cnf());
  std::vector<Rat> g = charges(tri);
  CriterionResult crit = clique_criterion(tri, g, {{0, 1, 2}}, {Rat(4)});
  CHECK(crit.premise_holds);  // 4 = 1 + 3 * (1/4) * 4 exactly
  CHECK(crit.flaw_bounds[0].q == 4);
  CHECK(crit.runtime_bound.q == 4);
  CHECK(check_criterion(tri, g, crit, 30).bounds_hold);
  CHECK(!clique_criterion(tri, g, {{0, 1, 2}}, {Rat(3)}).premise_holds);

  OracleSystem path = from_cnf(path_cnf());
  std::vector<Rat> pg = charges(path);
  CriterionResult pcrit = clique_criterion(path, pg, {{0, 1}}, {Rat(2)});
  CHECK(pcrit.premise_holds);  // 2 = 1 + 2 * (1/4) * 2 exactly
  CHECK(pcrit.flaw_bounds[1].q == 2);
  CHECK(check_criterion(path, pg, pcrit, 30).bounds_hold);

  // Leaving a related pair uncovered, or a flaw out entirely, breaks the cover.
  CriterionResult uncovered = clique_criterion(tri, g, {{0, 1}}, {Rat(4)});
  CHECK(!uncovered.premise_holds);
  CHECK(uncovered.note.find("cover") != std::string::npos);
  CriterionResult split = clique_criterion(path, pg, {{0}, {1}}, {Rat(2), Rat(2)});
  CHECK(!split.premise_holds);
}

TEST_CASE("weight sums that keep growing are flagged as unconverged") {
  OracleSystem sys = appendix_a_complete();
  std::vector<Rat> g = charges(sys);
  WeightSum s = psi(sys, g, 0, 10);
  CHECK(!s.converged);
  CHECK(s.truncated > 1);
}

TEST_CASE("round bounds for the parallel scheme") {
  OracleSystem sys = builtin_instance("sat-symmetric");
  std::vector<Rat> g = charges(sys);

  // No inflation: the threshold scales linearly, so the round count is exact.
  RoundBound flat = parallel_round_bound(sys, g, Rat(0), Rat(1, 100), 40);
  CHECK(flat.converged);
  CHECK(flat.w_eps_upper > Rat(1, 3));
  CHECK(flat.w_eps_upper < Rat(171, 512));
  CHECK(flat.rounds == 34);

  RoundBound rb = parallel_round_bound(sys, g, Rat(1), Rat(1, 100), 40);
  CHECK(rb.converged);
  REQUIRE(rb.rounds >= 1);
  Rat pow_t = rat_pow(Rat(2), static_cast<unsigned long>(rb.rounds));
  CHECK(rb.w_eps_upper <= Rat(1, 100) * static_cast<long>(rb.rounds) * pow_t);
  if (rb.rounds >= 2) {
    Rat prev = rat_pow(Rat(2), static_cast<unsigned long>(rb.rounds - 1));
    CHECK(rb.w_eps_upper > Rat(1, 100) * static_cast<long>(rb.rounds - 1) * prev);
  }
  RoundBound lax = parallel_round_bound(sys, g, Rat(1), Rat(1, 10), 40);
  CHECK(lax.rounds <= rb.rounds);

  // Stronger inflation raises the inflated weight sum.
  RoundBound more = parallel_round_bound(sys, g, Rat(2), Rat(1, 100), 40);
  CHECK(more.converged);
  CHECK(more.w_eps_upper > rb.w_eps_upper);

  // A denser instance fails to converge once charges are inflated.
  OracleSystem dense = builtin_instance("cnf-b");
  RoundBound div = parallel_round_bound(dense, charges(dense), Rat(1), Rat(1, 100), 12);
  CHECK(!div.converged);
}
