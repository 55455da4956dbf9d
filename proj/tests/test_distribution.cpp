#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <resamp/criteria.hpp>
#include <resamp/distribution.hpp>
#include <resamp/instances.hpp>

using namespace resamp;

namespace {

bool contains(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

TEST_CASE("causing flaws are those that can enter the event from outside") {
  OracleSystem sys = geometric_instance(Rat(1, 2));
  CHECK(cause_flaws(sys, Event{0}) == std::vector<int>{0});
  CHECK(cause_flaws(sys, Event{1}).empty());  // nothing moves into the flaw
  CHECK(cause_flaws(sys, Event{0, 1}).empty());
  CHECK(cause_flaws(sys, Event{}).empty());
  CHECK(cause_flaws_at(sys, Event{0}, 0) == std::vector<int>{0});
  CHECK_THROWS(cause_flaws_at(sys, Event{0}, 1));

  OracleSystem fix = noncommuting_fixture();
  // Flaw h acts at state 0 and resamples from the measure, so it can cause
  // every other state; it cannot cause {0} because it never acts outside it.
  for (int s = 1; s < 4; ++s) CHECK(contains(cause_flaws(fix, Event{s}), 2));
  CHECK(!contains(cause_flaws(fix, Event{0}), 2));
}

TEST_CASE("orderable sets on the escape system") {
  OracleSystem sys = geometric_instance(Rat(1, 2));
  auto sets = orderable_sets(sys, Event{0});
  REQUIRE(sets.size() == 2);
  CHECK(sets[0].empty());
  CHECK(sets[1] == std::vector<int>{0});
  auto none = orderable_sets(sys, Event{1});
  REQUIRE(none.size() == 1);
  CHECK(none[0].empty());
}

TEST_CASE("event bounds are exact on the escape system") {
  OracleSystem sys = geometric_instance(Rat(1, 2));
  std::vector<Rat> gamma = charges(sys);

  // The event nothing ever enters: every bound collapses to its measure.
  EventBounds never = event_bounds(sys, gamma, Event{1}, 10);
  CHECK(never.mu_e == Rat(1, 2));
  CHECK(never.cause_set.empty());
  CHECK(never.matrix_sum == Rat(1, 2));
  CHECK(never.psi_sum == Rat(1, 2));
  CHECK(never.psi_bar_sum == Rat(1, 2));
  CHECK(never.psi_bar_tail == 0);
  CHECK(never.converged);

  // The sink state: all three bounds agree level by level and approach 1.
  const int cap = 10;
  Rat expect = 1 - rat_pow(Rat(1, 2), cap + 1);
  EventBounds sink = event_bounds(sys, gamma, Event{0}, cap);
  CHECK(sink.cause_set == std::vector<int>{0});
  CHECK(sink.orderable.size() == 2);
  CHECK(sink.matrix_sum == expect);
  CHECK(sink.psi_sum == expect);
  CHECK(sink.psi_bar_sum == expect);
  CHECK(sink.converged);
  CHECK(sink.psi_bar_sum + sink.psi_bar_tail >= 1);
}

TEST_CASE("the bound chain is ordered on formula events") {
  OracleSystem sys = builtin_instance("cnf-a");
  std::vector<Rat> gamma = charges(sys);
  std::vector<Event> events;
  for (int f = 0; f < sys.flaw_count(); ++f) events.push_back(sys.flaws[f].support);
  events.push_back(event_intersect(events[0], events[1]));
  events.push_back(Event{0});
  for (const Event& e : events) {
    if (e.empty()) continue;
    EventBounds b = event_bounds(sys, gamma, e, 4);
    CHECK(b.converged);
    CHECK(b.mu_e <= b.matrix_sum);
    CHECK(b.matrix_sum <= b.psi_sum);
    CHECK(b.psi_sum <= b.psi_bar_sum);
  }
}

TEST_CASE("closed-form distribution bounds dominate the truncated sums") {
  OracleSystem sys = builtin_instance("sat-symmetric");
  std::vector<Rat> gamma = charges(sys);
  Event e = sys.flaws[2].support;
  EventBounds b = event_bounds(sys, gamma, e, 3);
  Rat p = 0;
  for (int g : b.cause_set) p = std::max(p, gamma[g]);
  CHECK(dist_bound_symmetric(b.mu_e, p, static_cast<int>(b.cause_set.size())) >=
        b.psi_bar_sum);
  Rat sum = 0;
  for (int g : b.cause_set) sum += gamma[g];
  CHECK(dist_bound_neighborhood(b.mu_e, sum) >= b.psi_bar_sum);
  std::vector<Rat> x(b.cause_set.size(), Rat(1, 16));
  CHECK(dist_bound_asymmetric(b.mu_e, x) >= b.mu_e);
  std::vector<Rat> eta(sys.flaw_count(), Rat(1, 24));
  CHECK(dist_bound_cluster(b.mu_e, b.orderable, eta) >= b.psi_sum);
  CHECK_THROWS(dist_bound_asymmetric(Rat(1, 2), {Rat(1)}));
}

TEST_CASE("closed-form bounds are tight for the escape sink") {
  OracleSystem sys = geometric_instance(Rat(1, 2));
  std::vector<Rat> gamma = charges(sys);
  EventBounds b = event_bounds(sys, gamma, Event{0}, 20);
  // Saturating allocations reproduce the exact hitting probability 1.
  CHECK(dist_bound_asymmetric(b.mu_e, {Rat(1, 2)}) == 1);
  CHECK(dist_bound_cluster(b.mu_e, b.orderable, {Rat(1)}) == 1);
}

TEST_CASE("minimal pairs on the escape system") {
  OracleSystem sys = geometric_instance(Rat(1, 2));

  // Nothing re-enters the flaw state, so only the empty pair survives.
  auto only = minimal_pairs(sys, Event{1}, 8);
  REQUIRE(only.size() == 1);
  CHECK(only[0].h.empty());
  CHECK(only[0].sigma == 1);

  // Every chain into the sink is minimal: once out, the walk cannot return.
  auto chains = minimal_pairs(sys, Event{0}, 8);
  CHECK(chains.size() == 9);
  for (const auto& p : chains) {
    CHECK(p.sigma == 0);
    CHECK(p.h.size() <= 8);
    for (int v = 0; v < p.h.size(); ++v) CHECK(p.h.labels[v] == 0);
  }
}

TEST_CASE("minimal pairs pair the empty dag with every event state") {
  OracleSystem sys = builtin_instance("cnf-a");
  Event e = sys.flaws[0].support;
  auto pairs = minimal_pairs(sys, e, 2);
  int empties = 0;
  for (const auto& p : pairs) {
    CHECK(event_contains(e, p.sigma));
    if (p.h.empty()) {
      ++empties;
      continue;
    }
    // Non-empty witnesses end at flaws able to cause sigma.
    auto causes = cause_flaws_at(sys, e, p.sigma);
    for (int s : sink_labels(p.h)) CHECK(contains(causes, s));
  }
  CHECK(empties == static_cast<int>(e.size()));
}

TEST_CASE("injective bounds are exact on the escape system") {
  OracleSystem sys = geometric_instance(Rat(1, 2));
  std::vector<Rat> gamma = charges(sys);

  InjectiveBounds never = injective_event_bounds(sys, gamma, Event{1}, 10);
  CHECK(never.pair_sum == Rat(1, 2));
  CHECK(never.pair_weight_sum == Rat(1, 2));
  CHECK(never.per_state_sum == Rat(1, 2));
  CHECK(never.uniform_bound == Rat(1, 2));
  CHECK(never.uniform_tail == 0);
  CHECK(never.converged);

  const int cap = 10;
  Rat expect = 1 - rat_pow(Rat(1, 2), cap + 1);
  InjectiveBounds sink = injective_event_bounds(sys, gamma, Event{0}, cap);
  CHECK(sink.pair_sum == expect);
  CHECK(sink.pair_weight_sum == expect);
  CHECK(sink.per_state_sum == expect);
  CHECK(sink.uniform_bound == expect);
  CHECK(sink.converged);
  CHECK(sink.uniform_bound + sink.uniform_tail >= 1);
}

TEST_CASE("the injective chain is ordered on formula events") {
  OracleSystem sys = builtin_instance("cnf-a");
  REQUIRE(check_injective(sys).ok);
  std::vector<Rat> gamma = charges(sys);
  std::vector<Event> events = {sys.flaws[0].support, sys.flaws[1].support, Event{3}};
  for (const Event& e : events) {
    InjectiveBounds b = injective_event_bounds(sys, gamma, e, 4);
    CHECK(b.converged);
    CHECK(b.pair_sum <= b.pair_weight_sum);
    CHECK(b.pair_weight_sum <= b.per_state_sum);
    CHECK(b.per_state_sum <= b.uniform_bound);
    EventBounds plain = event_bounds(sys, gamma, e, 4);
    CHECK(b.uniform_bound <= plain.psi_bar_sum);
  }
}

TEST_CASE("disjunction bound takes the worst component") {
  OracleSystem sys = builtin_instance("cnf-a");
  std::vector<Rat> gamma = charges(sys);
  Event a = sys.flaws[0].support;
  Event b = sys.flaws[1].support;

  DisjunctionBound single = disjunction_bound(sys, gamma, {a}, 6);
  EventBounds direct = event_bounds(sys, gamma, a, 6);
  CHECK(single.value == direct.psi_bar_sum);
  CHECK(single.converged);

  DisjunctionBound pair = disjunction_bound(sys, gamma, {a, b}, 6);
  Rat mu_union = measure(sys.mu, event_union(a, b));
  CHECK(pair.value >= mu_union);
  // The union inflates only the measure factor, never the weight factor.
  EventBounds db = event_bounds(sys, gamma, b, 6);
  Rat worst = std::max(direct.psi_bar_sum / direct.mu_e, db.psi_bar_sum / db.mu_e);
  CHECK(pair.value == mu_union * worst);
}
