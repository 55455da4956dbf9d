#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <resamp/instances.hpp>
#include <resamp/search.hpp>
#include <resamp/wdag.hpp>
#include <set>
#include <vector>

using namespace resamp;

namespace {

// Independent enumeration oracle: every wdag is reconstructed by
// wdag_from_labels applied to any of its topological label orders, so walking
// all label sequences and deduplicating by canonical key covers every
// isomorphism class.  Returns canonical keys grouped by sink label set.
std::map<std::vector<int>, std::set<std::vector<int>>> brute_force_wdags(
    const DependencyRelation& dep, int max_nodes) {
  std::map<std::vector<int>, std::set<std::vector<int>>> out;
  const int m = dep.flaw_count();
  std::vector<int> seq;
  auto visit = [&](auto&& self) -> void {
    Wdag w = wdag_from_labels(seq, dep);
    out[sink_labels(w)].insert(canonical_key(w));
    if (static_cast<int>(seq.size()) == max_nodes) return;
    for (int f = 0; f < m; ++f) {
      seq.push_back(f);
      self(self);
      seq.pop_back();
    }
  };
  visit(visit);
  return out;
}

std::vector<int> random_trajectory(const OracleSystem& sys, uint64_t seed,
                                   long long max_steps) {
  SamplerTable table(sys);
  return run_sequential(sys, table, Strategy::random_choice(), seed, max_steps)
      .trajectory;
}

}  // namespace

TEST_CASE("label sequences rebuild well-formed dags") {
  OracleSystem sys = noncommuting_fixture();
  Wdag w = wdag_from_labels({0, 2, 1}, sys.dep);
  CHECK_NOTHROW(wdag_validate(w, sys.dep));
  CHECK(w.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
  CHECK(sink_labels(w) == std::vector<int>{1});
  CHECK(source_nodes(w) == std::vector<int>{0});
  CHECK(wdag_depth(w) == 3);

  Wdag pair = wdag_from_labels({0, 1}, sys.dep);
  CHECK(pair.edges.empty());
  CHECK(sink_labels(pair) == std::vector<int>{0, 1});
  CHECK(wdag_depth(pair) == 1);
  CHECK(wdag_depth(Wdag{}) == 0);
}

TEST_CASE("validation rejects malformed dags") {
  OracleSystem sys = noncommuting_fixture();

  Wdag missing;  // related labels need an edge
  missing.labels = {0, 2};
  CHECK_THROWS(wdag_validate(missing, sys.dep));

  Wdag extra;  // unrelated labels must not have one
  extra.labels = {0, 1};
  extra.edges = {{0, 1}};
  CHECK_THROWS(wdag_validate(extra, sys.dep));

  Wdag both;
  both.labels = {0, 2};
  both.edges = {{0, 1}, {1, 0}};
  CHECK_THROWS(wdag_validate(both, sys.dep));

  Wdag bad_label;
  bad_label.labels = {7};
  CHECK_THROWS(wdag_validate(bad_label, sys.dep));

  Wdag selfloop;
  selfloop.labels = {0};
  selfloop.edges = {{0, 0}};
  CHECK_THROWS(wdag_validate(selfloop, sys.dep));
}

TEST_CASE("matrix of the empty dag is the identity") {
  OracleSystem sys = noncommuting_fixture();
  CHECK(wdag_matrix(Wdag{}, sys) == SparseMatrix::identity(4));
  CHECK(appearance_bound(Wdag{}, sys) == 1);
  CHECK(event_bound(Wdag{}, sys, Event{1, 2}) == Rat(1, 2));
}

TEST_CASE("singleton dag carries the label's matrix") {
  OracleSystem sys = noncommuting_fixture();
  Wdag w = wdag_from_labels({1}, sys.dep);
  CHECK(wdag_matrix(w, sys) == sys.matrix(1));
  CHECK(appearance_bound(w, sys) == sys.mu_of(1));
}

TEST_CASE("unrelated labels commute so the product order is immaterial") {
  OracleSystem sys = builtin_instance("cnf-b");
  int f = -1, g = -1;
  for (int i = 0; i < sys.flaw_count() && f < 0; ++i)
    for (int j = i + 1; j < sys.flaw_count(); ++j)
      if (!sys.dep.related(i, j)) {
        f = i;
        g = j;
        break;
      }
  REQUIRE(f >= 0);
  Wdag w = wdag_from_labels({f, g}, sys.dep);
  SparseMatrix fg = mat_mul(sys.matrix(f), sys.matrix(g));
  CHECK(fg == mat_mul(sys.matrix(g), sys.matrix(f)));
  CHECK(wdag_matrix(w, sys) == fg);
  // A third node related to both still leaves two elimination orders.
  for (int h = 0; h < sys.flaw_count(); ++h) {
    if (!sys.dep.related(h, f) || !sys.dep.related(h, g) || h == f || h == g) continue;
    Wdag three = wdag_from_labels({f, g, h}, sys.dep);
    SparseMatrix expect = mat_mul(mat_mul(sys.matrix(f), sys.matrix(g)), sys.matrix(h));
    SparseMatrix swapped = mat_mul(mat_mul(sys.matrix(g), sys.matrix(f)), sys.matrix(h));
    CHECK(wdag_matrix(three, sys) == expect);
    CHECK(wdag_matrix(three, sys) == swapped);
    break;
  }
}

TEST_CASE("matrix and matrix-free application agree") {
  OracleSystem sys = noncommuting_fixture();
  for (const auto& labels :
       std::vector<std::vector<int>>{{0}, {2, 0}, {0, 1, 2}, {2, 2, 0, 1}}) {
    Wdag w = wdag_from_labels(labels, sys.dep);
    ExactVec v = {Rat(1), Rat(0), Rat(1, 2), Rat(1, 3)};
    CHECK(mat_apply(wdag_matrix(w, sys), v) == wdag_apply(w, sys, v));
  }
}

TEST_CASE("projected mass is bounded by weight times target measure") {
  std::vector<Rat> gamma;
  OracleSystem sys = noncommuting_fixture();
  gamma = charges(sys);
  auto families = brute_force_wdags(sys.dep, 4);
  std::vector<Event> events = {Event{0}, Event{1, 2}, Event{0, 1, 2, 3}, Event{3}};
  int checked = 0;
  for (const auto& [sinks, keys] : families) {
    for (const auto& key : keys) {
      Wdag w = wdag_from_labels(key, sys.dep);
      Rat weight = wdag_weight(w, gamma);
      for (const Event& e : events) {
        CHECK(event_bound(w, sys, e) <= measure(sys.mu, e) * weight);
        ++checked;
      }
      // Measure-resampling flaws attain the bound with the whole space.
      CHECK(appearance_bound(w, sys) == weight);
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("prepending a resampling cannot raise dag mass once saturated") {
  OracleSystem sys = noncommuting_fixture();
  for (int f = 0; f < sys.flaw_count(); ++f) {
    CHECK(flaw_dominated(sys, f, Wdag{}));
  }
  Wdag just_h = wdag_from_labels({2}, sys.dep);
  CHECK(!flaw_dominated(sys, 0, just_h));
  Wdag just_f = wdag_from_labels({0}, sys.dep);
  CHECK(flaw_dominated(sys, 1, just_f));
}

TEST_CASE("canonical keys identify isomorphism classes") {
  OracleSystem sys = noncommuting_fixture();
  // Unrelated nodes in either insertion order give the same class.
  Wdag ab = wdag_from_labels({0, 1}, sys.dep);
  Wdag ba = wdag_from_labels({1, 0}, sys.dep);
  CHECK(canonical_key(ab) == canonical_key(ba));
  CHECK(wdag_isomorphic(ab, ba));

  // Related nodes in either order do not.
  Wdag fh = wdag_from_labels({0, 2}, sys.dep);
  Wdag hf = wdag_from_labels({2, 0}, sys.dep);
  CHECK(canonical_key(fh) != canonical_key(hf));
  CHECK(!wdag_isomorphic(fh, hf));

  // The key itself rebuilds the dag.
  for (const auto& labels :
       std::vector<std::vector<int>>{{1, 0, 2, 1}, {2, 1, 0}, {0, 0, 1}}) {
    Wdag w = wdag_from_labels(labels, sys.dep);
    Wdag rebuilt = wdag_from_labels(canonical_key(w), sys.dep);
    CHECK(wdag_isomorphic(w, rebuilt));
  }
}

TEST_CASE("witness of the first step is a single node") {
  OracleSystem sys = noncommuting_fixture();
  std::vector<int> traj = {1, 2, 0};
  for (WitnessRule rule :
       {WitnessRule::kSourceLabel, WitnessRule::kSourceNeighbor, WitnessRule::kAlways}) {
    Wdag w = gen_witness(sys, traj, 1, rule);
    REQUIRE(w.size() == 1);
    CHECK(w.labels[0] == 1);
  }
  CHECK_THROWS(gen_witness(sys, traj, 0, WitnessRule::kAlways));
  CHECK_THROWS(gen_witness(sys, traj, 4, WitnessRule::kAlways));
}

TEST_CASE("the unconditional rule keeps every step") {
  OracleSystem sys = builtin_instance("cnf-a");
  std::vector<int> traj = random_trajectory(sys, 7, 50);
  for (int t = 1; t <= static_cast<int>(traj.size()); ++t) {
    Wdag w = gen_witness(sys, traj, t, WitnessRule::kAlways);
    CHECK(w.size() == t);
    std::vector<int> prefix(traj.begin(), traj.begin() + t);
    CHECK(wdag_isomorphic(w, wdag_from_labels(prefix, sys.dep)));
  }
}

TEST_CASE("source-based rules always produce a single sink") {
  for (const char* name : {"cnf-a", "cnf-b", "noncommuting"}) {
    OracleSystem sys = builtin_instance(name);
    for (uint64_t seed : {1u, 2u, 3u}) {
      std::vector<int> traj = random_trajectory(sys, seed, 60);
      for (int t = 1; t <= static_cast<int>(traj.size()); ++t) {
        for (WitnessRule rule : {WitnessRule::kSourceLabel, WitnessRule::kSourceNeighbor}) {
          Wdag w = gen_witness(sys, traj, t, rule);
          CHECK_NOTHROW(wdag_validate(w, sys.dep));
          CHECK(sink_nodes(w).size() == 1);
          CHECK(w.labels[0] == traj[t - 1]);
        }
      }
    }
  }
}

TEST_CASE("witnesses of distinct steps are non-isomorphic") {
  OracleSystem sys = builtin_instance("cnf-b");
  for (uint64_t seed : {11u, 12u, 13u}) {
    std::vector<int> traj = random_trajectory(sys, seed, 40);
    for (WitnessRule rule : {WitnessRule::kSourceLabel, WitnessRule::kSourceNeighbor}) {
      std::set<std::vector<int>> keys;
      for (int t = 1; t <= static_cast<int>(traj.size()); ++t)
        keys.insert(canonical_key(gen_witness(sys, traj, t, rule)));
      CHECK(keys.size() == traj.size());
    }
  }
}

TEST_CASE("dropping the oldest resampling shifts the witness by its source") {
  OracleSystem sys = builtin_instance("cnf-b");
  for (uint64_t seed : {21u, 22u}) {
    std::vector<int> traj = random_trajectory(sys, seed, 40);
    if (traj.size() < 2) continue;
    std::vector<int> tail(traj.begin() + 1, traj.end());
    for (int t = 2; t <= static_cast<int>(traj.size()); ++t) {
      for (WitnessRule rule : {WitnessRule::kSourceLabel, WitnessRule::kSourceNeighbor}) {
        Wdag whole = gen_witness(sys, traj, t, rule);
        Wdag shifted = gen_witness(sys, tail, t - 1, rule);
        if (whole.size() == shifted.size()) {
          CHECK(wdag_isomorphic(whole, shifted));
          continue;
        }
        REQUIRE(whole.size() == shifted.size() + 1);
        // The extra node is a source labeled by the dropped resampling.
        bool matched = false;
        for (int v : source_nodes(whole)) {
          if (whole.labels[v] != traj[0]) continue;
          std::vector<int> rest;
          for (int u = 0; u < whole.size(); ++u)
            if (u != v) rest.push_back(u);
          matched = matched ||
                    wdag_isomorphic(induced_subgraph(whole, rest), shifted);
        }
        CHECK(matched);
      }
    }
  }
}

TEST_CASE("capped witness generation gives up early") {
  OracleSystem sys = builtin_instance("cnf-a");
  std::vector<int> traj = random_trajectory(sys, 5, 60);
  if (traj.size() >= 3) {
    int t = static_cast<int>(traj.size());
    auto capped = gen_witness_capped(sys, traj, t, WitnessRule::kAlways, 2);
    CHECK(!capped.has_value());
    auto fits = gen_witness_capped(sys, traj, t, WitnessRule::kAlways, t);
    REQUIRE(fits.has_value());
    CHECK(fits->size() == t);
  }
}

TEST_CASE("related-label witness on a chain of related flaws") {
  OracleSystem sys = noncommuting_fixture();
  // 0 ~ 2 and 1 ~ 2, so everything sticks through the middle label.
  Wdag w = simple_witness(sys.dep, {0, 2, 1}, 3);
  CHECK(w.size() == 3);
  // An unrelated earlier resampling is dropped; a repeat of the same label
  // sticks because the relation is reflexive.
  Wdag lone = simple_witness(sys.dep, {0, 1}, 2);
  CHECK(lone.size() == 1);
  CHECK(lone.labels[0] == 1);
  Wdag repeat = simple_witness(sys.dep, {0, 1, 0, 1}, 4);
  CHECK(repeat.size() == 2);
  CHECK(repeat.labels == std::vector<int>{1, 1});
}

TEST_CASE("sink-set enumeration base cases") {
  OracleSystem sys = noncommuting_fixture();
  auto empty = enumerate_sink_wdags(sys.dep, {}, 5);
  REQUIRE(empty.size() == 1);
  CHECK(empty[0].empty());
  CHECK(enumerate_sink_wdags(sys.dep, {0, 2}, 5).empty());  // unstable sinks
  CHECK(enumerate_sink_wdags(sys.dep, {0}, 0).empty());     // no node budget
}

TEST_CASE("a lone self-related flaw yields one chain per length") {
  OracleSystem sys = geometric_instance(Rat(1, 2));
  for (int cap = 1; cap <= 6; ++cap) {
    auto all = enumerate_sink_wdags(sys.dep, {0}, cap);
    CHECK(static_cast<int>(all.size()) == cap);
    for (const Wdag& w : all) CHECK(wdag_depth(w) == w.size());
  }
}

TEST_CASE("sink-set enumeration matches the brute-force oracle") {
  for (const char* name : {"noncommuting", "geometric", "cnf-a"}) {
    OracleSystem sys = builtin_instance(name);
    auto expected = brute_force_wdags(sys.dep, 4);
    long long classes = 0;
    // Compare family by family over every stable sink set.
    std::vector<int> all;
    for (int f = 0; f < sys.flaw_count(); ++f) all.push_back(f);
    for (const auto& sinks : sys.dep.stable_subsets(all)) {
      std::set<std::vector<int>> got;
      for (const Wdag& w : enumerate_sink_wdags(sys.dep, sinks, 4)) {
        CHECK_NOTHROW(wdag_validate(w, sys.dep));
        CHECK(sink_labels(w) == sinks);
        got.insert(canonical_key(w));
      }
      auto it = expected.find(sinks);
      std::set<std::vector<int>> want =
          it == expected.end() ? std::set<std::vector<int>>{} : it->second;
      CHECK(got == want);
      classes += static_cast<long long>(got.size());
    }
    CHECK(classes > 0);
  }
}

TEST_CASE("weight sums over chains form a geometric series") {
  OracleSystem sys = geometric_instance(Rat(1, 2));
  std::vector<Rat> gamma = charges(sys);
  REQUIRE(gamma[0] == Rat(1, 2));
  WeightSum ws = weight_sum(sys.dep, gamma, {0}, 12);
  for (int k = 1; k <= 12; ++k) CHECK(ws.level_sums[k] == rat_pow(Rat(1, 2), k));
  CHECK(ws.truncated == 1 - rat_pow(Rat(1, 2), 12));
  CHECK(ws.converged);
  // The exact series sums to 1; the padded tail must cover the remainder.
  CHECK(ws.upper() >= 1);
  CHECK(ws.tail_bound == 2 * rat_pow(Rat(1, 2), 12));
}

TEST_CASE("weight sum levels match the enumerated families") {
  OracleSystem sys = noncommuting_fixture();
  std::vector<Rat> gamma = charges(sys);
  for (const auto& sinks : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 1}}) {
    WeightSum ws = weight_sum(sys.dep, gamma, sinks, 5);
    std::vector<Rat> by_level(6, Rat(0));
    for (const Wdag& w : enumerate_sink_wdags(sys.dep, sinks, 5))
      by_level[w.size()] += wdag_weight(w, gamma);
    CHECK(ws.level_sums == by_level);
  }
  WeightSum empty = weight_sum(sys.dep, gamma, {}, 5);
  CHECK(empty.truncated == 1);
  CHECK(empty.converged);
  WeightSum unstable = weight_sum(sys.dep, gamma, {0, 2}, 5);
  CHECK(unstable.truncated == 0);
  CHECK(unstable.converged);
}

TEST_CASE("prefixes are the downward-closed node sets") {
  OracleSystem sys = noncommuting_fixture();
  Wdag chain = wdag_from_labels({0, 2, 1}, sys.dep);
  CHECK(prefix_node_sets(chain).size() == 4);
  Wdag anti = wdag_from_labels({0, 1}, sys.dep);
  CHECK(prefix_node_sets(anti).size() == 4);
  for (const auto& nodes : prefix_node_sets(chain)) {
    Wdag sub = induced_subgraph(chain, nodes);
    CHECK(sub.size() == static_cast<int>(nodes.size()));
    CHECK_NOTHROW(wdag_validate(sub, sys.dep));
  }
}
