#include "resamp/search.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "resamp/parallel.hpp"

namespace resamp {

namespace {

std::vector<std::pair<int, Rat>> positive_entries(const std::vector<std::pair<int, Rat>>& row) {
  std::vector<std::pair<int, Rat>> out;
  for (const auto& e : row)
    if (e.second > 0) out.push_back(e);
  return out;
}

}  // namespace

SamplerTable::SamplerTable(const OracleSystem& sys) {
  std::vector<std::pair<int, Rat>> init_entries;
  for (int s = 0; s < sys.space.n; ++s) init_entries.push_back({s, sys.mu.p[s]});
  init_ = RowSampler(init_entries);
  rows_.resize(sys.flaw_count());
  for (int f = 0; f < sys.flaw_count(); ++f) {
    rows_[f].resize(sys.space.n);
    for (int s : sys.flaws[f].support)
      rows_[f][s] = RowSampler(positive_entries(sys.flaws[f].matrix.rows[s]));
  }
}

namespace {

int select_flaw(const OracleSystem& sys, const Strategy& strat, int state,
                long long step, SplitMix64& gen, bool& script_ok) {
  std::vector<int> holding = sys.flaws_holding(state);
  if (holding.empty()) return -1;
  switch (strat.kind) {
    case StrategyKind::kLeastId:
      return holding.front();
    case StrategyKind::kRandom:
      return holding[gen.below(holding.size())];
    case StrategyKind::kScripted: {
      if (step >= static_cast<long long>(strat.script.size())) {
        script_ok = false;
        return -1;
      }
      int f = strat.script[step];
      if (!sys.flaws[f].holds(state)) {
        script_ok = false;
        return -1;
      }
      return f;
    }
    case StrategyKind::kPriority:
      for (int f : strat.priority)
        if (sys.flaws[f].holds(state)) return f;
      return holding.front();
  }
  return -1;
}

}  // namespace

RunResult run_sequential(const OracleSystem& sys, const SamplerTable& table,
                         const Strategy& strat, uint64_t seed, long long max_steps,
                         bool keep_records) {
  SplitMix64 gen(seed);
  RunResult out;
  int state = table.initial(gen);
  out.initial_state = state;
  while (out.steps < max_steps) {
    int f = select_flaw(sys, strat, state, out.steps, gen, out.script_ok);
    if (f < 0) {
      out.terminated = out.script_ok && sys.flaws_holding(state).empty();
      break;
    }
    int next = table.resample(f, state, gen);
    ++out.steps;
    out.trajectory.push_back(f);
    if (keep_records)
      out.records.push_back({static_cast<int>(out.steps), f, state, next});
    state = next;
  }
  if (out.steps >= max_steps && sys.flaws_holding(state).empty()) out.terminated = true;
  out.final_state = state;
  return out;
}

ManyRunSummary run_many(const OracleSystem& sys, const Strategy& strat, uint64_t seed,
                        long long trials, long long max_steps, int jobs) {
  SamplerTable table(sys);
  std::vector<long long> steps(trials);
  std::vector<char> done(trials);
  std::vector<long long> counts(trials * sys.flaw_count(), 0);
  parallel_for(trials, jobs, [&](long long i) {
    RunResult r = run_sequential(sys, table, strat, mix_seed(seed, i), max_steps);
    steps[i] = r.steps;
    done[i] = r.terminated;
    for (int f : r.trajectory) ++counts[i * sys.flaw_count() + f];
  });
  ManyRunSummary out;
  out.trials = trials;
  out.flaw_resamples.assign(sys.flaw_count(), 0);
  for (long long i = 0; i < trials; ++i) {
    out.terminated += done[i] ? 1 : 0;
    out.steps.add(static_cast<double>(steps[i]));
    for (int f = 0; f < sys.flaw_count(); ++f)
      out.flaw_resamples[f] += counts[i * sys.flaw_count() + f];
  }
  return out;
}

Interval TerminalCounts::event_probability(const Event& e) const {
  long long hits = 0;
  for (int s : e) hits += state_counts[s];
  return wilson_interval(static_cast<uint64_t>(hits), static_cast<uint64_t>(trials));
}

TerminalCounts terminal_counts(const OracleSystem& sys, const Strategy& strat,
                               uint64_t seed, long long trials, long long max_steps,
                               int jobs) {
  SamplerTable table(sys);
  std::vector<int> finals(trials, -1);
  parallel_for(trials, jobs, [&](long long i) {
    RunResult r = run_sequential(sys, table, strat, mix_seed(seed, i), max_steps);
    if (r.terminated) finals[i] = r.final_state;
  });
  TerminalCounts out;
  out.trials = trials;
  out.state_counts.assign(sys.space.n, 0);
  for (long long i = 0; i < trials; ++i) {
    if (finals[i] >= 0) {
      ++out.terminated;
      ++out.state_counts[finals[i]];
    }
  }
  return out;
}

EventHitCounts event_hit_counts(const OracleSystem& sys, const Strategy& strat,
                                uint64_t seed, long long trials, long long max_steps,
                                const std::vector<Event>& events, int jobs) {
  SamplerTable table(sys);
  size_t m = events.size();
  std::vector<char> ever(trials * m, 0);
  std::vector<char> term(trials * m, 0);
  std::vector<char> done(trials, 0);
  parallel_for(trials, jobs, [&](long long i) {
    RunResult r = run_sequential(sys, table, strat, mix_seed(seed, i), max_steps, true);
    done[i] = r.terminated;
    for (size_t k = 0; k < m; ++k) {
      bool hit = event_contains(events[k], r.initial_state);
      for (const StepRecord& rec : r.records)
        hit = hit || event_contains(events[k], rec.post_state);
      ever[i * m + k] = hit;
      term[i * m + k] = r.terminated && event_contains(events[k], r.final_state);
    }
  });
  EventHitCounts out;
  out.trials = trials;
  out.ever.assign(m, 0);
  out.terminal.assign(m, 0);
  for (long long i = 0; i < trials; ++i) {
    out.terminated += done[i] ? 1 : 0;
    for (size_t k = 0; k < m; ++k) {
      out.ever[k] += ever[i * m + k] ? 1 : 0;
      out.terminal[k] += term[i * m + k] ? 1 : 0;
    }
  }
  return out;
}

AppearanceEstimate appearance_frequency(const OracleSystem& sys, const Strategy& strat,
                                        const std::vector<Wdag>& targets,
                                        WitnessRule rule, uint64_t seed,
                                        long long trials, long long max_steps,
                                        int jobs) {
  SamplerTable table(sys);
  std::map<std::vector<int>, int> key_to_target;
  int cap = 0;
  for (size_t i = 0; i < targets.size(); ++i) {
    key_to_target[canonical_key(targets[i])] = static_cast<int>(i);
    cap = std::max(cap, targets[i].size());
  }
  std::vector<std::vector<char>> hit(trials);
  parallel_for(trials, jobs, [&](long long i) {
    RunResult r = run_sequential(sys, table, strat, mix_seed(seed, i), max_steps);
    std::vector<char> seen(targets.size(), 0);
    for (int t = 1; t <= static_cast<int>(r.trajectory.size()); ++t) {
      auto w = gen_witness_capped(sys, r.trajectory, t, rule, cap);
      if (!w) continue;
      auto it = key_to_target.find(canonical_key(*w));
      if (it != key_to_target.end()) seen[it->second] = 1;
    }
    hit[i] = std::move(seen);
  });
  AppearanceEstimate out;
  out.trials = trials;
  out.hits.assign(targets.size(), 0);
  for (long long i = 0; i < trials; ++i)
    for (size_t k = 0; k < targets.size(); ++k) out.hits[k] += hit[i][k] ? 1 : 0;
  return out;
}

RoundRunResult run_rounds(const OracleSystem& sys, const SamplerTable& table,
                          uint64_t seed, int max_rounds) {
  SplitMix64 gen(seed);
  RoundRunResult out;
  int state = table.initial(gen);
  out.initial_state = state;
  while (out.rounds < max_rounds) {
    std::vector<int> v = sys.flaws_holding(state);
    if (v.empty()) {
      out.terminated = true;
      break;
    }
    RoundRecord rec;
    rec.start_flaws = v;
    while (!v.empty()) {
      int f = v.front();
      state = table.resample(f, state, gen);
      rec.resampled.push_back(f);
      out.trajectory.push_back(f);
      std::vector<int> keep;
      for (int g : v)
        if (!sys.dep.related(f, g) && sys.flaws[g].holds(state)) keep.push_back(g);
      v = std::move(keep);
    }
    out.round_records.push_back(std::move(rec));
    ++out.rounds;
  }
  if (out.rounds >= max_rounds && sys.flaws_holding(state).empty()) out.terminated = true;
  out.final_state = state;
  return out;
}

RoundCausalityCheck check_round_causality(const OracleSystem& sys,
                                          const RoundRunResult& run) {
  RoundCausalityCheck out;
  for (size_t k = 1; k < run.round_records.size(); ++k) {
    const auto& prev = run.round_records[k - 1].resampled;
    for (int f : run.round_records[k].start_flaws) {
      bool explained = false;
      for (int g : prev) explained = explained || sys.dep.related(f, g);
      if (!explained) out.violations.push_back({static_cast<int>(k + 1), f});
    }
  }
  out.ok = out.violations.empty();
  return out;
}

RoundDepthCheck check_depth_equals_round(const OracleSystem& sys,
                                         const RoundRunResult& run) {
  RoundDepthCheck out;
  long long t = 0;
  for (size_t k = 0; k < run.round_records.size(); ++k) {
    for (size_t j = 0; j < run.round_records[k].resampled.size(); ++j) {
      ++t;
      Wdag w = gen_witness(sys, run.trajectory, static_cast<int>(t),
                           WitnessRule::kSourceNeighbor);
      int d = wdag_depth(w);
      if (d != static_cast<int>(k + 1)) out.mismatches.push_back({t, d});
    }
  }
  out.ok = out.mismatches.empty();
  return out;
}

double RoundsSummary::tail_fraction(int r) const {
  long long over = 0;
  for (size_t k = 0; k < rounds_histogram.size(); ++k)
    if (static_cast<int>(k) > r) over += rounds_histogram[k];
  return trials ? static_cast<double>(over) / static_cast<double>(trials) : 0.0;
}

RoundsSummary run_rounds_many(const OracleSystem& sys, uint64_t seed, long long trials,
                              int max_rounds, int jobs, bool check_witnesses) {
  SamplerTable table(sys);
  std::vector<int> rounds(trials);
  std::vector<char> done(trials);
  std::vector<long long> causality(trials, 0);
  std::vector<long long> depth(trials, 0);
  parallel_for(trials, jobs, [&](long long i) {
    RoundRunResult r = run_rounds(sys, table, mix_seed(seed, i), max_rounds);
    rounds[i] = r.rounds;
    done[i] = r.terminated;
    if (check_witnesses) {
      causality[i] = static_cast<long long>(check_round_causality(sys, r).violations.size());
      depth[i] = static_cast<long long>(check_depth_equals_round(sys, r).mismatches.size());
    }
  });
  RoundsSummary out;
  out.trials = trials;
  out.rounds_histogram.assign(max_rounds + 1, 0);
  for (long long i = 0; i < trials; ++i) {
    out.terminated += done[i] ? 1 : 0;
    out.rounds.add(static_cast<double>(rounds[i]));
    ++out.rounds_histogram[rounds[i]];
    out.causality_violations += causality[i];
    out.depth_mismatches += depth[i];
  }
  return out;
}

}  // namespace resamp
