#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "resamp/oracle.hpp"
#include "resamp/rng.hpp"
#include "resamp/stats.hpp"
#include "resamp/wdag.hpp"

namespace resamp {

// Precomputed samplers for the initial distribution and every flaw row.
// Read-only after construction, so safe to share across threads.
class SamplerTable {
 public:
  explicit SamplerTable(const OracleSystem& sys);

  int initial(SplitMix64& gen) const { return init_.sample(gen); }
  int resample(int flaw, int state, SplitMix64& gen) const {
    return rows_[flaw][state].sample(gen);
  }

 private:
  std::vector<std::vector<RowSampler>> rows_;
  RowSampler init_;
};

enum class StrategyKind { kLeastId, kRandom, kScripted, kPriority };

// Flaw selection rule for the sequential search loop.
struct Strategy {
  StrategyKind kind = StrategyKind::kLeastId;
  std::vector<int> script;    // kScripted: flaw to resample at each step
  std::vector<int> priority;  // kPriority: preference order; least id afterwards

  static Strategy least_id() { return {}; }
  static Strategy random_choice() { return {StrategyKind::kRandom, {}, {}}; }
  static Strategy scripted(std::vector<int> s) {
    return {StrategyKind::kScripted, std::move(s), {}};
  }
  static Strategy priority_order(std::vector<int> p) {
    return {StrategyKind::kPriority, {}, std::move(p)};
  }
};

struct StepRecord {
  int step;  // 1-based
  int flaw;
  int pre_state;
  int post_state;
};

struct RunResult {
  bool terminated = false;  // reached a flawless state
  bool script_ok = true;    // scripted flaw always held when requested
  long long steps = 0;
  int initial_state = -1;
  int final_state = -1;
  std::vector<int> trajectory;
  std::vector<StepRecord> records;  // filled only when requested
};

RunResult run_sequential(const OracleSystem& sys, const SamplerTable& table,
                         const Strategy& strat, uint64_t seed, long long max_steps,
                         bool keep_records = false);

struct ManyRunSummary {
  long long trials = 0;
  long long terminated = 0;
  RunningMean steps;                       // over all trials
  std::vector<long long> flaw_resamples;   // total resamplings per flaw
};

// Independent trials; trial i uses the stream seed mix_seed(seed, i), so the
// outcome does not depend on the jobs count.
ManyRunSummary run_many(const OracleSystem& sys, const Strategy& strat, uint64_t seed,
                        long long trials, long long max_steps, int jobs = 1);

struct TerminalCounts {
  long long trials = 0;
  long long terminated = 0;
  std::vector<long long> state_counts;  // final state per terminated trial

  // Fraction of trials whose final state lies in the event, with a Wilson
  // interval.  Trials that hit the step cap count as outside the event.
  Interval event_probability(const Event& e) const;
};

TerminalCounts terminal_counts(const OracleSystem& sys, const Strategy& strat,
                               uint64_t seed, long long trials, long long max_steps,
                               int jobs = 1);

struct EventHitCounts {
  long long trials = 0;
  long long terminated = 0;
  std::vector<long long> ever;      // trials where some visited state lies in the event
  std::vector<long long> terminal;  // trials whose final state lies in it
};

// Tracks, per event, whether any state along the run (including the initial
// and final states) hits it, and whether the final state does.
EventHitCounts event_hit_counts(const OracleSystem& sys, const Strategy& strat,
                                uint64_t seed, long long trials, long long max_steps,
                                const std::vector<Event>& events, int jobs = 1);

struct AppearanceEstimate {
  long long trials = 0;
  std::vector<long long> hits;  // per target wdag
};

// Estimates, for each target wdag, the probability that some witness built
// from the actual trajectory is isomorphic to it.
AppearanceEstimate appearance_frequency(const OracleSystem& sys, const Strategy& strat,
                                        const std::vector<Wdag>& targets,
                                        WitnessRule rule, uint64_t seed,
                                        long long trials, long long max_steps,
                                        int jobs = 1);

// One round of the parallel scheme: take the set V of flaws currently holding,
// then repeatedly resample the least-id member of V and strip from V every
// flaw that stopped holding or is related to the one resampled.
struct RoundRecord {
  std::vector<int> start_flaws;  // V at the start of the round
  std::vector<int> resampled;    // flaws resampled in order (a stable set)
};

struct RoundRunResult {
  bool terminated = false;
  int rounds = 0;
  int initial_state = -1;
  int final_state = -1;
  std::vector<RoundRecord> round_records;
  std::vector<int> trajectory;  // serialized resampling order
};

RoundRunResult run_rounds(const OracleSystem& sys, const SamplerTable& table,
                          uint64_t seed, int max_rounds);

// Every flaw alive at the start of round k >= 2 must be related to something
// resampled in round k-1.
struct RoundCausalityCheck {
  bool ok = true;
  std::vector<std::pair<int, int>> violations;  // (round, flaw)
};

RoundCausalityCheck check_round_causality(const OracleSystem& sys,
                                          const RoundRunResult& run);

// The witness for any resampling in round k, built with the source-neighbor
// rule, must have depth exactly k.
struct RoundDepthCheck {
  bool ok = true;
  std::vector<std::pair<long long, int>> mismatches;  // (step, depth)
};

RoundDepthCheck check_depth_equals_round(const OracleSystem& sys,
                                         const RoundRunResult& run);

struct RoundsSummary {
  long long trials = 0;
  long long terminated = 0;
  std::vector<long long> rounds_histogram;  // index = round count
  RunningMean rounds;
  long long causality_violations = 0;
  long long depth_mismatches = 0;

  // Fraction of trials needing more than `r` rounds.
  double tail_fraction(int r) const;
};

RoundsSummary run_rounds_many(const OracleSystem& sys, uint64_t seed, long long trials,
                              int max_rounds, int jobs = 1, bool check_witnesses = false);

}  // namespace resamp
