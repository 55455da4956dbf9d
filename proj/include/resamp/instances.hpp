#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "resamp/oracle.hpp"
#include "resamp/wdag.hpp"

namespace resamp {

// Clauses of nonzero DIMACS literals: variable v appears as v or -v, 1-based.
struct Cnf {
  int var_count = 0;
  std::vector<std::vector<int>> clauses;
};

// Throws std::runtime_error on malformed input.
Cnf parse_dimacs(std::istream& in);

// Clauses with `width` distinct variables and random signs.
Cnf random_cnf(int vars, int clauses, int width, std::uint64_t seed);

// Variable system of a formula: states are assignments (bit v-1 of the state
// index is variable v), uniform measure, one flaw per clause holding on its
// violating assignments, resampling rerandomizes the clause's variables.
// Clauses sharing a variable are related.
OracleSystem from_cnf(const Cnf& f);

// Two states with one flaw on state 1 that escapes to state 0 with
// probability q.  Regenerating exactly when q = 1/2; always injective.
OracleSystem geometric_instance(const Rat& q);

// Frozen four-state system: two sound regenerating flaws f, g whose matrices
// do not commute, plus the singleton flaw h at their designated return state.
// h is related to everything; f and g are unrelated.
OracleSystem noncommuting_fixture();

// Same planted pair inside the full singleton family: flaws f, g followed by
// one singleton per state, each singleton related to every flaw.  Every state
// has a holding flaw, so runs never terminate.
OracleSystem appendix_a_complete();

// Designated states of the fixture: the two composite products disagree in
// column kFixtureTau at row kFixtureSigma.
inline constexpr int kFixtureSigma = 1;
inline constexpr int kFixtureTau = 0;

// Exact probability that one three-step cycle of the adversarial schedule
// matches its target pattern, and the weight of the pattern's three labels.
Rat fixture_cycle_probability();
Rat fixture_cycle_weight();

// Runs the adversarial schedule on the fixture for the given number of
// three-step cycles.  Each cycle picks per-step flaw priorities from the
// state at its start; `completed` reports whether every cycle matched the
// target pattern.
struct AdversarialRun {
  bool completed = false;
  std::vector<int> trajectory;
};

AdversarialRun run_adversarial(const OracleSystem& sys, std::uint64_t seed, int cycles);

// The wdag produced at position 3*cycles when every cycle matches: per cycle
// the two unrelated flaws then the singleton.
Wdag fixture_pattern_wdag(const OracleSystem& sys, int cycles);

// Instances addressable by name from the command line and the test drivers.
std::vector<std::string> builtin_names();
OracleSystem builtin_instance(const std::string& name);

}  // namespace resamp
