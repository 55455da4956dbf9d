#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "resamp/oracle.hpp"
#include "resamp/perm_lll.hpp"
#include "resamp/search.hpp"
#include "resamp/wdag.hpp"

namespace resamp {

// Instance document with fields states[], mu[] (rationals as "num/den"),
// flaws[] (support plus sparse rows), and relation[] as index pairs.
// Rationals survive the round trip bit for bit.  `provenance`, when given,
// tags each flaw with the source flaws it was composed from.
void write_instance(std::ostream& out, const OracleSystem& sys,
                    const std::vector<std::vector<int>>* provenance = nullptr);

// Parses and fully validates; throws std::runtime_error naming the offending
// field, row, or pair.
OracleSystem read_instance(std::istream& in);

// One node per line, "id label : predecessor ids", ids dense and ascending.
void write_wdag(std::ostream& out, const Wdag& w);
Wdag read_wdag(std::istream& in);

// Permutation instance: letter count, atomic cells per flaw, event cells.
struct PermInstanceFile {
  int n = 0;
  std::vector<std::vector<Cell>> flaw_cells;
  std::vector<Cell> event_cells;
};

void write_perm_instance(std::ostream& out, const PermInstanceFile& inst);
PermInstanceFile read_perm_instance(std::istream& in);

// Header lines for seed and strategy, then one line per step
// "t flaw pre post".
struct TrajectoryFile {
  std::uint64_t seed = 0;
  std::string strategy;
  std::vector<StepRecord> steps;
};

void write_trajectory(std::ostream& out, const TrajectoryFile& t);
TrajectoryFile read_trajectory(std::istream& in);

}  // namespace resamp
