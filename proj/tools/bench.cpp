#include <chrono>
#include <iomanip>
#include <iostream>
#include <string>

#include <omp.h>

#include "resamp/instances.hpp"
#include "resamp/oracle.hpp"
#include "resamp/search.hpp"

using namespace resamp;

namespace {

double seconds(std::chrono::steady_clock::time_point a,
               std::chrono::steady_clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

template <typename Fn>
void bench(const std::string& name, int jobs, Fn fn) {
  auto t0 = std::chrono::steady_clock::now();
  bool serial_ok = fn(1);
  auto t1 = std::chrono::steady_clock::now();
  bool parallel_ok = fn(jobs);
  auto t2 = std::chrono::steady_clock::now();

  double ts = seconds(t0, t1), tp = seconds(t1, t2);
  std::cout << std::left << std::setw(28) << name << " serial " << std::fixed
            << std::setprecision(3) << std::setw(8) << ts << " jobs=" << jobs << " "
            << std::setw(8) << tp << " speedup " << std::setprecision(2)
            << (tp > 0 ? ts / tp : 0.0) << (serial_ok && parallel_ok ? "" : "  MISMATCH")
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  int jobs = omp_get_max_threads();
  long long trials = 20000;
  for (int i = 1; i + 1 < argc; i += 2) {
    std::string flag = argv[i];
    if (flag == "--jobs") jobs = std::stoi(argv[i + 1]);
    if (flag == "--trials") trials = std::stoll(argv[i + 1]);
  }

  OracleSystem sat = builtin_instance("sat-symmetric");
  OracleSystem perm = builtin_instance("perm3");
  OracleSystem cnf = builtin_instance("cnf-b");

  std::cout << "threads available: " << omp_get_max_threads() << "\n";

  CommutativityReport serial_comm = check_t_commutative(cnf, 1);
  bench("commutativity cnf-b", jobs, [&](int j) {
    CommutativityReport r = check_t_commutative(cnf, j);
    return r.ok == serial_comm.ok && r.violations.size() == serial_comm.violations.size();
  });

  CommutativityReport serial_perm = check_t_commutative(perm, 1);
  bench("commutativity perm3", jobs, [&](int j) {
    CommutativityReport r = check_t_commutative(perm, j);
    return r.ok == serial_perm.ok && r.violations.size() == serial_perm.violations.size();
  });

  ManyRunSummary serial_runs = run_many(sat, Strategy::least_id(), 7, trials, 100000, 1);
  bench("sequential runs sat", jobs, [&](int j) {
    ManyRunSummary r = run_many(sat, Strategy::least_id(), 7, trials, 100000, j);
    return r.terminated == serial_runs.terminated &&
           r.steps.sum == serial_runs.steps.sum;
  });

  std::vector<Event> events;
  for (int f = 0; f < cnf.flaw_count(); ++f) events.push_back(cnf.flaws[f].support);
  EventHitCounts serial_hits =
      event_hit_counts(cnf, Strategy::least_id(), 11, trials, 100000, events, 1);
  bench("event hits cnf-b", jobs, [&](int j) {
    EventHitCounts r =
        event_hit_counts(cnf, Strategy::least_id(), 11, trials, 100000, events, j);
    return r.ever == serial_hits.ever && r.terminal == serial_hits.terminal;
  });

  RoundsSummary serial_rounds = run_rounds_many(cnf, 13, trials / 2, 1000, 1, false);
  bench("parallel rounds cnf-b", jobs, [&](int j) {
    RoundsSummary r = run_rounds_many(cnf, 13, trials / 2, 1000, j, false);
    return r.terminated == serial_rounds.terminated &&
           r.rounds_histogram == serial_rounds.rounds_histogram;
  });

  return 0;
}
