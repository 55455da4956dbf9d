#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "resamp/compose.hpp"
#include "resamp/criteria.hpp"
#include "resamp/distribution.hpp"
#include "resamp/instances.hpp"
#include "resamp/io.hpp"
#include "resamp/perm_lll.hpp"
#include "resamp/rng.hpp"
#include "resamp/search.hpp"
#include "resamp/wdag.hpp"

namespace {

using namespace resamp;
using nlohmann::json;

std::string approx(const Rat& q) {
  std::ostringstream os;
  os << std::setprecision(6) << rat_double(q);
  return os.str();
}

std::string fmt(const Rat& q) { return rat_str(q) + " (" + approx(q) + ")"; }

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(6) << x;
  return os.str();
}

void row(const std::string& key, const std::string& value) {
  std::cout << "  " << std::left << std::setw(22) << key << value << "\n";
}

std::string verdict(bool ok) { return ok ? "ok" : "FAIL"; }

struct InstanceOpts {
  std::string builtin;
  std::string cnf_path;
  std::string file_path;
  std::string perm_path;
};

void add_instance_opts(CLI::App* cmd, InstanceOpts& o) {
  cmd->add_option("--instance", o.builtin, "builtin instance name");
  cmd->add_option("--cnf", o.cnf_path, "DIMACS CNF file");
  cmd->add_option("--file", o.file_path, "generic instance file");
  cmd->add_option("--perm", o.perm_path, "permutation instance file");
}

struct Loaded {
  std::string label;
  OracleSystem sys;
  bool seeded = false;
  SeededSystem pre;
  std::vector<std::vector<int>> member_sets;
  std::vector<std::vector<Cell>> flaw_cells;
  std::vector<Cell> event_cells;
  int perm_n = 0;
};

Loaded load_instance(const InstanceOpts& o) {
  Loaded out;
  int given = !o.builtin.empty() + !o.cnf_path.empty() + !o.file_path.empty() +
              !o.perm_path.empty();
  if (given != 1)
    throw std::runtime_error("select exactly one of --instance, --cnf, --file, --perm");

  if (!o.builtin.empty()) {
    out.label = o.builtin;
    out.sys = builtin_instance(o.builtin);
    return out;
  }
  if (!o.cnf_path.empty()) {
    std::ifstream in(o.cnf_path);
    if (!in) throw std::runtime_error("cannot open " + o.cnf_path);
    out.label = o.cnf_path;
    out.sys = from_cnf(parse_dimacs(in));
    return out;
  }
  if (!o.file_path.empty()) {
    std::ifstream in(o.file_path);
    if (!in) throw std::runtime_error("cannot open " + o.file_path);
    out.label = o.file_path;
    out.sys = read_instance(in);
    return out;
  }

  std::ifstream in(o.perm_path);
  if (!in) throw std::runtime_error("cannot open " + o.perm_path);
  PermInstanceFile pf = read_perm_instance(in);
  out.label = o.perm_path;
  out.perm_n = pf.n;
  out.event_cells = pf.event_cells;
  if (pf.flaw_cells.empty()) {
    out.sys = perm_atomic_system(pf.n);
    for (int x = 0; x < pf.n; ++x)
      for (int y = 0; y < pf.n; ++y) out.flaw_cells.push_back({Cell{x, y}});
    return out;
  }
  out.flaw_cells = pf.flaw_cells;
  std::vector<Cell> cells;
  for (const auto& set : pf.flaw_cells)
    for (Cell c : set)
      if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
  out.pre = perm_seeded_system(pf.n, cells);
  out.seeded = true;
  for (const auto& set : pf.flaw_cells) {
    std::vector<int> ids;
    for (Cell c : set) {
      auto it = std::find(cells.begin(), cells.end(), c);
      ids.push_back(static_cast<int>(it - cells.begin()));
    }
    out.member_sets.push_back(ids);
  }
  out.sys = composed_system(out.pre, out.member_sets);
  return out;
}

Strategy parse_strategy(const std::string& s) {
  if (s.empty() || s == "least-id") return Strategy::least_id();
  if (s == "random") return Strategy::random_choice();
  if (s.rfind("priority:", 0) == 0) {
    std::vector<int> order;
    std::istringstream ls(s.substr(9));
    std::string tok;
    while (std::getline(ls, tok, ',')) order.push_back(std::stoi(tok));
    return Strategy::priority_order(order);
  }
  throw std::runtime_error("unknown strategy: " + s);
}

WitnessRule parse_rule(const std::string& s) {
  if (s == "q0") return WitnessRule::kSourceLabel;
  if (s == "q1") return WitnessRule::kSourceNeighbor;
  if (s == "q2") return WitnessRule::kAlways;
  throw std::runtime_error("unknown rule: " + s);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  return out;
}

// ---------------------------------------------------------------- verify

struct Expectation {
  bool has = false;
  bool t_commutative = true;
  bool regenerating = true;
};

Expectation expected_properties(const std::string& label) {
  static const std::map<std::string, Expectation> table = {
      {"cnf-a", {true, true, true}},
      {"cnf-b", {true, true, true}},
      {"sat-symmetric", {true, true, true}},
      {"geometric", {true, true, true}},
      {"perm3", {true, true, true}},
      {"perm4-pairs", {true, true, true}},
      {"noncommuting", {true, false, true}},
      {"appendix-a", {true, false, true}},
  };
  auto it = table.find(label);
  return it == table.end() ? Expectation{} : it->second;
}

int cmd_verify(const InstanceOpts& io_opts, int jobs) {
  Loaded L = load_instance(io_opts);
  const OracleSystem& sys = L.sys;
  SystemReport rep = check_system(sys, jobs);

  std::cout << "instance " << L.label << "\n";
  row("states", std::to_string(sys.space.n));
  row("flaws", std::to_string(sys.flaw_count()));
  row("row-stochastic", verdict(rep.matrices.ok));
  row("dependency-sound", verdict(rep.soundness.ok));
  row("t-commutative", verdict(rep.commutativity.ok));
  row("regenerating", verdict(rep.regeneration.ok));
  row("injective", rep.injectivity.ok ? "yes" : "no");

  for (const RowIssue& i : rep.matrices.issues)
    std::cout << "  matrix issue: flaw " << sys.flaws[i.flaw].name << " row " << i.state
              << ": " << i.what << "\n";
  for (const CausalityViolation& v : rep.soundness.violations)
    std::cout << "  soundness: resampling " << sys.flaws[v.resampled].name
              << " introduces " << sys.flaws[v.introduced].name << " via state "
              << v.from_state << " -> " << v.to_state << "\n";
  for (const CommutePair& p : rep.commutativity.violations)
    std::cout << "  noncommuting pair: " << sys.flaws[p.f].name << ", "
              << sys.flaws[p.g].name << "\n";
  for (const RegenIssue& i : rep.regeneration.issues)
    std::cout << "  regeneration: flaw " << sys.flaws[i.flaw].name << " column "
              << i.state << " got " << rat_str(i.got) << " want " << rat_str(i.want)
              << "\n";
  for (int f = 0; f < sys.flaw_count(); ++f)
    row("charge " + sys.flaws[f].name, fmt(rep.charge_values[f]));

  bool ok = rep.matrices.ok && rep.soundness.ok;
  Expectation exp = expected_properties(L.label);
  if (exp.has) {
    ok = ok && rep.commutativity.ok == exp.t_commutative &&
         rep.regeneration.ok == exp.regenerating;
    if (!exp.t_commutative)
      ok = ok && rep.commutativity.violations.size() == 1 &&
           rep.commutativity.violations[0].f == 0 && rep.commutativity.violations[0].g == 1;
  }

  if (L.seeded) {
    ObliviousReport ob = check_oblivious(L.pre);
    CommutativityReport pc = check_pre_commutative(L.pre, jobs);
    row("oblivious", verdict(ob.ok));
    row("pre-commutative", verdict(pc.ok));
    ok = ok && ob.ok && pc.ok;
  }

  row("verdict", verdict(ok));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- criteria

std::vector<Rat> parse_rat_array(const json& arr) {
  std::vector<Rat> out;
  for (const auto& e : arr) out.push_back(rat_parse(e.get<std::string>()));
  return out;
}

int cmd_criteria(const InstanceOpts& io_opts, int max_nodes,
                 const std::string& witness_path, const std::string& out_path) {
  Loaded L = load_instance(io_opts);
  const OracleSystem& sys = L.sys;
  std::vector<Rat> gamma = charges(sys);

  std::vector<std::pair<std::string, CriterionResult>> results;
  results.emplace_back("symmetric", symmetric_criterion(sys, gamma));
  results.emplace_back("neighborhood", neighborhood_criterion(sys, gamma));

  bool witness_given = !witness_path.empty();
  if (witness_given) {
    std::ifstream in(witness_path);
    if (!in) throw std::runtime_error("cannot open " + witness_path);
    json j;
    in >> j;
    if (j.contains("x"))
      results.emplace_back("asymmetric",
                           asymmetric_criterion(sys, gamma, parse_rat_array(j["x"])));
    if (j.contains("eta"))
      results.emplace_back(
          "cluster-expansion",
          cluster_expansion_criterion(sys, gamma, parse_rat_array(j["eta"])));
    if (j.contains("cliques") && j.contains("zeta"))
      results.emplace_back(
          "clique",
          clique_criterion(sys, gamma, j["cliques"].get<std::vector<std::vector<int>>>(),
                           parse_rat_array(j["zeta"])));
  }

  std::ofstream csv;
  if (!out_path.empty()) {
    csv = open_out(out_path);
    csv << "criterion,flaw,gamma,bound,satisfied\n";
  }

  bool all_ok = true;
  for (const auto& [name, crit] : results) {
    std::cout << "criterion " << name << "\n";
    row("premise", verdict(crit.premise_holds));
    if (!crit.note.empty()) row("note", crit.note);
    if (!crit.premise_holds) {
      if (witness_given && name != "symmetric" && name != "neighborhood") all_ok = false;
      continue;
    }
    CriterionCheck check = check_criterion(sys, gamma, crit, max_nodes);
    row("weights bounded", verdict(check.bounds_hold));
    row("sums converged", verdict(check.all_converged));
    row("runtime bound", crit.runtime_bound.str());
    all_ok = all_ok && check.bounds_hold;
    for (int f = 0; f < sys.flaw_count(); ++f) {
      bool sat = crit.flaw_bounds[f].admits(check.sums[f].truncated);
      std::cout << "    " << std::left << std::setw(10) << sys.flaws[f].name
                << " gamma " << std::setw(18) << rat_str(gamma[f]) << " bound "
                << std::setw(18) << crit.flaw_bounds[f].str() << " "
                << (sat ? "ok" : "FAIL") << "\n";
      if (csv.is_open())
        csv << name << "," << sys.flaws[f].name << "," << rat_str(gamma[f]) << ","
            << crit.flaw_bounds[f].str() << "," << (sat ? 1 : 0) << "\n";
    }
  }
  row("verdict", verdict(all_ok));
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- run

int cmd_run(const InstanceOpts& io_opts, std::uint64_t seed, long long trials,
            long long max_steps, const std::string& strategy_str, int jobs,
            bool rounds_mode, const std::string& eps_str, int max_nodes,
            const std::string& dump_path, const std::string& replay_path,
            const std::string& out_path) {
  Loaded L = load_instance(io_opts);
  const OracleSystem& sys = L.sys;

  if (!replay_path.empty()) {
    std::ifstream in(replay_path);
    if (!in) throw std::runtime_error("cannot open " + replay_path);
    TrajectoryFile tf = read_trajectory(in);
    SamplerTable table(sys);
    RunResult rr = run_sequential(sys, table, parse_strategy(tf.strategy), tf.seed,
                                  static_cast<long long>(tf.steps.size()) + max_steps,
                                  true);
    bool match = rr.records.size() >= tf.steps.size();
    for (size_t i = 0; match && i < tf.steps.size(); ++i) {
      const StepRecord& a = tf.steps[i];
      const StepRecord& b = rr.records[i];
      match = a.step == b.step && a.flaw == b.flaw && a.pre_state == b.pre_state &&
              a.post_state == b.post_state;
    }
    row("replayed steps", std::to_string(tf.steps.size()));
    row("replay", verdict(match));
    return match ? 0 : 1;
  }

  std::vector<Rat> gamma = charges(sys);

  if (rounds_mode) {
    RoundsSummary rs =
        run_rounds_many(sys, seed, trials, static_cast<int>(max_steps), jobs, true);
    std::cout << "parallel rounds on " << L.label << "\n";
    row("trials", std::to_string(rs.trials));
    row("terminated", std::to_string(rs.terminated));
    row("mean rounds", fmt(rs.rounds.mean()));
    row("causality violations", std::to_string(rs.causality_violations));
    row("depth mismatches", std::to_string(rs.depth_mismatches));

    Rat eps = rat_parse(eps_str);
    RoundBound rb = parallel_round_bound(sys, gamma, eps, Rat(1, 100), max_nodes);
    row("weight sum converged", rb.converged ? "yes" : "no (tail bound unavailable)");
    if (rb.converged && rb.rounds > 0) {
      long long t = rb.rounds;
      double tail = rs.tail_fraction(static_cast<int>(2 * t));
      Rat bound = rb.w_eps_upper /
                  (rat_pow(1 + eps, static_cast<unsigned long>(t)) * Rat(static_cast<long>(t)));
      row("round threshold t", std::to_string(t));
      row("empirical Pr[>2t]", fmt(tail));
      row("tail bound", fmt(bound));
      row("tail ok", verdict(tail <= rat_double(bound) + 1e-12));
    }
    bool ok = rs.causality_violations == 0 && rs.depth_mismatches == 0;
    row("verdict", verdict(ok));
    return ok ? 0 : 1;
  }

  Strategy strat = parse_strategy(strategy_str);
  ManyRunSummary ms = run_many(sys, strat, seed, trials, max_steps, jobs);
  std::cout << "sequential runs on " << L.label << "\n";
  row("trials", std::to_string(ms.trials));
  row("terminated", std::to_string(ms.terminated));
  Interval mean_ci = ms.steps.interval();
  row("mean steps", fmt(mean_ci.estimate) + " +- " + fmt(mean_ci.half_width));

  Rat gamma_sum = 0;
  for (const Rat& g : gamma) gamma_sum += g;
  Rat e_bound = euler_upper() * gamma_sum;
  row("e * sum gamma", fmt(e_bound));
  row("mean within bound",
      verdict(mean_ci.estimate <= rat_double(e_bound) + 3 * mean_ci.half_width));

  std::ofstream csv;
  if (!out_path.empty()) {
    csv = open_out(out_path);
    csv << "flaw,resample_mean,phi_upper,converged\n";
  }
  for (int f = 0; f < sys.flaw_count(); ++f) {
    WeightSum phi = psi(sys, gamma, f, max_nodes);
    double mean = ms.trials ? static_cast<double>(ms.flaw_resamples[f]) /
                                  static_cast<double>(ms.trials)
                            : 0.0;
    std::cout << "    " << std::left << std::setw(10) << sys.flaws[f].name
              << " resample mean " << std::setw(12) << fmt(mean) << " phi upper "
              << fmt(phi.upper()) << (phi.converged ? "" : " (not converged)") << "\n";
    if (csv.is_open())
      csv << sys.flaws[f].name << "," << mean << "," << rat_str(phi.upper()) << ","
          << (phi.converged ? 1 : 0) << "\n";
  }

  if (!dump_path.empty()) {
    SamplerTable table(sys);
    std::uint64_t run_seed = mix_seed(seed, 0);
    RunResult rr = run_sequential(sys, table, strat, run_seed, max_steps, true);
    TrajectoryFile tf;
    tf.seed = run_seed;
    tf.strategy = strategy_str.empty() ? "least-id" : strategy_str;
    tf.steps = rr.records;
    std::ofstream out = open_out(dump_path);
    write_trajectory(out, tf);
    row("trajectory dump", dump_path);
  }
  return 0;
}

// ---------------------------------------------------------------- bounds

int cmd_bounds(const InstanceOpts& io_opts, std::uint64_t seed, long long trials,
               long long max_steps, int max_nodes, const std::string& events_path,
               int jobs, const std::string& out_path) {
  Loaded L = load_instance(io_opts);
  const OracleSystem& sys = L.sys;
  std::vector<Rat> gamma = charges(sys);
  bool injective = check_injective(sys).ok;

  std::vector<std::string> names;
  std::vector<Event> events;
  if (!events_path.empty()) {
    std::ifstream in(events_path);
    if (!in) throw std::runtime_error("cannot open " + events_path);
    json j;
    in >> j;
    for (const auto& je : j) {
      names.push_back(je.contains("name") ? je["name"].get<std::string>()
                                          : "event" + std::to_string(names.size()));
      events.push_back(make_event(je.at("states").get<std::vector<int>>(), sys.space.n));
    }
  } else {
    for (int f = 0; f < sys.flaw_count() && f < 8; ++f) {
      names.push_back(sys.flaws[f].name);
      events.push_back(sys.flaws[f].support);
    }
  }
  if (!L.event_cells.empty()) {
    names.push_back("target-cells");
    events.push_back(perm_event(L.perm_n, L.event_cells));
  }

  EventHitCounts hits = event_hit_counts(sys, Strategy::least_id(), seed, trials,
                                         max_steps, events, jobs);

  std::ofstream csv;
  if (!out_path.empty()) {
    csv = open_out(out_path);
    csv << "event,mu,thm52,cor53,cor54,thm58,cor511,empirical,ci_hi\n";
  }

  bool chain_ok = true;
  for (size_t i = 0; i < events.size(); ++i) {
    EventBounds eb = event_bounds(sys, gamma, events[i], max_nodes);
    Rat cor54_up = eb.psi_bar_sum + eb.psi_bar_tail;
    bool chain = eb.matrix_sum <= eb.psi_sum && eb.psi_sum <= eb.psi_bar_sum;

    std::cout << "event " << names[i] << "\n";
    row("mu(E)", fmt(eb.mu_e));
    row("thm52 sum", fmt(eb.matrix_sum));
    row("cor53 sum", fmt(eb.psi_sum));
    row("cor54 bound", fmt(cor54_up) + (eb.converged ? "" : " (not converged)"));

    std::string thm58 = "-", cor511 = "-";
    if (injective) {
      InjectiveBounds ib = injective_event_bounds(sys, gamma, events[i], max_nodes);
      chain = chain && ib.pair_sum <= ib.pair_weight_sum &&
              ib.pair_weight_sum <= ib.per_state_sum &&
              ib.per_state_sum <= ib.uniform_bound;
      thm58 = rat_str(ib.pair_sum);
      cor511 = rat_str(ib.uniform_bound + ib.uniform_tail);
      row("thm58 sum", fmt(ib.pair_sum));
      row("cor511 bound", fmt(ib.uniform_bound + ib.uniform_tail) +
                              (ib.converged ? "" : " (not converged)"));
    }

    Interval ci = wilson_interval(static_cast<uint64_t>(hits.ever[i]),
                                  static_cast<uint64_t>(hits.trials));
    row("empirical ever", fmt(ci.estimate) + " +- " + fmt(ci.half_width));
    row("chain", verdict(chain));
    chain_ok = chain_ok && chain;

    if (!L.event_cells.empty() && names[i] == "target-cells" && !L.flaw_cells.empty()) {
      PermEventBound pb = perm_event_bound(sys, L.perm_n, L.flaw_cells, gamma,
                                           L.event_cells, max_nodes);
      row("thm56 bound", fmt(pb.value) + (pb.converged ? "" : " (not converged)"));
    }

    if (csv.is_open())
      csv << names[i] << "," << rat_str(eb.mu_e) << "," << rat_str(eb.matrix_sum) << ","
          << rat_str(eb.psi_sum) << "," << rat_str(cor54_up) << "," << thm58 << ","
          << cor511 << "," << ci.estimate << "," << ci.hi << "\n";
  }
  row("verdict", verdict(chain_ok));
  return chain_ok ? 0 : 1;
}

// ---------------------------------------------------------------- wdag

int cmd_wdag(const InstanceOpts& io_opts, const std::string& sinks_str, int max_nodes,
             int count, std::uint64_t seed, long long trials, long long max_steps,
             const std::string& rule_str, const std::string& file_path, int jobs,
             const std::string& out_path) {
  Loaded L = load_instance(io_opts);
  const OracleSystem& sys = L.sys;
  std::vector<Rat> gamma = charges(sys);
  WitnessRule rule = parse_rule(rule_str);

  std::vector<Wdag> targets;
  if (!file_path.empty()) {
    std::ifstream in(file_path);
    if (!in) throw std::runtime_error("cannot open " + file_path);
    Wdag w = read_wdag(in);
    wdag_validate(w, sys.dep);
    targets.push_back(std::move(w));
  } else {
    std::vector<int> sinks;
    if (!sinks_str.empty()) {
      std::istringstream ls(sinks_str);
      std::string tok;
      while (std::getline(ls, tok, ',')) sinks.push_back(std::stoi(tok));
    }
    std::vector<Wdag> all = enumerate_sink_wdags(sys.dep, sinks, max_nodes);
    WeightSum ws = weight_sum(sys.dep, gamma, sinks, max_nodes);
    row("enumerated wdags", std::to_string(all.size()));
    row("weight sum", fmt(ws.truncated) + " tail " + fmt(ws.tail_bound) +
                          (ws.converged ? "" : " (not converged)"));
    for (const Wdag& w : all) {
      targets.push_back(w);
      if (static_cast<int>(targets.size()) >= count) break;
    }
  }

  std::ofstream csv;
  if (!out_path.empty()) {
    csv = open_out(out_path);
    csv << "wdag,nodes,depth,weight,appearance_bound,empirical,ci_hi,ok\n";
  }

  bool all_ok = true;
  AppearanceEstimate est;
  if (trials > 0)
    est = appearance_frequency(sys, Strategy::least_id(), targets, rule, seed, trials,
                               max_steps, jobs);
  for (size_t i = 0; i < targets.size(); ++i) {
    const Wdag& w = targets[i];
    Rat bound = appearance_bound(w, sys);
    Rat weight = wdag_weight(w, gamma);
    std::cout << "wdag " << i << ": nodes " << w.size() << " depth " << wdag_depth(w)
              << " weight " << fmt(weight) << " appearance bound " << fmt(bound) << "\n";
    double emp = 0.0, hi = 0.0;
    bool ok = true;
    if (trials > 0) {
      Interval ci = wilson_interval(static_cast<uint64_t>(est.hits[i]),
                                    static_cast<uint64_t>(est.trials));
      emp = ci.estimate;
      hi = ci.hi;
      ok = ci.estimate <= rat_double(bound) + 3 * ci.half_width;
      std::cout << "    empirical " << fmt(emp) << " +- " << fmt(ci.half_width) << " "
                << verdict(ok) << "\n";
      all_ok = all_ok && ok;
    }
    if (csv.is_open())
      csv << i << "," << w.size() << "," << wdag_depth(w) << "," << rat_str(weight)
          << "," << rat_str(bound) << "," << emp << "," << hi << "," << (ok ? 1 : 0)
          << "\n";
  }
  row("verdict", verdict(all_ok));
  return all_ok ? 0 : 1;
}

// ---------------------------------------------------------------- compose

int cmd_compose(const std::string& perm_path, int jobs, const std::string& out_path) {
  InstanceOpts o;
  o.perm_path = perm_path;
  Loaded L = load_instance(o);
  if (!L.seeded) throw std::runtime_error("compose needs a file with composed flaws");

  ObliviousReport ob = check_oblivious(L.pre);
  CommutativityReport pc = check_pre_commutative(L.pre, jobs);
  row("pre-flaws", std::to_string(L.pre.pre_count()));
  row("oblivious", verdict(ob.ok));
  row("pre-commutative", verdict(pc.ok));

  bool products_ok = true, orders_ok = true;
  for (const auto& members : L.member_sets) {
    ComposedFlaw g = compose_flaw(L.pre, members);
    products_ok = products_ok && matches_member_product(L.pre, g);
    orders_ok = orders_ok && enumeration_invariant(L.pre, members);
  }
  row("member products", verdict(products_ok));
  row("order invariance", verdict(orders_ok));

  CommutativityReport cc = check_t_commutative(L.sys, jobs);
  row("composed t-commutative", verdict(cc.ok));

  if (!out_path.empty()) {
    std::ofstream out = open_out(out_path);
    write_instance(out, L.sys, &L.member_sets);
    row("composed dump", out_path);
  }

  bool ok = ob.ok && pc.ok && products_ok && orders_ok && cc.ok;
  row("verdict", verdict(ok));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- perm

int cmd_perm(const std::string& perm_path, int max_nodes, std::uint64_t seed,
             long long trials, long long max_steps, int jobs,
             const std::string& out_path) {
  InstanceOpts o;
  o.perm_path = perm_path;
  Loaded L = load_instance(o);
  const OracleSystem& sys = L.sys;
  std::vector<Rat> gamma = charges(sys);

  std::cout << "permutation instance on " << L.perm_n << " letters\n";
  row("flaws", std::to_string(sys.flaw_count()));
  row("event cells", std::to_string(L.event_cells.size()));

  for (size_t i = 0; i < L.flaw_cells.size() && i < 12; ++i) {
    if (!cells_stable(L.flaw_cells[i])) continue;
    std::vector<Cell> active = active_conditions(L.flaw_cells[i], L.event_cells);
    std::ostringstream os;
    for (Cell c : active) os << "(" << c.x << "," << c.y << ") ";
    row("active " + sys.flaws[i].name + " a=" + std::to_string(active.size()),
        os.str());
  }

  Event target = perm_event(L.perm_n, L.event_cells);
  PermEventBound pb =
      perm_event_bound(sys, L.perm_n, L.flaw_cells, gamma, L.event_cells, max_nodes);
  row("mu(E)", fmt(pb.mu_e));
  row("thm56 bound", fmt(pb.value) + (pb.converged ? "" : " (not converged)"));

  bool ok = true;
  double empirical = -1.0;
  if (trials > 0) {
    EventHitCounts hits = event_hit_counts(sys, Strategy::least_id(), seed, trials,
                                           max_steps, {target}, jobs);
    Interval ci = wilson_interval(static_cast<uint64_t>(hits.ever[0]),
                                  static_cast<uint64_t>(hits.trials));
    empirical = ci.estimate;
    row("empirical ever", fmt(ci.estimate) + " +- " + fmt(ci.half_width));
    ok = ci.estimate <= rat_double(pb.value) + 3 * ci.half_width;
    row("bound dominates", verdict(ok));
  }

  if (!out_path.empty()) {
    std::ofstream out = open_out(out_path);
    out << "event,mu,thm56,empirical\n";
    out << "target," << rat_str(pb.mu_e) << "," << rat_str(pb.value) << ","
        << (empirical < 0 ? std::string("-") : fmt(empirical)) << "\n";
  }
  row("verdict", verdict(ok));
  return ok ? 0 : 1;
}

// ---------------------------------------------------------------- appendix-a

int cmd_appendix_a(int cycles, std::uint64_t seed, long long trials,
                   const std::string& out_path) {
  OracleSystem sys = noncommuting_fixture();
  Rat p = fixture_cycle_probability();
  Rat w = fixture_cycle_weight();
  row("cycle probability", fmt(p));
  row("cycle weight", fmt(w));

  bool increasing = true;
  Rat prev_ratio = 1;
  std::ofstream csv;
  if (!out_path.empty()) {
    csv = open_out(out_path);
    csv << "cycles,appearance,weight,ratio\n";
  }
  for (int n = 1; n <= cycles; ++n) {
    Rat pn = rat_pow(p, static_cast<unsigned long>(n));
    Rat wn = rat_pow(w, static_cast<unsigned long>(n));
    Rat ratio = pn / wn;
    std::cout << "  n=" << n << " appearance " << fmt(pn) << " weight " << fmt(wn)
              << " ratio " << fmt(ratio) << "\n";
    increasing = increasing && ratio > prev_ratio;
    prev_ratio = ratio;
    if (csv.is_open())
      csv << n << "," << rat_str(pn) << "," << rat_str(wn) << "," << rat_str(ratio)
          << "\n";
  }
  row("ratio increasing", verdict(increasing));

  int mc = std::min(cycles, 2);
  Wdag target = fixture_pattern_wdag(sys, mc);
  std::vector<int> key = canonical_key(target);
  long long hits = 0;
  bool equivalence_ok = true;
  for (long long t = 0; t < trials; ++t) {
    AdversarialRun run = run_adversarial(sys, mix_seed(seed, t), mc);
    bool key_match =
        static_cast<int>(run.trajectory.size()) == 3 * mc &&
        canonical_key(wdag_from_labels(run.trajectory, sys.dep)) == key;
    if (key_match != run.completed) equivalence_ok = false;
    if (run.completed) ++hits;
  }
  Rat exact = rat_pow(p, static_cast<unsigned long>(mc));
  Interval ci = wilson_interval(static_cast<uint64_t>(hits),
                                static_cast<uint64_t>(trials));
  row("mc cycles", std::to_string(mc));
  row("exact appearance", fmt(exact));
  row("empirical", fmt(ci.estimate) + " +- " + fmt(ci.half_width));
  bool within = std::abs(ci.estimate - rat_double(exact)) <= 3 * ci.half_width;
  row("within 3 CI", verdict(within));
  row("witness equivalence", verdict(equivalence_ok));

  bool ok = increasing && within && equivalence_ok;
  row("verdict", verdict(ok));
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification lab for commutative resampling oracles"};
  app.require_subcommand(1);

  InstanceOpts io_opts;
  std::uint64_t seed = 1;
  long long trials = 10000;
  long long max_steps = 10000;
  int max_nodes = 8;
  int jobs = 1;
  std::string rule = "q1";
  std::string strategy = "least-id";
  std::string out_path;

  auto add_common = [&](CLI::App* cmd, bool with_instance = true) {
    if (with_instance) add_instance_opts(cmd, io_opts);
    cmd->add_option("--seed", seed, "rng seed");
    cmd->add_option("--trials", trials, "monte carlo trials");
    cmd->add_option("--max-steps", max_steps, "step cap per run");
    cmd->add_option("--max-nodes", max_nodes, "wdag enumeration cap");
    cmd->add_option("--rule", rule, "witness rule q0|q1|q2");
    cmd->add_option("--strategy", strategy, "least-id | random | priority:a,b,...");
    cmd->add_option("--jobs", jobs, "worker threads");
    cmd->add_option("--out", out_path, "machine readable output file");
  };

  CLI::App* verify = app.add_subcommand("verify", "structural and exact property checks");
  add_common(verify);

  CLI::App* criteria = app.add_subcommand("criteria", "convergence criteria and runtime bounds");
  std::string witness_path;
  add_common(criteria);
  criteria->add_option("--witness", witness_path, "witness file with x/eta/cliques/zeta");

  CLI::App* run = app.add_subcommand("run", "sequential or parallel-round simulation");
  bool rounds_mode = false;
  std::string eps_str = "1";
  std::string dump_path, replay_path;
  add_common(run);
  run->add_flag("--rounds", rounds_mode, "parallel round scheme");
  run->add_option("--eps", eps_str, "epsilon for the round tail bound");
  run->add_option("--dump", dump_path, "write trajectory of the first trial");
  run->add_option("--replay", replay_path, "replay a trajectory dump");

  CLI::App* bounds = app.add_subcommand("bounds", "event probability bounds vs empirical");
  std::string events_path;
  add_common(bounds);
  bounds->add_option("--events", events_path, "event list file");

  CLI::App* wdag = app.add_subcommand("wdag", "wdag enumeration, weights, appearance");
  std::string sinks_str, wdag_file;
  int count = 20;
  add_common(wdag);
  wdag->add_option("--sinks", sinks_str, "comma separated sink labels");
  wdag->add_option("--count", count, "wdags to test");
  wdag->add_option("--wdag-file", wdag_file, "serialized wdag to test");

  CLI::App* compose = app.add_subcommand("compose", "composed flaws from seeded systems");
  std::string compose_perm;
  compose->add_option("--perm", compose_perm, "permutation instance file")->required();
  compose->add_option("--jobs", jobs, "worker threads");
  compose->add_option("--out", out_path, "composed instance dump");

  CLI::App* perm = app.add_subcommand("perm", "permutation setting bounds");
  std::string perm_file;
  perm->add_option("--perm", perm_file, "permutation instance file")->required();
  perm->add_option("--seed", seed, "rng seed");
  perm->add_option("--trials", trials, "monte carlo trials");
  perm->add_option("--max-steps", max_steps, "step cap per run");
  perm->add_option("--max-nodes", max_nodes, "wdag enumeration cap");
  perm->add_option("--jobs", jobs, "worker threads");
  perm->add_option("--out", out_path, "machine readable output file");

  CLI::App* appa = app.add_subcommand("appendix-a", "planted noncommuting fixture");
  int cycles = 4;
  appa->add_option("--cycles", cycles, "cycles in the ratio table");
  appa->add_option("--seed", seed, "rng seed");
  appa->add_option("--trials", trials, "monte carlo trials");
  appa->add_option("--out", out_path, "machine readable output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (verify->parsed()) return cmd_verify(io_opts, jobs);
    if (criteria->parsed()) return cmd_criteria(io_opts, max_nodes, witness_path, out_path);
    if (run->parsed())
      return cmd_run(io_opts, seed, trials, max_steps, strategy, jobs, rounds_mode,
                     eps_str, max_nodes, dump_path, replay_path, out_path);
    if (bounds->parsed())
      return cmd_bounds(io_opts, seed, trials, max_steps, max_nodes, events_path, jobs,
                        out_path);
    if (wdag->parsed())
      return cmd_wdag(io_opts, sinks_str, max_nodes, count, seed, trials, max_steps,
                      rule, wdag_file, jobs, out_path);
    if (compose->parsed()) return cmd_compose(compose_perm, jobs, out_path);
    if (perm->parsed())
      return cmd_perm(perm_file, max_nodes, seed, trials, max_steps, jobs, out_path);
    if (appa->parsed()) return cmd_appendix_a(cycles, seed, trials, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
