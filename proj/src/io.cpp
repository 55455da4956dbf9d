#include "resamp/io.hpp"

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace resamp {

using nlohmann::json;

void write_instance(std::ostream& out, const OracleSystem& sys,
                    const std::vector<std::vector<int>>* provenance) {
  json j;
  j["states"] = sys.space.names;
  json mu = json::array();
  for (const Rat& q : sys.mu.p) mu.push_back(rat_str(q));
  j["mu"] = std::move(mu);

  json flaws = json::array();
  for (size_t k = 0; k < sys.flaws.size(); ++k) {
    const Flaw& f = sys.flaws[k];
    json jf;
    jf["name"] = f.name;
    jf["support"] = f.support;
    json rows = json::object();
    for (int r = 0; r < f.matrix.n; ++r) {
      if (f.matrix.rows[r].empty()) continue;
      json row = json::array();
      for (const auto& [c, v] : f.matrix.rows[r]) row.push_back({c, rat_str(v)});
      rows[std::to_string(r)] = std::move(row);
    }
    jf["rows"] = std::move(rows);
    if (provenance) jf["members"] = (*provenance)[k];
    flaws.push_back(std::move(jf));
  }
  j["flaws"] = std::move(flaws);

  json rel = json::array();
  const int m = sys.flaw_count();
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (sys.dep.related(a, b)) rel.push_back({a, b});
  j["relation"] = std::move(rel);

  out << j.dump(2) << "\n";
}

OracleSystem read_instance(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("instance: ") + e.what());
  }

  OracleSystem sys;
  if (!j.contains("states") || !j.contains("mu") || !j.contains("flaws"))
    throw std::runtime_error("instance: missing states, mu, or flaws");
  sys.space.names = j["states"].get<std::vector<std::string>>();
  sys.space.n = static_cast<int>(sys.space.names.size());

  for (const auto& s : j["mu"]) sys.mu.p.push_back(rat_parse(s.get<std::string>()));
  if (static_cast<int>(sys.mu.p.size()) != sys.space.n)
    throw std::runtime_error("instance: mu length differs from state count");

  for (const auto& jf : j["flaws"]) {
    Flaw f;
    f.name = jf.at("name").get<std::string>();
    f.support = jf.at("support").get<std::vector<int>>();
    f.matrix = SparseMatrix::zero(sys.space.n);
    for (const auto& [key, row] : jf.at("rows").items()) {
      int r = std::stoi(key);
      if (r < 0 || r >= sys.space.n)
        throw std::runtime_error("instance: row index out of range in flaw " + f.name);
      for (const auto& entry : row) {
        int c = entry.at(0).get<int>();
        if (c < 0 || c >= sys.space.n)
          throw std::runtime_error("instance: column index out of range in flaw " + f.name);
        f.matrix.set(r, c, rat_parse(entry.at(1).get<std::string>()));
      }
    }
    sys.flaws.push_back(std::move(f));
  }

  sys.dep = DependencyRelation(sys.flaw_count());
  if (j.contains("relation"))
    for (const auto& pr : j["relation"]) {
      int a = pr.at(0).get<int>();
      int b = pr.at(1).get<int>();
      if (a < 0 || b < 0 || a >= sys.flaw_count() || b >= sys.flaw_count())
        throw std::runtime_error("instance: relation pair out of range");
      sys.dep.set_related(a, b);
    }

  sys.validate();
  FlawMatrixReport shape = check_flaw_matrices(sys);
  if (!shape.ok) {
    const RowIssue& issue = shape.issues.front();
    std::ostringstream msg;
    msg << "instance: flaw " << sys.flaws[issue.flaw].name << " row " << issue.state
        << ": " << issue.what;
    throw std::runtime_error(msg.str());
  }
  return sys;
}

void write_wdag(std::ostream& out, const Wdag& w) {
  auto preds = wdag_preds(w);
  for (int v = 0; v < w.size(); ++v) {
    out << v << " " << w.labels[v] << " :";
    for (int p : preds[v]) out << " " << p;
    out << "\n";
  }
}

Wdag read_wdag(std::istream& in) {
  Wdag w;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    int id = -1, label = -1;
    std::string colon;
    if (!(ls >> id >> label >> colon) || colon != ":")
      throw std::runtime_error("wdag: bad node line: " + line);
    if (id != w.size()) throw std::runtime_error("wdag: node ids must be dense and ascending");
    w.labels.push_back(label);
    int p;
    while (ls >> p) {
      if (p < 0 || p >= id) throw std::runtime_error("wdag: predecessor must precede node");
      w.edges.emplace_back(p, id);
    }
  }
  return w;
}

void write_perm_instance(std::ostream& out, const PermInstanceFile& inst) {
  json j;
  j["n"] = inst.n;
  json flaws = json::array();
  for (const auto& cells : inst.flaw_cells) {
    json f = json::array();
    for (Cell c : cells) f.push_back({c.x, c.y});
    flaws.push_back(std::move(f));
  }
  j["flaws"] = std::move(flaws);
  json ev = json::array();
  for (Cell c : inst.event_cells) ev.push_back({c.x, c.y});
  j["event"] = std::move(ev);
  out << j.dump(2) << "\n";
}

PermInstanceFile read_perm_instance(std::istream& in) {
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("perm instance: ") + e.what());
  }
  PermInstanceFile inst;
  inst.n = j.at("n").get<int>();
  if (inst.n < 1 || inst.n > 6) throw std::runtime_error("perm instance: n out of range");
  auto parse_cell = [&](const json& e) {
    Cell c{e.at(0).get<int>(), e.at(1).get<int>()};
    if (c.x < 0 || c.x >= inst.n || c.y < 0 || c.y >= inst.n)
      throw std::runtime_error("perm instance: cell out of range");
    return c;
  };
  if (j.contains("flaws"))
    for (const auto& jf : j["flaws"]) {
      std::vector<Cell> cells;
      for (const auto& e : jf) cells.push_back(parse_cell(e));
      inst.flaw_cells.push_back(std::move(cells));
    }
  if (j.contains("event"))
    for (const auto& e : j["event"]) inst.event_cells.push_back(parse_cell(e));
  return inst;
}

void write_trajectory(std::ostream& out, const TrajectoryFile& t) {
  out << "seed " << t.seed << "\n";
  out << "strategy " << t.strategy << "\n";
  for (const StepRecord& s : t.steps)
    out << s.step << " " << s.flaw << " " << s.pre_state << " " << s.post_state << "\n";
}

TrajectoryFile read_trajectory(std::istream& in) {
  TrajectoryFile t;
  std::string word;
  if (!(in >> word >> t.seed) || word != "seed")
    throw std::runtime_error("trajectory: missing seed header");
  if (!(in >> word >> t.strategy) || word != "strategy")
    throw std::runtime_error("trajectory: missing strategy header");
  StepRecord s;
  while (in >> s.step >> s.flaw >> s.pre_state >> s.post_state) t.steps.push_back(s);
  return t;
}

}  // namespace resamp
