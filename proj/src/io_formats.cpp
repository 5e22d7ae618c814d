#include "netgame/io_formats.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace netgame {

using nlohmann::json;

ParseError::ParseError(std::string where, const std::string& message)
    : std::runtime_error(where.empty() ? message : where + ": " + message),
      where_(std::move(where)),
      message_(message) {}

namespace {

std::string child(const std::string& ptr, std::string_view key) { return ptr + "/" + std::string(key); }
std::string child(const std::string& ptr, std::size_t index) { return ptr + "/" + std::to_string(index); }

const json& field(const json& obj, const std::string& ptr, std::string_view key) {
  if (!obj.is_object()) throw ParseError(ptr, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(child(ptr, key), "missing field");
  return *it;
}

const json& array_at(const json& j, const std::string& ptr) {
  if (!j.is_array()) throw ParseError(ptr, "expected an array");
  return j;
}

double number(const json& j, const std::string& ptr) {
  if (!j.is_number()) throw ParseError(ptr, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ParseError(ptr, "expected a finite number");
  return v;
}

long long integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) throw ParseError(ptr, "expected an integer");
  return j.get<long long>();
}

std::uint64_t unsigned_integer(const json& j, const std::string& ptr) {
  if (!j.is_number_unsigned()) throw ParseError(ptr, "expected a non-negative integer");
  return j.get<std::uint64_t>();
}

bool boolean(const json& j, const std::string& ptr) {
  if (!j.is_boolean()) throw ParseError(ptr, "expected true or false");
  return j.get<bool>();
}

std::string string(const json& j, const std::string& ptr) {
  if (!j.is_string()) throw ParseError(ptr, "expected a string");
  return j.get<std::string>();
}

std::optional<double> optional_number(const json& obj, const std::string& ptr, std::string_view key) {
  const json& v = field(obj, ptr, key);
  if (v.is_null()) return std::nullopt;
  return number(v, child(ptr, key));
}

std::size_t vertex_id(const json& j, const std::string& ptr, std::size_t n) {
  const long long v = integer(j, ptr);
  if (v < 1 || static_cast<std::size_t>(v) > n)
    throw ParseError(ptr, "vertex id " + std::to_string(v) + " outside 1.." + std::to_string(n));
  return static_cast<std::size_t>(v - 1);
}

std::vector<int> int_vector(const json& j, const std::string& ptr) {
  std::vector<int> out;
  const json& arr = array_at(j, ptr);
  out.reserve(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const long long v = integer(arr[k], child(ptr, k));
    if (v < 0 || v > std::numeric_limits<int>::max()) throw ParseError(child(ptr, k), "out of range");
    out.push_back(static_cast<int>(v));
  }
  return out;
}

json optional_to_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json quantile_rows(std::string_view key_name, const std::vector<QuantileRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json r;
    r[std::string(key_name)] = row.key;
    for (std::size_t q = 0; q < kQuantileNames.size(); ++q) r[kQuantileNames[q]] = row.values[q];
    out.push_back(std::move(r));
  }
  return out;
}

json with_schema(json j) {
  j["schema_version"] = std::string(kSchemaVersion);
  return j;
}

void check_schema_version(const json& j) {
  if (!j.is_object()) throw ParseError("", "expected a JSON object at the top level");
  auto it = j.find("schema_version");
  if (it == j.end()) return;
  const std::string v = string(*it, "/schema_version");
  if (v != kSchemaVersion) throw ParseError("/schema_version", "unsupported schema_version \"" + v + "\"");
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') out += '\\';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

json parse_document(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("byte " + std::to_string(e.byte), e.what());
  }
  check_schema_version(j);
  return j;
}

GameDocument game_document_from_json(const json& j) {
  check_schema_version(j);
  GameDocument doc;
  const std::string kind = string(field(j, "", "kind"), "/kind");
  const long long n = integer(field(j, "", "n"), "/n");
  if (n < 1) throw ParseError("/n", "n must be at least 1");
  const auto size = static_cast<std::size_t>(n);

  if (kind == "degree") {
    if (j.contains("c")) throw ParseError("/c", "a degree game takes d, not c");
    const std::vector<int> d = int_vector(field(j, "", "d"), "/d");
    if (d.size() != size)
      throw ParseError("/d", "length " + std::to_string(d.size()) + " does not match n=" + std::to_string(n));
    doc.game = DegreeSequenceGame(DegreeSequence(d));
  } else if (kind == "link_bias") {
    if (j.contains("d")) throw ParseError("/d", "a link_bias game takes c, not d");
    const json& c = array_at(field(j, "", "c"), "/c");
    if (c.size() != size)
      throw ParseError("/c", std::to_string(c.size()) + " rows do not match n=" + std::to_string(n));
    std::vector<std::vector<double>> m(size);
    for (std::size_t r = 0; r < size; ++r) {
      const std::string rp = child(std::string("/c"), r);
      const json& row = array_at(c[r], rp);
      if (row.size() != size)
        throw ParseError(rp, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(n));
      for (std::size_t k = 0; k < size; ++k) m[r].push_back(number(row[k], child(rp, k)));
      if (m[r][r] != 0.0) throw ParseError(child(rp, r), "diagonal entry must be 0");
    }
    doc.game = LinkBiasGame(std::move(m));
  } else {
    throw ParseError("/kind", "unknown kind \"" + kind + "\" (expected degree or link_bias)");
  }

  if (auto it = j.find("labels"); it != j.end()) {
    const json& labels = array_at(*it, "/labels");
    if (labels.size() != size) throw ParseError("/labels", "expected one label per player");
    for (std::size_t k = 0; k < size; ++k) doc.labels.push_back(string(labels[k], child(std::string("/labels"), k)));
  }
  return doc;
}

GameDocument parse_game_document(std::string_view text) { return game_document_from_json(parse_document(text)); }

Game parse_game(std::string_view text) { return parse_game_document(text).game; }

LinkBiasGame parse_cost_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    ++line_no;
    start = end + 1;
    if (trim(line).empty()) continue;

    std::vector<double> row;
    std::size_t col = 0;
    std::size_t cell_start = 0;
    for (;;) {
      std::size_t comma = line.find(',', cell_start);
      if (comma == std::string_view::npos) comma = line.size();
      const std::string cell = trim(line.substr(cell_start, comma - cell_start));
      ++col;
      const std::string where = "line " + std::to_string(line_no) + ", column " + std::to_string(col);
      double v = 0.0;
      const char* first = cell.data();
      const char* last = cell.data() + cell.size();
      if (!cell.empty() && *first == '+') ++first;
      auto [ptr, ec] = std::from_chars(first, last, v);
      if (cell.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
        throw ParseError(where, "not a number: \"" + cell + "\"");
      row.push_back(v);
      if (comma == line.size()) break;
      cell_start = comma + 1;
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("", "empty cost matrix");
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != rows.size())
      throw ParseError("row " + std::to_string(r + 1), "has " + std::to_string(rows[r].size()) +
                                                           " entries, expected " + std::to_string(rows.size()));
    if (rows[r][r] != 0.0) throw ParseError("row " + std::to_string(r + 1), "diagonal entry must be 0");
  }
  return LinkBiasGame(std::move(rows));
}

std::size_t game_size(const Game& game) {
  return std::visit([](const auto& g) { return g.size(); }, game);
}

Game remove_player(const Game& game, std::size_t i) {
  return std::visit([i](const auto& g) -> Game { return g.without_player(i); }, game);
}

json to_json(const GameDocument& doc) {
  json j;
  j["schema_version"] = doc.schema_version;
  j["n"] = game_size(doc.game);
  if (const auto* dg = std::get_if<DegreeSequenceGame>(&doc.game)) {
    j["kind"] = "degree";
    j["d"] = dg->targets().values();
  } else {
    const auto& lb = std::get<LinkBiasGame>(doc.game);
    j["kind"] = "link_bias";
    json c = json::array();
    for (const auto& row : lb.matrix()) {
      json r = json::array();
      // whole numbers stay integers so the document looks like the input
      for (double v : row) {
        if (v == std::trunc(v) && std::abs(v) < 9e15) r.push_back(static_cast<long long>(v));
        else r.push_back(v);
      }
      c.push_back(std::move(r));
    }
    j["c"] = std::move(c);
  }
  if (!doc.labels.empty()) j["labels"] = doc.labels;
  return j;
}

std::string write_game(const GameDocument& doc) { return canonical_dump(to_json(doc)); }

std::string canonical_dump(const json& j) { return j.dump(2) + "\n"; }

json to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edges()) edges.push_back({i + 1, j + 1});
  return {{"n", g.size()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const json& j) {
  const long long n = integer(field(j, "", "n"), "/n");
  if (n < 0) throw ParseError("/n", "n must be non-negative");
  const auto size = static_cast<std::size_t>(n);
  const json& edges = array_at(field(j, "", "edges"), "/edges");
  GraphBuilder b(size);
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string p = child(std::string("/edges"), k);
    const json& e = array_at(edges[k], p);
    if (e.size() != 2) throw ParseError(p, "an edge is a pair of vertex ids");
    const std::size_t u = vertex_id(e[0], child(p, 0), size);
    const std::size_t v = vertex_id(e[1], child(p, 1), size);
    if (u == v) throw ParseError(p, "self-loop");
    if (b.has_edge(u, v)) throw ParseError(p, "duplicate edge");
    b.add_edge(u, v);
  }
  return b.build();
}

json to_json(const AnarchyReport& r) {
  return {{"orientation", r.orientation == Orientation::reward ? "reward" : "cost"},
          {"worst_stable_value", r.worst_stable_value},
          {"best_value", r.best_value},
          {"poa_difference", r.poa_difference},
          {"poa_ratio", optional_to_json(r.poa_ratio)},
          {"certified", r.certified}};
}

AnarchyReport anarchy_report_from_json(const json& j) {
  AnarchyReport r;
  const std::string o = string(field(j, "", "orientation"), "/orientation");
  if (o == "reward") r.orientation = Orientation::reward;
  else if (o == "cost") r.orientation = Orientation::cost;
  else throw ParseError("/orientation", "expected reward or cost");
  r.worst_stable_value = number(field(j, "", "worst_stable_value"), "/worst_stable_value");
  r.best_value = number(field(j, "", "best_value"), "/best_value");
  r.poa_difference = number(field(j, "", "poa_difference"), "/poa_difference");
  r.poa_ratio = optional_number(j, "", "poa_ratio");
  r.certified = boolean(field(j, "", "certified"), "/certified");
  return r;
}

json to_json(const WhatIfResult& r) {
  return {{"removed", r.removed + 1},
          {"report_before", to_json(r.report_before)},
          {"report_after", to_json(r.report_after)},
          {"delta_poa_ratio", optional_to_json(r.delta_poa_ratio)},
          {"communal_utility_change", r.communal_utility_change},
          {"degree", r.degree},
          {"eig_centrality", r.eig_centrality}};
}

WhatIfResult whatif_result_from_json(const json& j) {
  WhatIfResult r;
  const long long removed = integer(field(j, "", "removed"), "/removed");
  if (removed < 1) throw ParseError("/removed", "vertex ids start at 1");
  r.removed = static_cast<std::size_t>(removed - 1);
  for (auto [key, dest] : {std::pair{"report_before", &r.report_before}, std::pair{"report_after", &r.report_after}}) {
    const json& sub = field(j, "", key);
    try {
      *dest = anarchy_report_from_json(sub);
    } catch (const ParseError& e) {
      throw ParseError(child(std::string(), key) + e.where(), e.message());
    }
  }
  r.delta_poa_ratio = optional_number(j, "", "delta_poa_ratio");
  r.communal_utility_change = number(field(j, "", "communal_utility_change"), "/communal_utility_change");
  r.degree = static_cast<int>(integer(field(j, "", "degree"), "/degree"));
  r.eig_centrality = number(field(j, "", "eig_centrality"), "/eig_centrality");
  return r;
}

json to_json(const SummaryTable& table) {
  json rows = json::array();
  for (const auto& r : table) rows.push_back(to_json(r));
  json pareto = json::array();
  if (!table.empty())
    for (std::size_t v : pareto_targets(table)) pareto.push_back(v + 1);
  return {{"rows", std::move(rows)}, {"pareto", std::move(pareto)}};
}

SummaryTable summary_table_from_json(const json& j) {
  const json& rows = array_at(field(j, "", "rows"), "/rows");
  SummaryTable table;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    try {
      table.push_back(whatif_result_from_json(rows[k]));
    } catch (const ParseError& e) {
      throw ParseError(child(std::string("/rows"), k) + e.where(), e.message());
    }
  }
  return table;
}

json to_json(const BatchStatistics& stats) {
  json hist = json::array();
  for (const auto& [poa, count] : stats.poa_histogram) hist.push_back({{"poa", poa}, {"count", count}});
  return {{"degree_counts", quantile_rows("degree", stats.degree_counts)},
          {"poa_histogram", std::move(hist)},
          {"deficit_by_target", quantile_rows("target_degree", stats.deficit_by_target)}};
}

json to_json(const SimulationBatch& batch) {
  json runs = json::array();
  for (const auto& run : batch.runs)
    runs.push_back({{"seed", run.seed}, {"degrees", run.degrees}, {"poa", run.poa}});
  return {{"targets", batch.targets},
          {"master_seed", batch.master_seed},
          {"best_objective", batch.best_objective},
          {"best_optimal", batch.best_optimal},
          {"runs", std::move(runs)},
          {"statistics", to_json(batch_statistics(batch))}};
}

SimulationBatch simulation_batch_from_json(const json& j) {
  SimulationBatch b;
  b.targets = int_vector(field(j, "", "targets"), "/targets");
  b.master_seed = unsigned_integer(field(j, "", "master_seed"), "/master_seed");
  b.best_objective = integer(field(j, "", "best_objective"), "/best_objective");
  b.best_optimal = boolean(field(j, "", "best_optimal"), "/best_optimal");
  const json& runs = array_at(field(j, "", "runs"), "/runs");
  for (std::size_t k = 0; k < runs.size(); ++k) {
    const std::string p = child(std::string("/runs"), k);
    SimulationRun run;
    run.seed = unsigned_integer(field(runs[k], p, "seed"), child(p, "seed"));
    run.degrees = int_vector(field(runs[k], p, "degrees"), child(p, "degrees"));
    if (run.degrees.size() != b.targets.size()) throw ParseError(child(p, "degrees"), "length does not match targets");
    run.poa = integer(field(runs[k], p, "poa"), child(p, "poa"));
    b.runs.push_back(std::move(run));
  }
  return b;
}

json to_json(const SolveResult& r) {
  json j = {{"graph", to_json(r.graph)},
            {"objective", r.objective},
            {"optimal", r.optimal},
            {"nodes_explored", r.nodes_explored}};
  j["deficits"] = r.deficits ? json(*r.deficits) : json(nullptr);
  return j;
}

SolveResult solve_result_from_json(const json& j) {
  SolveResult r;
  try {
    r.graph = graph_from_json(field(j, "", "graph"));
  } catch (const ParseError& e) {
    throw ParseError("/graph" + e.where(), e.message());
  }
  r.objective = number(field(j, "", "objective"), "/objective");
  r.optimal = boolean(field(j, "", "optimal"), "/optimal");
  r.nodes_explored = unsigned_integer(field(j, "", "nodes_explored"), "/nodes_explored");
  const json& d = field(j, "", "deficits");
  if (!d.is_null()) {
    r.deficits.emplace();
    const json& arr = array_at(d, "/deficits");
    for (std::size_t k = 0; k < arr.size(); ++k)
      r.deficits->push_back(static_cast<int>(integer(arr[k], child(std::string("/deficits"), k))));
  }
  return r;
}

std::string write_report(const Graph& g) { return canonical_dump(with_schema(to_json(g))); }
std::string write_report(const AnarchyReport& r) { return canonical_dump(with_schema(to_json(r))); }
std::string write_report(const WhatIfResult& r) { return canonical_dump(with_schema(to_json(r))); }
std::string write_report(const SummaryTable& table) { return canonical_dump(with_schema(to_json(table))); }
std::string write_report(const SimulationBatch& batch) { return canonical_dump(with_schema(to_json(batch))); }
std::string write_report(const SolveResult& r) { return canonical_dump(with_schema(to_json(r))); }

Graph read_graph(std::string_view text) { return graph_from_json(parse_document(text)); }
AnarchyReport read_anarchy_report(std::string_view text) { return anarchy_report_from_json(parse_document(text)); }
WhatIfResult read_whatif_result(std::string_view text) { return whatif_result_from_json(parse_document(text)); }
SummaryTable read_summary_table(std::string_view text) { return summary_table_from_json(parse_document(text)); }
SimulationBatch read_simulation_batch(std::string_view text) {
  return simulation_batch_from_json(parse_document(text));
}
SolveResult read_solve_result(std::string_view text) { return solve_result_from_json(parse_document(text)); }

std::string export_dot(const Graph& g, std::span<const Vertex> highlight, std::span<const std::string> labels) {
  if (!labels.empty() && labels.size() != g.size())
    throw std::invalid_argument("export_dot: expected one label per vertex");
  std::set<Vertex> marked;
  for (Vertex v : highlight) {
    if (v >= g.size()) throw std::out_of_range("export_dot: highlighted vertex out of range");
    marked.insert(v);
  }
  std::ostringstream out;
  out << "graph G {\n  node [shape=circle];\n";
  for (Vertex v = 0; v < g.size(); ++v) {
    out << "  " << v + 1;
    std::vector<std::string> attrs;
    if (!labels.empty()) attrs.push_back("label=" + dot_quote(labels[v]));
    if (marked.count(v)) attrs.push_back("style=filled, fillcolor=\"#f4a582\", penwidth=2");
    if (!attrs.empty()) {
      out << " [";
      for (std::size_t k = 0; k < attrs.size(); ++k) out << (k ? ", " : "") << attrs[k];
      out << "]";
    }
    out << ";\n";
  }
  for (const auto& [i, j] : g.edges()) out << "  " << i + 1 << " -- " << j + 1 << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace netgame
