#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "netgame/anarchy.hpp"
#include "netgame/games.hpp"
#include "netgame/graph.hpp"
#include "netgame/simulator.hpp"
#include "netgame/solvers.hpp"

namespace netgame {

inline constexpr std::string_view kSchemaVersion = "1";

/// Malformed or invalid document. `where` is a JSON pointer ("/c/2/2"), a
/// "line L, column C" position, or empty when the whole document is at fault.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string where, const std::string& message);
  const std::string& where() const noexcept { return where_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string where_;
  std::string message_;
};

using Game = std::variant<DegreeSequenceGame, LinkBiasGame>;

struct GameDocument {
  std::string schema_version{kSchemaVersion};
  Game game;
  std::vector<std::string> labels;  // empty or one per player
};

GameDocument parse_game_document(std::string_view text);
Game parse_game(std::string_view text);
GameDocument game_document_from_json(const nlohmann::json& j);

/// Cost matrix as CSV: one row per line, comma-separated numbers.
LinkBiasGame parse_cost_csv(std::string_view text);

std::size_t game_size(const Game& game);
Game remove_player(const Game& game, std::size_t i);

nlohmann::json to_json(const GameDocument& doc);
std::string write_game(const GameDocument& doc);

// Reports. Vertex ids are 1-based in every document.
nlohmann::json to_json(const Graph& g);
nlohmann::json to_json(const AnarchyReport& r);
nlohmann::json to_json(const WhatIfResult& r);
nlohmann::json to_json(const SummaryTable& table);
nlohmann::json to_json(const SimulationBatch& batch);
nlohmann::json to_json(const BatchStatistics& stats);
nlohmann::json to_json(const SolveResult& r);

Graph graph_from_json(const nlohmann::json& j);
AnarchyReport anarchy_report_from_json(const nlohmann::json& j);
WhatIfResult whatif_result_from_json(const nlohmann::json& j);
SummaryTable summary_table_from_json(const nlohmann::json& j);
SimulationBatch simulation_batch_from_json(const nlohmann::json& j);
SolveResult solve_result_from_json(const nlohmann::json& j);

/// Canonical text: sorted keys, two-space indent, shortest round-trip floats,
/// trailing newline. Top-level objects carry schema_version.
std::string canonical_dump(const nlohmann::json& j);

std::string write_report(const Graph& g);
std::string write_report(const AnarchyReport& r);
std::string write_report(const WhatIfResult& r);
std::string write_report(const SummaryTable& table);
/// Includes the batch statistics, so an empty batch throws.
std::string write_report(const SimulationBatch& batch);
std::string write_report(const SolveResult& r);

/// Parses text and checks schema_version before handing off to *_from_json.
nlohmann::json parse_document(std::string_view text);

Graph read_graph(std::string_view text);
AnarchyReport read_anarchy_report(std::string_view text);
WhatIfResult read_whatif_result(std::string_view text);
SummaryTable read_summary_table(std::string_view text);
SimulationBatch read_simulation_batch(std::string_view text);
SolveResult read_solve_result(std::string_view text);

/// Undirected DOT with 1-based node names. Highlight entries are 0-based.
std::string export_dot(const Graph& g, std::span<const Vertex> highlight = {},
                       std::span<const std::string> labels = {});

}  // namespace netgame
