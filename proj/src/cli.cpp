#include "netgame/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <csignal>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "netgame/io_formats.hpp"
#include "netgame/service.hpp"

namespace netgame {

namespace {

// Input or environment problem that should end the run with exit code 2.
struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string game;
  std::string out;
  std::string target = "worst-stable";
  std::string format = "json";
  std::string degrees;
  std::string graph;
  std::string dot;
  std::vector<int> highlight;
  std::optional<int> remove;
  bool all = false;
  std::size_t runs = 100;
  std::uint64_t seed = 0;
  unsigned threads = 0;
  std::uint64_t node_budget = SolverOptions{}.node_budget;
  std::optional<int> port;
  std::string host = "127.0.0.1";
  std::string snapshot;
  double sync_threshold = ServiceOptions{}.sync_threshold_seconds;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const Options& opt, const std::string& text, std::ostream& out) {
  if (opt.out.empty() || opt.out == "-") {
    out << text;
    return;
  }
  std::ofstream file(opt.out, std::ios::binary);
  if (!file) throw Failure("cannot write " + opt.out);
  file << text;
  if (!file) throw Failure("error writing " + opt.out);
}

bool has_csv_extension(const std::string& path) {
  std::string ext = std::filesystem::path(path).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".csv";
}

GameDocument load_game(const std::string& path) {
  const std::string text = read_file(path);
  try {
    if (has_csv_extension(path)) return GameDocument{std::string(kSchemaVersion), parse_cost_csv(text), {}};
    return parse_game_document(text);
  } catch (const ParseError& e) {
    throw Failure(path + ": " + e.what());
  }
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string(); }

std::string whatif_csv(const SummaryTable& rows) {
  std::ostringstream out;
  out << "vertex,degree,eig_centrality,poa_difference,communal_utility_change,worst_stable_after,best_after,"
         "poa_ratio_after\n";
  for (const auto& r : rows) {
    out << r.removed + 1 << ',' << r.degree << ',' << format_double(r.eig_centrality) << ','
        << format_optional(r.delta_poa_ratio) << ',' << format_double(r.communal_utility_change) << ','
        << format_double(r.report_after.worst_stable_value) << ',' << format_double(r.report_after.best_value)
        << ',' << format_optional(r.report_after.poa_ratio) << '\n';
  }
  return out.str();
}

void warn_if_uncertified(bool optimal, std::ostream& err) {
  if (!optimal) err << "warning: node budget exhausted; result is the best found, not certified optimal\n";
}

int cmd_solve(const Options& opt, std::ostream& out, std::ostream& err) {
  const GameDocument doc = load_game(opt.game);
  const SolverOptions solver{opt.node_budget};
  const bool best = opt.target == "best";
  SolveResult r;
  if (const auto* lb = std::get_if<LinkBiasGame>(&doc.game)) {
    r = best ? best_graph_link_bias(*lb) : stable_graph_link_bias(*lb);
  } else {
    const auto& d = std::get<DegreeSequenceGame>(doc.game).targets();
    r = best ? best_graph_degree(d, solver) : worst_stable_degree(d, solver);
  }
  warn_if_uncertified(r.optimal, err);
  emit(opt, write_report(r), out);
  return kExitOk;
}

int cmd_anarchy(const Options& opt, std::ostream& out, std::ostream& err) {
  const GameDocument doc = load_game(opt.game);
  AnarchyReport r;
  if (const auto* lb = std::get_if<LinkBiasGame>(&doc.game)) {
    r = anarchy_report(*lb);
  } else {
    r = anarchy_report_degree(std::get<DegreeSequenceGame>(doc.game).targets(), SolverOptions{opt.node_budget});
  }
  warn_if_uncertified(r.certified, err);
  emit(opt, write_report(r), out);
  return kExitOk;
}

int cmd_whatif(const Options& opt, std::ostream& out, std::ostream& err) {
  const GameDocument doc = load_game(opt.game);
  const SolverOptions solver{opt.node_budget};
  const std::size_t n = game_size(doc.game);
  if (n < 2) throw Failure("what-if analysis needs at least two players");

  SummaryTable rows;
  if (opt.all) {
    if (const auto* lb = std::get_if<LinkBiasGame>(&doc.game)) rows = summary_table(*lb);
    else rows = summary_table(std::get<DegreeSequenceGame>(doc.game), solver);
  } else {
    if (*opt.remove > static_cast<int>(n))
      throw Failure("--remove " + std::to_string(*opt.remove) + " is outside 1.." + std::to_string(n));
    const auto k = static_cast<std::size_t>(*opt.remove - 1);
    if (const auto* lb = std::get_if<LinkBiasGame>(&doc.game)) rows.push_back(whatif_remove(*lb, k));
    else rows.push_back(whatif_remove(std::get<DegreeSequenceGame>(doc.game), k, solver));
  }
  for (const auto& r : rows) warn_if_uncertified(r.report_before.certified && r.report_after.certified, err);

  if (opt.format == "csv") emit(opt, whatif_csv(rows), out);
  else if (opt.all) emit(opt, write_report(rows), out);
  else emit(opt, write_report(rows.front()), out);
  return kExitOk;
}

int cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
  const GameDocument doc = load_game(opt.game);
  const auto* game = std::get_if<DegreeSequenceGame>(&doc.game);
  if (!game) throw Failure("simulate needs a degree game");
  SimulationOptions sim;
  sim.threads = opt.threads;
  sim.solver.node_budget = opt.node_budget;
  const SimulationBatch batch = simulate_batch(game->targets(), opt.runs, opt.seed, sim);
  warn_if_uncertified(batch.best_optimal, err);
  if (opt.format == "csv") {
    const BatchStatistics stats = batch_statistics(batch);
    emit(opt, degree_counts_csv(stats) + "\n" + poa_histogram_csv(stats) + "\n" + deficit_by_target_csv(stats), out);
  } else {
    emit(opt, write_report(batch), out);
  }
  return kExitOk;
}

int cmd_construct_costs(const Options& opt, std::ostream& out, std::ostream& err) {
  const GameDocument doc = load_game(opt.degrees);
  const auto* game = std::get_if<DegreeSequenceGame>(&doc.game);
  if (!game) throw Failure(opt.degrees + ": expected a degree game");
  const CostConstruction cc = construct_cost_matrix(game->targets(), SolverOptions{opt.node_budget});
  warn_if_uncertified(cc.optimal, err);
  err << "stable graph is at l1 distance " << cc.distance << " from the targets\n";
  emit(opt, write_game(GameDocument{std::string(kSchemaVersion), cc.game, doc.labels}), out);
  return kExitOk;
}

int cmd_export(const Options& opt, std::ostream& out) {
  const std::string text = read_file(opt.graph);
  Graph g;
  try {
    nlohmann::json j = parse_document(text);
    // a solve report wraps the graph
    g = graph_from_json(j.contains("graph") ? j.at("graph") : j);
  } catch (const ParseError& e) {
    throw Failure(opt.graph + ": " + e.what());
  }
  std::vector<Vertex> highlight;
  for (int v : opt.highlight) {
    if (v < 1 || static_cast<std::size_t>(v) > g.size())
      throw Failure("--highlight " + std::to_string(v) + " is outside 1.." + std::to_string(g.size()));
    highlight.push_back(static_cast<Vertex>(v - 1));
  }
  Options target = opt;
  target.out = opt.dot;
  emit(target, export_dot(g, highlight), out);
  return kExitOk;
}

std::atomic<bool> g_stop_requested{false};

extern "C" void request_stop(int) { g_stop_requested = true; }

int cmd_serve(const Options& opt, std::ostream& out, std::ostream& err) {
  ServiceOptions so;
  so.solver.node_budget = opt.node_budget;
  so.sync_threshold_seconds = opt.sync_threshold;
  Service service(so);
  if (!opt.snapshot.empty() && std::filesystem::exists(opt.snapshot)) {
    try {
      service.restore(parse_document(read_file(opt.snapshot)));
    } catch (const std::exception& e) {
      throw Failure(opt.snapshot + ": " + e.what());
    }
  }

  int port = 0;
  try {
    port = resolve_port(opt.port);
  } catch (const std::invalid_argument& e) {
    throw Failure(e.what());
  }
  HttpServer http(service);
  const int bound = http.bind(opt.host, port);
  if (bound < 0) throw Failure("cannot listen on " + opt.host + ":" + std::to_string(port));
  out << "listening on http://" << opt.host << ':' << bound << std::endl;

  g_stop_requested = false;
  auto old_int = std::signal(SIGINT, request_stop);
  auto old_term = std::signal(SIGTERM, request_stop);
  std::jthread watcher([&http](std::stop_token st) {
    while (!st.stop_requested() && !g_stop_requested) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    http.stop();
  });
  http.listen();
  watcher.request_stop();
  watcher.join();
  std::signal(SIGINT, old_int);
  std::signal(SIGTERM, old_term);

  if (!opt.snapshot.empty()) {
    Options target = opt;
    target.out = opt.snapshot;
    emit(target, canonical_dump(service.snapshot()), out);
    err << "session written to " << opt.snapshot << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  CLI::App app{"Network formation games: stable and best graphs, price of anarchy, what-if removal, simulation",
               "netgame"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();

  auto add_budget = [&](CLI::App* sub) {
    sub->add_option("--node-budget", opt.node_budget, "Branch-and-bound node limit")->check(CLI::PositiveNumber);
  };
  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", opt.out, "Write the result here instead of stdout"); };

  auto* solve = app.add_subcommand("solve", "Worst stable or best graph of a game");
  solve->add_option("--game", opt.game, "Game document (.json) or cost matrix (.csv)")->required();
  solve->add_option("--target", opt.target, "worst-stable or best")
      ->check(CLI::IsMember({"worst-stable", "best"}));
  add_budget(solve);
  add_out(solve);

  auto* anarchy = app.add_subcommand("anarchy", "Price of anarchy report");
  anarchy->add_option("--game", opt.game, "Game document (.json) or cost matrix (.csv)")->required();
  add_budget(anarchy);
  add_out(anarchy);

  auto* whatif = app.add_subcommand("whatif", "Vertex-removal analysis");
  whatif->add_option("--game", opt.game, "Game document (.json) or cost matrix (.csv)")->required();
  auto* remove = whatif->add_option("--remove", opt.remove, "Vertex to remove (1-based)")->check(CLI::PositiveNumber);
  auto* all = whatif->add_flag("--all", opt.all, "One row per vertex plus the Pareto set");
  remove->excludes(all);
  whatif->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_budget(whatif);
  add_out(whatif);

  auto* simulate = app.add_subcommand("simulate", "Decentralized link-formation runs");
  simulate->add_option("--game", opt.game, "Degree game document")->required();
  simulate->add_option("--runs", opt.runs, "Number of runs")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", opt.seed, "Master seed");
  simulate->add_option("--threads", opt.threads, "Worker threads (0 = hardware)");
  simulate->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  add_budget(simulate);
  add_out(simulate);

  auto* construct = app.add_subcommand("construct-costs", "Cost matrix whose stable graph is closest to d");
  construct->add_option("--degrees", opt.degrees, "Degree game document")->required();
  add_budget(construct);
  add_out(construct);

  auto* exp = app.add_subcommand("export", "Graph to Graphviz DOT");
  exp->add_option("--graph", opt.graph, "Graph document or solve report")->required();
  exp->add_option("--dot", opt.dot, "Output DOT file ('-' for stdout)")->required();
  exp->add_option("--highlight", opt.highlight, "Vertices to highlight (1-based)")->delimiter(',');

  auto* serve = app.add_subcommand("serve", "HTTP/JSON service");
  serve->add_option("--port", opt.port, "Port (default: NETGAME_PORT or 8080)")->check(CLI::Range(0, 65535));
  serve->add_option("--host", opt.host, "Interface to bind");
  serve->add_option("--snapshot", opt.snapshot, "Load sessions from and save them to this file");
  serve->add_option("--sync-threshold", opt.sync_threshold, "Seconds of estimated work answered inline")
      ->check(CLI::NonNegativeNumber);
  add_budget(serve);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
    if (whatif->parsed() && !opt.remove && !opt.all) throw CLI::RequiredError("--remove K or --all");
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return cmd_solve(opt, out, err);
    if (anarchy->parsed()) return cmd_anarchy(opt, out, err);
    if (whatif->parsed()) return cmd_whatif(opt, out, err);
    if (simulate->parsed()) return cmd_simulate(opt, out, err);
    if (construct->parsed()) return cmd_construct_costs(opt, out, err);
    if (exp->parsed()) return cmd_export(opt, out);
    return cmd_serve(opt, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace netgame
