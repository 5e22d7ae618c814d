#include "netgame/service.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>

#include <httplib.h>

namespace netgame {

using nlohmann::json;

namespace {

struct HttpError : std::runtime_error {
  HttpError(int status, const std::string& message) : std::runtime_error(message), status(status) {}
  int status;
};

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (start < path.size()) {
    std::size_t end = path.find('/', start);
    if (end == std::string_view::npos) end = path.size();
    if (end > start) parts.emplace_back(path.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

Response error_response(int status, const std::string& message) {
  return {status, {{"error", {{"status", status}, {"message", message}}},
                   {"schema_version", std::string(kSchemaVersion)}}};
}

// Maps whatever a computation threw onto an HTTP status.
Response response_for_current_exception() {
  try {
    throw;
  } catch (const HttpError& e) {
    return error_response(e.status, e.what());
  } catch (const ParseError& e) {
    return error_response(400, e.what());
  } catch (const std::out_of_range& e) {
    return error_response(422, e.what());
  } catch (const std::invalid_argument& e) {
    return error_response(422, e.what());
  } catch (const std::domain_error& e) {
    return error_response(422, e.what());
  } catch (const std::exception& e) {
    return error_response(500, e.what());
  }
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  try {
    json j = json::parse(body);
    if (!j.is_object()) throw HttpError(400, "request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw HttpError(400, e.what());
  }
}

bool is_link_bias(const GameDocument& doc) { return std::holds_alternative<LinkBiasGame>(doc.game); }

double cube(double n) { return n * n * n; }

// Rough wall-clock guesses used only to decide between answering inline and
// starting a job.
double estimate_solve(const GameDocument& doc) {
  const double n = static_cast<double>(game_size(doc.game));
  return is_link_bias(doc) ? n * n * 1e-8 : cube(n) * 1e-6;
}

double estimate_summary(const GameDocument& doc) {
  const double n = static_cast<double>(game_size(doc.game));
  return (n + 1) * estimate_solve(doc) * (is_link_bias(doc) ? 1.0 : 2.0);
}

double estimate_simulation(const GameDocument& doc, std::size_t runs) {
  const double n = static_cast<double>(game_size(doc.game));
  return static_cast<double>(runs) * n * n * 2e-8 + estimate_solve(doc);
}

std::size_t removal_index(const json& body, std::size_t n) {
  auto it = body.find("remove");
  if (it == body.end()) throw HttpError(400, "body needs a \"remove\" vertex id");
  if (!it->is_number_integer()) throw HttpError(400, "\"remove\" must be an integer vertex id");
  const long long k = it->get<long long>();
  if (n < 2) throw HttpError(422, "cannot remove a player from a one-player game");
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw HttpError(422, "vertex " + std::to_string(k) + " outside 1.." + std::to_string(n));
  return static_cast<std::size_t>(k - 1);
}

}  // namespace

std::string content_hash(const Game& game) {
  GameDocument doc;
  doc.game = game;
  const std::string text = write_game(doc);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) out[static_cast<std::size_t>(k)] = kHex[h & 0xF];
  return out;
}

Service::Service(ServiceOptions options) : options_(std::move(options)) {}

Service::~Service() { wait_for_jobs(); }

void Service::wait_for_jobs() {
  std::vector<std::shared_future<json>> pending;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [id, job] : jobs_) pending.push_back(job->result);
  }
  for (auto& f : pending) f.wait();
}

std::shared_ptr<const Service::GameEntry> Service::find_game(const std::string& id) const {
  std::lock_guard lock(mutex_);
  auto it = games_.find(id);
  if (it == games_.end()) throw HttpError(404, "unknown game id \"" + id + "\"");
  return it->second;
}

std::shared_ptr<const Service::GameEntry> Service::add_game(GameDocument doc,
                                                            std::optional<std::string> parent,
                                                            std::optional<std::size_t> removed) {
  auto entry = std::make_shared<GameEntry>();
  entry->hash = content_hash(doc.game);
  entry->doc = std::make_shared<const GameDocument>(std::move(doc));
  entry->parent = std::move(parent);
  entry->removed = removed;
  std::lock_guard lock(mutex_);
  if (entry->parent && entry->removed) {
    auto key = std::pair{*entry->parent, *entry->removed};
    if (auto it = derived_.find(key); it != derived_.end()) return games_.at(it->second);
    entry->id = "g" + std::to_string(next_game_++);
    derived_[key] = entry->id;
  } else {
    entry->id = "g" + std::to_string(next_game_++);
  }
  games_[entry->id] = entry;
  return entry;
}

std::shared_future<json> Service::cached(const std::string& key, Compute compute) {
  std::promise<json> promise;
  {
    std::lock_guard lock(mutex_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    cache_[key] = promise.get_future().share();
  }
  try {
    promise.set_value(compute());
  } catch (...) {
    promise.set_exception(std::current_exception());
  }
  std::lock_guard lock(mutex_);
  return cache_.at(key);
}

Response Service::run_or_defer(const GameEntry& game, const std::string& op, const std::string& key,
                               double estimated_seconds, Compute compute) {
  std::shared_ptr<Job> job;
  {
    std::lock_guard lock(mutex_);
    auto hit = cache_.find(key);
    const bool ready = hit != cache_.end() &&
                       hit->second.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
    if (!ready && estimated_seconds > options_.sync_threshold_seconds) {
      if (auto j = job_by_key_.find(key); j != job_by_key_.end()) {
        job = jobs_.at(j->second);
      } else {
        job = std::make_shared<Job>();
        job->id = "j" + std::to_string(next_job_++);
        job->kind = op;
        job->game_id = game.id;
        std::promise<json> started;
        job->result = started.get_future().share();
        jobs_[job->id] = job;
        job_by_key_[key] = job->id;
        workers_.emplace_back([this, key, compute, started = std::move(started)]() mutable {
          try {
            started.set_value(cached(key, compute).get());
          } catch (...) {
            started.set_exception(std::current_exception());
          }
        });
      }
    }
  }
  if (job) {
    return game_response(game, {{"job_id", job->id}, {"status", "pending"}, {"poll", "/jobs/" + job->id}}, 202);
  }
  return game_response(game, cached(key, std::move(compute)).get());
}

Response Service::game_response(const GameEntry& game, json body, int status) const {
  body["game_id"] = game.id;
  body["content_hash"] = game.hash;
  body["schema_version"] = std::string(kSchemaVersion);
  return {status, std::move(body)};
}

Response Service::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    const auto parts = split_path(path);
    const bool get = method == "GET";
    const bool post = method == "POST";
    if (parts.empty()) throw HttpError(404, "no route for " + std::string(path));

    if (parts[0] == "jobs" && parts.size() == 2) {
      if (!get) throw HttpError(405, "use GET");
      return get_job(parts[1]);
    }
    if (parts[0] != "games" || parts.size() > 3) throw HttpError(404, "no route for " + std::string(path));
    if (parts.size() == 1) {
      if (!post) throw HttpError(405, "use POST");
      return create_game(body);
    }

    const auto game = find_game(parts[1]);
    if (parts.size() == 2) {
      if (!get) throw HttpError(405, "use GET");
      return get_game(*game);
    }
    const std::string& op = parts[2];
    if (op == "stable" || op == "best" || op == "anarchy" || op == "summary") {
      if (!get) throw HttpError(405, "use GET");
      if (op == "anarchy") return get_anarchy(*game);
      if (op == "summary") return get_summary(*game);
      return get_solve(*game, op == "best");
    }
    if (op == "whatif" || op == "undo" || op == "simulate") {
      if (!post) throw HttpError(405, "use POST");
      if (op == "whatif") return post_whatif(*game, body);
      if (op == "undo") return post_undo(*game);
      return post_simulate(*game, body);
    }
    throw HttpError(404, "no route for " + std::string(path));
  } catch (...) {
    return response_for_current_exception();
  }
}

Response Service::create_game(std::string_view body) {
  GameDocument doc = parse_game_document(body);
  const auto entry = add_game(std::move(doc), std::nullopt, std::nullopt);
  return game_response(*entry, {{"kind", is_link_bias(*entry->doc) ? "link_bias" : "degree"},
                                {"n", game_size(entry->doc->game)}},
                       201);
}

Response Service::get_game(const GameEntry& game) const {
  json body = {{"document", to_json(*game.doc)}};
  body["parent_id"] = game.parent ? json(*game.parent) : json(nullptr);
  body["removed"] = game.removed ? json(*game.removed + 1) : json(nullptr);
  return game_response(game, std::move(body));
}

Response Service::get_solve(const GameEntry& game, bool best) {
  const auto doc = game.doc;
  const SolverOptions solver = options_.solver;
  const std::string op = best ? "best" : "stable";
  return run_or_defer(game, op, game.hash + ":" + op, estimate_solve(*doc), [doc, solver, best] {
    SolveResult r;
    double payoff = 0.0;
    if (const auto* lb = std::get_if<LinkBiasGame>(&doc->game)) {
      r = best ? best_graph_link_bias(*lb) : stable_graph_link_bias(*lb);
      payoff = r.objective;
    } else {
      const auto& d = std::get<DegreeSequenceGame>(doc->game).targets();
      r = best ? best_graph_degree(d, solver) : worst_stable_degree(d, solver);
      payoff = -r.objective;
    }
    json body = to_json(r);
    body["communal_payoff"] = payoff;
    return body;
  });
}

Response Service::get_anarchy(const GameEntry& game) {
  const auto doc = game.doc;
  const SolverOptions solver = options_.solver;
  return run_or_defer(game, "anarchy", game.hash + ":anarchy", 2 * estimate_solve(*doc), [doc, solver] {
    if (const auto* lb = std::get_if<LinkBiasGame>(&doc->game)) return to_json(anarchy_report(*lb));
    return to_json(anarchy_report_degree(std::get<DegreeSequenceGame>(doc->game).targets(), solver));
  });
}

Response Service::get_summary(const GameEntry& game) {
  const auto doc = game.doc;
  const SolverOptions solver = options_.solver;
  return run_or_defer(game, "summary", game.hash + ":summary", estimate_summary(*doc), [doc, solver] {
    if (const auto* lb = std::get_if<LinkBiasGame>(&doc->game)) return to_json(summary_table(*lb));
    return to_json(summary_table(std::get<DegreeSequenceGame>(doc->game), solver));
  });
}

Response Service::post_whatif(const GameEntry& game, std::string_view body) {
  const std::size_t k = removal_index(parse_body(body), game_size(game.doc->game));
  const auto doc = game.doc;
  const SolverOptions solver = options_.solver;
  const json result = cached(game.hash + ":whatif:" + std::to_string(k), [doc, solver, k] {
    if (const auto* lb = std::get_if<LinkBiasGame>(&doc->game)) return to_json(whatif_remove(*lb, k));
    return to_json(whatif_remove(std::get<DegreeSequenceGame>(doc->game), k, solver));
  }).get();

  GameDocument reduced;
  reduced.game = remove_player(doc->game, k);
  if (!doc->labels.empty()) {
    reduced.labels = doc->labels;
    reduced.labels.erase(reduced.labels.begin() + static_cast<std::ptrdiff_t>(k));
  }
  const auto child = add_game(std::move(reduced), game.id, k);
  return game_response(*child, {{"result", result}, {"parent_id", game.id}});
}

Response Service::post_undo(const GameEntry& game) const {
  if (!game.parent) throw HttpError(409, "game " + game.id + " is not derived from another game");
  const auto parent = find_game(*game.parent);
  return game_response(*parent, {{"undone", game.id}});
}

Response Service::post_simulate(const GameEntry& game, std::string_view body) {
  if (is_link_bias(*game.doc)) throw HttpError(409, "simulation applies to degree games only");
  const json req = parse_body(body);
  auto runs_it = req.find("runs");
  if (runs_it == req.end() || !runs_it->is_number_integer()) throw HttpError(400, "body needs integer \"runs\"");
  const long long runs = runs_it->get<long long>();
  if (runs < 1 || static_cast<std::size_t>(runs) > options_.max_simulation_runs)
    throw HttpError(422, "runs must be between 1 and " + std::to_string(options_.max_simulation_runs));
  std::uint64_t seed = 0;
  if (auto s = req.find("seed"); s != req.end()) {
    if (!s->is_number_unsigned()) throw HttpError(400, "\"seed\" must be a non-negative integer");
    seed = s->get<std::uint64_t>();
  }

  const auto doc = game.doc;
  SimulationOptions sim;
  sim.solver = options_.solver;
  const auto n_runs = static_cast<std::size_t>(runs);
  const std::string key = game.hash + ":simulate:" + std::to_string(runs) + ":" + std::to_string(seed);
  return run_or_defer(game, "simulate", key, estimate_simulation(*doc, n_runs), [doc, sim, n_runs, seed] {
    return to_json(simulate_batch(std::get<DegreeSequenceGame>(doc->game).targets(), n_runs, seed, sim));
  });
}

Response Service::get_job(const std::string& id) {
  std::shared_ptr<Job> job;
  {
    std::lock_guard lock(mutex_);
    auto it = jobs_.find(id);
    if (it == jobs_.end()) throw HttpError(404, "unknown job id \"" + id + "\"");
    job = it->second;
  }
  json body = {{"job_id", job->id}, {"kind", job->kind}, {"game_id", job->game_id},
               {"schema_version", std::string(kSchemaVersion)}};
  if (job->result.wait_for(std::chrono::seconds(0)) != std::future_status::ready) {
    body["status"] = "running";
    return {200, body};
  }
  try {
    body["result"] = job->result.get();
    body["status"] = "done";
  } catch (...) {
    body["status"] = "failed";
    body["error"] = response_for_current_exception().body["error"];
  }
  return {200, body};
}

json Service::snapshot() const {
  std::lock_guard lock(mutex_);
  json games = json::array();
  for (const auto& [id, entry] : games_) {
    games.push_back({{"id", id},
                     {"document", to_json(*entry->doc)},
                     {"parent_id", entry->parent ? json(*entry->parent) : json(nullptr)},
                     {"removed", entry->removed ? json(*entry->removed + 1) : json(nullptr)}});
  }
  return {{"schema_version", std::string(kSchemaVersion)}, {"next_game", next_game_}, {"games", games}};
}

void Service::restore(const json& snapshot) {
  std::map<std::string, std::shared_ptr<const GameEntry>> games;
  std::map<std::pair<std::string, std::size_t>, std::string> derived;
  for (const auto& g : snapshot.at("games")) {
    auto entry = std::make_shared<GameEntry>();
    entry->id = g.at("id").get<std::string>();
    entry->doc = std::make_shared<const GameDocument>(game_document_from_json(g.at("document")));
    entry->hash = content_hash(entry->doc->game);
    if (!g.at("parent_id").is_null()) entry->parent = g.at("parent_id").get<std::string>();
    if (!g.at("removed").is_null()) entry->removed = g.at("removed").get<std::size_t>() - 1;
    if (entry->parent && entry->removed) derived[{*entry->parent, *entry->removed}] = entry->id;
    games[entry->id] = entry;
  }
  std::lock_guard lock(mutex_);
  games_ = std::move(games);
  derived_ = std::move(derived);
  next_game_ = snapshot.at("next_game").get<std::uint64_t>();
}

int resolve_port(std::optional<int> flag) {
  int port = 8080;
  if (flag) {
    port = *flag;
  } else if (const char* env = std::getenv("NETGAME_PORT"); env && *env) {
    try {
      std::size_t used = 0;
      port = std::stoi(env, &used);
      if (used != std::string_view(env).size()) throw std::invalid_argument(env);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("NETGAME_PORT is not a port number: ") + env);
    }
  }
  if (port < 0 || port > 65535) throw std::invalid_argument("port out of range: " + std::to_string(port));
  return port;
}

struct HttpServer::Impl {
  explicit Impl(Service& s) : service(s) {}
  Service& service;
  httplib::Server server;
};

HttpServer::HttpServer(Service& service, std::string cors_origin)
    : impl_(std::make_unique<Impl>(service)) {
  auto& svr = impl_->server;
  svr.set_default_headers({{"Access-Control-Allow-Origin", cors_origin},
                           {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                           {"Access-Control-Allow-Headers", "Content-Type"}});
  auto route = [this](const httplib::Request& req, httplib::Response& res) {
    const Response r = impl_->service.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(canonical_dump(r.body), "application/json");
  };
  svr.Get(R"(/.*)", route);
  svr.Post(R"(/.*)", route);
  svr.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool HttpServer::listen() { return impl_->server.listen_after_bind(); }

void HttpServer::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace netgame
