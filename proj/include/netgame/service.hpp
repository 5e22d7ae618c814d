#pragma once

#include <cstdint>
#include <functional>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "netgame/io_formats.hpp"

namespace netgame {

struct ServiceOptions {
  /// Requests whose estimated work exceeds this run as background jobs.
  double sync_threshold_seconds = 2.0;
  SolverOptions solver;
  /// Upper bound on runs accepted by /simulate.
  std::size_t max_simulation_runs = 1'000'000;
};

struct Response {
  int status = 200;
  nlohmann::json body;
};

/// 64-bit FNV-1a of the game's canonical content (labels excluded), as 16
/// lowercase hex digits.
std::string content_hash(const Game& game);

/// Transport-independent request handling over an in-memory session store.
/// Thread-safe; all cached data is immutable once inserted.
class Service {
 public:
  explicit Service(ServiceOptions options = {});
  ~Service();
  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  Response handle(std::string_view method, std::string_view path, std::string_view body);

  /// Loaded games and their derivation links, for restoring a later session.
  nlohmann::json snapshot() const;
  void restore(const nlohmann::json& snapshot);

  /// Blocks until every background job has finished.
  void wait_for_jobs();

 private:
  struct GameEntry {
    std::string id;
    std::shared_ptr<const GameDocument> doc;
    std::string hash;
    std::optional<std::string> parent;
    std::optional<std::size_t> removed;  // 0-based index in the parent
  };

  struct Job {
    std::string id;
    std::string kind;
    std::string game_id;
    std::shared_future<nlohmann::json> result;
  };

  using Compute = std::function<nlohmann::json()>;

  std::shared_ptr<const GameEntry> find_game(const std::string& id) const;
  std::shared_ptr<const GameEntry> add_game(GameDocument doc, std::optional<std::string> parent,
                                            std::optional<std::size_t> removed);
  std::shared_future<nlohmann::json> cached(const std::string& key, Compute compute);
  Response run_or_defer(const GameEntry& game, const std::string& op, const std::string& key,
                        double estimated_seconds, Compute compute);
  Response game_response(const GameEntry& game, nlohmann::json body, int status = 200) const;

  Response create_game(std::string_view body);
  Response get_game(const GameEntry& game) const;
  Response get_solve(const GameEntry& game, bool best);
  Response get_anarchy(const GameEntry& game);
  Response get_summary(const GameEntry& game);
  Response post_whatif(const GameEntry& game, std::string_view body);
  Response post_undo(const GameEntry& game) const;
  Response post_simulate(const GameEntry& game, std::string_view body);
  Response get_job(const std::string& id);

  ServiceOptions options_;
  mutable std::mutex mutex_;
  std::map<std::string, std::shared_ptr<const GameEntry>> games_;
  std::map<std::pair<std::string, std::size_t>, std::string> derived_;
  std::map<std::string, std::shared_future<nlohmann::json>> cache_;
  std::map<std::string, std::shared_ptr<Job>> jobs_;
  std::map<std::string, std::string> job_by_key_;
  std::vector<std::jthread> workers_;
  std::uint64_t next_game_ = 1;
  std::uint64_t next_job_ = 1;
};

/// Port from the flag, else NETGAME_PORT, else 8080. Throws
/// std::invalid_argument for a value outside 0..65535.
int resolve_port(std::optional<int> flag);

/// HTTP/1.1 adapter: every route goes to Service::handle, JSON bodies,
/// permissive CORS.
class HttpServer {
 public:
  explicit HttpServer(Service& service, std::string cors_origin = "*");
  ~HttpServer();

  /// Binds (port 0 picks a free one) and returns the bound port, or -1.
  int bind(const std::string& host, int port);
  /// Serves until stop(); call after bind().
  bool listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace netgame
