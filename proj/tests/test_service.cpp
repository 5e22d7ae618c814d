#include <doctest.h>

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "netgame/io_formats.hpp"
#include "netgame/service.hpp"
#include "support.hpp"

using namespace netgame;
using nlohmann::json;

namespace {

std::string example_text() { return testing::slurp(testing::data_path("complete_example.json")); }
std::string five_text() { return testing::slurp(testing::data_path("ten_by_five.json")); }

std::string load(Service& s, const std::string& text) {
  const Response r = s.handle("POST", "/games", text);
  REQUIRE(r.status == 201);
  return r.body["game_id"].get<std::string>();
}

json poll(Service& s, const std::string& job) {
  for (int k = 0; k < 2000; ++k) {
    const Response r = s.handle("GET", "/jobs/" + job, "");
    REQUIRE(r.status == 200);
    if (r.body["status"] != "running") return r.body;
    std::this_thread::sleep_for(std::chrono::milliseconds(5));
  }
  FAIL("job did not finish");
  return {};
}

}  // namespace

TEST_CASE("loading and reading back a game") {
  Service s;
  const Response created = s.handle("POST", "/games", example_text());
  CHECK(created.status == 201);
  CHECK(created.body["kind"] == "link_bias");
  CHECK(created.body["n"] == 10);
  CHECK(created.body["schema_version"] == "1");
  CHECK(created.body["content_hash"].get<std::string>().size() == 16);
  const std::string id = created.body["game_id"];
  const Response got = s.handle("GET", "/games/" + id, "");
  CHECK(got.status == 200);
  CHECK(got.body["document"] == json::parse(example_text()));
  CHECK(got.body["parent_id"].is_null());
}

TEST_CASE("anarchy, solves and the summary table") {
  Service s;
  const std::string id = load(s, example_text());
  const Response anarchy = s.handle("GET", "/games/" + id + "/anarchy", "");
  REQUIRE(anarchy.status == 200);
  CHECK(anarchy.body["worst_stable_value"] == 1077);
  CHECK(anarchy.body["best_value"] == 1487);
  CHECK(anarchy.body["poa_ratio"].get<double>() == doctest::Approx(0.724).epsilon(1e-3));
  CHECK(s.handle("GET", "/games/" + id + "/stable", "").body["communal_payoff"] == 1077);
  CHECK(s.handle("GET", "/games/" + id + "/best", "").body["communal_payoff"] == 1487);
  const Response summary = s.handle("GET", "/games/" + id + "/summary", "");
  CHECK(summary.body["rows"].size() == 10);
  CHECK(summary.body["pareto"] == json::array({10}));

  const std::string five = load(s, five_text());
  const Response worst = s.handle("GET", "/games/" + five + "/stable", "");
  CHECK(worst.body["objective"] == 8);
  CHECK(worst.body["communal_payoff"] == -8);
}

TEST_CASE("what-if chains and undo") {
  Service s;
  const std::string g1 = load(s, example_text());
  const Response removed = s.handle("POST", "/games/" + g1 + "/whatif", R"({"remove":10})");
  REQUIRE(removed.status == 200);
  const std::string g2 = removed.body["game_id"];
  CHECK(g2 != g1);
  CHECK(removed.body["parent_id"] == g1);
  CHECK(removed.body["result"]["report_after"]["worst_stable_value"] == 501);
  const Response after = s.handle("GET", "/games/" + g2 + "/anarchy", "");
  CHECK(after.body["worst_stable_value"] == 501);
  CHECK(after.body["best_value"] == 789);
  CHECK(s.handle("GET", "/games/" + g2, "").body["removed"] == 10);

  // repeating a removal is idempotent
  const Response again = s.handle("POST", "/games/" + g1 + "/whatif", R"({"remove":10})");
  CHECK(again.body == removed.body);

  const Response deeper = s.handle("POST", "/games/" + g2 + "/whatif", R"({"remove":1})");
  const std::string g3 = deeper.body["game_id"];
  CHECK(s.handle("GET", "/games/" + g3, "").body["document"]["n"] == 8);

  const Response undo = s.handle("POST", "/games/" + g3 + "/undo", "");
  CHECK(undo.status == 200);
  CHECK(undo.body["game_id"] == g2);
  CHECK(undo.body["undone"] == g3);
  CHECK(s.handle("POST", "/games/" + g2 + "/undo", "").body["game_id"] == g1);
  CHECK(s.handle("POST", "/games/" + g1 + "/undo", "").status == 409);
}

TEST_CASE("derived games share content with directly loaded ones") {
  Service s;
  const std::string g1 = load(s, example_text());
  const Response derived = s.handle("POST", "/games/" + g1 + "/whatif", R"({"remove":10})");
  GameDocument direct;
  direct.game = remove_player(parse_game(example_text()), 9);
  const Response loaded = s.handle("POST", "/games", write_game(direct));
  CHECK(loaded.body["content_hash"] == derived.body["content_hash"]);
  const std::string a = derived.body["game_id"];
  const std::string b = loaded.body["game_id"];
  auto strip = [](json j) {
    j.erase("game_id");
    return j;
  };
  CHECK(strip(s.handle("GET", "/games/" + a + "/anarchy", "").body) ==
        strip(s.handle("GET", "/games/" + b + "/anarchy", "").body));
}

TEST_CASE("status codes") {
  Service s;
  const std::string id = load(s, example_text());
  CHECK(s.handle("POST", "/games", "{").status == 400);
  CHECK(s.handle("POST", "/games", R"({"kind":"link_bias","n":2,"c":[[1,0],[0,0]]})").status == 400);
  const Response bad = s.handle("POST", "/games", R"({"kind":"degree","n":2,"d":[1]})");
  CHECK(bad.body["error"]["status"] == 400);
  CHECK(bad.body["error"]["message"].get<std::string>().find("/d") != std::string::npos);
  CHECK(s.handle("GET", "/games/g999", "").status == 404);
  CHECK(s.handle("GET", "/games/" + id + "/nothing", "").status == 404);
  CHECK(s.handle("GET", "/elsewhere", "").status == 404);
  CHECK(s.handle("GET", "/jobs/j9", "").status == 404);
  CHECK(s.handle("DELETE", "/games/" + id, "").status == 405);
  CHECK(s.handle("GET", "/games/" + id + "/whatif", "").status == 405);
  CHECK(s.handle("POST", "/games/" + id + "/anarchy", "").status == 405);
  CHECK(s.handle("POST", "/games/" + id + "/whatif", R"({"remove":11})").status == 422);
  CHECK(s.handle("POST", "/games/" + id + "/whatif", R"({"remove":0})").status == 422);
  CHECK(s.handle("POST", "/games/" + id + "/whatif", R"({})").status == 400);
  CHECK(s.handle("POST", "/games/" + id + "/simulate", R"({"runs":5})").status == 409);
  const std::string five = load(s, five_text());
  CHECK(s.handle("POST", "/games/" + five + "/simulate", R"({"runs":0})").status == 422);
  CHECK(s.handle("POST", "/games/" + five + "/simulate", R"({"seed":1})").status == 400);
}

TEST_CASE("simulation through the service matches the library") {
  Service s;
  const std::string id = load(s, testing::slurp(testing::data_path("powerlaw100.json")));
  const Response r = s.handle("POST", "/games/" + id + "/simulate", R"({"runs":20,"seed":42})");
  REQUIRE(r.status == 200);
  json expected = to_json(simulate_batch(testing::powerlaw_sequence(), 20, 42));
  for (const auto& [key, value] : expected.items()) CHECK(r.body[key] == value);
}

TEST_CASE("slow requests become jobs") {
  ServiceOptions opts;
  opts.sync_threshold_seconds = 0.0;
  Service s(opts);
  const std::string id = load(s, example_text());
  const Response pending = s.handle("GET", "/games/" + id + "/anarchy", "");
  REQUIRE(pending.status == 202);
  CHECK(pending.body["status"] == "pending");
  const std::string job = pending.body["job_id"];
  CHECK(pending.body["poll"] == "/jobs/" + job);
  const json done = poll(s, job);
  CHECK(done["status"] == "done");
  CHECK(done["result"]["worst_stable_value"] == 1077);
  // finished results are served inline afterwards
  CHECK(s.handle("GET", "/games/" + id + "/anarchy", "").status == 200);

  const std::string five = load(s, five_text());
  const Response sim = s.handle("POST", "/games/" + five + "/simulate", R"({"runs":3,"seed":1})");
  REQUIRE(sim.status == 202);
  CHECK(poll(s, sim.body["job_id"])["status"] == "done");
  s.wait_for_jobs();
}

TEST_CASE("snapshots restore ids and derivations") {
  json snap;
  std::string g2;
  {
    Service s;
    const std::string g1 = load(s, example_text());
    g2 = s.handle("POST", "/games/" + g1 + "/whatif", R"({"remove":10})").body["game_id"];
    snap = s.snapshot();
  }
  Service restored;
  restored.restore(snap);
  CHECK(restored.handle("GET", "/games/" + g2 + "/anarchy", "").body["worst_stable_value"] == 501);
  CHECK(restored.handle("POST", "/games/" + g2 + "/undo", "").status == 200);
  const std::string fresh = load(restored, five_text());
  CHECK(fresh != g2);
  CHECK(restored.handle("GET", "/games/" + fresh, "").status == 200);
}

TEST_CASE("resolve_port") {
  CHECK(resolve_port(9000) == 9000);
  CHECK_THROWS_AS(resolve_port(70000), std::invalid_argument);
  CHECK_THROWS_AS(resolve_port(-1), std::invalid_argument);
}

TEST_CASE("the HTTP adapter serves the same answers") {
  Service s;
  HttpServer server(s);
  const int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::jthread thread([&] { server.listen(); });

  httplib::Client client("127.0.0.1", port);
  const auto created = client.Post("/games", example_text(), "application/json");
  REQUIRE(created);
  CHECK(created->status == 201);
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");
  const std::string id = json::parse(created->body)["game_id"];
  const auto anarchy = client.Get("/games/" + id + "/anarchy");
  REQUIRE(anarchy);
  CHECK(anarchy->status == 200);
  CHECK(json::parse(anarchy->body)["best_value"] == 1487);
  const auto missing = client.Get("/games/nope");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  const auto preflight = client.Options("/games");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);
  server.stop();
}
