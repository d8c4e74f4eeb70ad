#include <algorithm>
#include <thread>

#include "doctest.h"
#include "fixtures.hpp"
#include "httplib.h"
#include "service.hpp"

using nlohmann::json;

namespace {

struct Running {
  httplib::Server server;
  sd::service::SessionStore store;
  std::thread thread;
  int port = 0;

  explicit Running(std::chrono::seconds ttl = std::chrono::hours(1)) : store(ttl) {
    sd::service::install_routes(server, store);
    port = server.bind_to_any_port("127.0.0.1");
    thread = std::thread([this] { server.listen_after_bind(); });
    server.wait_until_ready();
  }
  ~Running() {
    server.stop();
    thread.join();
  }
  httplib::Client client() const { return httplib::Client("127.0.0.1", port); }
};

std::string ex1_text() {
  std::ifstream in(std::string(SD_DATA_DIR) + "/ex1.dpi");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string create_body(const json& config = json::object()) {
  return json{{"dpi", ex1_text()}, {"config", config}}.dump();
}

}  // namespace

TEST_CASE("session lifecycle over HTTP") {
  Running svc;
  auto cli = svc.client();
  auto created = cli.Post("/sessions", create_body({{"n", 10}, {"enrich", true}, {"sigma", 1.01}}), "application/json");
  REQUIRE(created);
  CHECK(created->status == 200);
  auto state = json::parse(created->body);
  std::string id = state["id"];
  REQUIRE(state["diagnoses"].size() == 3);
  CHECK(state["diagnoses"][0]["formulas"] == json({1, 2, 5}));
  CHECK(state["diagnoses"][0]["texts"].size() == 3);
  CHECK(!state.contains("warning"));
  CHECK(created->get_header_value("Access-Control-Allow-Origin") == "*");

  CHECK(json::parse(cli.Get("/sessions/" + id + "/history")->body) == json::array());

  auto q1 = cli.Get("/sessions/" + id + "/query");
  REQUIRE(q1);
  CHECK(q1->status == 200);
  auto q2 = cli.Get("/sessions/" + id + "/query");
  CHECK(q1->body == q2->body);
  auto q = json::parse(q1->body);
  CHECK(q["reasoner_calls"]["p1"] == 0);
  CHECK(q["reasoner_calls"]["p2"] == 0);
  CHECK(q["qpartition"]["dzero"].empty());
  CHECK(!q["qpartition"]["dplus"].empty());
  CHECK(!q["qpartition"]["dminus"].empty());

  // Answer as if D3 = [3,4,5] were the target until the session finishes.
  auto dpi = fixtures::ex1();
  sd::SimulatedOracle oracle(sd::Diagnosis::from(std::vector<std::size_t>{2, 3, 4}));
  std::size_t rounds = 0;
  json last;
  for (; rounds < 5; ++rounds) {
    auto got = cli.Get("/sessions/" + id + "/query");
    if (got->status == 409) break;
    auto qj = json::parse(got->body);
    std::vector<sd::QueryFormula> formulas;
    for (const auto& text : qj["query"]) formulas.push_back({sd::parse_formula(text.get<std::string>(), *dpi.shared_atoms()), {}});
    bool answer = oracle.answer(dpi, formulas);
    std::vector<sd::Formula> plain;
    for (const auto& f : formulas) plain.push_back(f.formula);
    dpi = sd::apply_answer(dpi, plain, answer);
    auto res = cli.Post("/sessions/" + id + "/answer", json{{"answer", answer}}.dump(), "application/json");
    REQUIRE(res->status == 200);
    last = json::parse(res->body);
    if (last["finished"]) {
      ++rounds;
      break;
    }
  }
  CHECK(last["finished"] == true);
  CHECK(last["final_diagnosis"] == json({3, 4, 5}));
  CHECK(cli.Get("/sessions/" + id + "/query")->status == 409);
  CHECK(cli.Post("/sessions/" + id + "/answer", R"({"answer":true})", "application/json")->status == 409);

  auto history = json::parse(cli.Get("/sessions/" + id + "/history")->body);
  REQUIRE(history.size() == rounds);
  for (std::size_t i = 0; i < history.size(); ++i) {
    CHECK(history[i]["round"] == i + 1);
    for (auto key : {"query_formulas", "qpartition", "answer", "eliminated", "timings_ms", "reasoner_calls"})
      CHECK(history[i].contains(key));
  }
}

TEST_CASE("request errors") {
  Running svc;
  auto cli = svc.client();
  CHECK(cli.Get("/sessions/nope/query")->status == 404);
  CHECK(cli.Post("/sessions/nope/answer", R"({"answer":true})", "application/json")->status == 404);
  CHECK(cli.Post("/sessions", "not json", "application/json")->status == 400);
  CHECK(cli.Post("/sessions", json{{"dpi", "[REQUIREMENTS]\nconsistency\n[KB]\na ->\n[BACKGROUND]\n"}}.dump(), "application/json")->status == 400);
  auto bad_admissible = json{{"dpi", "[REQUIREMENTS]\nconsistency\n[KB]\na\n[BACKGROUND]\nb\n!b\n"}}.dump();
  CHECK(cli.Post("/sessions", bad_admissible, "application/json")->status == 400);
  CHECK(cli.Post("/sessions", create_body({{"n", 0}}), "application/json")->status == 400);
  CHECK(cli.Post("/sessions", create_body({{"measure", "xyz"}}), "application/json")->status == 400);

  auto created = json::parse(cli.Post("/sessions", create_body(), "application/json")->body);
  std::string id = created["id"];
  CHECK(cli.Post("/sessions/" + id + "/answer", R"({"answer":true})", "application/json")->status == 409);
  cli.Get("/sessions/" + id + "/query");
  CHECK(cli.Post("/sessions/" + id + "/answer", R"({"answer":"yes"})", "application/json")->status == 400);
  CHECK(cli.Options("/sessions")->status == 204);
}

TEST_CASE("single diagnosis warns and refuses to query") {
  Running svc;
  auto cli = svc.client();
  auto body = json{{"dpi", "[REQUIREMENTS]\nconsistency\n[KB]\na\nb\n[BACKGROUND]\n[NEGATIVE]\na\n"}, {"config", {{"n", 1}}}}.dump();
  auto res = cli.Post("/sessions", body, "application/json");
  REQUIRE(res->status == 200);
  auto j = json::parse(res->body);
  CHECK(j["warning"] == "insufficient diagnoses for querying");
  CHECK(cli.Get("/sessions/" + j["id"].get<std::string>() + "/query")->status == 409);
}

TEST_CASE("idle sessions expire") {
  Running svc(std::chrono::seconds(0));
  auto cli = svc.client();
  auto id = json::parse(cli.Post("/sessions", create_body(), "application/json")->body)["id"].get<std::string>();
  std::this_thread::sleep_for(std::chrono::milliseconds(1100));
  cli.Post("/sessions", create_body(), "application/json");  // triggers the purge
  CHECK(cli.Get("/sessions/" + id)->status == 404);
}

TEST_CASE("n=1 on the running example warns") {
  Running svc;
  auto cli = svc.client();
  auto res = cli.Post("/sessions", create_body({{"n", 1}}), "application/json");
  REQUIRE(res->status == 200);
  auto j = json::parse(res->body);
  CHECK(j["diagnoses"].size() == 1);
  CHECK(j["warning"] == "insufficient diagnoses for querying");
}

TEST_CASE("concurrent answers to one query are serialized") {
  Running svc;
  auto cli = svc.client();
  auto id = json::parse(cli.Post("/sessions", create_body(), "application/json")->body)["id"].get<std::string>();
  REQUIRE(cli.Get("/sessions/" + id + "/query")->status == 200);
  std::vector<int> status(6, 0);
  std::vector<std::thread> clients;
  for (std::size_t i = 0; i < status.size(); ++i) {
    clients.emplace_back([&, i] {
      httplib::Client c("127.0.0.1", svc.port);
      auto r = c.Post("/sessions/" + id + "/answer", R"({"answer":false})", "application/json");
      status[i] = r ? r->status : -1;
    });
  }
  for (auto& t : clients) t.join();
  CHECK(std::count(status.begin(), status.end(), 200) == 1);
  CHECK(std::count(status.begin(), status.end(), 409) == 5);
  CHECK(json::parse(cli.Get("/sessions/" + id + "/history")->body).size() == 1);
}
