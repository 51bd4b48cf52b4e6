#include <atomic>
#include <functional>
#include <thread>

#include "doctest.h"
#include "dukego/service.hpp"
#include "httplib.h"

using namespace dukego;
using namespace dukego::service;

namespace {

int status_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ServiceError& e) {
    return e.status();
  }
  return 200;
}

GameService& shared_service() {
  static GameService svc;
  return svc;
}

Position replay(const Json& game) {
  const Json& c = game["config"];
  int black = c["black"].is_string() ? kUnlimited : c["black"].get<int>();
  Position p = start_position({c["rows"], c["cols"]}, c["first"] == "D" ? Player::D : Player::G, c["white"], black);
  for (const Json& h : game["history"]) p = apply_move(p, move_from_json(h["move"]));
  return p;
}

}  // namespace

TEST_CASE("move JSON round-trips") {
  for (const Move& m : {Move::step(Dir::E), Move::place_white({2, 3}), Move::place_black({4, 1}),
                        Move::relocate({1, 1}, {2, 2}), Move::pass()}) {
    CHECK(move_from_json(move_json(m)) == m);
    CHECK(move_from_json(Json{{"text", format_move(m)}}) == m);
  }
  CHECK_THROWS_AS(move_from_json(Json{{"type", "jump"}}), ServiceError);
}

TEST_CASE("position JSON carries DPN and structure") {
  Position p = start_position({6, 9}, Player::D, 0, kUnlimited);
  Json j = position_json(p);
  CHECK(j["dpn"] == format_dpn(p));
  CHECK(j["duke"]["row"] == 4);
  CHECK(j["duke"]["col"] == 5);
  CHECK(j["toMove"] == "D");
  CHECK(j["status"] == "ongoing");
  CHECK(j.contains("hands"));
  CHECK(j.contains("blacks"));
  CHECK(j.contains("whites"));
}

TEST_CASE("bad configurations are rejected") {
  auto& svc = shared_service();
  CHECK(status_of([&] { svc.create_game({{"dims", "0x5"}}); }) == 400);
  CHECK(status_of([&] { svc.create_game({{"rows", 5}}); }) == 400);
  CHECK(status_of([&] {
          svc.create_game({{"dims", "7x8"}, {"white", 3}, {"black", 0}, {"human", "G"}, {"engines", {{"D", "table"}}}});
        }) == 400);
  CHECK(status_of([&] {
          svc.create_game({{"dims", "7x8"}, {"white", 3}, {"black", 0}, {"human", "D"}, {"engines", {{"G", "tactic"}}}});
        }) == 400);
  CHECK(status_of([&] { svc.get_game("missing"); }) == 404);
}

TEST_CASE("engine D opens 6x9 standard game with a south step") {
  auto& svc = shared_service();
  Json g = svc.create_game({{"dims", "6x9"}, {"white", 0}, {"black", "inf"}, {"first", "D"}, {"human", "G"}});
  REQUIRE(g["engineMoves"].size() == 1);
  CHECK(g["engineMoves"][0]["move"]["type"] == "step");
  CHECK(g["engineMoves"][0]["move"]["dir"] == "S");
  CHECK(g["engineMoves"][0]["rationale"].get<std::string>().find("ImminentWin") != std::string::npos);
  CHECK(g["position"]["toMove"] == "G");
}

TEST_CASE("engine G answers first on 8x8 with three whites") {
  auto& svc = shared_service();
  Json g = svc.create_game({{"dims", "8x8"}, {"white", 3}, {"black", 0}, {"first", "G"}, {"human", "D"}});
  REQUIRE(g["engineMoves"].size() == 1);
  CHECK(g["engineMoves"][0]["move"]["type"] == "placeWhite");
  CHECK(g["position"]["toMove"] == "D");
  auto res = svc.solved({8, 8}, 3, 0);
  REQUIRE(res);
  Position p = parse_dpn(g["position"]["dpn"].get<std::string>());
  CHECK(solver::query_label(*res, p).label != solver::Label::DWin);
}

TEST_CASE("moves, errors and undo") {
  auto& svc = shared_service();
  Json g = svc.create_game({{"dims", "5x5"}, {"white", 3}, {"black", 0}, {"first", "G"}, {"human", "G"}});
  const std::string id = g["id"];
  CHECK(status_of([&] { svc.undo(id); }) == 409);
  CHECK(status_of([&] { svc.submit_move(id, {{"type", "step"}, {"dir", "N"}}); }) == 422);

  Json after = svc.submit_move(id, {{"type", "placeWhite"}, {"row", 2}, {"col", 2}});
  REQUIRE(after["engineMoves"].size() == 1);
  Position p = parse_dpn(after["position"]["dpn"].get<std::string>());
  CHECK(replay(after) == p);
  auto res = svc.solved({5, 5}, 3, 0);
  REQUIRE(res);
  CHECK(solver::query_label(*res, p).label == solver::Label::DWin);

  try {
    svc.submit_move(id, {{"type", "placeWhite"}, {"row", 2}, {"col", 2}});
    FAIL("occupied square accepted");
  } catch (const ServiceError& e) {
    CHECK(e.status() == 422);
    CHECK(e.code() == "illegal_move");
    CHECK(std::string(e.what()).find("occupied") != std::string::npos);
  }

  Json undone = svc.undo(id);
  CHECK(undone["history"].empty());
  CHECK(undone["position"]["dpn"] == g["position"]["dpn"]);
}

TEST_CASE("game over and wrong turn") {
  auto& svc = shared_service();
  Json g = svc.create_game({{"dims", "3x3"}, {"white", 0}, {"black", "inf"}, {"first", "D"}, {"human", "D"}});
  const std::string id = g["id"];
  Json done = svc.submit_move(id, {{"type", "step"}, {"dir", "N"}});
  CHECK(done["status"] == "d-win");
  CHECK(done["engineMoves"].empty());
  CHECK(status_of([&] { svc.submit_move(id, {{"type", "step"}, {"dir", "S"}}); }) == 409);
  CHECK(status_of([&] { svc.hint(id); }) == 409);

  Json h = svc.create_game({{"dims", "6x9"}, {"white", 0}, {"black", "inf"}, {"first", "D"}, {"human", "G"}});
  CHECK(status_of([&] { svc.submit_move(h["id"], {{"type", "step"}, {"dir", "S"}}); }) == 422);
}

TEST_CASE("hint names the corner tactic") {
  auto& svc = shared_service();
  Json g = svc.create_game({{"dims", "6x8"}, {"white", 0}, {"black", "inf"}, {"first", "D"}, {"human", "D"}});
  Json h = svc.hint(g["id"]);
  CHECK(h["rationale"] == "CornerWin(SE)");
  CHECK(h["move"]["dir"] == "S");
}

TEST_CASE("evaluation labels every move") {
  auto& svc = shared_service();
  Json five = svc.create_game({{"dims", "5x5"}, {"white", 3}, {"black", 0}, {"first", "G"}, {"human", "G"}});
  Json e = svc.evaluate(five["id"]);
  CHECK(e["moves"].size() == legal_moves(start_position({5, 5}, Player::G, 3, 0)).size());
  for (const Json& m : e["moves"]) CHECK(m["label"] == "D-win");

  Json seven = svc.create_game({{"dims", "7x8"}, {"white", 3}, {"black", 0}, {"first", "G"}, {"human", "G"}});
  Json e7 = svc.evaluate(seven["id"]);
  bool some_hold = false;
  for (const Json& m : e7["moves"]) some_hold = some_hold || m["label"] != "D-win";
  CHECK(some_hold);

  Json h = svc.hint(seven["id"]);
  Position p = parse_dpn(seven["position"]["dpn"].get<std::string>());
  auto res = svc.solved({7, 8}, 3, 0);
  CHECK(solver::query_label(*res, apply_move(p, move_from_json(h["move"]))).label != solver::Label::DWin);

  Json big = svc.create_game({{"dims", "9x9"}, {"white", 2}, {"black", 2}, {"first", "G"}, {"human", "G"}});
  CHECK(status_of([&] { svc.evaluate(big["id"]); }) == 409);
  CHECK(status_of([&] {
          svc.create_game({{"dims", "9x9"}, {"white", 2}, {"black", 2}, {"human", "G"}, {"engines", {{"D", "solver"}}}});
        }) == 409);
}

TEST_CASE("sessions played in parallel stay consistent") {
  auto& svc = shared_service();
  std::vector<std::string> ids;
  for (int i = 0; i < 4; ++i)
    ids.push_back(svc.create_game({{"dims", "7x7"}, {"white", 0}, {"black", "inf"}, {"first", "G"}, {"human", "G"}})["id"]);
  std::vector<std::thread> workers;
  std::atomic<int> errors{0};
  for (int i = 0; i < 4; ++i)
    workers.emplace_back([&, i] {
      try {
        for (int k = 0; k < 6; ++k) {
          Json g = svc.get_game(ids[i]);
          if (g["status"] != "ongoing") break;
          Position p = parse_dpn(g["position"]["dpn"].get<std::string>());
          Move m = legal_moves(p)[(i * 7 + k * 3) % legal_moves(p).size()];
          Json after = svc.submit_move(ids[i], move_json(m));
          if (replay(after) != parse_dpn(after["position"]["dpn"].get<std::string>())) ++errors;
        }
      } catch (...) {
        ++errors;
      }
    });
  for (auto& t : workers) t.join();
  CHECK(errors == 0);
}

TEST_CASE("HTTP routes") {
  GameService svc;
  HttpServer server(svc);
  int port = server.bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread loop([&] { server.listen(); });
  httplib::Client cli("127.0.0.1", port);
  for (int i = 0; i < 100 && !cli.Get("/health"); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(20));

  auto health = cli.Get("/health");
  REQUIRE(health);
  CHECK(health->status == 200);
  CHECK(health->get_header_value("Access-Control-Allow-Origin") == "*");

  auto created = cli.Post("/games", R"({"dims":"6x9","white":0,"black":"inf","first":"D","human":"G"})",
                          "application/json");
  REQUIRE(created);
  CHECK(created->status == 200);
  Json g = Json::parse(created->body);
  const std::string id = g["id"];

  auto occupied = cli.Post("/games/" + id + "/moves", R"({"type":"placeBlack","row":5,"col":5})", "application/json");
  REQUIRE(occupied);
  CHECK(occupied->status == 422);
  CHECK(Json::parse(occupied->body)["code"] == "illegal_move");

  auto moved = cli.Post("/games/" + id + "/moves", R"({"text":"B6,5"})", "application/json");
  REQUIRE(moved);
  CHECK(moved->status == 200);
  CHECK(Json::parse(moved->body)["history"].size() == 3);

  auto hint = cli.Get("/games/" + id + "/hint");
  REQUIRE(hint);
  CHECK(hint->status == 200);
  auto eval = cli.Get("/games/" + id + "/eval");
  REQUIRE(eval);
  CHECK(eval->status == 409);
  auto undo = cli.Post("/games/" + id + "/undo", "", "application/json");
  REQUIRE(undo);
  CHECK(Json::parse(undo->body)["history"].size() == 1);

  auto missing = cli.Get("/games/nope");
  REQUIRE(missing);
  CHECK(missing->status == 404);
  auto malformed = cli.Post("/games", "{", "application/json");
  REQUIRE(malformed);
  CHECK(malformed->status == 400);
  auto preflight = cli.Options("/games");
  REQUIRE(preflight);
  CHECK(preflight->status == 204);

  server.stop();
  loop.join();
}
