#pragma once

// Game sessions behind a JSON interface. GameService holds the rules and
// engines and is usable in-process; HttpServer maps it onto HTTP routes.
//
// Positions are reported both as DPN and as structured fields; moves travel
// as {"type": "step", "dir": "S"}, {"type": "placeWhite"|"placeBlack",
// "row", "col"}, {"type": "relocate", "from": {...}, "to": {...}} or
// {"type": "pass"}; errors as {"code", "message"}.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "dukego/core.hpp"
#include "dukego/solver.hpp"
#include "dukego/strategy.hpp"
#include "dukego/tactics.hpp"
#include "json.hpp"

namespace dukego::service {

using Json = nlohmann::json;

class ServiceError : public Error {
 public:
  ServiceError(int status, std::string code, const std::string& message)
      : Error(message), status_(status), code_(std::move(code)) {}
  int status() const { return status_; }
  const std::string& code() const { return code_; }
  Json body() const { return {{"code", code_}, {"message", what()}}; }

 private:
  int status_;
  std::string code_;
};

enum class Engine : std::uint8_t { Auto, Tactic, Table, Solver };

std::string_view engine_name(Engine e);
Engine parse_engine(std::string_view name);

struct GameConfig {
  Dims dims;
  int white_budget = 0;
  int black_budget = kUnlimited;
  Player first = Player::D;
  Player human = Player::G;
  Engine engine_d = Engine::Auto;
  Engine engine_g = Engine::Auto;
};

struct ServiceOptions {
  std::string cache_dir;      // `<m>x<n>w<w>b<b>.dgc` files; empty disables
  std::string strategy_dir;   // `<m>x<n>w<w>b<b>.strat` files (G first)
  std::string snapshot_dir;   // JSON session snapshots; empty disables
  std::uint64_t auto_solve_states = 20'000'000;  // larger spaces need a cache file
  bool write_solved_caches = false;
  int threads = 1;
};

// Thread-safe. Every public method returns the JSON response body or throws
// ServiceError.
class GameService {
 public:
  explicit GameService(ServiceOptions options = {});
  ~GameService();

  Json create_game(const Json& config);
  Json get_game(const std::string& id);
  Json submit_move(const std::string& id, const Json& move);
  Json undo(const std::string& id);
  Json hint(const std::string& id);
  Json evaluate(const std::string& id);
  Json health() const;

  // The solved space for (dims, w, b): loaded from the cache directory or
  // solved on demand within the state limit; null otherwise.
  std::shared_ptr<const solver::SolveResult> solved(Dims dims, int white_budget, int black_budget);
  // The G strategy shipped for the configuration, or null.
  std::shared_ptr<const strategy::GStrategy> table_strategy(Dims dims, int white_budget, int black_budget);

 private:
  struct Session;
  std::shared_ptr<Session> find(const std::string& id);
  void engine_turns(Session& s, Json* engine_moves);
  void snapshot(const Session& s) const;

  ServiceOptions options_;
  std::shared_mutex sessions_mutex_;
  std::map<std::string, std::shared_ptr<Session>> sessions_;
  std::mutex solved_mutex_;
  std::map<std::string, std::shared_ptr<const solver::SolveResult>> solved_;
  std::map<std::string, bool> unsolvable_;
  std::mutex strategies_mutex_;
  std::map<std::string, std::shared_ptr<const strategy::GStrategy>> strategies_;
  std::uint64_t next_id_ = 1;
};

Json position_json(const Position& p);
Json move_json(const Move& m);
// Accepts the structured form or {"text": "<move text>"}.
Move move_from_json(const Json& j);

class HttpServer {
 public:
  explicit HttpServer(GameService& service);
  ~HttpServer();

  // Binds `host:port` (port 0 picks a free port) and returns the bound port.
  int bind(const std::string& host, int port);
  void listen();  // blocks until stop()
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dukego::service
