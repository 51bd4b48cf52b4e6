#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "dukego/service.hpp"

namespace dukego::service {

namespace fs = std::filesystem;

std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::Auto: return "auto";
    case Engine::Tactic: return "tactic";
    case Engine::Table: return "table";
    case Engine::Solver: return "solver";
  }
  return "?";
}

Engine parse_engine(std::string_view name) {
  for (Engine e : {Engine::Auto, Engine::Tactic, Engine::Table, Engine::Solver})
    if (engine_name(e) == name) return e;
  throw ServiceError(400, "bad_request", "unknown engine '" + std::string(name) + "' (auto, tactic, table, solver)");
}

namespace {

Json square_json(Square s) { return {{"row", s.row}, {"col", s.col}}; }

Square square_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("row") || !j.contains("col") || !j["row"].is_number_integer() ||
      !j["col"].is_number_integer())
    throw ServiceError(400, "bad_request", "a square needs integer 'row' and 'col'");
  return {j["row"].get<int>(), j["col"].get<int>()};
}

std::string status_text(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Ongoing: return "ongoing";
    case TerminalStatus::DWin: return "d-win";
    case TerminalStatus::GWinImmobilized: return "g-win-immobilized";
  }
  return "?";
}

std::string space_key(Dims dims, int w, int b) {
  return std::to_string(dims.rows) + "x" + std::to_string(dims.cols) + "w" + std::to_string(w) + "b" +
         std::to_string(b);
}

int budget_from_json(const Json& j, const char* name) {
  if (j.is_string() && j.get<std::string>() == "inf") return kUnlimited;
  if (j.is_number_integer() && j.get<int>() >= 0 && j.get<int>() <= 64) return j.get<int>();
  throw ServiceError(400, "bad_request", std::string("'") + name + "' must be an integer from 0 to 64 or \"inf\"");
}

Player player_from_json(const Json& j, const char* name) {
  if (j.is_string() && (j.get<std::string>() == "D" || j.get<std::string>() == "G"))
    return j.get<std::string>() == "D" ? Player::D : Player::G;
  throw ServiceError(400, "bad_request", std::string("'") + name + "' must be \"D\" or \"G\"");
}

Json budget_json(int b) { return b == kUnlimited ? Json("inf") : Json(b); }

bool can_place_black(const Position& p) { return p.hand.blacks_unlimited() || p.hand.blacks_in_hand > 0; }

// Blocks the duke's most dangerous step: an edge square first, then the
// empty neighbour nearest an edge.
Move greedy_block(const Position& p) {
  std::optional<Square> target;
  int best = 1 << 20;
  for (Dir d : kAllDirs) {
    Square t = step(p.duke, d);
    if (!p.dims.contains(t) || !p.is_empty(t)) continue;
    int dist = std::min({t.row - 1, p.dims.rows - t.row, t.col - 1, p.dims.cols - t.col});
    if (dist < best) {
      best = dist;
      target = t;
    }
  }
  if (target) {
    if (p.hand.whites_in_hand > 0) return Move::place_white(*target);
    if (can_place_black(p)) return Move::place_black(*target);
    if (!p.monotone() && !p.whites.empty()) {
      auto far = std::max_element(p.whites.begin(), p.whites.end(), [&](Square a, Square b) {
        auto d = [&](Square s) { return std::abs(s.row - p.duke.row) + std::abs(s.col - p.duke.col); };
        return d(a) < d(b);
      });
      return Move::relocate(*far, *target);
    }
  }
  auto moves = legal_moves(p);
  for (const Move& m : moves)
    if (m.kind == MoveKind::Pass) return m;
  return moves.front();
}

}  // namespace

Json position_json(const Position& p) {
  Json blacks = Json::array(), whites = Json::array();
  for (Square s : p.blacks) blacks.push_back(square_json(s));
  for (Square s : p.whites) whites.push_back(square_json(s));
  return {{"dpn", format_dpn(p)},
          {"dims", {{"rows", p.dims.rows}, {"cols", p.dims.cols}}},
          {"duke", square_json(p.duke)},
          {"blacks", blacks},
          {"whites", whites},
          {"toMove", std::string(1, player_letter(p.to_move))},
          {"hands", {{"white", p.hand.whites_in_hand}, {"black", budget_json(p.hand.blacks_in_hand)}}},
          {"variant", p.monotone() ? "standard" : "bounded"},
          {"status", status_text(terminal_status(p))}};
}

Json move_json(const Move& m) {
  Json j;
  switch (m.kind) {
    case MoveKind::Step: j = {{"type", "step"}, {"dir", std::string(1, dir_letter(m.dir))}}; break;
    case MoveKind::PlaceWhite: j = {{"type", "placeWhite"}, {"row", m.to.row}, {"col", m.to.col}}; break;
    case MoveKind::PlaceBlack: j = {{"type", "placeBlack"}, {"row", m.to.row}, {"col", m.to.col}}; break;
    case MoveKind::Relocate: j = {{"type", "relocate"}, {"from", square_json(m.from)}, {"to", square_json(m.to)}}; break;
    case MoveKind::Pass: j = {{"type", "pass"}}; break;
  }
  j["text"] = format_move(m);
  return j;
}

Move move_from_json(const Json& j) {
  if (!j.is_object()) throw ServiceError(400, "bad_request", "a move must be a JSON object");
  if (!j.contains("type")) {
    if (j.contains("text") && j["text"].is_string()) {
      try {
        return parse_move(j["text"].get<std::string>());
      } catch (const ParseError& e) {
        throw ServiceError(400, "bad_request", e.what());
      }
    }
    throw ServiceError(400, "bad_request", "a move needs 'type' or 'text'");
  }
  const std::string type = j["type"].is_string() ? j["type"].get<std::string>() : "";
  if (type == "step") {
    if (!j.contains("dir") || !j["dir"].is_string() || j["dir"].get<std::string>().size() != 1)
      throw ServiceError(400, "bad_request", "a step needs 'dir' (N, S, E or W)");
    auto dir = dir_from_letter(j["dir"].get<std::string>()[0]);
    if (!dir) throw ServiceError(400, "bad_request", "a step needs 'dir' (N, S, E or W)");
    return Move::step(*dir);
  }
  if (type == "placeWhite") return Move::place_white(square_from_json(j));
  if (type == "placeBlack") return Move::place_black(square_from_json(j));
  if (type == "relocate") {
    if (!j.contains("from") || !j.contains("to")) throw ServiceError(400, "bad_request", "a relocation needs 'from' and 'to'");
    return Move::relocate(square_from_json(j["from"]), square_from_json(j["to"]));
  }
  if (type == "pass") return Move::pass();
  throw ServiceError(400, "bad_request", "unknown move type '" + type + "'");
}

struct GameService::Session {
  struct Entry {
    Move move;
    Player by;
    bool engine;
    std::string rationale;
    std::string dpn;  // position after the move
    tactics::Episode episode;
    strategy::Token token;
    bool table_broken;
  };

  std::mutex mutex;
  std::string id;
  GameConfig config;
  Position start;
  Position position;
  std::vector<Entry> history;
  tactics::Episode episode;
  strategy::Token token = 0;
  bool table_broken = false;
  std::shared_ptr<const solver::SolveResult> res;
  std::shared_ptr<const strategy::GStrategy> table;

  Player engine_side() const { return config.human == Player::D ? Player::G : Player::D; }
  Engine engine() const { return config.human == Player::D ? config.engine_g : config.engine_d; }

  Json config_json() const {
    return {{"rows", config.dims.rows},
            {"cols", config.dims.cols},
            {"white", config.white_budget},
            {"black", budget_json(config.black_budget)},
            {"first", std::string(1, player_letter(config.first))},
            {"human", std::string(1, player_letter(config.human))},
            {"engines",
             {{"D", std::string(engine_name(config.engine_d))}, {"G", std::string(engine_name(config.engine_g))}}}};
  }

  Json json() const {
    Json h = Json::array();
    for (const Entry& e : history) {
      Json item = {{"by", std::string(1, player_letter(e.by))}, {"move", move_json(e.move)}, {"dpn", e.dpn},
                   {"engine", e.engine}};
      if (!e.rationale.empty()) item["rationale"] = e.rationale;
      h.push_back(item);
    }
    bool can_undo = std::any_of(history.begin(), history.end(), [](const Entry& e) { return !e.engine; });
    return {{"id", id},
            {"config", config_json()},
            {"position", position_json(position)},
            {"status", status_text(terminal_status(position))},
            {"solved", res != nullptr},
            {"history", h},
            {"canUndo", can_undo}};
  }

  void record(const Move& m, bool by_engine, std::string rationale) {
    Player by = position.to_move;
    position = apply_move(position, m);
    history.push_back({m, by, by_engine, std::move(rationale), format_dpn(position), episode, token, table_broken});
  }
};

GameService::GameService(ServiceOptions options) : options_(std::move(options)) {
  if (!options_.snapshot_dir.empty()) fs::create_directories(options_.snapshot_dir);
}

GameService::~GameService() = default;

std::shared_ptr<const solver::SolveResult> GameService::solved(Dims dims, int w, int b) {
  if (b == kUnlimited || w < 0 || w + b > solver::kMaxStones || dims.area() > solver::kMaxArea) return nullptr;
  const std::string key = space_key(dims, w, b);
  std::lock_guard lock(solved_mutex_);
  if (auto it = solved_.find(key); it != solved_.end()) return it->second;
  if (unsolvable_.count(key)) return nullptr;
  std::shared_ptr<const solver::SolveResult> res;
  if (!options_.cache_dir.empty()) {
    fs::path path = fs::path(options_.cache_dir) / (key + ".dgc");
    if (fs::exists(path)) {
      try {
        res = std::make_shared<const solver::SolveResult>(solver::load_cache(path.string()));
      } catch (const solver::CacheError&) {
        res = nullptr;
      }
    }
  }
  if (!res && solver::state_count(dims, w, b) <= options_.auto_solve_states) {
    solver::SolveOptions so;
    so.threads = options_.threads;
    res = std::make_shared<const solver::SolveResult>(solver::solve_bounded(dims, w, b, so));
    if (options_.write_solved_caches && !options_.cache_dir.empty()) {
      fs::create_directories(options_.cache_dir);
      solver::save_cache(*res, (fs::path(options_.cache_dir) / (key + ".dgc")).string());
    }
  }
  if (!res) {
    unsolvable_[key] = true;
    return nullptr;
  }
  solved_[key] = res;
  return res;
}

std::shared_ptr<const strategy::GStrategy> GameService::table_strategy(Dims dims, int w, int b) {
  if (options_.strategy_dir.empty() || b == kUnlimited) return nullptr;
  const std::string key = space_key(dims, w, b);
  std::lock_guard lock(strategies_mutex_);
  if (auto it = strategies_.find(key); it != strategies_.end()) return it->second;
  auto load = [&](Dims d) -> std::shared_ptr<const strategy::GStrategy> {
    fs::path path = fs::path(options_.strategy_dir) / (space_key(d, w, b) + ".strat");
    if (!fs::exists(path)) return nullptr;
    try {
      return std::make_shared<const strategy::MapStrategy>(strategy::MapStrategy::load(path.string()));
    } catch (const Error&) {
      return nullptr;
    }
  };
  std::shared_ptr<const strategy::GStrategy> out = load(dims);
  if (!out && dims.rows >= 7 && dims.cols >= 9) {
    std::vector<std::shared_ptr<const strategy::GStrategy>> bases;
    for (Dims d : {Dims{7, 8}, Dims{6, 9}})
      if (auto s = load(d)) bases.push_back(s);
    if (dims == Dims{7, 9} && bases.size() == 2)
      out = std::make_shared<const strategy::ReductionStrategy>(dims, std::move(bases));
  }
  strategies_[key] = out;
  return out;
}

std::shared_ptr<GameService::Session> GameService::find(const std::string& id) {
  std::shared_lock lock(sessions_mutex_);
  auto it = sessions_.find(id);
  if (it == sessions_.end()) throw ServiceError(404, "not_found", "no game '" + id + "'");
  return it->second;
}

namespace {

struct EngineMove {
  Move move;
  std::string rationale;
};

}  // namespace

void GameService::engine_turns(Session& s, Json* engine_moves) {
  while (terminal_status(s.position) == TerminalStatus::Ongoing && s.position.to_move == s.engine_side()) {
    const Position& p = s.position;
    const Engine e = s.engine();
    EngineMove em;
    if (p.to_move == Player::D) {
      if (e == Engine::Solver) {
        auto info = solver::query_label(*s.res, p);
        em = {solver::best_move(*s.res, p), "solver " + std::string(solver::label_name(info.label))};
        s.episode = {};
      } else {
        auto d = tactics::duke_policy(p, s.episode, e == Engine::Auto ? s.res.get() : nullptr);
        em = {d.move, d.rationale};
        s.episode = d.next;
      }
    } else {
      bool done = false;
      if (e == Engine::Solver || (e == Engine::Auto && s.res)) {
        auto info = solver::query_label(*s.res, p);
        em = {solver::best_move(*s.res, p), "solver " + std::string(solver::label_name(info.label))};
        done = true;
      } else if (s.table && !s.table_broken) {
        try {
          auto [m, tok] = s.table->move(p, s.token);
          apply_move(p, m);
          em = {m, "table"};
          s.token = tok;
          done = true;
        } catch (const Error&) {
          // Off-table positions (after human deviations) fall back below.
          s.table_broken = true;
        }
      }
      if (!done) em = {greedy_block(p), "greedy block"};
    }
    s.record(em.move, true, em.rationale);
    if (engine_moves) engine_moves->push_back({{"move", move_json(em.move)}, {"rationale", em.rationale}});
  }
}

void GameService::snapshot(const Session& s) const {
  if (options_.snapshot_dir.empty()) return;
  Json moves = Json::array();
  for (const auto& e : s.history) moves.push_back(format_move(e.move));
  Json j = {{"id", s.id}, {"config", s.config_json()}, {"moves", moves}};
  std::ofstream out(fs::path(options_.snapshot_dir) / (s.id + ".json"));
  out << j.dump(2) << "\n";
}

Json GameService::create_game(const Json& body) {
  if (!body.is_object()) throw ServiceError(400, "bad_request", "the game configuration must be a JSON object");
  GameConfig c;
  if (body.contains("dims") && body["dims"].is_string()) {
    std::string d = body["dims"].get<std::string>();
    auto x = d.find('x');
    try {
      if (x == std::string::npos) throw std::invalid_argument("dims");
      c.dims = {std::stoi(d.substr(0, x)), std::stoi(d.substr(x + 1))};
    } catch (const std::exception&) {
      throw ServiceError(400, "bad_request", "dims must look like \"8x8\"");
    }
  } else {
    const Json& d = body.contains("dims") ? body["dims"] : body;
    if (!d.contains("rows") || !d.contains("cols") || !d["rows"].is_number_integer() || !d["cols"].is_number_integer())
      throw ServiceError(400, "bad_request", "the configuration needs 'dims' (\"MxN\") or integer 'rows' and 'cols'");
    c.dims = {d["rows"].get<int>(), d["cols"].get<int>()};
  }
  if (c.dims.rows < 1 || c.dims.cols < 1 || c.dims.rows > 32 || c.dims.cols > 32)
    throw ServiceError(400, "bad_request", "board dimensions must be between 1 and 32");
  c.white_budget = body.contains("white") ? budget_from_json(body["white"], "white") : 0;
  c.black_budget = body.contains("black") ? budget_from_json(body["black"], "black") : kUnlimited;
  if (c.white_budget == kUnlimited) throw ServiceError(400, "bad_request", "the white budget must be finite");
  if (body.contains("first")) c.first = player_from_json(body["first"], "first");
  if (body.contains("human")) c.human = player_from_json(body["human"], "human");
  if (body.contains("engines")) {
    const Json& e = body["engines"];
    if (e.contains("D")) c.engine_d = parse_engine(e["D"].get<std::string>());
    if (e.contains("G")) c.engine_g = parse_engine(e["G"].get<std::string>());
  }

  auto s = std::make_shared<Session>();
  s->config = c;
  try {
    s->start = start_position(c.dims, c.first, c.white_budget, c.black_budget);
  } catch (const Error& e) {
    throw ServiceError(400, "bad_request", e.what());
  }
  s->position = s->start;

  const Player engine = s->engine_side();
  const Engine mode = s->engine();
  if (engine == Player::D && mode == Engine::Table)
    throw ServiceError(400, "unsupported", "strategy tables play G only");
  if (engine == Player::G && mode == Engine::Tactic)
    throw ServiceError(400, "unsupported", "the tactics play D only; use table, solver or auto for G");
  if (mode == Engine::Solver || mode == Engine::Auto) s->res = solved(c.dims, c.white_budget, c.black_budget);
  if (mode == Engine::Solver && !s->res)
    throw ServiceError(409, "unsolved", "unsolved configuration: no cache for " +
                                            space_key(c.dims, c.white_budget, c.black_budget) +
                                            " and too large to solve on demand");
  if (engine == Player::G && (mode == Engine::Table || (mode == Engine::Auto && !s->res))) {
    s->table = table_strategy(c.dims, c.white_budget, c.black_budget);
    auto* map = dynamic_cast<const strategy::MapStrategy*>(s->table.get());
    if (map && map->first_mover() != c.first) s->table = nullptr;
    if (mode == Engine::Table && !s->table)
      throw ServiceError(400, "unsupported", "no strategy table for " +
                                                 space_key(c.dims, c.white_budget, c.black_budget) + " with " +
                                                 player_letter(c.first) + " moving first");
    if (s->table) s->token = s->table->initial(s->start);
  }
  if (!s->res && mode != Engine::Solver) {
    // Evaluations and hints still use a solved space when one is at hand.
    s->res = solved(c.dims, c.white_budget, c.black_budget);
  }

  {
    std::unique_lock lock(sessions_mutex_);
    static thread_local std::mt19937_64 rng{std::random_device{}()};
    std::ostringstream id;
    id << std::hex << next_id_++ << "-" << (rng() & 0xFFFFFFFFull);
    s->id = id.str();
    sessions_[s->id] = s;
  }
  std::lock_guard lock(s->mutex);
  Json engine_moves = Json::array();
  engine_turns(*s, &engine_moves);
  snapshot(*s);
  Json out = s->json();
  out["engineMoves"] = engine_moves;
  return out;
}

Json GameService::get_game(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  return s->json();
}

Json GameService::submit_move(const std::string& id, const Json& body) {
  auto s = find(id);
  Move m = move_from_json(body.contains("move") ? body["move"] : body);
  std::lock_guard lock(s->mutex);
  if (terminal_status(s->position) != TerminalStatus::Ongoing)
    throw ServiceError(409, "game_over", "the game is over");
  if (s->position.to_move != s->config.human)
    throw ServiceError(409, "wrong_turn", "it is the engine's turn");
  try {
    s->record(m, false, "");
  } catch (const IllegalMove& e) {
    throw ServiceError(422, "illegal_move", e.what());
  }
  Json engine_moves = Json::array();
  engine_turns(*s, &engine_moves);
  snapshot(*s);
  Json out = s->json();
  out["engineMoves"] = engine_moves;
  return out;
}

Json GameService::undo(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  auto last_human = std::find_if(s->history.rbegin(), s->history.rend(), [](const auto& e) { return !e.engine; });
  if (last_human == s->history.rend()) throw ServiceError(409, "nothing_to_undo", "no human move to undo");
  s->history.erase(std::prev(last_human.base()), s->history.end());
  if (s->history.empty()) {
    s->position = s->start;
    s->episode = {};
    s->token = s->table ? s->table->initial(s->start) : 0;
    s->table_broken = false;
  } else {
    const auto& e = s->history.back();
    s->position = parse_dpn(e.dpn);
    s->episode = e.episode;
    s->token = e.token;
    s->table_broken = e.table_broken;
  }
  snapshot(*s);
  return s->json();
}

Json GameService::hint(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  const Position& p = s->position;
  if (terminal_status(p) != TerminalStatus::Ongoing) throw ServiceError(409, "game_over", "the game is over");
  Json out;
  if (p.to_move == Player::D) {
    auto d = tactics::duke_policy(p, {}, s->res.get());
    out = {{"move", move_json(d.move)}, {"rationale", d.rationale}};
  } else if (s->res) {
    Move m = solver::best_move(*s->res, p);
    auto after = solver::query_label(*s->res, apply_move(p, m));
    out = {{"move", move_json(m)}, {"rationale", "solver " + std::string(solver::label_name(after.label))}};
  } else {
    out = {{"move", move_json(greedy_block(p))}, {"rationale", "greedy block"}};
  }
  if (s->res) {
    auto info = solver::query_label(*s->res, p);
    out["label"] = solver::label_name(info.label);
    if (info.distance != solver::kNoDistance) out["distance"] = info.distance;
  }
  return out;
}

Json GameService::evaluate(const std::string& id) {
  auto s = find(id);
  std::lock_guard lock(s->mutex);
  const Position& p = s->position;
  if (!s->res)
    throw ServiceError(409, "unsolved", "unsolved configuration: no solved space for " +
                                            space_key(p.dims, s->config.white_budget, s->config.black_budget));
  Json moves = Json::array();
  if (terminal_status(p) == TerminalStatus::Ongoing) {
    for (const Move& m : legal_moves(p)) {
      auto info = solver::query_label(*s->res, apply_move(p, m));
      Json item = {{"move", move_json(m)}, {"label", solver::label_name(info.label)}};
      if (info.distance != solver::kNoDistance) item["distance"] = info.distance;
      moves.push_back(item);
    }
  }
  auto here = solver::query_label(*s->res, p);
  Json out = {{"position", position_json(p)}, {"label", solver::label_name(here.label)}, {"moves", moves}};
  if (here.distance != solver::kNoDistance) out["distance"] = here.distance;
  return out;
}

Json GameService::health() const { return {{"status", "ok"}}; }

}  // namespace dukego::service
