// Command-line front end: fairness tables, solving, verification, strategy
// extraction, the HTTP service and a text play loop.
//
// Exit codes: 0 success, 1 usage error, 2 unsolved cells, 3 verification
// failure.

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "dukego/core.hpp"
#include "dukego/service.hpp"
#include "dukego/solver.hpp"
#include "dukego/strategy.hpp"
#include "dukego/tactics.hpp"

namespace fs = std::filesystem;
using namespace dukego;
using service::Json;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kUnsolved = 2;
constexpr int kFailed = 3;

class UsageError : public Error {
 public:
  using Error::Error;
};

Dims parse_dims(const std::string& text) {
  auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    Dims d{std::stoi(text.substr(0, x), &a), std::stoi(text.substr(x + 1), &b)};
    if (a != x || b != text.size() - x - 1 || !d.valid()) throw std::invalid_argument(text);
    return d;
  } catch (const std::exception&) {
    throw UsageError("bad board size '" + text + "' (expected MxN)");
  }
}

int parse_budget(const std::string& text) {
  if (text == "inf") return kUnlimited;
  try {
    std::size_t used = 0;
    int v = std::stoi(text, &used);
    if (used != text.size() || v < 0) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError("bad stone budget '" + text + "' (expected a count or inf)");
  }
}

Player parse_player(const std::string& text) {
  if (text == "D") return Player::D;
  if (text == "G") return Player::G;
  throw UsageError("bad player '" + text + "' (expected D or G)");
}

std::string dims_text(Dims d) { return std::to_string(d.rows) + "x" + std::to_string(d.cols); }

// Solver labels with draw and immobilization both counted as G wins.
std::string winner_text(solver::Label l) { return l == solver::Label::DWin ? "D-win" : "G-win"; }

std::string env_or(const char* name, const std::string& fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

struct Common {
  std::string white = "3";
  std::string black = "0";
  std::string first;
  std::string format = "text";
  std::string out;
  int threads = 1;
  double memory_gb = 3.0;
};

void add_budgets(CLI::App* cmd, Common& c) {
  cmd->add_option("-w,--white", c.white, "white stones for G")->capture_default_str();
  cmd->add_option("-b,--black", c.black, "black stones for G (count or inf)")->capture_default_str();
}

void add_format(CLI::App* cmd, Common& c) {
  cmd->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}))->capture_default_str();
}

solver::SolveOptions solve_options(const Common& c, bool keep_distance) {
  solver::SolveOptions o;
  o.threads = c.threads;
  o.keep_distance = keep_distance;
  o.memory_cap_bytes = static_cast<std::uint64_t>(c.memory_gb * double(1ull << 30));
  return o;
}

void print_json(const Json& j) { std::cout << j.dump(2) << "\n"; }

// ---- table ----------------------------------------------------------------

int cmd_table(const Common& c, const std::string& min_text, const std::string& max_text, std::uint64_t state_cap) {
  const int w = parse_budget(c.white), b = parse_budget(c.black);
  if (w == kUnlimited || b == kUnlimited) throw UsageError("the table needs finite budgets (the default 3 whites stands in for unlimited blacks)");
  const Dims lo = parse_dims(min_text), hi = parse_dims(max_text);
  struct CellResult {
    int m, n;
    std::optional<solver::StartLabels> labels;
    std::string note;
  };
  std::vector<CellResult> cells;
  bool unsolved = false;
  for (int m = lo.rows; m <= hi.rows; ++m) {
    for (int n = std::max(m, lo.cols); n <= hi.cols; ++n) {
      CellResult cell{m, n, std::nullopt, ""};
      Dims d{m, n};
      if (solver::state_count(d, w, b) > state_cap) {
        cell.note = "over the state cap";
      } else {
        try {
          auto res = solver::solve_bounded(d, w, b, solve_options(c, false));
          cell.labels = solver::start_labels(res);
        } catch (const solver::CapacityError& e) {
          cell.note = e.what();
        }
      }
      if (!cell.labels) unsolved = true;
      if (c.format == "text") std::cerr << "  " << dims_text(d) << (cell.labels ? " solved" : " unsolved") << "\n";
      cells.push_back(cell);
    }
  }
  auto symbol = [](const CellResult& cell) -> std::string {
    if (!cell.labels) return "?";
    try {
      return std::string(solver::fairness_symbol(solver::classify(*cell.labels)));
    } catch (const solver::ConsistencyFailure&) {
      return "!";
    }
  };
  const std::string proxy = w == 3 && b == 0
                                ? "bounded variant with 3 white stones, standing in for unlimited black stones"
                                : "bounded variant with w=" + std::to_string(w) + " b=" + std::to_string(b);
  if (c.format == "json") {
    Json arr = Json::array();
    for (const auto& cell : cells) {
      Json j = {{"m", cell.m}, {"n", cell.n}, {"entry", symbol(cell)}};
      if (cell.labels) {
        j["dFirst"] = solver::label_name(cell.labels->d_first);
        j["gFirst"] = solver::label_name(cell.labels->g_first);
      } else {
        j["unsolved"] = cell.note;
      }
      arr.push_back(j);
    }
    print_json({{"variant", proxy}, {"white", w}, {"black", b}, {"cells", arr}});
  } else {
    std::cout << "Dukego fairness table: " << proxy << "\n";
    std::cout << "D = D wins moving first or second, G = G wins either way, * = first mover wins, ? = unsolved\n\n";
    std::cout << "      ";
    for (int n = lo.cols; n <= hi.cols; ++n) std::cout << " n=" << n << (n < 10 ? " " : "");
    std::cout << "\n";
    for (int m = lo.rows; m <= hi.rows; ++m) {
      std::cout << "m=" << m << (m < 10 ? "   " : "  ");
      for (int n = lo.cols; n <= hi.cols; ++n) {
        auto it = std::find_if(cells.begin(), cells.end(), [&](const auto& x) { return x.m == m && x.n == n; });
        std::cout << "  " << (it == cells.end() ? " " : symbol(*it)) << "  ";
      }
      std::cout << "\n";
    }
  }
  return unsolved ? kUnsolved : kOk;
}

// ---- solve ----------------------------------------------------------------

int cmd_solve(const Common& c, const std::string& board) {
  const Dims d = parse_dims(board);
  const int w = parse_budget(c.white), b = parse_budget(c.black);
  if (b == kUnlimited) {
    if (w != 0) throw UsageError("unlimited black stones are solved only with --white 0 (the standard game)");
    Json report = Json::object();
    for (Player f : {Player::D, Player::G}) {
      auto proof = solver::solve_monotone(d, f);
      std::string name = f == Player::D ? "D first" : "G first";
      if (c.format == "json") {
        report[f == Player::D ? "dFirst" : "gFirst"] = {{"winner", solver::winner_name(proof.winner)},
                                                        {"nodes", proof.nodes},
                                                        {"memo", proof.memo.size()},
                                                        {"maxDepth", proof.max_depth}};
      } else {
        std::cout << name << ": " << solver::winner_name(proof.winner) << " (standard game, " << proof.nodes
                  << " nodes, " << proof.memo.size() << " memo entries)\n";
      }
    }
    if (c.format == "json") print_json({{"board", dims_text(d)}, {"variant", "standard"}, {"result", report}});
    return kOk;
  }
  auto res = solver::solve_bounded(d, w, b, solve_options(c, true));
  auto labels = solver::start_labels(res);
  if (!c.out.empty()) solver::save_cache(res, c.out);
  if (c.format == "json") {
    print_json({{"board", dims_text(d)},
                {"white", w},
                {"black", b},
                {"states", res.indexer().total_states()},
                {"dFirst", {{"winner", winner_text(labels.d_first)}, {"label", solver::label_name(labels.d_first)}}},
                {"gFirst", {{"winner", winner_text(labels.g_first)}, {"label", solver::label_name(labels.g_first)}}},
                {"cache", c.out}});
  } else {
    std::cout << "D first: " << winner_text(labels.d_first) << "; G first: " << winner_text(labels.g_first) << "\n";
    std::cout << "labels: D first " << solver::label_name(labels.d_first) << ", G first "
              << solver::label_name(labels.g_first) << " (" << res.indexer().total_states() << " states)\n";
    if (!c.out.empty()) std::cout << "cache written to " << c.out << "\n";
  }
  return kOk;
}

// ---- verify ---------------------------------------------------------------

struct VerifyArgs {
  bool tactics = false;
  std::string board;
  std::string max;
  std::string strategy_file;
  std::string diagrams_file;
  std::string reduction;
  std::string strategy_dir;
};

Json verdict_json(const strategy::Verdict& v) {
  return {{"gWins", v.g_wins}, {"states", v.states}, {"reason", v.reason}, {"counterexample", v.counterexample}};
}

void print_verdict(const std::string& what, const strategy::Verdict& v) {
  std::cout << what << ": " << (v.g_wins ? "G-win" : "D-win exposure") << " (" << v.states << " states; " << v.reason
            << ")\n";
  for (const auto& line : v.counterexample) std::cout << "  " << line << "\n";
}

std::vector<Player> first_movers(const Common& c) {
  if (c.first.empty()) return {Player::D, Player::G};
  return {parse_player(c.first)};
}

int cmd_verify(const Common& c, const VerifyArgs& a) {
  int modes = a.tactics + !a.strategy_file.empty() + !a.diagrams_file.empty() + !a.reduction.empty();
  if (modes != 1) throw UsageError("choose exactly one of --tactics, --strategy, --diagrams, --reduction");
  bool ok = true;
  Json report = Json::array();

  if (a.tactics) {
    const int w = parse_budget(c.white), b = parse_budget(c.black);
    if (w == kUnlimited || b == kUnlimited) throw UsageError("tactic verification needs finite budgets");
    std::vector<Dims> boards;
    if (!a.board.empty()) {
      boards.push_back(parse_dims(a.board));
    } else {
      Dims hi = parse_dims(a.max.empty() ? "6x9" : a.max);
      for (int m = 3; m <= hi.rows; ++m)
        for (int n = m; n <= hi.cols; ++n) boards.push_back({m, n});
    }
    for (Dims d : boards) {
      auto res = solver::solve_bounded(d, w, b, solve_options(c, false));
      auto audit = tactics::audit_tactics(res);
      ok = ok && audit.ok();
      if (c.format == "json") {
        report.push_back({{"board", dims_text(d)},
                          {"flagged", audit.flagged},
                          {"imminent", audit.imminent},
                          {"corner", audit.corner},
                          {"disagreements", audit.disagreements},
                          {"traversalFailures", audit.traversal_failures},
                          {"overLength", audit.over_length},
                          {"longest", audit.longest},
                          {"plyBound", audit.ply_bound},
                          {"examples", audit.examples}});
      } else {
        std::cout << dims_text(d) << " w" << w << " b" << b << ": " << audit.flagged << " flagged ("
                  << audit.imminent << " imminent, " << audit.corner << " corner), " << audit.disagreements
                  << " not D-win, " << audit.traversal_failures << " policy failures, longest win " << audit.longest
                  << "/" << audit.ply_bound << " plies " << (audit.ok() ? "OK" : "FAIL") << "\n";
        for (const auto& e : audit.examples) std::cout << "  " << e << "\n";
      }
    }
  } else if (!a.strategy_file.empty()) {
    auto map = strategy::MapStrategy::load(a.strategy_file);
    auto v = strategy::verify_g_strategy(map, map.dims(), map.white_budget(), map.black_budget(), map.first_mover());
    ok = v.g_wins;
    if (c.format == "json")
      report.push_back({{"strategy", a.strategy_file}, {"entries", map.size()}, {"verdict", verdict_json(v)}});
    else
      print_verdict(a.strategy_file + " (" + std::to_string(map.size()) + " entries)", v);
  } else if (!a.diagrams_file.empty()) {
    std::ifstream in(a.diagrams_file);
    if (!in) throw UsageError("cannot open " + a.diagrams_file);
    std::stringstream text;
    text << in.rdbuf();
    auto ds = strategy::parse_diagrams(text.str());
    Json local = Json::array();
    for (const auto& d : ds.diagrams)
      for (const auto& viol : strategy::validate_local(d)) {
        ok = false;
        local.push_back("diagram " + std::to_string(d.id) + ": " + viol.detail);
      }
    strategy::TableStrategy table(ds);
    const int w = parse_budget(c.white), b = parse_budget(c.black);
    for (Player f : first_movers(c)) {
      auto v = strategy::verify_g_strategy(table, table.dims(), w, b, f);
      ok = ok && v.g_wins;
      if (c.format == "json") {
        report.push_back({{"diagrams", a.diagrams_file},
                          {"first", f == Player::D ? "D" : "G"},
                          {"local", local},
                          {"verdict", verdict_json(v)}});
      } else {
        for (const auto& l : local) std::cout << "local violation: " << l.get<std::string>() << "\n";
        print_verdict(a.diagrams_file + std::string(f == Player::D ? " (D first)" : " (G first)"), v);
      }
    }
  } else {
    const Dims d = parse_dims(a.reduction);
    const int w = parse_budget(c.white), b = parse_budget(c.black);
    std::vector<std::shared_ptr<const strategy::GStrategy>> bases;
    for (const auto& entry : fs::directory_iterator(a.strategy_dir)) {
      if (entry.path().extension() != ".strat") continue;
      auto map = std::make_shared<strategy::MapStrategy>(strategy::MapStrategy::load(entry.path().string()));
      if (map->white_budget() == w && map->black_budget() == b && map->first_mover() == Player::G &&
          map->dims().rows <= d.rows && map->dims().cols <= d.cols && !(map->dims() == d))
        bases.push_back(map);
    }
    if (bases.empty()) throw UsageError("no G-first base strategies for w=" + c.white + " b=" + c.black + " in " + a.strategy_dir);
    strategy::ReductionStrategy red(d, bases);
    for (Player f : first_movers(c)) {
      auto v = strategy::verify_g_strategy(red, d, w, b, f);
      ok = ok && v.g_wins;
      if (c.format == "json")
        report.push_back({{"reduction", dims_text(d)}, {"first", f == Player::D ? "D" : "G"}, {"verdict", verdict_json(v)}});
      else
        print_verdict("reduction on " + dims_text(d) + (f == Player::D ? " (D first)" : " (G first)"), v);
    }
  }
  if (c.format == "json") print_json({{"ok", ok}, {"results", report}});
  return ok ? kOk : kFailed;
}

// ---- extract --------------------------------------------------------------

int cmd_extract(const Common& c, const std::string& board) {
  const Dims d = parse_dims(board);
  const int w = parse_budget(c.white), b = parse_budget(c.black);
  if (w == kUnlimited || b == kUnlimited) throw UsageError("extraction needs finite budgets");
  const Player first = c.first.empty() ? Player::G : parse_player(c.first);
  auto res = solver::solve_bounded(d, w, b, solve_options(c, false));
  auto start = start_position(d, first, w, b);
  if (res.label(res.indexer().index(start)) == solver::Label::DWin) {
    std::cerr << "D wins " << dims_text(d) << " w" << w << " b" << b << " with " << (first == Player::D ? 'D' : 'G')
              << " moving first; there is no G strategy to extract\n";
    return kFailed;
  }
  auto map = strategy::extract_g_strategy(res, start);
  if (c.out.empty()) {
    map.write(std::cout);
  } else {
    map.save(c.out);
    std::cout << "wrote " << map.size() << " entries to " << c.out << "\n";
  }
  return kOk;
}

// ---- serve / play ---------------------------------------------------------

service::ServiceOptions service_options(const Common& c, const std::string& cache_dir, const std::string& strategy_dir) {
  service::ServiceOptions o;
  o.cache_dir = cache_dir.empty() ? env_or("DUKEGO_CACHE_DIR", "") : cache_dir;
  o.strategy_dir = strategy_dir.empty() ? env_or("DUKEGO_STRATEGY_DIR", DUKEGO_STRATEGY_DIR) : strategy_dir;
  o.threads = c.threads;
  return o;
}

std::atomic<service::HttpServer*> g_server{nullptr};

int cmd_serve(const Common& c, int port, const std::string& host, const std::string& cache_dir,
              const std::string& strategy_dir) {
  if (port < 0) port = std::atoi(env_or("DUKEGO_PORT", "8080").c_str());
  service::GameService svc(service_options(c, cache_dir, strategy_dir));
  service::HttpServer server(svc);
  int bound = server.bind(host, port);
  std::cout << "dukego service listening on http://" << host << ":" << bound << std::endl;
  g_server = &server;
  std::signal(SIGINT, [](int) {
    if (auto* s = g_server.load()) s->stop();
  });
  server.listen();
  g_server = nullptr;
  return kOk;
}

void draw(const Json& pos, std::ostream& out) {
  const int rows = pos["dims"]["rows"], cols = pos["dims"]["cols"];
  std::vector<std::string> grid(rows, std::string(cols, '.'));
  for (const auto& s : pos["blacks"]) grid[s["row"].get<int>() - 1][s["col"].get<int>() - 1] = 'x';
  for (const auto& s : pos["whites"]) grid[s["row"].get<int>() - 1][s["col"].get<int>() - 1] = 'o';
  grid[pos["duke"]["row"].get<int>() - 1][pos["duke"]["col"].get<int>() - 1] = 'K';
  for (const auto& line : grid) {
    for (char ch : line) out << ' ' << ch;
    out << "\n";
  }
  out << pos["dpn"].get<std::string>() << "  [" << pos["status"].get<std::string>() << "]\n";
}

int cmd_play(const Common& c, const std::string& board, const std::string& human, const std::string& cache_dir,
             const std::string& strategy_dir) {
  service::GameService svc(service_options(c, cache_dir, strategy_dir));
  Json config = {{"dims", board},
                 {"white", c.white == "inf" ? Json("inf") : Json(parse_budget(c.white))},
                 {"black", c.black == "inf" ? Json("inf") : Json(parse_budget(c.black))},
                 {"first", c.first.empty() ? "D" : c.first},
                 {"human", human}};
  Json game = svc.create_game(config);
  const std::string id = game["id"];
  std::cout << "moves: N S E W | W r,c | B r,c | R r,c>r,c | pass; also hint, eval, undo, quit\n";
  auto show = [&](const Json& g) {
    for (const auto& em : g.value("engineMoves", Json::array()))
      std::cout << "engine: " << em["move"]["text"].get<std::string>() << " (" << em["rationale"].get<std::string>()
                << ")\n";
    draw(g["position"], std::cout);
  };
  show(game);
  std::string line;
  while (game["status"] == "ongoing" && std::cout << "> " << std::flush && std::getline(std::cin, line)) {
    if (line.empty()) continue;
    try {
      if (line == "quit") break;
      if (line == "hint") {
        Json h = svc.hint(id);
        std::cout << h["move"]["text"].get<std::string>() << " (" << h["rationale"].get<std::string>() << ")\n";
      } else if (line == "eval") {
        Json e = svc.evaluate(id);
        for (const auto& m : e["moves"]) std::cout << "  " << m["move"]["text"].get<std::string>() << " " << m["label"].get<std::string>() << "\n";
      } else if (line == "undo") {
        game = svc.undo(id);
        draw(game["position"], std::cout);
      } else {
        game = svc.submit_move(id, {{"text", line}});
        show(game);
      }
    } catch (const service::ServiceError& e) {
      std::cout << e.code() << ": " << e.what() << "\n";
    }
  }
  std::cout << "game " << game["status"].get<std::string>() << "\n";
  return kOk;
}

// ---- experiment -----------------------------------------------------------

int cmd_experiment_budgets(const Common& c, const std::string& max_text, int max_black, std::uint64_t state_cap) {
  const Dims hi = parse_dims(max_text);
  const int w = parse_budget(c.white);
  Json rows = Json::array();
  std::cout << "Black stones G needs, alongside " << w << " white stone(s), to win moving first\n";
  for (int m = 5; m <= hi.rows; ++m) {
    for (int n = m; n <= hi.cols; ++n) {
      Dims d{m, n};
      std::string finding = "D wins for every b <= " + std::to_string(max_black);
      std::optional<int> least;
      for (int b = 0; b <= max_black; ++b) {
        if (solver::state_count(d, w, b) > state_cap) {
          finding = "undetermined: b=" + std::to_string(b) + " exceeds the state cap";
          break;
        }
        auto res = solver::solve_bounded(d, w, b, solve_options(c, false));
        if (solver::start_labels(res).g_first != solver::Label::DWin) {
          least = b;
          finding = "least b = " + std::to_string(b);
          break;
        }
      }
      std::cout << "  " << dims_text(d) << " w" << w << ": " << finding << "\n";
      rows.push_back({{"board", dims_text(d)}, {"finding", finding}, {"leastBlack", least ? Json(*least) : Json()}});
    }
  }
  if (c.format == "json") print_json({{"white", w}, {"results", rows}});
  return kOk;
}

int cmd_experiment_first_stone(const Common& c, const std::string& board) {
  const Dims d = parse_dims(board);
  const int w = parse_budget(c.white), b = parse_budget(c.black);
  auto res = solver::solve_bounded(d, w, b, solve_options(c, false));
  auto start = start_position(d, Player::G, w, b);
  Json holds = Json::array();
  std::cout << "G's first moves on " << dims_text(d) << " w" << w << " b" << b << " that avoid a D win:\n";
  for (const Move& m : legal_moves(start)) {
    auto info = solver::query_label(res, apply_move(start, m));
    if (info.label == solver::Label::DWin) continue;
    std::cout << "  " << format_move(m) << " (" << solver::label_name(info.label) << ")\n";
    holds.push_back(format_move(m));
  }
  if (holds.empty()) std::cout << "  none: D wins against every opening\n";
  if (c.format == "json") print_json({{"board", dims_text(d)}, {"white", w}, {"black", b}, {"holding", holds}});
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dukego engine, solver and strategy toolkit"};
  app.require_subcommand(1);
  Common c;

  auto* table = app.add_subcommand("table", "reproduce the fairness table");
  std::string table_min = "5x5", table_max = "9x9";
  std::uint64_t table_cap = 50'000'000;
  add_budgets(table, c);
  add_format(table, c);
  table->add_option("--min", table_min, "smallest board")->capture_default_str();
  table->add_option("--max", table_max, "largest board")->capture_default_str();
  table->add_option("--state-cap", table_cap, "cells with more states are reported unsolved")->capture_default_str();
  table->add_option("--threads", c.threads, "solver threads");

  auto* solve = app.add_subcommand("solve", "solve one board and print both start labels");
  std::string solve_board;
  solve->add_option("board", solve_board, "MxN")->required();
  add_budgets(solve, c);
  add_format(solve, c);
  solve->add_option("--out", c.out, "write a cache file");
  solve->add_option("--threads", c.threads, "solver threads");
  solve->add_option("--memory-gb", c.memory_gb, "refuse spaces estimated above this")->capture_default_str();

  auto* verify = app.add_subcommand("verify", "check tactics against the solver, or a G strategy exhaustively");
  VerifyArgs va;
  va.strategy_dir = DUKEGO_STRATEGY_DIR;
  verify->add_flag("--tactics", va.tactics, "tactic-vs-solver audit");
  verify->add_option("--board", va.board, "one board for --tactics");
  verify->add_option("--max", va.max, "all boards up to MxN for --tactics (default 6x9)");
  verify->add_option("--strategy", va.strategy_file, "strategy map file");
  verify->add_option("--diagrams", va.diagrams_file, "strategy diagram file");
  verify->add_option("--reduction", va.reduction, "verify the reduction strategy on MxN");
  verify->add_option("--strategy-dir", va.strategy_dir, "base strategies for --reduction")->capture_default_str();
  verify->add_option("--first", c.first, "first mover (default: both where it applies)");
  add_budgets(verify, c);
  add_format(verify, c);
  verify->add_option("--threads", c.threads, "solver threads");

  auto* extract = app.add_subcommand("extract", "extract a G strategy map from the solver");
  std::string extract_board;
  extract->add_option("board", extract_board, "MxN")->required();
  add_budgets(extract, c);
  extract->add_option("--first", c.first, "first mover (default G)");
  extract->add_option("--out", c.out, "output file (default stdout)");
  extract->add_option("--threads", c.threads, "solver threads");

  auto* serve = app.add_subcommand("serve", "run the HTTP service");
  int port = -1;
  std::string host = "127.0.0.1", cache_dir, strategy_dir;
  serve->add_option("--port", port, "port (default $DUKEGO_PORT or 8080)");
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--cache-dir", cache_dir, "solver cache directory (default $DUKEGO_CACHE_DIR)");
  serve->add_option("--strategy-dir", strategy_dir, "strategy map directory");
  serve->add_option("--threads", c.threads, "solver threads");

  auto* play = app.add_subcommand("play", "play against the engine in the terminal");
  std::string play_board = "8x8", human = "D";
  play->add_option("board", play_board, "MxN")->capture_default_str();
  add_budgets(play, c);
  play->add_option("--first", c.first, "first mover (default D)");
  play->add_option("--human", human, "your side, D or G")->capture_default_str();
  play->add_option("--cache-dir", cache_dir, "solver cache directory");
  play->add_option("--strategy-dir", strategy_dir, "strategy map directory");

  auto* experiment = app.add_subcommand("experiment", "exploratory solver sweeps");
  experiment->require_subcommand(1);
  auto* budgets = experiment->add_subcommand("budgets", "least black stones next to a single white stone");
  std::string exp_max = "6x6";
  int exp_black = 7;
  std::uint64_t exp_cap = 100'000'000;
  budgets->add_option("--max", exp_max, "largest board")->capture_default_str();
  budgets->add_option("--max-black", exp_black, "largest black budget tried")->capture_default_str();
  budgets->add_option("--state-cap", exp_cap, "skip spaces larger than this")->capture_default_str();
  std::string exp_white = "1";
  budgets->add_option("-w,--white", exp_white, "white stones")->capture_default_str();
  add_format(budgets, c);
  auto* first_stone = experiment->add_subcommand("first-stone", "G openings that avoid a D win");
  std::string fs_board = "6x9";
  first_stone->add_option("board", fs_board, "MxN")->capture_default_str();
  add_budgets(first_stone, c);
  add_format(first_stone, c);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*table) return cmd_table(c, table_min, table_max, table_cap);
    if (*solve) return cmd_solve(c, solve_board);
    if (*verify) return cmd_verify(c, va);
    if (*extract) return cmd_extract(c, extract_board);
    if (*serve) return cmd_serve(c, port, host, cache_dir, strategy_dir);
    if (*play) return cmd_play(c, play_board, human, cache_dir, strategy_dir);
    if (*budgets) {
      c.white = exp_white;
      return cmd_experiment_budgets(c, exp_max, exp_black, exp_cap);
    }
    if (*first_stone) return cmd_experiment_first_stone(c, fs_board);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const service::ServiceError& e) {
    std::cerr << e.code() << ": " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kOk;
}
