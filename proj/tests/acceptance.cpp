// Runs every gating criterion and prints one PASS/FAIL line per criterion.
// Exit status is the number of failed criteria.

#include <array>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dukego/solver.hpp"
#include "dukego/strategy.hpp"
#include "dukego/tactics.hpp"
#include "oracles.hpp"

#ifndef DUKEGO_CLI
#error "DUKEGO_CLI must name the command-line binary"
#endif

using namespace dukego;
using solver::Label;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::vector<solver::StartLabels> g_seen_labels;

std::string board(Dims d) { return std::to_string(d.rows) + "x" + std::to_string(d.cols); }

Outcome fairness_table() {
  std::ostringstream grid;
  int mismatches = 0;
  for (int m = 5; m <= 9; ++m)
    for (int n = m; n <= 9; ++n) {
      auto res = solver::solve_bounded({m, n}, 3, 0);
      auto labels = solver::start_labels(res);
      g_seen_labels.push_back(labels);
      char got = solver::fairness_symbol(solver::classify(labels))[0];
      char want = oracle::expected_fairness(m, n);
      if (got != want) {
        ++mismatches;
        grid << " " << m << "x" << n << "=" << got << "(want " << want << ")";
      }
    }
  return {mismatches == 0, mismatches == 0 ? "15 cells match; 3 whites stand in for unlimited blacks"
                                           : "mismatches:" + grid.str()};
}

Outcome inventory() {
  std::vector<std::string> bad;
  int cells = 0;
  auto check = [&](Dims d, int w, int b) {
    auto res = solver::solve_bounded(d, w, b);
    auto labels = solver::start_labels(res);
    g_seen_labels.push_back(labels);
    ++cells;
    if (labels.d_first != Label::DWin || labels.g_first != Label::DWin)
      bad.push_back(board(d) + " w" + std::to_string(w) + "b" + std::to_string(b));
  };
  check({8, 8}, 2, 0);
  check({9, 9}, 2, 0);
  for (int m = 3; m <= 7; ++m)
    for (int n = m; n <= 7; ++n) check({m, n}, 2, 1);
  if (bad.empty()) return {true, std::to_string(cells) + " spaces D-win for both first movers"};
  std::string detail = "not D-win:";
  for (const auto& s : bad) detail += " " + s;
  return {false, detail};
}

Outcome two_and_two() {
  std::string detail;
  bool ok = true;
  for (Dims d : {Dims{6, 6}, Dims{6, 7}}) {
    auto labels = solver::start_labels(solver::solve_bounded(d, 2, 2));
    g_seen_labels.push_back(labels);
    char got = solver::fairness_symbol(solver::classify(labels))[0];
    char want = oracle::expected_fairness(d.rows, d.cols);
    ok = ok && got == want;
    detail += board(d) + "=" + got + " ";
  }
  return {ok, detail + "(matches the 3-white table)"};
}

Outcome monotone() {
  std::vector<Dims> boards;
  for (int m = 3; m <= 4; ++m)
    for (int n = m; n <= 7; ++n) boards.push_back({m, n});
  for (int n = 5; n <= 7; ++n) boards.push_back({5, n});
  std::string failed;
  std::uint64_t nodes = 0;
  for (Dims d : boards) {
    auto proof = solver::solve_monotone(d, Player::G);
    nodes += proof.nodes;
    if (proof.winner != solver::Winner::D) failed += " " + board(d) + "=" + std::string(solver::winner_name(proof.winner));
  }
  if (!failed.empty()) return {false, "not proven:" + failed};
  return {true, std::to_string(boards.size()) + " boards proven D-win with G first, " + std::to_string(nodes) +
                    " nodes"};
}

Outcome tactic_audit() {
  std::uint64_t flagged = 0;
  int longest = 0;
  std::string failed;
  for (int m = 3; m <= 6; ++m)
    for (int n = m; n <= 9; ++n) {
      auto res = solver::solve_bounded({m, n}, 3, 0);
      auto a = tactics::audit_tactics(res);
      flagged += a.flagged;
      longest = std::max(longest, a.longest);
      if (!a.ok()) {
        failed += " " + board({m, n});
        if (!a.examples.empty()) failed += " [" + a.examples.front() + "]";
      }
    }
  if (!failed.empty()) return {false, "failures on" + failed};
  return {true, std::to_string(flagged) + " flagged positions agree with the solver; longest policy win " +
                    std::to_string(longest) + " plies"};
}

Outcome extraction() {
  std::vector<std::shared_ptr<const strategy::GStrategy>> bases;
  std::string detail;
  for (Dims d : {Dims{7, 8}, Dims{6, 9}}) {
    auto res = solver::solve_bounded(d, 3, 0);
    Position start = start_position(d, Player::G, 3, 0);
    auto map = std::make_shared<strategy::MapStrategy>(strategy::extract_g_strategy(res, start));
    if (oracle::strategy_closure(res, *map, Player::G) != 0) return {false, board(d) + " extracted map reaches a D win"};
    auto v = strategy::verify_g_strategy(*map, d, 3, 0, Player::G);
    if (!v.g_wins) return {false, board(d) + " verification failed: " + v.reason};
    detail += board(d) + " " + std::to_string(map->size()) + " entries/" + std::to_string(v.states) + " states; ";
    bases.push_back(map);
  }
  strategy::ReductionStrategy reduction({7, 9}, bases);
  for (Player first : {Player::D, Player::G}) {
    auto v = strategy::verify_g_strategy(reduction, {7, 9}, 3, 0, first);
    if (!v.g_wins) return {false, std::string("7x9 reduction fails with ") + player_letter(first) + " first: " + v.reason};
    detail += std::string("7x9 reduction holds, ") + player_letter(first) + " first (" + std::to_string(v.states) +
              " states); ";
  }
  return {true, detail.substr(0, detail.size() - 2)};
}

Outcome properties() {
  std::vector<std::string> bad;
  struct Space {
    Dims dims;
    int w, b;
  };
  auto name = [](Space s) { return board(s.dims) + " w" + std::to_string(s.w) + "b" + std::to_string(s.b); };
  std::map<std::string, std::unique_ptr<solver::SolveResult>> solved;
  auto get = [&](Space s) -> const solver::SolveResult& {
    auto& slot = solved[name(s)];
    if (!slot) slot = std::make_unique<solver::SolveResult>(solver::solve_bounded(s.dims, s.w, s.b));
    return *slot;
  };

  for (Space s : {Space{{5, 5}, 3, 0}, Space{{6, 6}, 2, 1}}) {
    const auto& res = get(s);
    auto check = [&](const char* what, const oracle::Tally& t) {
      if (!t.ok()) bad.push_back(name(s) + " " + what + ": " + t.first);
    };
    check("local consistency", oracle::local_consistency(res));
    check("distance decrease", oracle::distance_decrease(res));
    check("symmetry", oracle::symmetry_invariance(res));

    std::stringstream a;
    solver::write_cache(res, a);
    std::stringstream in(a.str());
    auto back = solver::read_cache(in);
    std::stringstream b;
    solver::write_cache(back, b);
    if (!(back == res) || a.str() != b.str()) bad.push_back(name(s) + " cache round-trip differs");
  }

  // The two named spaces hold no G-win state, so their monotonicity pairs
  // are empty; the smaller spaces with G wins below give the check content.
  std::uint64_t pairs = 0;
  struct Step {
    Space from;
    bool white;
  };
  for (Step st : {Step{{{5, 5}, 3, 0}, true}, Step{{{5, 5}, 3, 0}, false}, Step{{{6, 6}, 2, 1}, true},
                  Step{{{6, 6}, 2, 1}, false}, Step{{{4, 4}, 3, 1}, true}, Step{{{4, 4}, 3, 1}, false},
                  Step{{{5, 5}, 4, 0}, true}, Step{{{6, 6}, 3, 0}, true}}) {
    Space to{st.from.dims, st.from.w + (st.white ? 1 : 0), st.from.b + (st.white ? 0 : 1)};
    auto t = oracle::monotonicity(get(st.from), get(to), st.white);
    pairs += t.checked;
    if (t.violations) bad.push_back(name(st.from) + " to " + name(to) + " monotonicity: " + t.first);
    solved.erase(name(to));
  }
  if (pairs == 0) bad.push_back("monotonicity checked no pair");

  for (const auto& labels : g_seen_labels)
    if (!oracle::first_mover_advantage(labels)) bad.push_back("second mover wins somewhere");
  if (!bad.empty()) return {false, bad.front()};
  return {true, "local consistency, distance, symmetry and cache bit-exact on 5x5 w3 and 6x6 w2b1; monotonicity on " +
                    std::to_string(pairs) + " stone additions; first-mover on " +
                    std::to_string(g_seen_labels.size()) + " spaces"};
}

struct Run {
  int status;
  std::string output;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(DUKEGO_CLI) + " " + args + " 2>&1";
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::array<char, 4096> buf;
  while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

Outcome cli_only() {
  const std::string dir = DUKEGO_STRATEGY_DIR;
  struct Case {
    std::string args;
    std::string expect;
  };
  const std::vector<Case> cases = {
      {"solve 7x8 --white 3", "D first: D-win; G first: G-win"},
      {"solve 5x7 --white 0 --black inf", "G first: D-win"},
      {"table --white 3 --min 5x5 --max 6x9", "* "},
      {"verify --tactics --board 6x7 --white 3", ""},
      {"verify --strategy " + dir + "/7x8w3.strat", ""},
      {"verify --strategy " + dir + "/6x9w3.strat", ""},
      {"verify --reduction 7x9 --white 3 --strategy-dir " + dir, ""},
  };
  for (const Case& c : cases) {
    Run r = run(c.args);
    if (r.status != 0) return {false, "`dukego " + c.args + "` exited " + std::to_string(r.status) + ": " + r.output};
    if (!c.expect.empty() && r.output.find(c.expect) == std::string::npos)
      return {false, "`dukego " + c.args + "` printed: " + r.output};
  }
  return {true, std::to_string(cases.size()) + " CLI runs succeed from the command-line binary alone"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"fairness-table", fairness_table},
      {"inventory-claims", inventory},
      {"two-whites-two-blacks", two_and_two},
      {"monotone-solver", monotone},
      {"tactic-solver-agreement", tactic_audit},
      {"strategy-extraction", extraction},
      {"solver-properties", properties},
      {"cli-only", cli_only},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << " (" << timing << "): " << o.detail << std::endl;
    failed += !o.pass;
  }
  return failed;
}
