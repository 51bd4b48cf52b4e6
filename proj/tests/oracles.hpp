#pragma once

// Independent checks shared by the unit tests and the acceptance runner.
// They walk positions with the plain rules (legal_moves / apply_move) and
// never reuse the solver's predecessor or successor code.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "dukego/core.hpp"
#include "dukego/solver.hpp"
#include "dukego/strategy.hpp"

namespace oracle {

using namespace dukego;

struct Tally {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
  std::string first;

  void fail(const std::string& what) {
    if (violations++ == 0) first = what;
  }
  bool ok() const { return violations == 0 && checked > 0; }
};

inline solver::Label label_of(const solver::SolveResult& res, const Position& p) {
  return res.label(res.indexer().index(p));
}

// D-turn D-win iff some successor is D-win; G-turn D-win iff every
// successor is; terminals labelled by terminal_status.
inline Tally local_consistency(const solver::SolveResult& res) {
  Tally t;
  const auto& ix = res.indexer();
  for (std::uint64_t i = 0; i < ix.total_states(); ++i) {
    if (!ix.valid(i)) continue;
    ++t.checked;
    const Position p = ix.position(i);
    const solver::Label here = res.label(i);
    const TerminalStatus status = terminal_status(p);
    if (status == TerminalStatus::DWin) {
      if (here != solver::Label::DWin) t.fail("edge state not D-win: " + format_dpn(p));
      continue;
    }
    if (status == TerminalStatus::GWinImmobilized) {
      if (here != solver::Label::GImmobilize) t.fail("immobilized state mislabelled: " + format_dpn(p));
      continue;
    }
    bool any = false, all = true;
    for (const Move& m : legal_moves(p)) {
      bool d = label_of(res, apply_move(p, m)) == solver::Label::DWin;
      any = any || d;
      all = all && d;
    }
    bool expect = p.to_move == Player::D ? any : all;
    if ((here == solver::Label::DWin) != expect) t.fail("inconsistent label: " + format_dpn(p));
  }
  return t;
}

// From every non-terminal D-win state, best_move lands exactly one step
// closer.
inline Tally distance_decrease(const solver::SolveResult& res) {
  Tally t;
  const auto& ix = res.indexer();
  for (std::uint64_t i = 0; i < ix.total_states(); ++i) {
    if (!ix.valid(i) || res.label(i) != solver::Label::DWin) continue;
    const Position p = ix.position(i);
    if (terminal_status(p) != TerminalStatus::Ongoing) continue;
    ++t.checked;
    const Position next = apply_move(p, solver::best_move(res, p));
    const std::uint64_t j = ix.index(next);
    if (res.label(j) != solver::Label::DWin || res.distance(j) + 1 != res.distance(i))
      t.fail("distance does not drop by one: " + format_dpn(p));
  }
  return t;
}

inline Tally symmetry_invariance(const solver::SolveResult& res) {
  Tally t;
  const auto& ix = res.indexer();
  const auto syms = symmetries(ix.dims());
  for (std::uint64_t i = 0; i < ix.total_states(); ++i) {
    if (!ix.valid(i)) continue;
    ++t.checked;
    const Position p = ix.position(i);
    for (const Transform& s : syms)
      if (label_of(res, s.apply(p)) != res.label(i)) t.fail("label changes under symmetry: " + format_dpn(p));
  }
  return t;
}

// An extra stone on the board, with G's hand unchanged, never turns a G-win
// state into a D-win state. `larger` has one more white (or black) in its
// budget than `res`, so every G-win state of `res` plus one stone lies in it.
inline Tally monotonicity(const solver::SolveResult& res, const solver::SolveResult& larger, bool white) {
  Tally t;
  const auto& ix = res.indexer();
  for (std::uint64_t i = 0; i < ix.total_states(); ++i) {
    if (!ix.valid(i) || res.label(i) == solver::Label::DWin) continue;
    const Position p = ix.position(i);
    for (int id = 0; id < p.dims.area(); ++id) {
      const Square s = p.dims.square(id);
      if (!p.is_empty(s)) continue;
      Position q = p;
      auto& stones = white ? q.whites : q.blacks;
      stones.push_back(s);
      std::sort(stones.begin(), stones.end());
      ++t.checked;
      if (label_of(larger, q) == solver::Label::DWin) t.fail("extra stone helps D: " + format_dpn(q));
    }
  }
  return t;
}

// Whoever wins moving second also wins moving first.
inline bool first_mover_advantage(const solver::StartLabels& s) {
  const bool d_wins_first = s.d_first == solver::Label::DWin;
  const bool d_wins_second = s.g_first == solver::Label::DWin;
  return !d_wins_second || d_wins_first;
}

// Plain minimax for the standard game: unlimited blacks, G must place.
class NaiveMonotone {
 public:
  explicit NaiveMonotone(Dims dims) : dims_(dims) {}

  bool d_wins(Player first) { return solve(dims_.id(duke_start(dims_)), 0, first == Player::D); }
  std::uint64_t states() const { return memo_.size(); }

 private:
  bool solve(int duke, std::uint64_t blacks, bool d_turn) {
    const Square s = dims_.square(duke);
    if (dims_.on_edge(s)) return true;
    const std::uint64_t key = (blacks << 8 | static_cast<std::uint64_t>(duke)) << 1 | (d_turn ? 1 : 0);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    bool result;
    if (d_turn) {
      result = false;
      for (Dir d : kAllDirs) {
        const Square t = step(s, d);
        if (blacks >> dims_.id(t) & 1) continue;
        if (solve(dims_.id(t), blacks, false)) {
          result = true;
          break;
        }
      }
    } else {
      result = true;
      for (int q = 0; q < dims_.area(); ++q) {
        if (q == duke || (blacks >> q & 1)) continue;
        if (!solve(duke, blacks | 1ull << q, true)) {
          result = false;
          break;
        }
      }
    }
    memo_[key] = result;
    return result;
  }

  Dims dims_;
  std::unordered_map<std::uint64_t, bool> memo_;
};

// Follows `strategy` against every D move and asks the solver about each
// reached state. Returns the number of reached states labelled D-win
// (expected 0); `reached` receives the number of distinct states.
inline std::uint64_t strategy_closure(const solver::SolveResult& res, const strategy::GStrategy& g,
                                      Player first_mover, std::uint64_t* reached = nullptr) {
  const auto& ix = res.indexer();
  const Position start =
      start_position(ix.dims(), first_mover, ix.white_budget(), ix.black_budget());
  std::map<std::pair<std::uint64_t, strategy::Token>, bool> seen;
  std::deque<std::pair<Position, strategy::Token>> queue;
  queue.emplace_back(start, g.initial(start));
  seen[{ix.index(start), queue.back().second}] = true;
  std::uint64_t bad = 0;
  while (!queue.empty()) {
    auto [p, tok] = queue.front();
    queue.pop_front();
    if (label_of(res, p) == solver::Label::DWin) {
      ++bad;
      continue;
    }
    if (terminal_status(p) != TerminalStatus::Ongoing) continue;
    std::vector<std::pair<Position, strategy::Token>> next;
    if (p.to_move == Player::D) {
      for (const Move& m : legal_moves(p)) next.emplace_back(apply_move(p, m), tok);
    } else {
      auto [m, t2] = g.move(p, tok);
      next.emplace_back(apply_move(p, m), t2);
    }
    for (auto& [q, t] : next)
      if (seen.emplace(std::pair{ix.index(q), t}, true).second) queue.emplace_back(q, t);
  }
  if (reached) *reached = seen.size();
  return bad;
}

// Expected fairness for 5 <= m <= n <= 9: fair on 8x8, 7x8 and 6xn with
// n >= 9; D wins below, G wins above.
inline char expected_fairness(int m, int n) {
  if (m > n) std::swap(m, n);
  if (m <= 5) return 'D';
  if (m == 6) return n <= 8 ? 'D' : '*';
  if (m == 7) return n == 7 ? 'D' : n == 8 ? '*' : 'G';
  if (m == 8) return n == 8 ? '*' : 'G';
  return 'G';
}

}  // namespace oracle
