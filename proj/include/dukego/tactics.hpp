#pragma once

// The duke's named winning tactics and the composite duke policy.
//
// Imminent Win: the duke is one line away from an edge and G has at most one
// stone in the two lines nearest that edge. The duke wins even with G to
// move: once a stone sits in front of him he runs along the line away from
// the other stone until he reaches a side edge.
//
// Corner Win: in the frame where the chosen edge is south and the other
// incident edge east, the duke stands at (m-2, n-3), rows m-1..m and columns
// n-1..n are empty, and so is (m-2, n-2). The duke converts it into an
// Imminent Win on one of the two edges.
//
// Fantastic Imminent Win: against at most two white stones (plus at most one
// black), the duke treats the line next to him as a fantasy edge and keeps
// winning imminent wins toward it until the fantasy edge is the real one.

#include <optional>
#include <string>
#include <vector>

#include "dukego/core.hpp"

namespace dukego::solver {
class SolveResult;
}

namespace dukego::tactics {

class TacticFailure : public Error {
 public:
  using Error::Error;
};

enum class TacticKind : std::uint8_t { ImminentWin, CornerWin, Fantastic };

std::string_view kind_name(TacticKind k);

struct TacticReport {
  TacticKind kind = TacticKind::ImminentWin;
  // ImminentWin: the threatened edge. CornerWin: the edge at distance 2.
  // Fantastic: the direction of the fantasy edge.
  Dir edge = Dir::S;
  // CornerWin only: the edge at distance 3.
  std::optional<Dir> side;
  std::optional<Dir> running_direction;
  // Fantastic only: row or column index of the fantasy edge line.
  std::optional<int> fantasy_line;
  // CornerWin only: script step already played (0 at the start square).
  int corner_step = 0;

  // "S", or "SE" for corners.
  std::string orientation() const;
  std::string label() const;  // e.g. "CornerWin(SE)"
  friend bool operator==(const TacticReport&, const TacticReport&) = default;
};

std::optional<TacticReport> detect_imminent_win(const Position& p);
std::optional<TacticReport> detect_corner_win(const Position& p);

// The next duke step of an Imminent Win episode; the returned report carries
// the (now fixed) running direction. Throws TacticFailure if the position no
// longer fits the episode.
std::pair<Move, TacticReport> imminent_win_move(const Position& p, const TacticReport& r);

// The next step of a Corner Win script. When the step enters an Imminent
// Win, the returned report is that Imminent Win.
std::pair<Move, TacticReport> corner_win_move(const Position& p, const TacticReport& r);

// Requires the bounded variant with at most two whites and one black.
Dir fantastic_direction(const Position& p);

// Caller-owned memory of the tactic in progress.
struct Episode {
  std::optional<TacticReport> active;
  friend bool operator==(const Episode&, const Episode&) = default;
};

// The tactic an episode starting at `p` would follow: an Imminent Win if one
// is detected, else a Corner Win, else nothing.
Episode episode_for(const Position& p);

enum class PolicyStage : std::uint8_t { EdgeStep, Imminent, Corner, Entry, Fantastic, Solver, Greedy };

struct PolicyDecision {
  Move move;
  Episode next;
  PolicyStage stage = PolicyStage::Greedy;
  std::string rationale;
};

// Priority: step onto the edge; Imminent Win; Corner Win; step into a
// position where one of those fires (this covers the openings on 6xn, 7x7,
// 7x8 and 8x8); Fantastic Imminent Win; the solver's best move when `res`
// covers the position; a greedy step toward the nearest reachable edge.
// Requires D to move in an ongoing position; the move is always legal.
PolicyDecision duke_policy(const Position& p, const Episode& episode = {},
                           const solver::SolveResult* res = nullptr);

struct TacticAudit {
  std::uint64_t flagged = 0;  // non-terminal positions where a tactic fires
  std::uint64_t imminent = 0;
  std::uint64_t corner = 0;
  std::uint64_t disagreements = 0;       // flagged but not a D win
  std::uint64_t traversal_failures = 0;  // policy leaves the D attractor
  std::uint64_t over_length = 0;         // policy needs more than ply_bound plies
  int longest = 0;
  int ply_bound = 0;  // 2 * max(m, n)
  std::vector<std::string> examples;  // DPN of the first failures

  bool ok() const { return disagreements == 0 && traversal_failures == 0 && over_length == 0; }
};

// Checks every flagged position of a solved space, with either side to move:
// the solver must call it a D win, and duke_policy (starting from
// episode_for) must win against every G reply within ply_bound plies
// without leaving the D attractor.
TacticAudit audit_tactics(const solver::SolveResult& res);

}  // namespace dukego::tactics
