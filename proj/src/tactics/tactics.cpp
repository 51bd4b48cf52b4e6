#include "dukego/tactics.hpp"

#include <array>
#include <deque>

#include "dukego/solver.hpp"

namespace dukego::tactics {

std::string_view kind_name(TacticKind k) {
  switch (k) {
    case TacticKind::ImminentWin: return "ImminentWin";
    case TacticKind::CornerWin: return "CornerWin";
    case TacticKind::Fantastic: return "Fantastic";
  }
  return "?";
}

std::string TacticReport::orientation() const {
  if (kind != TacticKind::CornerWin || !side) return std::string(1, dir_letter(edge));
  Dir vertical = (edge == Dir::N || edge == Dir::S) ? edge : *side;
  Dir horizontal = (edge == Dir::N || edge == Dir::S) ? *side : edge;
  return {dir_letter(vertical), dir_letter(horizontal)};
}

std::string TacticReport::label() const { return std::string(kind_name(kind)) + "(" + orientation() + ")"; }

namespace {

TacticReport report(TacticKind kind, Dir edge, std::optional<Dir> side = std::nullopt) {
  TacticReport r;
  r.kind = kind;
  r.edge = edge;
  r.side = side;
  return r;
}

// A view of the board in which `edge` is south and `side` is east.
class Frame {
 public:
  Frame(Dims dims, Dir edge, Dir side) : global_(dims) {
    for (const Transform& t : Transform::all()) {
      Transform inv = t.inverse();
      if (inv.apply(Dir::S) == edge && inv.apply(Dir::E) == side) {
        to_local_ = t;
        to_global_ = inv;
        break;
      }
    }
    local_ = to_local_.image(dims);
  }

  Dims local() const { return local_; }
  Square local(Square s) const { return to_local_.apply(global_, s); }
  Square global(Square s) const { return to_global_.apply(local_, s); }
  Dir global(Dir d) const { return to_global_.apply(d); }

 private:
  Dims global_;
  Dims local_;
  Transform to_local_;
  Transform to_global_;
};

std::array<Dir, 2> perpendicular(Dir d) {
  if (d == Dir::N || d == Dir::S) return {Dir::E, Dir::W};
  return {Dir::S, Dir::N};
}

// Lines are numbered by their distance to the edge in direction `toward`.
int line_offset(Dims dims, Square duke, Square s, Dir toward) {
  return distance_to_edge(dims, duke, toward) - distance_to_edge(dims, s, toward);
}

// True when `s` lies strictly on the `side` of the duke.
bool on_side(Square duke, Square s, Dir side) {
  switch (side) {
    case Dir::N: return s.row < duke.row;
    case Dir::S: return s.row > duke.row;
    case Dir::E: return s.col > duke.col;
    case Dir::W: return s.col < duke.col;
  }
  return false;
}

template <typename Fn>
void for_each_stone(const Position& p, Fn&& fn) {
  for (Square s : p.blacks) fn(s);
  for (Square s : p.whites) fn(s);
}

// Count of stones in the duke's line and the next line toward `d`.
int band_count(const Position& p, Dir d) {
  int n = 0;
  for_each_stone(p, [&](Square s) {
    int off = line_offset(p.dims, p.duke, s, d);
    if (off == 0 || off == 1) ++n;
  });
  return n;
}

// Running direction along the duke's line with no stone of the band
// (duke's line plus the line toward `front`) on that side.
std::optional<Dir> clean_side(const Position& p, Dir front) {
  std::optional<Dir> best;
  for (Dir side : perpendicular(front)) {
    bool clean = true;
    for_each_stone(p, [&](Square s) {
      int off = line_offset(p.dims, p.duke, s, front);
      if ((off == 0 || off == 1) && on_side(p.duke, s, side)) clean = false;
    });
    if (!clean || !p.is_empty(step(p.duke, side))) continue;
    if (!best || distance_to_edge(p.dims, p.duke, side) < distance_to_edge(p.dims, p.duke, *best)) best = side;
  }
  return best;
}

void require_duke_turn(const Position& p) {
  if (p.to_move != Player::D || terminal_status(p) != TerminalStatus::Ongoing)
    throw ContractViolation("duke move requested for " + format_dpn(p));
}

}  // namespace

std::optional<TacticReport> detect_imminent_win(const Position& p) {
  if (terminal_status(p) != TerminalStatus::Ongoing) return std::nullopt;
  for (Dir e : {Dir::S, Dir::E, Dir::N, Dir::W}) {
    if (distance_to_edge(p.dims, p.duke, e) != 1) continue;
    int in_band = 0;
    for_each_stone(p, [&](Square s) {
      if (distance_to_edge(p.dims, s, e) <= 1) ++in_band;
    });
    if (in_band <= 1) return report(TacticKind::ImminentWin, e);
  }
  return std::nullopt;
}

std::pair<Move, TacticReport> imminent_win_move(const Position& p, const TacticReport& r) {
  require_duke_turn(p);
  if (r.kind != TacticKind::ImminentWin || distance_to_edge(p.dims, p.duke, r.edge) != 1)
    throw TacticFailure("imminent win episode does not match " + format_dpn(p));
  if (p.is_empty(step(p.duke, r.edge))) return {Move::step(r.edge), r};
  TacticReport next = r;
  if (r.running_direction) {
    if (!p.is_empty(step(p.duke, *r.running_direction)))
      throw TacticFailure("imminent win run blocked in " + format_dpn(p));
  } else {
    auto side = clean_side(p, r.edge);
    if (!side) throw TacticFailure("no stone-free running direction in " + format_dpn(p));
    next.running_direction = side;
  }
  return {Move::step(*next.running_direction), next};
}

std::optional<TacticReport> detect_corner_win(const Position& p) {
  if (terminal_status(p) != TerminalStatus::Ongoing) return std::nullopt;
  for (Dir edge : {Dir::S, Dir::E, Dir::N, Dir::W}) {
    for (Dir side : perpendicular(edge)) {
      Frame f(p.dims, edge, side);
      const int m = f.local().rows, n = f.local().cols;
      if (m < 5 || n < 5) continue;
      if (f.local(p.duke) != Square{m - 2, n - 3}) continue;
      bool clear = true;
      for_each_stone(p, [&](Square s) {
        Square l = f.local(s);
        if (l.row >= m - 1 || l.col >= n - 1 || l == Square{m - 2, n - 2}) clear = false;
      });
      if (clear) return report(TacticKind::CornerWin, edge, side);
    }
  }
  return std::nullopt;
}

std::pair<Move, TacticReport> corner_win_move(const Position& p, const TacticReport& r) {
  require_duke_turn(p);
  if (r.kind != TacticKind::CornerWin || !r.side) throw TacticFailure("not a corner win episode");
  Frame f(p.dims, r.edge, *r.side);
  const int m = f.local().rows, n = f.local().cols;
  Square duke = f.local(p.duke);
  auto empty = [&](Square local) { return p.is_empty(f.global(local)); };
  auto imminent = [&](Dir local_edge) { return report(TacticKind::ImminentWin, f.global(local_edge)); };

  if (duke == Square{m - 2, n - 3}) {
    if (empty({m - 1, n - 3})) return {Move::step(f.global(Dir::S)), imminent(Dir::S)};
    if (!empty({m - 2, n - 2})) throw TacticFailure("corner win square 1 blocked in " + format_dpn(p));
    TacticReport next = r;
    next.corner_step = 1;
    return {Move::step(f.global(Dir::E)), next};
  }
  if (duke == Square{m - 2, n - 2}) {
    if (empty({m - 2, n - 1})) return {Move::step(f.global(Dir::E)), imminent(Dir::E)};
    if (!empty({m - 1, n - 2})) throw TacticFailure("corner win square 2 blocked in " + format_dpn(p));
    return {Move::step(f.global(Dir::S)), imminent(Dir::S)};
  }
  throw TacticFailure("duke left the corner win script in " + format_dpn(p));
}

Dir fantastic_direction(const Position& p) {
  if (p.monotone() || p.hand.blacks_unlimited() || p.white_budget() > 2 || p.black_budget() > 1)
    throw ContractViolation("fantastic imminent win needs at most two whites and one black");
  static constexpr std::array<Dir, 4> kOrder{Dir::S, Dir::E, Dir::N, Dir::W};
  if (!p.blacks.empty()) {
    Square b = p.blacks.front();
    for (Dir d : kOrder)
      if (on_side(p.duke, b, opposite(d))) return d;
  }
  for (Dir d : kOrder)
    if (band_count(p, d) <= 1) return d;
  return Dir::S;
}

Episode episode_for(const Position& p) {
  if (auto r = detect_imminent_win(p)) return {r};
  if (auto r = detect_corner_win(p)) return {r};
  return {};
}

namespace {

std::optional<PolicyDecision> fantastic_step(const Position& p, const Episode& ep) {
  std::optional<TacticReport> cur;
  if (ep.active && ep.active->kind == TacticKind::Fantastic) cur = ep.active;
  // Re-orient once a black stone is not strictly behind the duke.
  if (cur && !p.blacks.empty() && !on_side(p.duke, p.blacks.front(), opposite(cur->edge))) cur.reset();
  if (!cur) cur = report(TacticKind::Fantastic, fantastic_direction(p));
  const Dir d = cur->edge;
  Square front = step(p.duke, d);

  TacticReport next = *cur;
  if (p.is_empty(front)) {
    next.running_direction.reset();
    Square beyond = step(front, d);
    next.fantasy_line = (d == Dir::N || d == Dir::S) ? beyond.row : beyond.col;
    return PolicyDecision{Move::step(d), Episode{next}, PolicyStage::Fantastic, next.label()};
  }
  if (!cur->running_direction || !p.is_empty(step(p.duke, *cur->running_direction))) {
    auto side = clean_side(p, d);
    if (!side) return std::nullopt;
    next.running_direction = side;
  }
  next.fantasy_line = (d == Dir::N || d == Dir::S) ? front.row : front.col;
  return PolicyDecision{Move::step(*next.running_direction), Episode{next}, PolicyStage::Fantastic, next.label()};
}

Move greedy_step(const Position& p) {
  const Dims dims = p.dims;
  std::vector<int> first(dims.area(), -1);
  std::deque<Square> queue;
  for (Dir d : kAllDirs) {
    Square t = step(p.duke, d);
    if (!p.is_empty(t)) continue;
    if (dims.on_edge(t)) return Move::step(d);
    first[dims.id(t)] = static_cast<int>(d);
    queue.push_back(t);
  }
  while (!queue.empty()) {
    Square s = queue.front();
    queue.pop_front();
    for (Dir d : kAllDirs) {
      Square t = step(s, d);
      if (!p.is_empty(t) || first[dims.id(t)] >= 0) continue;
      first[dims.id(t)] = first[dims.id(s)];
      if (dims.on_edge(t)) return Move::step(static_cast<Dir>(first[dims.id(t)]));
      queue.push_back(t);
    }
  }
  for (Dir d : kAllDirs)
    if (p.is_empty(step(p.duke, d))) return Move::step(d);
  throw ContractViolation("duke has no legal step in " + format_dpn(p));
}

// The rationale names the tactic being played, not the one it hands over to.
PolicyDecision from_tactic(std::pair<Move, TacticReport> mv, PolicyStage stage, const TacticReport& playing) {
  return {mv.first, Episode{mv.second}, stage, playing.label()};
}

}  // namespace

PolicyDecision duke_policy(const Position& p, const Episode& episode, const solver::SolveResult* res) {
  require_duke_turn(p);

  for (Dir d : {Dir::S, Dir::E, Dir::N, Dir::W}) {
    Square t = step(p.duke, d);
    if (p.dims.on_edge(t) && p.is_empty(t)) return {Move::step(d), {}, PolicyStage::EdgeStep, "EdgeStep"};
  }

  const auto& active = episode.active;
  try {
    if (active && active->kind == TacticKind::ImminentWin)
      return from_tactic(imminent_win_move(p, *active), PolicyStage::Imminent, *active);
  } catch (const TacticFailure&) {
  }
  if (auto r = detect_imminent_win(p)) {
    try {
      return from_tactic(imminent_win_move(p, *r), PolicyStage::Imminent, *r);
    } catch (const TacticFailure&) {
    }
  }

  try {
    if (active && active->kind == TacticKind::CornerWin)
      return from_tactic(corner_win_move(p, *active), PolicyStage::Corner, *active);
  } catch (const TacticFailure&) {
  }
  if (auto r = detect_corner_win(p)) {
    try {
      return from_tactic(corner_win_move(p, *r), PolicyStage::Corner, *r);
    } catch (const TacticFailure&) {
    }
  }

  for (Dir d : {Dir::S, Dir::E, Dir::N, Dir::W}) {
    if (!p.is_empty(step(p.duke, d))) continue;
    Position next = apply_move(p, Move::step(d));
    auto r = detect_imminent_win(next);
    if (!r) r = detect_corner_win(next);
    if (r) return {Move::step(d), Episode{*r}, PolicyStage::Entry, "enter " + r->label()};
  }

  if (!p.monotone() && !p.hand.blacks_unlimited() && p.white_budget() <= 2 && p.black_budget() <= 1) {
    if (auto step_decision = fantastic_step(p, episode)) return *step_decision;
  }

  if (res && res->indexer().contains(p)) {
    auto info = solver::query_label(*res, p);
    std::string why = "solver " + std::string(solver::label_name(info.label));
    if (info.distance != solver::kNoDistance) why += " in " + std::to_string(info.distance);
    return {solver::best_move(*res, p), {}, PolicyStage::Solver, why};
  }
  return {greedy_step(p), {}, PolicyStage::Greedy, "greedy"};
}

}  // namespace dukego::tactics
