#include <algorithm>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_set>

#include "dukego/strategy.hpp"

namespace dukego::strategy {

MapStrategy::MapStrategy(Dims dims, int white_budget, int black_budget, Player first_mover)
    : ix_(dims, white_budget, black_budget), first_(first_mover) {}

std::pair<Move, Token> MapStrategy::move(const Position& p, Token token) const {
  if (p.to_move != Player::G) throw ContractViolation("strategy asked to move for D");
  if (!ix_.contains(p)) throw StrategyFailure("position outside the strategy's space: " + format_dpn(p));
  auto it = moves_.find(ix_.index(p));
  if (it == moves_.end()) throw StrategyFailure("no entry for " + format_dpn(p));
  return {it->second, token};
}

void MapStrategy::set(const Position& p, const Move& m) { moves_[ix_.index(p)] = m; }

bool MapStrategy::erase(const Position& p) { return moves_.erase(ix_.index(p)) > 0; }

std::optional<Move> MapStrategy::lookup(const Position& p) const {
  if (!ix_.contains(p)) return std::nullopt;
  auto it = moves_.find(ix_.index(p));
  if (it == moves_.end()) return std::nullopt;
  return it->second;
}

void MapStrategy::write(std::ostream& out) const {
  std::vector<std::pair<std::string, std::string>> lines;
  lines.reserve(moves_.size());
  for (const auto& [idx, m] : moves_) lines.emplace_back(format_dpn(ix_.position(idx)), format_move(m));
  std::sort(lines.begin(), lines.end());
  out << "# dims " << ix_.dims().rows << "x" << ix_.dims().cols << "\n";
  out << "# white " << ix_.white_budget() << "\n";
  out << "# black " << ix_.black_budget() << "\n";
  out << "# first " << (first_ == Player::D ? 'D' : 'G') << "\n";
  for (const auto& [dpn, m] : lines) out << dpn << '\t' << m << '\n';
}

MapStrategy MapStrategy::read(std::istream& in) {
  std::string line;
  int line_no = 0;
  Dims dims;
  int white = -1, black = -1;
  std::optional<Player> first;
  std::optional<MapStrategy> map;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream hs(line.substr(1));
      std::string key, value;
      hs >> key >> value;
      if (key == "dims") {
        auto x = value.find('x');
        if (x == std::string::npos) throw ParseError("bad dims '" + value + "'", line_no, 3);
        dims = {std::atoi(value.substr(0, x).c_str()), std::atoi(value.substr(x + 1).c_str())};
      } else if (key == "white") {
        white = std::atoi(value.c_str());
      } else if (key == "black") {
        black = std::atoi(value.c_str());
      } else if (key == "first") {
        if (value != "D" && value != "G") throw ParseError("bad first mover '" + value + "'", line_no, 3);
        first = value == "D" ? Player::D : Player::G;
      }
      continue;
    }
    if (!map) {
      if (!dims.valid() || white < 0 || black < 0 || !first)
        throw ParseError("strategy header needs dims, white, black and first", line_no, 1);
      map.emplace(dims, white, black, *first);
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) throw ParseError("expected '<position>\\t<move>'", line_no, 1);
    Position p;
    Move m;
    try {
      p = parse_dpn(line.substr(0, tab));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no, e.column());
    }
    try {
      m = parse_move(line.substr(tab + 1));
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no, static_cast<int>(tab) + 1 + e.column());
    }
    if (!map->ix_.contains(p)) throw ParseError("position outside the declared space", line_no, 1);
    map->set(p, m);
  }
  if (!map) {
    if (!dims.valid() || white < 0 || black < 0 || !first)
      throw ParseError("strategy header needs dims, white, black and first", line_no, 1);
    map.emplace(dims, white, black, *first);
  }
  return std::move(*map);
}

void MapStrategy::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write(out);
  if (!out) throw Error("failed writing " + path);
}

MapStrategy MapStrategy::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return read(in);
}

MapStrategy extract_g_strategy(const solver::SolveResult& res, const Position& start) {
  const solver::StateIndexer& ix = res.indexer();
  const std::uint64_t root = ix.index(start);
  if (res.label(root) == solver::Label::DWin) throw ContractViolation("the start position is a D win");
  MapStrategy out(ix.dims(), ix.white_budget(), ix.black_budget(), start.to_move);
  std::unordered_set<std::uint64_t> seen{root};
  std::deque<std::uint64_t> queue{root};
  while (!queue.empty()) {
    std::uint64_t idx = queue.front();
    queue.pop_front();
    auto visit = [&](std::uint64_t child) {
      if (seen.insert(child).second) queue.push_back(child);
    };
    if (idx & 1) {
      std::optional<std::pair<std::uint64_t, Move>> pick;
      solver::for_each_successor(ix, idx, [&](std::uint64_t child, const Move& m) {
        if (res.label(child) == solver::Label::DWin) return;
        if (!pick || child < pick->first) pick.emplace(child, m);
      });
      if (!pick) throw ContractViolation("a G turn outside the attractor has no safe move");
      out.moves_.emplace(idx, pick->second);
      visit(pick->first);
    } else {
      solver::for_each_successor(ix, idx, [&](std::uint64_t child, const Move&) { visit(child); });
    }
  }
  return out;
}

// Token layout: bits 0-31 base token, 32-35/36-39/40-43/44-47 lines trimmed
// from the N/S/W/E sides, bit 48 engaged, 49-51 transform, 52-55 base.
struct ReductionStrategy::View {
  int trim_n = 0, trim_s = 0, trim_w = 0, trim_e = 0;
  bool engaged = false;
  int transform = 0;
  int base = 0;
  Token base_token = 0;

  Token pack() const {
    return (base_token & 0xFFFFFFFFull) | Token(trim_n) << 32 | Token(trim_s) << 36 | Token(trim_w) << 40 |
           Token(trim_e) << 44 | Token(engaged) << 48 | Token(transform) << 49 | Token(base) << 52;
  }
  Dims sub(Dims full) const { return {full.rows - trim_n - trim_s, full.cols - trim_w - trim_e}; }
  Square to_local(Square s) const { return {s.row - trim_n, s.col - trim_w}; }
  Square to_full(Square s) const { return {s.row + trim_n, s.col + trim_w}; }
};

ReductionStrategy::ReductionStrategy(Dims dims, std::vector<std::shared_ptr<const GStrategy>> bases)
    : dims_(dims), bases_(std::move(bases)) {
  if (bases_.empty() || bases_.size() > 16) throw ContractViolation("a reduction needs between 1 and 16 bases");
}

ReductionStrategy::View ReductionStrategy::view(Token token) const {
  View v;
  v.base_token = token & 0xFFFFFFFFull;
  v.trim_n = static_cast<int>(token >> 32 & 15);
  v.trim_s = static_cast<int>(token >> 36 & 15);
  v.trim_w = static_cast<int>(token >> 40 & 15);
  v.trim_e = static_cast<int>(token >> 44 & 15);
  v.engaged = token >> 48 & 1;
  v.transform = static_cast<int>(token >> 49 & 7);
  v.base = static_cast<int>(token >> 52 & 15);
  return v;
}

Token ReductionStrategy::initial(const Position&) const { return 0; }

namespace {

Position crop(const Position& p, Dims sub, Square origin_shift) {
  Position out;
  out.dims = sub;
  out.to_move = p.to_move;
  out.hand = p.hand;
  auto local = [&](Square s) { return Square{s.row - origin_shift.row, s.col - origin_shift.col}; };
  out.duke = local(p.duke);
  for (Square s : p.blacks) {
    if (!sub.contains(local(s))) throw StrategyFailure("a stone lies outside the reduced board");
    out.blacks.push_back(local(s));
  }
  for (Square s : p.whites) {
    if (!sub.contains(local(s))) throw StrategyFailure("a stone lies outside the reduced board");
    out.whites.push_back(local(s));
  }
  return out;
}

Move map_move(const Move& m, const Transform& t, Dims from) {
  Move out = m;
  out.dir = t.apply(m.dir);
  if (m.kind == MoveKind::Relocate) out.from = t.apply(from, m.from);
  if (m.kind != MoveKind::Step && m.kind != MoveKind::Pass) out.to = t.apply(from, m.to);
  return out;
}

Move shift_move(Move m, Square by) {
  auto sh = [&](Square s) { return Square{s.row + by.row, s.col + by.col}; };
  if (m.kind == MoveKind::Relocate) m.from = sh(m.from);
  if (m.kind != MoveKind::Step && m.kind != MoveKind::Pass) m.to = sh(m.to);
  return m;
}

}  // namespace

std::pair<Move, Token> ReductionStrategy::move(const Position& p, Token token) const {
  if (p.to_move != Player::G) throw ContractViolation("strategy asked to move for D");
  if (p.dims != dims_) throw ContractViolation("position does not match the reduction's board");
  View v = view(token);
  const auto transforms = Transform::all();

  auto delegate = [&](View w) -> std::pair<Move, Token> {
    Dims sub = w.sub(dims_);
    Position local = crop(p, sub, {w.trim_n, w.trim_w});
    const Transform& t = transforms[w.transform];
    Position based = t.apply(local);
    auto [m, next] = bases_[w.base]->move(based, w.base_token);
    if (next > 0xFFFFFFFFull) throw StrategyFailure("base token does not fit the reduction token");
    w.base_token = next;
    Move back = map_move(m, t.inverse(), t.image(sub));
    return {shift_move(back, {w.trim_n, w.trim_w}), w.pack()};
  };

  if (v.engaged) return delegate(v);

  Dims sub = v.sub(dims_);
  Square duke = v.to_local(p.duke);
  Square home = duke_start(sub);
  if (duke == home) {
    if (p.monotone()) throw UnsupportedBoard("the reduction waits with a pass, which the monotone game forbids");
    return {Move::pass(), token};
  }
  std::optional<Dir> moved;
  for (Dir d : kAllDirs)
    if (step(home, d) == duke) moved = d;
  if (!moved) throw UnsupportedBoard("the duke is not one step from the reduced board's start square");
  switch (*moved) {
    case Dir::E: ++v.trim_w; break;
    case Dir::W: ++v.trim_e; break;
    case Dir::S: ++v.trim_n; break;
    case Dir::N: ++v.trim_s; break;
  }
  if (std::max({v.trim_n, v.trim_s, v.trim_w, v.trim_e}) > 15) throw UnsupportedBoard("too many lines trimmed");
  sub = v.sub(dims_);
  duke = v.to_local(p.duke);
  for (std::size_t b = 0; b < bases_.size(); ++b) {
    for (int k = 0; k < 8; ++k) {
      const Transform& t = transforms[k];
      Dims image = t.image(sub);
      if (image != bases_[b]->dims() || t.apply(sub, duke) != duke_start(image)) continue;
      View w = v;
      w.engaged = true;
      w.transform = k;
      w.base = static_cast<int>(b);
      Position local = t.apply(crop(p, sub, {v.trim_n, v.trim_w}));
      w.base_token = bases_[b]->initial(local);
      return delegate(w);
    }
  }
  if (sub.rows >= 3 && sub.cols >= 3 && duke == duke_start(sub) && !p.monotone()) return {Move::pass(), v.pack()};
  throw UnsupportedBoard("no base strategy fits the " + std::to_string(sub.rows) + "x" + std::to_string(sub.cols) +
                         " board left after the duke's move");
}

Move reduction_move(const Position& p, const ReductionStrategy& strategy) {
  return strategy.move(p, strategy.initial(p)).first;
}

}  // namespace dukego::strategy
