#include "dukego/core.hpp"

#include <algorithm>

namespace dukego {

ParseError::ParseError(const std::string& message, int line, int column)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
      line_(line),
      column_(column) {}

char player_letter(Player p) { return p == Player::D ? 'D' : 'G'; }

Square step(Square s, Dir d) {
  switch (d) {
    case Dir::N: return {s.row - 1, s.col};
    case Dir::S: return {s.row + 1, s.col};
    case Dir::E: return {s.row, s.col + 1};
    case Dir::W: return {s.row, s.col - 1};
  }
  return s;
}

Dir opposite(Dir d) {
  switch (d) {
    case Dir::N: return Dir::S;
    case Dir::S: return Dir::N;
    case Dir::E: return Dir::W;
    case Dir::W: return Dir::E;
  }
  return d;
}

char dir_letter(Dir d) {
  static constexpr char kLetters[] = {'N', 'S', 'E', 'W'};
  return kLetters[static_cast<int>(d)];
}

std::optional<Dir> dir_from_letter(char c) {
  switch (c) {
    case 'N': return Dir::N;
    case 'S': return Dir::S;
    case 'E': return Dir::E;
    case 'W': return Dir::W;
    default: return std::nullopt;
  }
}

int distance_to_edge(Dims dims, Square s, Dir d) {
  switch (d) {
    case Dir::N: return s.row - 1;
    case Dir::S: return dims.rows - s.row;
    case Dir::E: return dims.cols - s.col;
    case Dir::W: return s.col - 1;
  }
  return 0;
}

bool Position::is_black(Square s) const { return std::binary_search(blacks.begin(), blacks.end(), s); }

bool Position::is_white(Square s) const { return std::binary_search(whites.begin(), whites.end(), s); }

bool Position::is_empty(Square s) const { return dims.contains(s) && s != duke && !has_stone(s); }

int Position::black_budget() const {
  if (hand.blacks_unlimited()) return kUnlimited;
  return hand.blacks_in_hand + static_cast<int>(blacks.size());
}

bool Position::monotone() const { return hand.blacks_unlimited() && white_budget() == 0; }

Square duke_start(Dims dims) { return {dims.rows / 2 + 1, dims.cols / 2 + 1}; }

Position start_position(Dims dims, Player first, int white_budget, int black_budget) {
  if (!dims.valid()) throw ContractViolation("board dimensions must be positive");
  if (white_budget < 0) throw ContractViolation("white budget must be nonnegative");
  if (black_budget < 0 && black_budget != kUnlimited)
    throw ContractViolation("black budget must be nonnegative or unlimited");
  Position p;
  p.dims = dims;
  p.duke = duke_start(dims);
  p.to_move = first;
  p.hand = {white_budget, black_budget};
  return p;
}

void validate(const Position& p) {
  if (!p.dims.valid()) throw InvalidPosition("board dimensions must be positive");
  if (!p.dims.contains(p.duke)) throw InvalidPosition("duke is off the board");
  auto check_list = [&](const std::vector<Square>& v, const char* what) {
    if (!std::is_sorted(v.begin(), v.end()) || std::adjacent_find(v.begin(), v.end()) != v.end())
      throw InvalidPosition(std::string(what) + " stones must be sorted and distinct");
    for (Square s : v) {
      if (!p.dims.contains(s)) throw InvalidPosition(std::string(what) + " stone off the board");
      if (s == p.duke) throw InvalidPosition(std::string(what) + " stone on the duke's square");
    }
  };
  check_list(p.blacks, "black");
  check_list(p.whites, "white");
  for (Square s : p.blacks)
    if (p.is_white(s)) throw InvalidPosition("square holds both a black and a white stone");
  if (p.hand.whites_in_hand < 0) throw InvalidPosition("negative white hand");
  if (p.hand.blacks_in_hand < 0 && !p.hand.blacks_unlimited()) throw InvalidPosition("negative black hand");
}

std::string format_move(const Move& m) {
  auto sq = [](Square s) { return std::to_string(s.row) + "," + std::to_string(s.col); };
  switch (m.kind) {
    case MoveKind::Step: return std::string(1, dir_letter(m.dir));
    case MoveKind::PlaceWhite: return "W" + sq(m.to);
    case MoveKind::PlaceBlack: return "B" + sq(m.to);
    case MoveKind::Relocate: return "R" + sq(m.from) + ">" + sq(m.to);
    case MoveKind::Pass: return "pass";
  }
  return {};
}

namespace {

std::optional<Square> parse_square_text(std::string_view t) {
  auto comma = t.find(',');
  if (comma == std::string_view::npos || comma == 0 || comma + 1 >= t.size()) return std::nullopt;
  auto parse_int = [](std::string_view s) -> std::optional<int> {
    if (s.empty() || s.size() > 6) return std::nullopt;
    int v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return std::nullopt;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  auto r = parse_int(t.substr(0, comma));
  auto c = parse_int(t.substr(comma + 1));
  if (!r || !c) return std::nullopt;
  return Square{*r, *c};
}

}  // namespace

Move parse_move(std::string_view text) {
  auto fail = [&]() -> Move { throw ParseError("malformed move '" + std::string(text) + "'", 1, 1); };
  if (text == "pass") return Move::pass();
  if (text.size() == 1) {
    if (auto d = dir_from_letter(text[0])) return Move::step(*d);
    return fail();
  }
  if (text.empty()) return fail();
  char kind = text[0];
  std::string_view rest = text.substr(1);
  if (kind == 'W' || kind == 'B') {
    auto s = parse_square_text(rest);
    if (!s) return fail();
    return kind == 'W' ? Move::place_white(*s) : Move::place_black(*s);
  }
  if (kind == 'R') {
    auto arrow = rest.find('>');
    if (arrow == std::string_view::npos) return fail();
    auto a = parse_square_text(rest.substr(0, arrow));
    auto b = parse_square_text(rest.substr(arrow + 1));
    if (!a || !b) return fail();
    return Move::relocate(*a, *b);
  }
  return fail();
}

std::string_view rule_message(Rule r) {
  switch (r) {
    case Rule::GameOver: return "game is over";
    case Rule::WrongPlayer: return "not this player's turn";
    case Rule::OffBoard: return "square is off the board";
    case Rule::DukeSquare: return "square occupied by the duke";
    case Rule::SquareOccupied: return "square occupied";
    case Rule::NoStoneInHand: return "no stone of that color in hand";
    case Rule::NoWhiteAtSource: return "no white stone on the source square";
    case Rule::PassNotAllowed: return "pass is not allowed in the standard game";
    case Rule::RelocateNotAllowed: return "relocation is not allowed in the standard game";
  }
  return "illegal move";
}

IllegalMove::IllegalMove(Rule rule) : Error(std::string(rule_message(rule))), rule_(rule) {}

std::string_view status_name(TerminalStatus s) {
  switch (s) {
    case TerminalStatus::Ongoing: return "Ongoing";
    case TerminalStatus::DWin: return "DWin";
    case TerminalStatus::GWinImmobilized: return "GWinImmobilized";
  }
  return "?";
}

TerminalStatus terminal_status(const Position& p) {
  if (p.dims.on_edge(p.duke)) return TerminalStatus::DWin;
  if (p.to_move == Player::D) {
    for (Dir d : kAllDirs)
      if (p.is_empty(step(p.duke, d))) return TerminalStatus::Ongoing;
    return TerminalStatus::GWinImmobilized;
  }
  return TerminalStatus::Ongoing;
}

std::vector<Move> legal_moves(const Position& p) {
  if (terminal_status(p) != TerminalStatus::Ongoing)
    throw ContractViolation("legal_moves called on a terminal position");
  std::vector<Move> moves;
  if (p.to_move == Player::D) {
    for (Dir d : kAllDirs)
      if (p.is_empty(step(p.duke, d))) moves.push_back(Move::step(d));
    return moves;
  }
  std::vector<Square> empty;
  empty.reserve(p.dims.area());
  for (int id = 0; id < p.dims.area(); ++id) {
    Square s = p.dims.square(id);
    if (p.is_empty(s)) empty.push_back(s);
  }
  if (p.monotone()) {
    for (Square s : empty) moves.push_back(Move::place_black(s));
    return moves;
  }
  if (p.hand.whites_in_hand > 0)
    for (Square s : empty) moves.push_back(Move::place_white(s));
  if (p.hand.blacks_unlimited() || p.hand.blacks_in_hand > 0)
    for (Square s : empty) moves.push_back(Move::place_black(s));
  for (Square from : p.whites)
    for (Square to : empty) moves.push_back(Move::relocate(from, to));
  moves.push_back(Move::pass());
  return moves;
}

namespace {

void insert_sorted(std::vector<Square>& v, Square s) { v.insert(std::lower_bound(v.begin(), v.end(), s), s); }

void check_target(const Position& p, Square s) {
  if (!p.dims.contains(s)) throw IllegalMove(Rule::OffBoard);
  if (s == p.duke) throw IllegalMove(Rule::DukeSquare);
  if (p.has_stone(s)) throw IllegalMove(Rule::SquareOccupied);
}

}  // namespace

Position apply_move(const Position& p, const Move& m) {
  if (terminal_status(p) != TerminalStatus::Ongoing) throw IllegalMove(Rule::GameOver);
  bool duke_move = m.kind == MoveKind::Step;
  if (duke_move != (p.to_move == Player::D)) throw IllegalMove(Rule::WrongPlayer);

  Position next = p;
  switch (m.kind) {
    case MoveKind::Step: {
      Square to = step(p.duke, m.dir);
      if (!p.dims.contains(to)) throw IllegalMove(Rule::OffBoard);
      if (p.has_stone(to)) throw IllegalMove(Rule::SquareOccupied);
      next.duke = to;
      break;
    }
    case MoveKind::PlaceWhite:
      check_target(p, m.to);
      if (p.hand.whites_in_hand <= 0) throw IllegalMove(Rule::NoStoneInHand);
      insert_sorted(next.whites, m.to);
      --next.hand.whites_in_hand;
      break;
    case MoveKind::PlaceBlack:
      check_target(p, m.to);
      if (!p.hand.blacks_unlimited()) {
        if (p.hand.blacks_in_hand <= 0) throw IllegalMove(Rule::NoStoneInHand);
        --next.hand.blacks_in_hand;
      }
      insert_sorted(next.blacks, m.to);
      break;
    case MoveKind::Relocate: {
      if (p.monotone()) throw IllegalMove(Rule::RelocateNotAllowed);
      if (!p.is_white(m.from)) throw IllegalMove(Rule::NoWhiteAtSource);
      check_target(p, m.to);
      next.whites.erase(std::lower_bound(next.whites.begin(), next.whites.end(), m.from));
      insert_sorted(next.whites, m.to);
      break;
    }
    case MoveKind::Pass:
      if (p.monotone()) throw IllegalMove(Rule::PassNotAllowed);
      break;
  }
  next.to_move = opponent(p.to_move);
  return next;
}

}  // namespace dukego
