#pragma once

// Board geometry, positions, moves and the rules of Dukego.
//
// Coordinates are 1-based: row 1 is the north edge, column 1 the west edge.
// A position is a plain value; every operation here is a pure function.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dukego {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidPosition : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

struct Square {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const Square&, const Square&) = default;
};

struct Dims {
  int rows = 0;
  int cols = 0;

  int area() const { return rows * cols; }
  bool valid() const { return rows >= 1 && cols >= 1; }
  bool contains(Square s) const {
    return s.row >= 1 && s.row <= rows && s.col >= 1 && s.col <= cols;
  }
  bool on_edge(Square s) const {
    return s.row == 1 || s.row == rows || s.col == 1 || s.col == cols;
  }
  // Row-major square id in [0, area).
  int id(Square s) const { return (s.row - 1) * cols + (s.col - 1); }
  Square square(int id) const { return {id / cols + 1, id % cols + 1}; }

  friend bool operator==(const Dims&, const Dims&) = default;
};

enum class Player : std::uint8_t { D, G };

constexpr Player opponent(Player p) { return p == Player::D ? Player::G : Player::D; }
char player_letter(Player p);

enum class Dir : std::uint8_t { N, S, E, W };

inline constexpr std::array<Dir, 4> kAllDirs{Dir::N, Dir::S, Dir::E, Dir::W};

Square step(Square s, Dir d);
Dir opposite(Dir d);
char dir_letter(Dir d);
std::optional<Dir> dir_from_letter(char c);
// Distance from `s` to the board edge lying in direction `d` (0 on that edge).
int distance_to_edge(Dims dims, Square s, Dir d);

inline constexpr int kUnlimited = -1;

// Stones still in G's hand. Whites are never unlimited; an unlimited black
// supply stands for area - 1 stones, enough to fill the board.
struct Inventory {
  int whites_in_hand = 0;
  int blacks_in_hand = 0;

  bool blacks_unlimited() const { return blacks_in_hand == kUnlimited; }
  friend bool operator==(const Inventory&, const Inventory&) = default;
};

struct Position {
  Dims dims;
  Square duke;
  std::vector<Square> blacks;  // sorted
  std::vector<Square> whites;  // sorted
  Player to_move = Player::G;
  Inventory hand;

  bool is_black(Square s) const;
  bool is_white(Square s) const;
  bool has_stone(Square s) const { return is_black(s) || is_white(s); }
  // Empty means on the board, stone-free and not the duke's square.
  bool is_empty(Square s) const;
  int stone_count() const { return static_cast<int>(blacks.size() + whites.size()); }

  int white_budget() const { return hand.whites_in_hand + static_cast<int>(whites.size()); }
  int black_budget() const;
  // The standard game: no whites at all and an unlimited black supply.
  // Everything else is the bounded variant, where G may relocate and pass.
  bool monotone() const;

  friend bool operator==(const Position&, const Position&) = default;
};

Square duke_start(Dims dims);
Position start_position(Dims dims, Player first, int white_budget, int black_budget);
// Throws InvalidPosition naming the first broken invariant.
void validate(const Position& p);

enum class MoveKind : std::uint8_t { Step, PlaceWhite, PlaceBlack, Relocate, Pass };

struct Move {
  MoveKind kind = MoveKind::Pass;
  Dir dir = Dir::N;  // Step only
  Square from;       // Relocate only
  Square to;         // PlaceWhite, PlaceBlack, Relocate

  static Move step(Dir d) { return {MoveKind::Step, d, {}, {}}; }
  static Move place_white(Square s) { return {MoveKind::PlaceWhite, Dir::N, {}, s}; }
  static Move place_black(Square s) { return {MoveKind::PlaceBlack, Dir::N, {}, s}; }
  static Move relocate(Square from, Square to) { return {MoveKind::Relocate, Dir::N, from, to}; }
  static Move pass() { return {}; }

  friend bool operator==(const Move&, const Move&) = default;
};

// Compact move text: `N` `S` `E` `W`, `B<r>,<c>`, `W<r>,<c>`,
// `R<r>,<c>><r>,<c>` and `pass`.
std::string format_move(const Move& m);
Move parse_move(std::string_view text);

enum class Rule : std::uint8_t {
  GameOver,
  WrongPlayer,
  OffBoard,
  DukeSquare,
  SquareOccupied,
  NoStoneInHand,
  NoWhiteAtSource,
  PassNotAllowed,
  RelocateNotAllowed,
};

std::string_view rule_message(Rule r);

class IllegalMove : public Error {
 public:
  explicit IllegalMove(Rule rule);
  Rule rule() const { return rule_; }

 private:
  Rule rule_;
};

enum class TerminalStatus : std::uint8_t { Ongoing, DWin, GWinImmobilized };

std::string_view status_name(TerminalStatus s);

TerminalStatus terminal_status(const Position& p);

// Duke steps in N, S, E, W order; G moves as PlaceWhite, PlaceBlack (each
// row-major), Relocate (source then target row-major) and Pass.
std::vector<Move> legal_moves(const Position& p);

// Returns the successor; throws IllegalMove naming the rule that was broken.
Position apply_move(const Position& p, const Move& m);

// Dihedral symmetry of the rectangle: optional transpose, then optional
// row and column flips (in the transposed frame).
struct Transform {
  bool transpose = false;
  bool flip_rows = false;
  bool flip_cols = false;

  Dims image(Dims from) const;
  Square apply(Dims from, Square s) const;
  Dir apply(Dir d) const;
  Transform inverse() const;
  Position apply(const Position& p) const;

  static std::array<Transform, 8> all();
  friend bool operator==(const Transform&, const Transform&) = default;
};

// The transforms mapping a board onto itself: four, or eight when square.
std::vector<Transform> symmetries(Dims dims);

bool position_less(const Position& a, const Position& b);
Position canonicalize(const Position& p);

// Single-line notation: `<m>x<n> D<r>,<c> B[<r>,<c>;...] W[...] <D|G> w<k> b<k|inf>`.
std::string format_dpn(const Position& p);
Position parse_dpn(std::string_view text);

}  // namespace dukego
