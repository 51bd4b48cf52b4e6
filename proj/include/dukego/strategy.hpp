#pragma once

// G-side strategies: the letter-diagram tables, strategies extracted from a
// solved space, the reduction to a smaller board, and exhaustive
// verification of any of them against every line of D play.
//
// Diagram text:
//
//   diagram: 1
//   dims: 1x3
//   first: Bw
//   A a aB
//   ---
//   diagram: 2
//   ...
//
// A cell token is `.` or [uppercase][#][lowercase...][+][>id]. The uppercase
// letter marks a strategic square, `#` shades it (black stone required), the
// lowercase letters name the strategic squares G must keep covered while the
// duke stands on the cell, `+` demands a stone on the adjacent edge square,
// and `>id` switches to another diagram when the duke enters the cell.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dukego/core.hpp"
#include "dukego/solver.hpp"

namespace dukego::strategy {

class StrategyFailure : public Error {
 public:
  using Error::Error;
};

class UnsupportedBoard : public Error {
 public:
  using Error::Error;
};

struct Cell {
  std::string cover;  // sorted, distinct lowercase letters
  bool tactical = false;
  char strategic = 0;  // uppercase letter or 0
  bool black_required = false;
  std::optional<int> transition;

  bool labeled() const { return !cover.empty() || tactical; }
  friend bool operator==(const Cell&, const Cell&) = default;
};

struct Diagram {
  int id = 1;
  Dims dims;
  std::vector<Cell> cells;  // row-major

  const Cell& at(Square s) const { return cells[dims.id(s)]; }
  Cell& at(Square s) { return cells[dims.id(s)]; }
  std::optional<Square> strategic_square(char upper) const;
  friend bool operator==(const Diagram&, const Diagram&) = default;
};

struct FirstStone {
  char letter = 0;  // uppercase
  bool black = false;
  friend bool operator==(const FirstStone&, const FirstStone&) = default;
};

struct DiagramSet {
  std::vector<Diagram> diagrams;
  int start_diagram = 1;
  std::optional<FirstStone> first;

  const Diagram& get(int id) const;
  friend bool operator==(const DiagramSet&, const DiagramSet&) = default;
};

// Throws ParseError (line and column of the offending token).
DiagramSet parse_diagrams(std::string_view text);
std::string format_diagrams(const DiagramSet& ds);

struct Violation {
  Square u;
  Square v;
  std::string detail;
};

// Empty means every labeled cell keeps all but at most one letter of each
// labeled neighbour ("+" counting as a letter), and every "+" cell has
// exactly one edge at distance 1.
std::vector<Violation> validate_local(const Diagram& d);

struct TableState {
  int active_diagram = 1;
  bool rotated = false;  // the board is read turned by 180 degrees
  std::map<char, Square> assignment;
  friend bool operator==(const TableState&, const TableState&) = default;
};

TableState initial_table_state(const DiagramSet& ds);

// Throws StrategyFailure when the duke leaves the table or the requirement
// needs more than one stone change.
std::pair<Move, TableState> g_table_move(const DiagramSet& ds, const TableState& ts, const Position& p);

// After the stipulated first stone, a duke move opposite to where the start
// cell sits is answered by moving the stone to its image under a 180 degree
// turn (Pass if it is its own image). Returns nothing in every other case.
std::optional<Move> rotation_guard(const DiagramSet& ds, const Position& p);

// The position as seen through a 180 degree turn of the board.
Position rotate_half_turn(const Position& p);
Move rotate_half_turn(Dims dims, const Move& m);

using Token = std::uint64_t;

// A deterministic G player. The token is the strategy's memory; it is
// threaded through calls by the caller and must be hashable state only.
class GStrategy {
 public:
  virtual ~GStrategy() = default;
  virtual Dims dims() const = 0;
  virtual Token initial(const Position& start) const = 0;
  // Requires G to move. Throws StrategyFailure when it has no answer.
  virtual std::pair<Move, Token> move(const Position& p, Token token) const = 0;
};

class TableStrategy final : public GStrategy {
 public:
  explicit TableStrategy(DiagramSet ds);
  Dims dims() const override;
  Token initial(const Position& start) const override;
  std::pair<Move, Token> move(const Position& p, Token token) const override;
  const DiagramSet& diagrams() const { return ds_; }

 private:
  DiagramSet ds_;
};

// A position-to-move table over one bounded state space.
class MapStrategy final : public GStrategy {
 public:
  MapStrategy(Dims dims, int white_budget, int black_budget, Player first_mover);

  Dims dims() const override { return ix_.dims(); }
  int white_budget() const { return ix_.white_budget(); }
  int black_budget() const { return ix_.black_budget(); }
  Player first_mover() const { return first_; }
  Token initial(const Position&) const override { return 0; }
  std::pair<Move, Token> move(const Position& p, Token token) const override;

  void set(const Position& p, const Move& m);
  bool erase(const Position& p);
  std::optional<Move> lookup(const Position& p) const;
  std::size_t size() const { return moves_.size(); }
  const solver::StateIndexer& indexer() const { return ix_; }

  // Header lines `# dims MxN`, `# white W`, `# black B`, `# first D|G`, then
  // one `<DPN>\t<move>` line per entry, sorted by DPN.
  void write(std::ostream& out) const;
  static MapStrategy read(std::istream& in);
  void save(const std::string& path) const;
  static MapStrategy load(const std::string& path);

 private:
  friend MapStrategy extract_g_strategy(const solver::SolveResult& res, const Position& start);

  solver::StateIndexer ix_;
  Player first_;
  std::unordered_map<std::uint64_t, Move> moves_;
};

// Requires `start` outside the D attractor of `res`. At every reachable G
// turn the move leads to the lowest-index successor outside the attractor.
MapStrategy extract_g_strategy(const solver::SolveResult& res, const Position& start);

// G passes until D's first move, then drops the line behind the duke and
// plays a base strategy on the rest of the board, read through whichever
// symmetry puts the duke on the base board's start square.
class ReductionStrategy final : public GStrategy {
 public:
  ReductionStrategy(Dims dims, std::vector<std::shared_ptr<const GStrategy>> bases);
  Dims dims() const override { return dims_; }
  Token initial(const Position& start) const override;
  std::pair<Move, Token> move(const Position& p, Token token) const override;

 private:
  struct View;
  View view(Token token) const;

  Dims dims_;
  std::vector<std::shared_ptr<const GStrategy>> bases_;
};

// The sub-board and base chosen after D's first move; throws UnsupportedBoard
// when no base fits.
Move reduction_move(const Position& p, const ReductionStrategy& strategy);

struct Verdict {
  bool g_wins = false;
  std::uint64_t states = 0;  // distinct (position, token) pairs visited
  std::string reason;
  // Alternating DPN and move lines from the start to the failure.
  std::vector<std::string> counterexample;
};

// Exhaustive traversal of every D line with G following `strategy`. Budgets
// must be finite and fit the solver's state indexer.
Verdict verify_g_strategy(const GStrategy& strategy, Dims dims, int white_budget, int black_budget,
                          Player first_mover);

}  // namespace dukego::strategy
