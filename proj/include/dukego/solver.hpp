#pragma once

// Exact solution of Dukego.
//
// The bounded variant (finite white/black budgets, G may relocate and pass)
// is solved by retrograde analysis over an enumerated state space: D's
// attractor to the edge is computed backwards from the terminal states with
// out-degree counters. The standard game (unlimited blacks, no whites) is
// acyclic and is proven with a memoized AND-OR search instead.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "dukego/core.hpp"

namespace dukego::solver {

inline constexpr int kMaxArea = 128;
inline constexpr int kMaxStones = 8;

class CapacityError : public Error {
 public:
  CapacityError(const std::string& message, std::uint64_t estimate_bytes)
      : Error(message), estimate_bytes_(estimate_bytes) {}
  std::uint64_t estimate_bytes() const { return estimate_bytes_; }

 private:
  std::uint64_t estimate_bytes_;
};

class CacheError : public Error {
 public:
  using Error::Error;
};

// Maps (duke, white set, black set, side to move) onto [0, total_states).
// Stone sets are ranked combinatorially over all squares, so some indices
// describe colliding stones; those are reported invalid.
//
//   index = ((duke * white_sets + white_rank) * black_sets + black_rank) * 2 + turn
//
// with turn 0 for D and 1 for G.
class StateIndexer {
 public:
  struct Raw {
    int duke = 0;
    int n_whites = 0;
    int n_blacks = 0;
    std::array<int, kMaxStones> whites{};  // square ids, ascending
    std::array<int, kMaxStones> blacks{};
    Player turn = Player::D;
  };

  StateIndexer(Dims dims, int white_budget, int black_budget);

  Dims dims() const { return dims_; }
  int white_budget() const { return white_budget_; }
  int black_budget() const { return black_budget_; }
  std::uint64_t total_states() const { return total_; }
  std::uint64_t white_sets() const { return white_sets_; }
  std::uint64_t black_sets() const { return black_sets_; }

  std::uint64_t rank(std::span<const int> sorted_ids) const;
  std::uint64_t encode(int duke, std::uint64_t white_rank, std::uint64_t black_rank, Player turn) const {
    return ((static_cast<std::uint64_t>(duke) * white_sets_ + white_rank) * black_sets_ + black_rank) * 2 +
           (turn == Player::G ? 1 : 0);
  }
  std::uint64_t encode(const Raw& raw) const;
  void decode(std::uint64_t index, Raw& raw) const;
  bool valid(const Raw& raw) const;
  bool valid(std::uint64_t index) const;

  bool contains(const Position& p) const;
  // Throws ContractViolation when `p` lies outside this space.
  std::uint64_t index(const Position& p) const;
  Position position(std::uint64_t index) const;

  // Stone sets in rank order, `budget` ids per entry (unused slots -1).
  const std::vector<std::int16_t>& white_table() const { return white_table_; }
  const std::vector<std::int16_t>& black_table() const { return black_table_; }

 private:
  Dims dims_;
  int white_budget_;
  int black_budget_;
  std::uint64_t white_sets_;
  std::uint64_t black_sets_;
  std::uint64_t total_;
  std::vector<std::uint64_t> size_offset_w_;
  std::vector<std::uint64_t> size_offset_b_;
  std::vector<std::int16_t> white_table_;
  std::vector<std::int16_t> black_table_;
};

// Labels of the bounded variant. Draw and GImmobilize are both G wins:
// GImmobilize states are those from which G can force the duke to be
// stuck, Draw states are those where she can only keep him off the edge.
enum class Label : std::uint8_t { Invalid = 0, DWin = 1, GImmobilize = 2, Draw = 3 };

std::string_view label_name(Label l);
constexpr bool d_wins(Label l) { return l == Label::DWin; }

inline constexpr std::uint16_t kNoDistance = 0xFFFF;

struct SolveOptions {
  int threads = 1;
  std::uint64_t memory_cap_bytes = 3ull << 30;
  bool keep_distance = true;
  std::ostream* progress = nullptr;
};

std::uint64_t estimate_solve_bytes(Dims dims, int white_budget, int black_budget, bool keep_distance = true);
std::uint64_t state_count(Dims dims, int white_budget, int black_budget);

class SolveResult {
 public:
  SolveResult(StateIndexer indexer, std::vector<std::uint8_t> packed_labels, std::vector<std::uint16_t> distance);

  const StateIndexer& indexer() const { return indexer_; }
  Label label(std::uint64_t index) const {
    return static_cast<Label>((packed_[index >> 2] >> ((index & 3) * 2)) & 3);
  }
  bool has_distance() const { return !distance_.empty(); }
  std::uint16_t distance(std::uint64_t index) const { return distance_.empty() ? kNoDistance : distance_[index]; }

  const std::vector<std::uint8_t>& packed_labels() const { return packed_; }
  const std::vector<std::uint16_t>& distances() const { return distance_; }

  friend bool operator==(const SolveResult& a, const SolveResult& b) {
    return a.indexer_.dims() == b.indexer_.dims() && a.indexer_.white_budget() == b.indexer_.white_budget() &&
           a.indexer_.black_budget() == b.indexer_.black_budget() && a.packed_ == b.packed_ &&
           a.distance_ == b.distance_;
  }

 private:
  StateIndexer indexer_;
  std::vector<std::uint8_t> packed_;
  std::vector<std::uint16_t> distance_;
};

SolveResult solve_bounded(Dims dims, int white_budget, int black_budget, const SolveOptions& options = {});

struct LabelInfo {
  Label label = Label::Invalid;
  std::uint16_t distance = kNoDistance;
};

// Terminal positions are answered directly; others through the indexer.
LabelInfo query_label(const SolveResult& res, const Position& p);

// A move keeping the mover's best label. The winning D side minimises the
// distance to the edge; a losing G maximises it; otherwise the lowest
// successor index wins ties among equally good moves.
Move best_move(const SolveResult& res, const Position& p);

// Successors of a state in the bounded space, in legal_moves order.
void for_each_successor(const StateIndexer& ix, std::uint64_t index,
                        const std::function<void(std::uint64_t, const Move&)>& fn);

enum class Fairness : std::uint8_t { DWins, GWins, Fair };

std::string_view fairness_symbol(Fairness f);

class ConsistencyFailure : public Error {
 public:
  using Error::Error;
};

struct StartLabels {
  Label d_first = Label::Invalid;
  Label g_first = Label::Invalid;
};

StartLabels start_labels(const SolveResult& res);
// Throws ConsistencyFailure when the second mover wins.
Fairness classify(StartLabels labels);
Fairness fairness_entry(Dims dims, int white_budget, int black_budget, const SolveOptions& options = {});

// Cache file: "DUKEGO\0", u16 version, u16 rows, u16 cols, u16 whites,
// u16 blacks, u64 state count, packed 2-bit labels, u8 distance flag,
// optional u16 distances, u64 FNV-1a checksum of everything before it.
// All integers little-endian.
inline constexpr std::uint16_t kCacheVersion = 1;

void save_cache(const SolveResult& res, const std::string& path);
SolveResult load_cache(const std::string& path);
void write_cache(const SolveResult& res, std::ostream& out);
SolveResult read_cache(std::istream& in);

// ----------------------------------------------------------------------
// Standard (monotone) game.

enum class Winner : std::uint8_t { D, G, Unknown };

std::string_view winner_name(Winner w);

struct MonotoneKey {
  std::uint64_t blacks = 0;
  std::uint8_t duke = 0;
  std::uint8_t turn = 0;
  friend bool operator==(const MonotoneKey&, const MonotoneKey&) = default;
};

struct MonotoneKeyHash {
  std::size_t operator()(const MonotoneKey& k) const noexcept;
};

struct MonotoneEntry {
  Winner winner = Winner::Unknown;
  // Remaining ply budget when an Unknown was recorded.
  std::uint16_t budget = 0;
};

struct MonotoneProof {
  Position root;
  Winner winner = Winner::Unknown;
  std::unordered_map<MonotoneKey, MonotoneEntry, MonotoneKeyHash> memo;
  std::uint64_t nodes = 0;
  int max_depth = 0;
};

// Boards up to 64 squares. ply_cap 0 means 2 * rows * cols.
MonotoneProof solve_monotone(Dims dims, Player first_mover, int ply_cap = 0);

}  // namespace dukego::solver
