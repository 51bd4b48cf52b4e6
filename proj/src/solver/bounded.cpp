#include <algorithm>
#include <atomic>
#include <chrono>
#include <ostream>
#include <thread>

#include "dukego/solver.hpp"

namespace dukego::solver {

std::string_view label_name(Label l) {
  switch (l) {
    case Label::Invalid: return "invalid";
    case Label::DWin: return "D-win";
    case Label::GImmobilize: return "G-win";
    case Label::Draw: return "draw";
  }
  return "?";
}

namespace {

// Working labels during the solve.
enum : std::uint8_t { kUnknown = 0, kDWin = 1, kImmobilize = 2, kDraw = 3, kInvalid = 4 };

using Index = std::uint32_t;

// Board geometry in square ids.
struct Geometry {
  int area = 0;
  std::vector<std::array<int, 4>> neighbor;  // N, S, E, W; -1 off board
  std::vector<std::uint8_t> edge;

  explicit Geometry(Dims dims) : area(dims.area()), neighbor(area), edge(area) {
    for (int id = 0; id < area; ++id) {
      Square s = dims.square(id);
      edge[id] = dims.on_edge(s);
      for (int k = 0; k < 4; ++k) {
        Square t = step(s, kAllDirs[k]);
        neighbor[id][k] = dims.contains(t) ? dims.id(t) : -1;
      }
    }
  }
};

struct Occupancy {
  std::uint64_t bits[2] = {0, 0};
  void set(int id) { bits[id >> 6] |= 1ull << (id & 63); }
  bool test(int id) const { return (bits[id >> 6] >> (id & 63)) & 1; }
};

Occupancy occupancy(const StateIndexer::Raw& raw) {
  Occupancy o;
  for (int i = 0; i < raw.n_whites; ++i) o.set(raw.whites[i]);
  for (int i = 0; i < raw.n_blacks; ++i) o.set(raw.blacks[i]);
  return o;
}

// Rank of `ids` with element `skip` removed and `add` inserted (either may be -1).
std::uint64_t rank_edit(const StateIndexer& ix, const int* ids, int n, int skip, int add) {
  std::array<int, kMaxStones> tmp{};
  int m = 0;
  bool placed = add < 0;
  for (int i = 0; i < n; ++i) {
    if (i == skip) continue;
    if (!placed && add < ids[i]) {
      tmp[m++] = add;
      placed = true;
    }
    tmp[m++] = ids[i];
  }
  if (!placed) tmp[m++] = add;
  return ix.rank(std::span<const int>(tmp.data(), m));
}

// Calls fn(pred_index) for every G-turn predecessor of the D-turn state `raw`
// (the states from which one G move leads here).
template <typename Fn>
void for_each_g_predecessor(const StateIndexer& ix, const Geometry& geo, const StateIndexer::Raw& raw, Fn&& fn) {
  const int* w = raw.whites.data();
  const int* b = raw.blacks.data();
  std::uint64_t wr = ix.rank(std::span<const int>(w, raw.n_whites));
  std::uint64_t br = ix.rank(std::span<const int>(b, raw.n_blacks));
  // Pass.
  fn(ix.encode(raw.duke, wr, br, Player::G));
  // Placement of each white or black.
  for (int j = 0; j < raw.n_whites; ++j) fn(ix.encode(raw.duke, rank_edit(ix, w, raw.n_whites, j, -1), br, Player::G));
  for (int j = 0; j < raw.n_blacks; ++j) fn(ix.encode(raw.duke, wr, rank_edit(ix, b, raw.n_blacks, j, -1), Player::G));
  // Relocation of a white from any empty square.
  if (raw.n_whites == 0) return;
  Occupancy occ = occupancy(raw);
  for (int s = 0; s < geo.area; ++s) {
    if (s == raw.duke || occ.test(s)) continue;
    for (int j = 0; j < raw.n_whites; ++j) fn(ix.encode(raw.duke, rank_edit(ix, w, raw.n_whites, j, s), br, Player::G));
  }
}

// Calls fn(pred_index) for every D-turn predecessor of the G-turn state `raw`.
template <typename Fn>
void for_each_d_predecessor(const StateIndexer& ix, const Geometry& geo, const StateIndexer::Raw& raw, Fn&& fn) {
  Occupancy occ = occupancy(raw);
  std::uint64_t wr = ix.rank(std::span<const int>(raw.whites.data(), raw.n_whites));
  std::uint64_t br = ix.rank(std::span<const int>(raw.blacks.data(), raw.n_blacks));
  for (int k = 0; k < 4; ++k) {
    int q = geo.neighbor[raw.duke][k];
    if (q < 0 || geo.edge[q] || occ.test(q)) continue;
    fn(ix.encode(q, wr, br, Player::D));
  }
}

int g_move_count(const StateIndexer& ix, const StateIndexer::Raw& raw, int area) {
  int empty = area - 1 - raw.n_whites - raw.n_blacks;
  int count = 1 + raw.n_whites * empty;
  if (raw.n_whites < ix.white_budget()) count += empty;
  if (raw.n_blacks < ix.black_budget()) count += empty;
  return count;
}

int d_move_count(const Geometry& geo, const StateIndexer::Raw& raw) {
  Occupancy occ = occupancy(raw);
  int count = 0;
  for (int k = 0; k < 4; ++k) {
    int q = geo.neighbor[raw.duke][k];
    if (q >= 0 && !occ.test(q)) ++count;
  }
  return count;
}

class Retrograde {
 public:
  Retrograde(const StateIndexer& ix, const SolveOptions& opt) : ix_(ix), geo_(ix.dims()), opt_(opt) {}

  SolveResult run() {
    auto t0 = std::chrono::steady_clock::now();
    std::uint64_t total = ix_.total_states();
    labels_.assign(total, kUnknown);
    if (opt_.keep_distance) distance_.assign(total, kNoDistance);
    counter_.assign(total / 2, 0);

    std::vector<Index> frontier;
    initialize(frontier);
    report("init", frontier.size(), t0);
    attract_d(std::move(frontier), t0);
    counter_.clear();
    counter_.shrink_to_fit();

    std::vector<Index> immobile;
    initialize_immobilize(immobile);
    attract_immobilize(std::move(immobile));
    dcount_.clear();
    dcount_.shrink_to_fit();

    std::vector<std::uint8_t> packed((total + 3) / 4, 0);
    for (std::uint64_t i = 0; i < total; ++i) {
      std::uint8_t l = labels_[i];
      Label out = l == kDWin ? Label::DWin : l == kImmobilize ? Label::GImmobilize : l == kInvalid ? Label::Invalid : Label::Draw;
      packed[i >> 2] |= static_cast<std::uint8_t>(static_cast<std::uint8_t>(out) << ((i & 3) * 2));
    }
    labels_.clear();
    labels_.shrink_to_fit();
    report("done", 0, t0);
    return SolveResult(ix_, std::move(packed), std::move(distance_));
  }

 private:
  void report(const char* stage, std::size_t frontier, std::chrono::steady_clock::time_point t0) const {
    if (!opt_.progress) return;
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double rate = secs > 0 ? static_cast<double>(processed_) / secs : 0.0;
    *opt_.progress << "[solve " << ix_.dims().rows << "x" << ix_.dims().cols << " w" << ix_.white_budget() << " b"
                   << ix_.black_budget() << "] " << stage << " frontier=" << frontier << " processed=" << processed_
                   << " states/s=" << static_cast<std::uint64_t>(rate) << "\n";
  }

  void initialize(std::vector<Index>& frontier) {
    StateIndexer::Raw raw;
    const std::uint64_t total = ix_.total_states();
    for (std::uint64_t i = 0; i < total; ++i) {
      ix_.decode(i, raw);
      if (!ix_.valid(raw)) {
        labels_[i] = kInvalid;
        continue;
      }
      if (geo_.edge[raw.duke]) {
        labels_[i] = kDWin;
        if (opt_.keep_distance) distance_[i] = 0;
        frontier.push_back(static_cast<Index>(i));
        continue;
      }
      if (raw.turn == Player::G) counter_[i >> 1] = static_cast<std::uint16_t>(g_move_count(ix_, raw, geo_.area));
    }
  }

  template <bool Atomic>
  void expand_d(const std::vector<Index>& frontier, std::size_t begin, std::size_t end, std::uint16_t next_dist,
                std::vector<Index>& next) {
    StateIndexer::Raw raw;
    for (std::size_t f = begin; f < end; ++f) {
      Index cur = frontier[f];
      ix_.decode(cur, raw);
      if (raw.turn == Player::G) {
        // D just moved here: a D-turn predecessor wins by making that move.
        for_each_d_predecessor(ix_, geo_, raw, [&](std::uint64_t pred) {
          if (claim<Atomic>(pred, kDWin)) {
            if (opt_.keep_distance) distance_[pred] = next_dist;
            next.push_back(static_cast<Index>(pred));
          }
        });
      } else {
        if (geo_.edge[raw.duke]) continue;
        for_each_g_predecessor(ix_, geo_, raw, [&](std::uint64_t pred) {
          if (load<Atomic>(pred) != kUnknown) return;
          if (decrement<Atomic>(pred) && claim<Atomic>(pred, kDWin)) {
            if (opt_.keep_distance) distance_[pred] = next_dist;
            next.push_back(static_cast<Index>(pred));
          }
        });
      }
    }
  }

  template <bool Atomic>
  std::uint8_t load(std::uint64_t i) {
    if constexpr (Atomic) return std::atomic_ref<std::uint8_t>(labels_[i]).load(std::memory_order_relaxed);
    return labels_[i];
  }

  template <bool Atomic>
  bool claim(std::uint64_t i, std::uint8_t value) {
    if constexpr (Atomic) {
      std::uint8_t expected = kUnknown;
      return std::atomic_ref<std::uint8_t>(labels_[i]).compare_exchange_strong(expected, value,
                                                                                std::memory_order_relaxed);
    }
    if (labels_[i] != kUnknown) return false;
    labels_[i] = value;
    return true;
  }

  // True when the last outstanding successor of G-turn state i was won by D.
  template <bool Atomic>
  bool decrement(std::uint64_t i) {
    if constexpr (Atomic) return std::atomic_ref<std::uint16_t>(counter_[i >> 1]).fetch_sub(1, std::memory_order_relaxed) == 1;
    return --counter_[i >> 1] == 0;
  }

  template <typename Expand>
  void layered(std::vector<Index> frontier, Expand&& expand, const char* stage,
               std::chrono::steady_clock::time_point t0) {
    std::uint16_t depth = 0;
    const int threads = std::max(1, opt_.threads);
    while (!frontier.empty()) {
      processed_ += frontier.size();
      std::uint16_t next_dist = static_cast<std::uint16_t>(std::min<int>(depth + 1, kNoDistance - 1));
      std::vector<Index> next;
      if (threads == 1 || frontier.size() < 4096) {
        expand(std::false_type{}, frontier, 0, frontier.size(), next_dist, next);
      } else {
        std::vector<std::vector<Index>> parts(threads);
        std::vector<std::thread> pool;
        std::size_t chunk = (frontier.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
          std::size_t b = std::min(frontier.size(), t * chunk), e = std::min(frontier.size(), b + chunk);
          pool.emplace_back([&, t, b, e] { expand(std::true_type{}, frontier, b, e, next_dist, parts[t]); });
        }
        for (auto& th : pool) th.join();
        for (auto& part : parts) next.insert(next.end(), part.begin(), part.end());
      }
      // Frontier order never affects the labels; sorting keeps memory access local.
      std::sort(next.begin(), next.end());
      ++depth;
      if (opt_.progress && depth % 8 == 0) report(stage, next.size(), t0);
      frontier = std::move(next);
    }
  }

  void attract_d(std::vector<Index> frontier, std::chrono::steady_clock::time_point t0) {
    layered(
        std::move(frontier),
        [this](auto atomic, const std::vector<Index>& f, std::size_t b, std::size_t e, std::uint16_t d,
               std::vector<Index>& next) { expand_d<decltype(atomic)::value>(f, b, e, d, next); },
        "attractor", t0);
  }

  // Second pass: inside G's winning region, separate the states where G can
  // force immobilization from plain draws.
  void initialize_immobilize(std::vector<Index>& frontier) {
    dcount_.assign(ix_.total_states() / 2, 0);
    StateIndexer::Raw raw;
    const std::uint64_t total = ix_.total_states();
    for (std::uint64_t i = 0; i < total; i += 2) {
      if (labels_[i] != kUnknown) continue;
      ix_.decode(i, raw);
      int moves = d_move_count(geo_, raw);
      if (moves == 0) {
        labels_[i] = kImmobilize;
        frontier.push_back(static_cast<Index>(i));
      } else {
        dcount_[i >> 1] = static_cast<std::uint8_t>(moves);
      }
    }
  }

  template <bool Atomic>
  void expand_immobilize(const std::vector<Index>& frontier, std::size_t begin, std::size_t end,
                         std::vector<Index>& next) {
    StateIndexer::Raw raw;
    for (std::size_t f = begin; f < end; ++f) {
      ix_.decode(frontier[f], raw);
      if (raw.turn == Player::G) {
        for_each_d_predecessor(ix_, geo_, raw, [&](std::uint64_t pred) {
          if (load<Atomic>(pred) != kUnknown) return;
          bool last;
          if constexpr (Atomic)
            last = std::atomic_ref<std::uint8_t>(dcount_[pred >> 1]).fetch_sub(1, std::memory_order_relaxed) == 1;
          else
            last = --dcount_[pred >> 1] == 0;
          if (last && claim<Atomic>(pred, kImmobilize)) next.push_back(static_cast<Index>(pred));
        });
      } else {
        for_each_g_predecessor(ix_, geo_, raw, [&](std::uint64_t pred) {
          if (claim<Atomic>(pred, kImmobilize)) next.push_back(static_cast<Index>(pred));
        });
      }
    }
  }

  void attract_immobilize(std::vector<Index> frontier) {
    auto t0 = std::chrono::steady_clock::now();
    layered(
        std::move(frontier),
        [this](auto atomic, const std::vector<Index>& f, std::size_t b, std::size_t e, std::uint16_t,
               std::vector<Index>& next) { expand_immobilize<decltype(atomic)::value>(f, b, e, next); },
        "immobilize", t0);
    for (auto& l : labels_)
      if (l == kUnknown) l = kDraw;
  }

  const StateIndexer& ix_;
  Geometry geo_;
  SolveOptions opt_;
  std::vector<std::uint8_t> labels_;
  std::vector<std::uint16_t> distance_;
  std::vector<std::uint16_t> counter_;
  std::vector<std::uint8_t> dcount_;
  std::uint64_t processed_ = 0;
};

}  // namespace

std::uint64_t estimate_solve_bytes(Dims dims, int white_budget, int black_budget, bool keep_distance) {
  std::uint64_t n = state_count(dims, white_budget, black_budget);
  if (n == ~0ull) return n;
  // labels + counters + distances + frontier slack + packed output
  long double bytes = n * (1.0L + 1.0L + (keep_distance ? 2.0L : 0.0L) + 0.5L + 0.25L);
  return bytes > 1e18L ? ~0ull : static_cast<std::uint64_t>(bytes);
}

SolveResult::SolveResult(StateIndexer indexer, std::vector<std::uint8_t> packed_labels,
                         std::vector<std::uint16_t> distance)
    : indexer_(std::move(indexer)), packed_(std::move(packed_labels)), distance_(std::move(distance)) {}

SolveResult solve_bounded(Dims dims, int white_budget, int black_budget, const SolveOptions& options) {
  if (!dims.valid()) throw ContractViolation("board dimensions must be positive");
  if (white_budget < 0 || black_budget < 0) throw ContractViolation("bounded solver needs finite, nonnegative budgets");
  if (dims.area() > kMaxArea || white_budget + black_budget > kMaxStones)
    throw CapacityError("state space of " + std::to_string(dims.rows) + "x" + std::to_string(dims.cols) +
                            " exceeds the solver's board/stone limits",
                        ~0ull);
  std::uint64_t estimate = estimate_solve_bytes(dims, white_budget, black_budget, options.keep_distance);
  std::uint64_t states = state_count(dims, white_budget, black_budget);
  if (estimate > options.memory_cap_bytes || states >= (1ull << 32))
    throw CapacityError("solving " + std::to_string(dims.rows) + "x" + std::to_string(dims.cols) + " w" +
                            std::to_string(white_budget) + " b" + std::to_string(black_budget) + " needs about " +
                            std::to_string(estimate >> 20) + " MiB for " + std::to_string(states) +
                            " states; cap is " + std::to_string(options.memory_cap_bytes >> 20) + " MiB",
                        estimate);
  StateIndexer ix(dims, white_budget, black_budget);
  return Retrograde(ix, options).run();
}

LabelInfo query_label(const SolveResult& res, const Position& p) {
  switch (terminal_status(p)) {
    case TerminalStatus::DWin: return {Label::DWin, 0};
    case TerminalStatus::GWinImmobilized: return {Label::GImmobilize, kNoDistance};
    case TerminalStatus::Ongoing: break;
  }
  std::uint64_t i = res.indexer().index(p);
  return {res.label(i), res.distance(i)};
}

void for_each_successor(const StateIndexer& ix, std::uint64_t index,
                        const std::function<void(std::uint64_t, const Move&)>& fn) {
  const Dims dims = ix.dims();
  StateIndexer::Raw raw;
  ix.decode(index, raw);
  if (!ix.valid(raw) || dims.on_edge(dims.square(raw.duke))) return;
  Occupancy occ = occupancy(raw);
  const int area = dims.area();
  const int* w = raw.whites.data();
  const int* b = raw.blacks.data();
  std::uint64_t wr = ix.rank(std::span<const int>(w, raw.n_whites));
  std::uint64_t br = ix.rank(std::span<const int>(b, raw.n_blacks));
  if (raw.turn == Player::D) {
    Square duke = dims.square(raw.duke);
    for (Dir d : kAllDirs) {
      Square t = step(duke, d);
      int q = dims.id(t);
      if (occ.test(q)) continue;
      fn(ix.encode(q, wr, br, Player::G), Move::step(d));
    }
    return;
  }
  auto empty = [&](int s) { return s != raw.duke && !occ.test(s); };
  if (raw.n_whites < ix.white_budget())
    for (int s = 0; s < area; ++s)
      if (empty(s)) fn(ix.encode(raw.duke, rank_edit(ix, w, raw.n_whites, -1, s), br, Player::D), Move::place_white(dims.square(s)));
  if (raw.n_blacks < ix.black_budget())
    for (int s = 0; s < area; ++s)
      if (empty(s)) fn(ix.encode(raw.duke, wr, rank_edit(ix, b, raw.n_blacks, -1, s), Player::D), Move::place_black(dims.square(s)));
  for (int j = 0; j < raw.n_whites; ++j)
    for (int s = 0; s < area; ++s)
      if (empty(s))
        fn(ix.encode(raw.duke, rank_edit(ix, w, raw.n_whites, j, s), br, Player::D),
           Move::relocate(dims.square(w[j]), dims.square(s)));
  fn(ix.encode(raw.duke, wr, br, Player::D), Move::pass());
}

Move best_move(const SolveResult& res, const Position& p) {
  const StateIndexer& ix = res.indexer();
  if (terminal_status(p) != TerminalStatus::Ongoing) throw ContractViolation("best_move called on a terminal position");
  std::uint64_t here = ix.index(p);
  const bool d_to_move = p.to_move == Player::D;
  const bool mover_wins = d_to_move == d_wins(res.label(here));

  std::optional<Move> best;
  std::uint64_t best_index = 0;
  int best_score = 0;
  int best_dist = 0;
  for_each_successor(ix, here, [&](std::uint64_t next, const Move& m) {
    Label l = res.label(next);
    int dist = res.distance(next);
    // Score: higher is better for the mover; distance breaks ties.
    int score;
    int dist_key;
    if (d_to_move) {
      score = d_wins(l) ? 2 : (l == Label::Draw ? 1 : 0);
      dist_key = -dist;
    } else {
      score = d_wins(l) ? 0 : (l == Label::GImmobilize ? 2 : 1);
      if (!mover_wins) score = d_wins(l) ? 0 : 1;
      dist_key = dist;
    }
    bool better = !best || score > best_score || (score == best_score && dist_key > best_dist) ||
                  (score == best_score && dist_key == best_dist && next < best_index);
    if (better) {
      best = m;
      best_index = next;
      best_score = score;
      best_dist = dist_key;
    }
  });
  if (!best) throw ContractViolation("no legal move in " + format_dpn(p));
  return *best;
}

std::string_view fairness_symbol(Fairness f) {
  switch (f) {
    case Fairness::DWins: return "D";
    case Fairness::GWins: return "G";
    case Fairness::Fair: return "*";
  }
  return "?";
}

StartLabels start_labels(const SolveResult& res) {
  const StateIndexer& ix = res.indexer();
  StartLabels out;
  out.d_first = query_label(res, start_position(ix.dims(), Player::D, ix.white_budget(), ix.black_budget())).label;
  out.g_first = query_label(res, start_position(ix.dims(), Player::G, ix.white_budget(), ix.black_budget())).label;
  return out;
}

Fairness classify(StartLabels labels) {
  bool d_first = d_wins(labels.d_first);
  bool g_first = d_wins(labels.g_first);
  if (d_first && g_first) return Fairness::DWins;
  if (!d_first && !g_first) return Fairness::GWins;
  if (d_first) return Fairness::Fair;
  throw ConsistencyFailure("second mover wins: moving first was a disadvantage");
}

Fairness fairness_entry(Dims dims, int white_budget, int black_budget, const SolveOptions& options) {
  return classify(start_labels(solve_bounded(dims, white_budget, black_budget, options)));
}

}  // namespace dukego::solver
