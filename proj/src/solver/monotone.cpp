#include <algorithm>
#include <bit>

#include "dukego/solver.hpp"
#include "dukego/tactics.hpp"

namespace dukego::solver {

std::string_view winner_name(Winner w) {
  switch (w) {
    case Winner::D: return "D-win";
    case Winner::G: return "G-win";
    case Winner::Unknown: return "unknown";
  }
  return "?";
}

std::size_t MonotoneKeyHash::operator()(const MonotoneKey& k) const noexcept {
  std::uint64_t h = k.blacks * 0x9E3779B97F4A7C15ull;
  h ^= (static_cast<std::uint64_t>(k.duke) << 1 | k.turn) + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
  return static_cast<std::size_t>(h ^ (h >> 31));
}

namespace {

class AndOrSearch {
 public:
  AndOrSearch(Dims dims, MonotoneProof& proof) : dims_(dims), proof_(proof) {
    const int area = dims.area();
    edge_.resize(area);
    neighbor_.resize(area);
    for (int id = 0; id < area; ++id) {
      Square s = dims.square(id);
      edge_[id] = dims.on_edge(s);
      for (int k = 0; k < 4; ++k) {
        Square t = step(s, kAllDirs[k]);
        neighbor_[id][k] = dims.contains(t) ? dims.id(t) : -1;
      }
    }
    for (const Transform& t : symmetries(dims)) {
      std::vector<int> perm(area);
      for (int id = 0; id < area; ++id) perm[id] = dims.id(t.apply(dims, dims.square(id)));
      perms_.push_back(std::move(perm));
    }
  }

  Winner search(int duke, std::uint64_t blacks, Player turn, int depth, int budget) {
    ++proof_.nodes;
    proof_.max_depth = std::max(proof_.max_depth, depth);
    if (edge_[duke]) return Winner::D;

    int open = 0, open_edges = 0, edge_sq = -1;
    for (int q : neighbor_[duke]) {
      if (q < 0 || occupied(blacks, q)) continue;
      ++open;
      if (edge_[q]) {
        ++open_edges;
        edge_sq = q;
      }
    }
    if (turn == Player::D) {
      if (open == 0) return Winner::G;
      if (open_edges > 0) return Winner::D;
    } else if (open_edges >= 2) {
      return Winner::D;
    }
    if (budget <= 0) return Winner::Unknown;

    MonotoneKey key = canonical(duke, blacks, turn);
    if (auto it = proof_.memo.find(key); it != proof_.memo.end()) {
      if (it->second.winner != Winner::Unknown) return it->second.winner;
      if (it->second.budget >= budget) return Winner::Unknown;
    }

    Winner result;
    if (turn == Player::D) {
      result = Winner::G;
      for (int q : duke_order(duke, blacks)) {
        Winner r = search(q, blacks, Player::G, depth + 1, budget - 1);
        if (r == Winner::D) {
          result = Winner::D;
          break;
        }
        if (r == Winner::Unknown) result = Winner::Unknown;
      }
    } else {
      result = Winner::D;
      std::vector<int> targets;
      if (open_edges == 1) {
        // Any other placement lets the duke step onto the edge.
        targets.push_back(edge_sq);
      } else {
        targets = stone_order(duke, blacks);
      }
      for (int s : targets) {
        Winner r = search(duke, blacks | (1ull << s), Player::D, depth + 1, budget - 1);
        if (r == Winner::G) {
          result = Winner::G;
          break;
        }
        if (r == Winner::Unknown) result = Winner::Unknown;
      }
    }
    MonotoneEntry& e = proof_.memo[key];
    e.winner = result;
    e.budget = static_cast<std::uint16_t>(budget);
    return result;
  }

 private:
  static bool occupied(std::uint64_t blacks, int id) { return (blacks >> id) & 1; }

  MonotoneKey canonical(int duke, std::uint64_t blacks, Player turn) const {
    MonotoneKey best{~0ull, 0xFF, static_cast<std::uint8_t>(turn == Player::G)};
    for (const auto& perm : perms_) {
      std::uint64_t bits = 0;
      for (std::uint64_t b = blacks; b; b &= b - 1) bits |= 1ull << perm[std::countr_zero(b)];
      auto d = static_cast<std::uint8_t>(perm[duke]);
      if (bits < best.blacks || (bits == best.blacks && d < best.duke)) {
        best.blacks = bits;
        best.duke = d;
      }
    }
    return best;
  }

  Position position(int duke, std::uint64_t blacks) const {
    Position p;
    p.dims = dims_;
    p.duke = dims_.square(duke);
    p.to_move = Player::D;
    p.hand = {0, kUnlimited};
    for (std::uint64_t b = blacks; b; b &= b - 1) p.blacks.push_back(dims_.square(std::countr_zero(b)));
    return p;
  }

  // The duke policy's choice first, then steps by distance to the nearest edge.
  std::vector<int> duke_order(int duke, std::uint64_t blacks) const {
    std::vector<int> steps;
    for (int q : neighbor_[duke])
      if (q >= 0 && !occupied(blacks, q)) steps.push_back(q);
    auto edge_distance = [&](int id) {
      Square s = dims_.square(id);
      return std::min({s.row - 1, dims_.rows - s.row, s.col - 1, dims_.cols - s.col});
    };
    std::stable_sort(steps.begin(), steps.end(), [&](int a, int b) { return edge_distance(a) < edge_distance(b); });
    Position p = position(duke, blacks);
    Move m = tactics::duke_policy(p).move;
    int preferred = dims_.id(step(p.duke, m.dir));
    auto it = std::find(steps.begin(), steps.end(), preferred);
    if (it != steps.end()) std::rotate(steps.begin(), it, it + 1);
    return steps;
  }

  // Empty squares nearest the duke first.
  std::vector<int> stone_order(int duke, std::uint64_t blacks) const {
    std::vector<int> out;
    Square d = dims_.square(duke);
    for (int id = 0; id < dims_.area(); ++id)
      if (id != duke && !occupied(blacks, id)) out.push_back(id);
    auto dist = [&](int id) {
      Square s = dims_.square(id);
      return std::abs(s.row - d.row) + std::abs(s.col - d.col);
    };
    std::stable_sort(out.begin(), out.end(), [&](int a, int b) { return dist(a) < dist(b); });
    return out;
  }

  Dims dims_;
  MonotoneProof& proof_;
  std::vector<std::uint8_t> edge_;
  std::vector<std::array<int, 4>> neighbor_;
  std::vector<std::vector<int>> perms_;
};

}  // namespace

MonotoneProof solve_monotone(Dims dims, Player first_mover, int ply_cap) {
  if (!dims.valid()) throw ContractViolation("board dimensions must be positive");
  if (dims.area() > 64) throw ContractViolation("the monotone search supports boards of at most 64 squares");
  MonotoneProof proof;
  proof.root = start_position(dims, first_mover, 0, kUnlimited);
  if (ply_cap <= 0) ply_cap = 2 * dims.area();
  AndOrSearch search(dims, proof);
  proof.winner = search.search(dims.id(proof.root.duke), 0, first_mover, 0, ply_cap);
  return proof;
}

}  // namespace dukego::solver
