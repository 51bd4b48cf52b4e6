#include <algorithm>
#include <unordered_map>

#include "dukego/solver.hpp"
#include "dukego/tactics.hpp"

namespace dukego::tactics {

namespace {

std::uint32_t encode(const Episode& e) {
  if (!e.active) return 0;
  const TacticReport& r = *e.active;
  std::uint32_t code = 1;
  code |= static_cast<std::uint32_t>(r.kind) << 1;
  code |= static_cast<std::uint32_t>(r.edge) << 3;
  code |= (r.side ? 1 + static_cast<std::uint32_t>(*r.side) : 0) << 5;
  code |= (r.running_direction ? 1 + static_cast<std::uint32_t>(*r.running_direction) : 0) << 8;
  code |= (r.fantasy_line ? 1 + static_cast<std::uint32_t>(*r.fantasy_line) : 0) << 11;
  code |= static_cast<std::uint32_t>(r.corner_step) << 19;
  return code;
}

class PolicyWalk {
 public:
  explicit PolicyWalk(const solver::SolveResult& res) : res_(res), ix_(res.indexer()) {}

  // Longest win under the policy against any G play, or -1 when some line
  // leaves the attractor or revisits a state.
  int longest(const Position& p, const Episode& e) {
    switch (terminal_status(p)) {
      case TerminalStatus::DWin: return 0;
      case TerminalStatus::GWinImmobilized: return -1;
      case TerminalStatus::Ongoing: break;
    }
    const std::uint64_t idx = ix_.index(p);
    if (res_.label(idx) != solver::Label::DWin) return -1;
    const Key key{idx, encode(e)};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    memo_[key] = -1;
    int worst = 0;
    if (p.to_move == Player::D) {
      PolicyDecision d;
      try {
        d = duke_policy(p, e);
      } catch (const Error&) {
        return -1;
      }
      int r = longest(apply_move(p, d.move), d.next);
      worst = r < 0 ? -1 : r + 1;
    } else {
      for (const Move& m : legal_moves(p)) {
        int r = longest(apply_move(p, m), e);
        if (r < 0) {
          worst = -1;
          break;
        }
        worst = std::max(worst, r + 1);
      }
    }
    memo_[key] = worst;
    return worst;
  }

 private:
  struct Key {
    std::uint64_t index;
    std::uint32_t episode;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const noexcept {
      return std::hash<std::uint64_t>{}(k.index * 0x9E3779B97F4A7C15ull ^ k.episode);
    }
  };

  const solver::SolveResult& res_;
  const solver::StateIndexer& ix_;
  std::unordered_map<Key, int, KeyHash> memo_;
};

}  // namespace

TacticAudit audit_tactics(const solver::SolveResult& res) {
  const solver::StateIndexer& ix = res.indexer();
  TacticAudit a;
  a.ply_bound = 2 * std::max(ix.dims().rows, ix.dims().cols);
  PolicyWalk walk(res);
  auto note = [&](const Position& p, const char* what) {
    if (a.examples.size() < 8) a.examples.push_back(std::string(what) + ": " + format_dpn(p));
  };
  for (std::uint64_t i = 0; i < ix.total_states(); ++i) {
    if (!ix.valid(i)) continue;
    Position p = ix.position(i);
    if (terminal_status(p) != TerminalStatus::Ongoing) continue;
    bool imminent = detect_imminent_win(p).has_value();
    bool corner = !imminent && detect_corner_win(p).has_value();
    if (!imminent && !corner) continue;
    ++a.flagged;
    ++(imminent ? a.imminent : a.corner);
    if (res.label(i) != solver::Label::DWin) {
      ++a.disagreements;
      note(p, "not a D win");
      continue;
    }
    int plies = walk.longest(p, episode_for(p));
    if (plies < 0) {
      ++a.traversal_failures;
      note(p, "policy leaves the attractor");
    } else {
      a.longest = std::max(a.longest, plies);
      if (plies > a.ply_bound) {
        ++a.over_length;
        note(p, "policy too slow");
      }
    }
  }
  return a;
}

}  // namespace dukego::tactics
