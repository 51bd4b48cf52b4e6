#include <algorithm>
#include <deque>
#include <unordered_set>

#include "dukego/strategy.hpp"

namespace dukego::strategy {

namespace {

struct Node {
  std::uint64_t index;
  Token token;
  std::uint32_t parent;
  std::uint32_t move;  // packed Move leading here
};

constexpr std::uint32_t kRoot = 0xFFFFFFFFu;

std::uint32_t pack(Dims dims, const Move& m) {
  std::uint32_t kind = static_cast<std::uint32_t>(m.kind);
  std::uint32_t dir = static_cast<std::uint32_t>(m.dir);
  std::uint32_t from = m.kind == MoveKind::Relocate ? static_cast<std::uint32_t>(dims.id(m.from)) : 0;
  bool has_to = m.kind != MoveKind::Step && m.kind != MoveKind::Pass;
  std::uint32_t to = has_to ? static_cast<std::uint32_t>(dims.id(m.to)) : 0;
  return kind | dir << 3 | from << 5 | to << 13;
}

Move unpack(Dims dims, std::uint32_t v) {
  Move m;
  m.kind = static_cast<MoveKind>(v & 7);
  m.dir = static_cast<Dir>(v >> 3 & 3);
  if (m.kind == MoveKind::Relocate) m.from = dims.square(static_cast<int>(v >> 5 & 0xFF));
  if (m.kind != MoveKind::Step && m.kind != MoveKind::Pass) m.to = dims.square(static_cast<int>(v >> 13 & 0xFF));
  return m;
}

}  // namespace

Verdict verify_g_strategy(const GStrategy& strategy, Dims dims, int white_budget, int black_budget,
                          Player first_mover) {
  if (white_budget < 0 || black_budget < 0) throw ContractViolation("verification needs finite budgets");
  if (strategy.dims() != dims) throw ContractViolation("strategy and board dimensions differ");
  const solver::StateIndexer ix(dims, white_budget, black_budget);
  const Position start = start_position(dims, first_mover, white_budget, black_budget);

  std::vector<Node> nodes;
  auto hash = [&](std::uint32_t id) {
    return std::hash<std::uint64_t>{}(nodes[id].index * 0x9E3779B97F4A7C15ull ^ nodes[id].token);
  };
  auto eq = [&](std::uint32_t a, std::uint32_t b) {
    return nodes[a].index == nodes[b].index && nodes[a].token == nodes[b].token;
  };
  std::unordered_set<std::uint32_t, decltype(hash), decltype(eq)> seen(1024, hash, eq);
  std::deque<std::uint32_t> queue;

  auto add = [&](std::uint64_t index, Token token, std::uint32_t parent, const Move* m) {
    nodes.push_back({index, token, parent, m ? pack(dims, *m) : 0});
    auto id = static_cast<std::uint32_t>(nodes.size() - 1);
    if (seen.insert(id).second) {
      queue.push_back(id);
    } else {
      nodes.pop_back();
    }
  };

  Verdict v;
  auto fail = [&](std::uint32_t id, const std::string& reason) {
    v.g_wins = false;
    v.reason = reason;
    std::vector<std::uint32_t> path;
    for (std::uint32_t at = id; at != kRoot; at = nodes[at].parent) path.push_back(at);
    std::reverse(path.begin(), path.end());
    for (std::size_t k = 0; k < path.size(); ++k) {
      if (k > 0) v.counterexample.push_back(format_move(unpack(dims, nodes[path[k]].move)));
      v.counterexample.push_back(format_dpn(ix.position(nodes[path[k]].index)));
    }
    v.states = seen.size();
    return v;
  };

  add(ix.index(start), strategy.initial(start), kRoot, nullptr);
  while (!queue.empty()) {
    const std::uint32_t id = queue.front();
    queue.pop_front();
    const Node node = nodes[id];
    const Position p = ix.position(node.index);
    switch (terminal_status(p)) {
      case TerminalStatus::DWin: return fail(id, "the duke reached the edge");
      case TerminalStatus::GWinImmobilized: continue;
      case TerminalStatus::Ongoing: break;
    }
    if (p.to_move == Player::D) {
      for (const Move& m : legal_moves(p)) add(ix.index(apply_move(p, m)), node.token, id, &m);
      continue;
    }
    std::pair<Move, Token> reply;
    try {
      reply = strategy.move(p, node.token);
    } catch (const StrategyFailure& e) {
      return fail(id, std::string("strategy failure: ") + e.what());
    } catch (const UnsupportedBoard& e) {
      return fail(id, std::string("unsupported board: ") + e.what());
    }
    Position next;
    try {
      next = apply_move(p, reply.first);
    } catch (const IllegalMove& e) {
      return fail(id, "strategy played an illegal move " + format_move(reply.first) + ": " + e.what());
    }
    if (nodes.size() >= kRoot - 1) throw Error("verification exceeded 2^32 states");
    add(ix.index(next), reply.second, id, &reply.first);
  }
  v.g_wins = true;
  v.states = seen.size();
  v.reason = "no line of D play reaches the edge";
  return v;
}

}  // namespace dukego::strategy
