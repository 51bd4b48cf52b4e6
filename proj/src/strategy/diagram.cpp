#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

#include "dukego/strategy.hpp"

namespace dukego::strategy {

std::optional<Square> Diagram::strategic_square(char upper) const {
  for (int id = 0; id < dims.area(); ++id)
    if (cells[id].strategic == upper) return dims.square(id);
  return std::nullopt;
}

const Diagram& DiagramSet::get(int id) const {
  for (const Diagram& d : diagrams)
    if (d.id == id) return d;
  throw ContractViolation("no diagram " + std::to_string(id));
}

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Cell parse_cell(const std::string& tok, int line, int column) {
  Cell c;
  if (tok == ".") return c;
  auto fail = [&](const std::string& why) { throw ParseError("bad cell token '" + tok + "': " + why, line, column); };
  std::size_t i = 0;
  std::set<char> cover;
  bool saw_hash = false;
  while (i < tok.size()) {
    char ch = tok[i];
    if (std::isupper(static_cast<unsigned char>(ch))) {
      if (c.strategic) fail("two strategic letters");
      c.strategic = ch;
      ++i;
    } else if (ch == '#') {
      if (saw_hash) fail("repeated '#'");
      saw_hash = true;
      ++i;
    } else if (std::islower(static_cast<unsigned char>(ch))) {
      if (!cover.insert(ch).second) fail("repeated letter");
      ++i;
    } else if (ch == '+') {
      if (c.tactical) fail("repeated '+'");
      c.tactical = true;
      ++i;
    } else if (ch == '>') {
      std::size_t j = i + 1;
      while (j < tok.size() && std::isdigit(static_cast<unsigned char>(tok[j]))) ++j;
      if (j == i + 1 || j != tok.size()) fail("transition must end the token with a diagram number");
      c.transition = std::stoi(tok.substr(i + 1, j - i - 1));
      i = j;
    } else {
      fail("unexpected character");
    }
  }
  if (saw_hash && !c.strategic) fail("'#' shades a strategic square and needs an uppercase letter");
  c.black_required = saw_hash;
  c.cover.assign(cover.begin(), cover.end());
  return c;
}

std::string format_cell(const Cell& c) {
  std::string s;
  if (c.strategic) s += c.strategic;
  if (c.black_required) s += '#';
  s += c.cover;
  if (c.tactical) s += '+';
  if (c.transition) s += ">" + std::to_string(*c.transition);
  return s.empty() ? "." : s;
}

struct Block {
  int first_line = 0;
  std::vector<std::pair<int, std::string>> lines;
};

bool parse_dims(const std::string& text, Dims& dims) {
  auto x = text.find('x');
  if (x == std::string::npos) return false;
  try {
    std::size_t used = 0;
    dims.rows = std::stoi(text.substr(0, x), &used);
    if (used != x) return false;
    dims.cols = std::stoi(text.substr(x + 1), &used);
    if (used != text.size() - x - 1) return false;
  } catch (const std::exception&) {
    return false;
  }
  return dims.valid();
}

void check_structure(const DiagramSet& ds, const std::vector<int>& header_lines) {
  std::set<int> ids;
  for (std::size_t k = 0; k < ds.diagrams.size(); ++k)
    if (!ids.insert(ds.diagrams[k].id).second)
      throw ParseError("duplicate diagram id " + std::to_string(ds.diagrams[k].id), header_lines[k], 1);
  for (std::size_t k = 0; k < ds.diagrams.size(); ++k) {
    const Diagram& d = ds.diagrams[k];
    std::set<char> upper;
    for (int id = 0; id < d.dims.area(); ++id) {
      const Cell& c = d.cells[id];
      Square s = d.dims.square(id);
      if (c.strategic && !upper.insert(c.strategic).second)
        throw ParseError(std::string("duplicate strategic letter ") + c.strategic + " at " + std::to_string(s.row) +
                             "," + std::to_string(s.col),
                         header_lines[k] + 1 + s.row, s.col);
      if (c.transition && !ids.count(*c.transition))
        throw ParseError("transition to unknown diagram " + std::to_string(*c.transition) + " at " +
                             std::to_string(s.row) + "," + std::to_string(s.col),
                         header_lines[k] + 1 + s.row, s.col);
    }
    for (int id = 0; id < d.dims.area(); ++id) {
      Square s = d.dims.square(id);
      for (char l : d.cells[id].cover)
        if (!upper.count(static_cast<char>(std::toupper(static_cast<unsigned char>(l)))))
          throw ParseError(std::string("letter ") + l + " at " + std::to_string(s.row) + "," + std::to_string(s.col) +
                               " has no strategic square",
                           header_lines[k] + 1 + s.row, s.col);
    }
  }
  if (ds.first) {
    const Diagram& start = ds.get(ds.start_diagram);
    if (!start.strategic_square(ds.first->letter))
      throw ParseError(std::string("first stone names ") + ds.first->letter +
                           ", which is not a strategic square of the start diagram",
                       1, 1);
  }
}

}  // namespace

DiagramSet parse_diagrams(std::string_view text) {
  std::vector<Block> blocks(1);
  std::istringstream in{std::string(text)};
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == ';') continue;
    if (line == "---") {
      blocks.emplace_back();
      continue;
    }
    if (blocks.back().lines.empty()) blocks.back().first_line = line_no;
    blocks.back().lines.emplace_back(line_no, line);
  }
  std::erase_if(blocks, [](const Block& b) { return b.lines.empty(); });
  if (blocks.empty()) throw ParseError("no diagrams", 1, 1);

  DiagramSet ds;
  std::vector<int> header_lines;
  for (std::size_t k = 0; k < blocks.size(); ++k) {
    Diagram d;
    bool have_id = false, have_dims = false;
    std::vector<std::pair<int, std::string>> rows;
    for (const auto& [ln, line] : blocks[k].lines) {
      auto colon = line.find(':');
      if (colon != std::string::npos && rows.empty()) {
        std::string key = trim(line.substr(0, colon));
        std::string value = trim(line.substr(colon + 1));
        if (key == "diagram") {
          try {
            std::size_t used = 0;
            d.id = std::stoi(value, &used);
            if (used != value.size()) throw std::invalid_argument("trailing");
          } catch (const std::exception&) {
            throw ParseError("bad diagram id '" + value + "'", ln, static_cast<int>(colon) + 2);
          }
          have_id = true;
        } else if (key == "dims") {
          if (!parse_dims(value, d.dims)) throw ParseError("bad dims '" + value + "'", ln, static_cast<int>(colon) + 2);
          have_dims = true;
        } else if (key == "first") {
          if (k != 0) throw ParseError("'first' belongs to the start diagram", ln, 1);
          if (value.size() != 2 || !std::isupper(static_cast<unsigned char>(value[0])) ||
              (value[1] != 'b' && value[1] != 'w'))
            throw ParseError("bad first stone '" + value + "' (expected e.g. Fb)", ln, static_cast<int>(colon) + 2);
          ds.first = FirstStone{value[0], value[1] == 'b'};
        } else {
          throw ParseError("unknown header '" + key + "'", ln, 1);
        }
        continue;
      }
      rows.emplace_back(ln, line);
    }
    if (!have_id) throw ParseError("missing 'diagram:' header", blocks[k].first_line, 1);
    if (!have_dims) throw ParseError("missing 'dims:' header", blocks[k].first_line, 1);
    if (static_cast<int>(rows.size()) != d.dims.rows)
      throw ParseError("expected " + std::to_string(d.dims.rows) + " rows, found " + std::to_string(rows.size()),
                       rows.empty() ? blocks[k].first_line : rows.back().first, 1);
    d.cells.resize(d.dims.area());
    for (int r = 0; r < d.dims.rows; ++r) {
      const auto& [ln, line] = rows[r];
      std::size_t pos = 0;
      int c = 0;
      while (pos < line.size()) {
        while (pos < line.size() && std::isspace(static_cast<unsigned char>(line[pos]))) ++pos;
        if (pos >= line.size()) break;
        std::size_t end = pos;
        while (end < line.size() && !std::isspace(static_cast<unsigned char>(line[end]))) ++end;
        if (c >= d.dims.cols) throw ParseError("too many cells in row", ln, static_cast<int>(pos) + 1);
        d.cells[d.dims.id({r + 1, c + 1})] = parse_cell(line.substr(pos, end - pos), ln, static_cast<int>(pos) + 1);
        ++c;
        pos = end;
      }
      if (c != d.dims.cols)
        throw ParseError("expected " + std::to_string(d.dims.cols) + " cells, found " + std::to_string(c), ln, 1);
    }
    header_lines.push_back(blocks[k].first_line);
    ds.diagrams.push_back(std::move(d));
  }
  ds.start_diagram = ds.diagrams.front().id;
  check_structure(ds, header_lines);
  return ds;
}

std::string format_diagrams(const DiagramSet& ds) {
  std::ostringstream out;
  bool first_block = true;
  auto emit = [&](const Diagram& d) {
    if (!first_block) out << "---\n";
    out << "diagram: " << d.id << "\n";
    out << "dims: " << d.dims.rows << "x" << d.dims.cols << "\n";
    if (first_block && ds.first) out << "first: " << ds.first->letter << (ds.first->black ? 'b' : 'w') << "\n";
    first_block = false;
    for (int r = 1; r <= d.dims.rows; ++r) {
      for (int c = 1; c <= d.dims.cols; ++c) out << (c > 1 ? " " : "") << format_cell(d.at({r, c}));
      out << "\n";
    }
  };
  emit(ds.get(ds.start_diagram));
  for (const Diagram& d : ds.diagrams)
    if (d.id != ds.start_diagram) emit(d);
  return out.str();
}

namespace {

std::string letters(const Cell& c) { return c.tactical ? c.cover + "+" : c.cover; }

std::string missing(const std::string& from, const std::string& in) {
  std::string out;
  for (char ch : from)
    if (in.find(ch) == std::string::npos) out += ch;
  return out;
}

std::vector<Dir> edges_at_distance_one(Dims dims, Square s) {
  std::vector<Dir> out;
  for (Dir d : kAllDirs)
    if (distance_to_edge(dims, s, d) == 1) out.push_back(d);
  return out;
}

std::string sq(Square s) { return std::to_string(s.row) + "," + std::to_string(s.col); }

}  // namespace

std::vector<Violation> validate_local(const Diagram& d) {
  std::vector<Violation> out;
  for (int id = 0; id < d.dims.area(); ++id) {
    Square u = d.dims.square(id);
    const Cell& cu = d.cells[id];
    if (!cu.labeled()) continue;
    if (cu.tactical) {
      auto edges = edges_at_distance_one(d.dims, u);
      if (edges.size() != 1)
        out.push_back({u, u, edges.empty() ? "'+' on a cell with no edge at distance 1"
                                           : "'+' is ambiguous: two edges at distance 1"});
    }
    for (Dir dir : {Dir::S, Dir::E}) {
      Square v = step(u, dir);
      if (!d.dims.contains(v) || !d.at(v).labeled()) continue;
      std::string lu = letters(cu), lv = letters(d.at(v));
      std::string v_not_u = missing(lv, lu), u_not_v = missing(lu, lv);
      if (v_not_u.size() > 1 || u_not_v.size() > 1)
        out.push_back({u, v,
                       sq(u) + " {" + lu + "} and " + sq(v) + " {" + lv + "} differ by more than one letter"});
    }
  }
  return out;
}

TableState initial_table_state(const DiagramSet& ds) {
  TableState ts;
  ts.active_diagram = ds.start_diagram;
  return ts;
}

Position rotate_half_turn(const Position& p) { return Transform{false, true, true}.apply(p); }

Move rotate_half_turn(Dims dims, const Move& m) {
  Transform t{false, true, true};
  Move out = m;
  out.dir = t.apply(m.dir);
  if (m.kind == MoveKind::Relocate) out.from = t.apply(dims, m.from);
  if (m.kind != MoveKind::Step && m.kind != MoveKind::Pass) out.to = t.apply(dims, m.to);
  return out;
}

namespace {

bool g_can_pass(const Position& p) { return !p.monotone(); }

bool blacks_available(const Position& p) { return p.hand.blacks_in_hand == kUnlimited || p.hand.blacks_in_hand > 0; }

// Covers `target` with one G move, or returns nothing when that is impossible.
std::optional<Move> cover_move(const Position& p, Square target, bool black, const std::vector<Square>& keep) {
  if (black) {
    if (p.is_black(target)) return std::nullopt;
    if (!blacks_available(p)) return std::nullopt;
    if (p.is_white(target)) return std::nullopt;
    return Move::place_black(target);
  }
  if (p.hand.whites_in_hand > 0) return Move::place_white(target);
  if (!p.monotone()) {
    for (Square w : p.whites)
      if (std::find(keep.begin(), keep.end(), w) == keep.end()) return Move::relocate(w, target);
  }
  if (blacks_available(p)) return Move::place_black(target);
  return std::nullopt;
}

std::string describe(const Diagram& d, Square duke) {
  return "diagram " + std::to_string(d.id) + " at " + sq(duke);
}

}  // namespace

std::pair<Move, TableState> g_table_move(const DiagramSet& ds, const TableState& ts, const Position& in) {
  if (in.to_move != Player::G) throw ContractViolation("g_table_move needs G to move");
  if (terminal_status(in) != TerminalStatus::Ongoing) throw ContractViolation("g_table_move needs an ongoing game");
  const Position p = ts.rotated ? rotate_half_turn(in) : in;
  TableState next = ts;
  auto finish = [&](Move m) {
    const Diagram& d = ds.get(next.active_diagram);
    Position after = apply_move(p, m);
    next.assignment.clear();
    for (int id = 0; id < d.dims.area(); ++id) {
      const Cell& c = d.cells[id];
      if (c.strategic && after.has_stone(d.dims.square(id))) next.assignment[c.strategic] = d.dims.square(id);
    }
    return std::pair{ts.rotated ? rotate_half_turn(p.dims, m) : m, next};
  };

  const Diagram* d = &ds.get(next.active_diagram);
  if (d->dims != p.dims) throw StrategyFailure("diagram dims do not match the board");
  for (std::size_t hops = 0; d->at(p.duke).transition; ++hops) {
    if (hops > ds.diagrams.size()) throw StrategyFailure("transition cycle at " + sq(p.duke));
    next.active_diagram = *d->at(p.duke).transition;
    d = &ds.get(next.active_diagram);
  }
  const Cell& cell = d->at(p.duke);

  if (ds.first && p.stone_count() == 0 && next.active_diagram == ds.start_diagram) {
    Square f = *d->strategic_square(ds.first->letter);
    return finish(ds.first->black ? Move::place_black(f) : Move::place_white(f));
  }
  if (!cell.labeled()) throw StrategyFailure("the duke left the table: " + describe(*d, p.duke));

  std::vector<Square> required;
  for (char l : cell.cover) required.push_back(*d->strategic_square(static_cast<char>(std::toupper(l))));
  if (cell.tactical) {
    auto edges = edges_at_distance_one(p.dims, p.duke);
    if (edges.size() != 1) throw StrategyFailure("'+' without a unique adjacent edge: " + describe(*d, p.duke));
    required.push_back(step(p.duke, edges.front()));
  }
  std::vector<Square> uncovered;
  for (Square s : required) {
    if (s == p.duke) throw StrategyFailure("the duke stands on a required square: " + describe(*d, p.duke));
    if (!p.has_stone(s)) uncovered.push_back(s);
  }
  if (uncovered.size() > 1)
    throw StrategyFailure(std::to_string(uncovered.size()) + " required squares uncovered: " + describe(*d, p.duke));
  if (uncovered.empty()) {
    if (g_can_pass(p)) return finish(Move::pass());
    for (int id = 0; id < p.dims.area(); ++id) {
      Square s = p.dims.square(id);
      if (p.is_empty(s)) return finish(Move::place_black(s));
    }
    throw StrategyFailure("no empty square for the compulsory stone");
  }
  Square target = uncovered.front();
  bool shaded = d->at(target).black_required;
  if (shaded && p.is_white(target)) throw StrategyFailure("white stone on a shaded square: " + describe(*d, p.duke));
  auto m = cover_move(p, target, shaded, required);
  if (!m) throw StrategyFailure("no stone available to cover " + sq(target) + ": " + describe(*d, p.duke));
  return finish(*m);
}

std::optional<Move> rotation_guard(const DiagramSet& ds, const Position& p) {
  if (!ds.first || p.to_move != Player::G) return std::nullopt;
  const Diagram& start = ds.get(ds.start_diagram);
  if (start.dims != p.dims || p.stone_count() != 1) return std::nullopt;
  Square f = *start.strategic_square(ds.first->letter);
  if (!p.has_stone(f)) return std::nullopt;
  Transform half{false, true, true};
  Square home = duke_start(p.dims);
  if (p.duke == home || p.duke != half.apply(p.dims, home)) return std::nullopt;
  Square image = half.apply(p.dims, f);
  if (image == f) return Move::pass();
  return Move::relocate(f, image);
}

TableStrategy::TableStrategy(DiagramSet ds) : ds_(std::move(ds)) {}

Dims TableStrategy::dims() const { return ds_.get(ds_.start_diagram).dims; }

// Token: active diagram id in the high bits, the half-turn flag in bit 0.
Token TableStrategy::initial(const Position&) const { return static_cast<Token>(ds_.start_diagram) << 1; }

std::pair<Move, Token> TableStrategy::move(const Position& p, Token token) const {
  TableState ts;
  ts.active_diagram = static_cast<int>(token >> 1);
  ts.rotated = token & 1;
  if (!ts.rotated) {
    if (auto m = rotation_guard(ds_, p)) {
      if (m->kind == MoveKind::Pass && p.monotone()) throw StrategyFailure("the half-turn needs a pass");
      return {*m, (static_cast<Token>(ds_.start_diagram) << 1) | 1};
    }
  }
  auto [m, next] = g_table_move(ds_, ts, p);
  return {m, (static_cast<Token>(next.active_diagram) << 1) | (next.rotated ? 1 : 0)};
}

}  // namespace dukego::strategy
