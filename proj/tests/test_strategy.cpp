#include <random>
#include <sstream>

#include "doctest.h"
#include "dukego/strategy.hpp"
#include "oracles.hpp"

using namespace dukego;
using namespace dukego::strategy;

namespace {

Position with_whites(Position p, std::vector<Square> whites) {
  std::sort(whites.begin(), whites.end());
  p.hand.whites_in_hand -= static_cast<int>(whites.size());
  p.whites = std::move(whites);
  validate(p);
  return p;
}

// A random structurally valid diagram over a few letters.
DiagramSet random_set(std::mt19937& rng) {
  DiagramSet ds;
  int count = 1 + static_cast<int>(rng() % 2);
  for (int id = 1; id <= count; ++id) {
    Diagram d;
    d.id = id;
    d.dims = {2 + static_cast<int>(rng() % 4), 2 + static_cast<int>(rng() % 4)};
    d.cells.resize(d.dims.area());
    std::vector<int> ids(d.dims.area());
    for (int i = 0; i < d.dims.area(); ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    int letters = std::min(3, d.dims.area());
    for (int k = 0; k < letters; ++k) {
      d.cells[ids[k]].strategic = static_cast<char>('A' + k);
      d.cells[ids[k]].black_required = rng() % 3 == 0;
    }
    for (Cell& c : d.cells) {
      for (int k = 0; k < letters; ++k)
        if (rng() % 3 == 0) c.cover += static_cast<char>('a' + k);
      c.tactical = rng() % 5 == 0;
      if (count > 1 && rng() % 6 == 0) c.transition = 1 + static_cast<int>(rng() % count);
    }
    ds.diagrams.push_back(d);
  }
  if (rng() % 2) ds.first = FirstStone{'A', rng() % 2 == 0};
  return ds;
}

}  // namespace

TEST_CASE("dangling lowercase letter is rejected") {
  CHECK_THROWS_AS(parse_diagrams("diagram: 1\ndims: 1x3\nA a ab\n"), ParseError);
  try {
    parse_diagrams("diagram: 1\ndims: 1x3\nA a ab\n");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
}

TEST_CASE("lowercase and uppercase share a cell") {
  DiagramSet ds = parse_diagrams("diagram: 1\ndims: 1x3\nA a aB\n");
  const Diagram& d = ds.get(1);
  CHECK(d.strategic_square('A') == Square{1, 1});
  CHECK(d.strategic_square('B') == Square{1, 3});
  CHECK(d.at({1, 2}).cover == "a");
  CHECK(d.at({1, 3}).cover == "a");
  CHECK(d.at({1, 3}).strategic == 'B');
}

TEST_CASE("structural errors carry positions") {
  CHECK_THROWS_AS(parse_diagrams("diagram: 1\ndims: 1x2\nA A\n"), ParseError);
  CHECK_THROWS_AS(parse_diagrams("diagram: 1\ndims: 1x2\nA a>4\n"), ParseError);
  CHECK_THROWS_AS(parse_diagrams("diagram: 1\ndims: 1x2\nA a?\n"), ParseError);
  CHECK_THROWS_AS(parse_diagrams("diagram: 1\ndims: 1x3\nA a\n"), ParseError);
  CHECK_THROWS_AS(parse_diagrams("diagram: 1\ndims: 1x2\nfirst: Cw\nA a\n"), ParseError);
}

TEST_CASE("format then parse is the identity") {
  std::mt19937 rng(21);
  for (int trial = 0; trial < 300; ++trial) {
    DiagramSet ds = random_set(rng);
    std::string text = format_diagrams(ds);
    CAPTURE(text);
    CHECK(parse_diagrams(text) == ds);
  }
}

TEST_CASE("local validation") {
  SUBCASE("each neighbour misses one letter") {
    auto ds = parse_diagrams("diagram: 1\ndims: 1x5\nA ab ac B C\n");
    CHECK(validate_local(ds.get(1)).empty());
  }
  SUBCASE("two letters missing") {
    auto ds = parse_diagrams("diagram: 1\ndims: 1x5\nA a bc B C\n");
    auto v = validate_local(ds.get(1));
    REQUIRE(v.size() == 1);
    CHECK(v[0].u == Square{1, 2});
    CHECK(v[0].v == Square{1, 3});
  }
  SUBCASE("isolated cell") {
    auto ds = parse_diagrams("diagram: 1\ndims: 1x4\nA ab . B\n");
    CHECK(validate_local(ds.get(1)).empty());
  }
  SUBCASE("plus counts as a letter") {
    auto ds = parse_diagrams("diagram: 1\ndims: 4x5\n. . . . .\n. . . . .\nA a ab+ B .\n. . . . .\n");
    CHECK(validate_local(ds.get(1)).size() == 1);
    auto ok = parse_diagrams("diagram: 1\ndims: 4x5\n. . . . .\n. . . . .\nA a a+ . .\n. . . . .\n");
    CHECK(validate_local(ok.get(1)).empty());
  }
}

TEST_CASE("table move covers the strategic square") {
  auto ds = parse_diagrams("diagram: 1\ndims: 3x3\nB . .\n. b .\n. . .\n");
  Position p = start_position({3, 3}, Player::G, 1, 0);
  auto [m, ts] = g_table_move(ds, initial_table_state(ds), p);
  CHECK(m == Move::place_white({1, 1}));
  CHECK(ts.assignment.at('B') == Square{1, 1});
  Position covered = apply_move(p, m);
  covered.to_move = Player::G;
  CHECK(g_table_move(ds, ts, covered).first == Move::pass());
}

TEST_CASE("shaded square takes a black stone") {
  auto ds = parse_diagrams("diagram: 1\ndims: 6x9\n"
                           ". . . . . . . . .\n"
                           ". . . . . . . . .\n"
                           ". . . . . . . . .\n"
                           ". . . . f . . . .\n"
                           ". . . . F# . . . .\n"
                           ". . . . . . . . .\n");
  Position p = start_position({6, 9}, Player::G, 2, 2);
  CHECK(g_table_move(ds, initial_table_state(ds), p).first == Move::place_black({5, 5}));
}

TEST_CASE("plus cell blocks the adjacent edge") {
  auto ds = parse_diagrams("diagram: 1\ndims: 4x5\nA . . . .\n. . . . .\n. . a+ . .\n. . . . .\n");
  Position p = with_whites(start_position({4, 5}, Player::G, 2, 0), {{1, 1}});
  CHECK(g_table_move(ds, initial_table_state(ds), p).first == Move::place_white({4, 3}));

  SUBCASE("a spent white is relocated") {
    Position q = with_whites(start_position({4, 5}, Player::G, 2, 0), {{1, 1}, {2, 5}});
    CHECK(g_table_move(ds, initial_table_state(ds), q).first == Move::relocate({2, 5}, {4, 3}));
  }
  SUBCASE("two uncovered squares") {
    Position q = start_position({4, 5}, Player::G, 2, 0);
    CHECK_THROWS_AS(g_table_move(ds, initial_table_state(ds), q), StrategyFailure);
  }
}

TEST_CASE("transition switches diagram before reading the cell") {
  auto ds = parse_diagrams("diagram: 1\ndims: 3x3\nA . .\n. a>2 .\n. . .\n---\n"
                           "diagram: 2\ndims: 3x3\n. . B\n. b .\n. . .\n");
  auto [m, ts] = g_table_move(ds, initial_table_state(ds), start_position({3, 3}, Player::G, 1, 0));
  CHECK(ts.active_diagram == 2);
  CHECK(m == Move::place_white({1, 3}));
}

TEST_CASE("half-turn guard") {
  const std::string text = "diagram: 1\ndims: 6x9\nfirst: Fw\n"
                           ". . . . . . . . .\n"
                           ". . . . . . . . .\n"
                           ". . . . . . . . .\n"
                           ". . . . f . . . .\n"
                           ". . . . . F . . .\n"
                           ". . . . . . . . .\n";
  auto ds = parse_diagrams(text);
  Position p = with_whites(start_position({6, 9}, Player::G, 1, 0), {{5, 6}});
  p.duke = {3, 5};
  CHECK(rotation_guard(ds, p) == Move::relocate({5, 6}, {2, 4}));

  SUBCASE("east is not a half turn") {
    Position q = p;
    q.duke = {4, 6};
    CHECK_FALSE(rotation_guard(ds, q));
  }
  SUBCASE("table strategy plays the relocation and then reads the turned board") {
    TableStrategy t(ds);
    auto [m, tok] = t.move(p, t.initial(p));
    CHECK(m == Move::relocate({5, 6}, {2, 4}));
    CHECK((tok & 1) == 1);
  }
}

TEST_CASE("odd by odd boards have no half-turn opening") {
  // The start square is the centre and its own image, so no first step
  // lands on it.
  auto ds = parse_diagrams("diagram: 1\ndims: 5x5\nfirst: Fw\n. . . . .\n. . F . .\n"
                           ". . f . .\n. . . . .\n. . . . .\n");
  Position p = with_whites(start_position({5, 5}, Player::G, 1, 0), {{2, 3}});
  for (Dir d : kAllDirs) {
    Position q = p;
    q.duke = step(duke_start(p.dims), d);
    if (!p.has_stone(q.duke)) CHECK_FALSE(rotation_guard(ds, q));
  }
}

TEST_CASE("half-turn helpers are involutions") {
  std::mt19937 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    Position p = with_whites(start_position({6, 9}, Player::G, 2, 0), {{1 + static_cast<int>(rng() % 3), 1}});
    CHECK(rotate_half_turn(rotate_half_turn(p)) == p);
    Move m = Move::relocate(p.whites[0], {6, 9});
    CHECK(rotate_half_turn(p.dims, rotate_half_turn(p.dims, m)) == m);
  }
}

TEST_CASE("strategy map file round-trip") {
  MapStrategy map({5, 6}, 2, 1, Player::G);
  Position p = start_position({5, 6}, Player::G, 2, 1);
  map.set(p, Move::place_white({2, 2}));
  Position q = apply_move(apply_move(p, Move::place_white({2, 2})), Move::step(Dir::N));
  map.set(q, Move::place_black({1, 4}));
  std::stringstream buf;
  map.write(buf);
  MapStrategy back = MapStrategy::read(buf);
  CHECK(back.size() == 2);
  CHECK(back.first_mover() == Player::G);
  CHECK(back.lookup(p) == Move::place_white({2, 2}));
  CHECK(back.lookup(q) == Move::place_black({1, 4}));
  std::stringstream again;
  back.write(again);
  std::stringstream orig;
  map.write(orig);
  CHECK(again.str() == orig.str());
}

TEST_CASE("extracted 7x8 strategy holds and a hole is found") {
  auto res = solver::solve_bounded({7, 8}, 3, 0);
  Position start = start_position({7, 8}, Player::G, 3, 0);
  MapStrategy map = extract_g_strategy(res, start);
  CHECK(map.size() > 0);

  std::uint64_t reached = 0;
  CHECK(oracle::strategy_closure(res, map, Player::G, &reached) == 0);
  CHECK(reached > map.size());

  Verdict v = verify_g_strategy(map, {7, 8}, 3, 0, Player::G);
  CHECK(v.g_wins);
  CHECK(v.counterexample.empty());

  SUBCASE("one entry removed") {
    MapStrategy holed = map;
    Position after = apply_move(apply_move(start, *map.lookup(start)), Move::step(Dir::S));
    REQUIRE(holed.erase(after));
    Verdict bad = verify_g_strategy(holed, {7, 8}, 3, 0, Player::G);
    CHECK_FALSE(bad.g_wins);
    REQUIRE(bad.counterexample.size() >= 3);
    CHECK(bad.counterexample.front() == format_dpn(start));
    CHECK(bad.counterexample.back() == format_dpn(after));
  }
  SUBCASE("extraction from a D win is refused") {
    CHECK_THROWS_AS(extract_g_strategy(res, start_position({7, 8}, Player::D, 3, 0)), ContractViolation);
  }
}

TEST_CASE("immobilized start gives an empty map") {
  auto res = solver::solve_bounded({3, 3}, 4, 0);
  Position p = start_position({3, 3}, Player::D, 4, 0);
  p.whites = {{1, 2}, {2, 1}, {2, 3}, {3, 2}};
  p.hand.whites_in_hand = 0;
  CHECK(extract_g_strategy(res, p).size() == 0);
}
