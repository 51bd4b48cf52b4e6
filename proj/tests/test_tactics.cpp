#include <algorithm>
#include <random>

#include "doctest.h"
#include "dukego/solver.hpp"
#include "dukego/tactics.hpp"

using namespace dukego;
using namespace dukego::tactics;

namespace {

Position mono(Dims dims, Square duke, std::vector<Square> blacks, Player to_move = Player::D) {
  Position p = start_position(dims, to_move, 0, kUnlimited);
  p.duke = duke;
  std::sort(blacks.begin(), blacks.end());
  p.blacks = std::move(blacks);
  validate(p);
  return p;
}

Position bounded(Dims dims, Square duke, std::vector<Square> whites, std::vector<Square> blacks, int w, int b) {
  Position p = start_position(dims, Player::D, w, b);
  p.duke = duke;
  std::sort(whites.begin(), whites.end());
  std::sort(blacks.begin(), blacks.end());
  p.hand = {w - static_cast<int>(whites.size()), b - static_cast<int>(blacks.size())};
  p.whites = std::move(whites);
  p.blacks = std::move(blacks);
  validate(p);
  return p;
}

Position place(const Position& p, Square s) {
  Position q = p;
  q.to_move = Player::G;
  return apply_move(q, Move::place_black(s));
}

}  // namespace

TEST_CASE("imminent win needs at most one stone in the two edge lines") {
  auto r = detect_imminent_win(mono({6, 9}, {5, 4}, {}));
  REQUIRE(r);
  CHECK(r->kind == TacticKind::ImminentWin);
  CHECK(r->edge == Dir::S);
  CHECK(detect_imminent_win(mono({6, 9}, {5, 4}, {{6, 4}})));
  CHECK(detect_imminent_win(mono({6, 9}, {5, 4}, {{6, 4}}, Player::G)));
  CHECK_FALSE(detect_imminent_win(mono({6, 9}, {5, 4}, {{6, 4}, {5, 2}})));
}

TEST_CASE("imminent win runs away from the other stone") {
  Position open = mono({6, 9}, {5, 4}, {});
  auto r = *detect_imminent_win(open);
  CHECK(imminent_win_move(open, r).first == Move::step(Dir::S));

  auto west = *detect_imminent_win(mono({6, 9}, {5, 4}, {{5, 2}}));
  CHECK(imminent_win_move(mono({6, 9}, {5, 4}, {{6, 4}, {5, 2}}), west).first == Move::step(Dir::E));

  auto east = *detect_imminent_win(mono({6, 9}, {5, 4}, {{5, 7}}));
  auto [m, next] = imminent_win_move(mono({6, 9}, {5, 4}, {{6, 4}, {5, 7}}), east);
  CHECK(m == Move::step(Dir::W));
  REQUIRE(next.running_direction);
  CHECK(*next.running_direction == Dir::W);
}

TEST_CASE("corner win at the 6x8 start") {
  Position start = start_position({6, 8}, Player::D, 0, kUnlimited);
  REQUIRE(start.duke == Square{4, 5});
  auto r = detect_corner_win(start);
  REQUIRE(r);
  CHECK(r->label() == "CornerWin(SE)");
  CHECK_FALSE(detect_corner_win(mono({6, 8}, {4, 5}, {{5, 2}})));
  CHECK_FALSE(detect_corner_win(mono({6, 8}, {4, 5}, {{2, 7}})));
}

TEST_CASE("corner win script") {
  Position start = start_position({6, 8}, Player::D, 0, kUnlimited);
  auto r = *detect_corner_win(start);
  CHECK(corner_win_move(start, r).first == Move::step(Dir::S));

  Position a = place(start, {5, 5});
  auto [m1, r1] = corner_win_move(a, r);
  CHECK(m1 == Move::step(Dir::E));
  Position at1 = apply_move(a, m1);
  Position b = place(at1, {4, 7});
  REQUIRE(b.duke == Square{4, 6});
  auto [m2, r2] = corner_win_move(b, r1);
  CHECK(m2 == Move::step(Dir::S));
  CHECK(r2.kind == TacticKind::ImminentWin);
}

TEST_CASE("fantastic direction follows the band counts") {
  CHECK(fantastic_direction(bounded({9, 9}, {5, 5}, {}, {}, 2, 1)) == Dir::S);
  CHECK(fantastic_direction(bounded({9, 9}, {5, 5}, {{6, 5}, {5, 6}}, {}, 2, 1)) == Dir::N);
  CHECK(fantastic_direction(bounded({9, 9}, {5, 5}, {}, {{3, 5}}, 2, 1)) == Dir::S);
  CHECK_THROWS_AS(fantastic_direction(bounded({9, 9}, {5, 5}, {}, {}, 3, 0)), ContractViolation);
}

TEST_CASE("fantastic band position is still a D win") {
  auto res = solver::solve_bounded({9, 9}, 2, 0);
  Position p = bounded({9, 9}, {5, 5}, {{6, 5}, {5, 6}}, {}, 2, 0);
  CHECK(solver::query_label(res, p).label == solver::Label::DWin);
}

TEST_CASE("duke policy openings") {
  CHECK(duke_policy(start_position({6, 9}, Player::D, 0, kUnlimited)).move == Move::step(Dir::S));
  CHECK(duke_policy(start_position({8, 8}, Player::D, 0, kUnlimited)).move == Move::step(Dir::S));
  Position seven = start_position({7, 7}, Player::D, 0, kUnlimited);
  seven.blacks = {{3, 3}};
  CHECK(duke_policy(seven).move == Move::step(Dir::S));
}

TEST_CASE("duke policy steps onto the edge first") {
  auto d = duke_policy(mono({6, 9}, {2, 5}, {{5, 5}}));
  CHECK(d.move == Move::step(Dir::N));
  CHECK(d.stage == PolicyStage::EdgeStep);
}

TEST_CASE("duke policy reports the tactic it plays") {
  auto d = duke_policy(start_position({6, 8}, Player::D, 0, kUnlimited));
  CHECK(d.stage == PolicyStage::Corner);
  CHECK(d.rationale == "CornerWin(SE)");
}

TEST_CASE("duke policy is always legal") {
  std::mt19937 rng(9);
  for (int trial = 0; trial < 2000; ++trial) {
    Dims dims{3 + static_cast<int>(rng() % 6), 3 + static_cast<int>(rng() % 6)};
    Position p = start_position(dims, Player::D, 0, kUnlimited);
    p.duke = {2 + static_cast<int>(rng() % (dims.rows - 2)), 2 + static_cast<int>(rng() % (dims.cols - 2))};
    for (int k = static_cast<int>(rng() % 6); k > 0; --k) {
      Square s{1 + static_cast<int>(rng() % dims.rows), 1 + static_cast<int>(rng() % dims.cols)};
      if (p.is_empty(s)) {
        p.blacks.push_back(s);
        std::sort(p.blacks.begin(), p.blacks.end());
      }
    }
    if (terminal_status(p) != TerminalStatus::Ongoing) continue;
    auto d = duke_policy(p);
    CHECK_NOTHROW(apply_move(p, d.move));
  }
}

TEST_CASE("tactic audit on small boards") {
  for (Dims dims : {Dims{5, 5}, Dims{5, 7}, Dims{6, 6}}) {
    auto res = solver::solve_bounded(dims, 3, 0);
    auto a = audit_tactics(res);
    CAPTURE(dims.rows);
    CAPTURE(dims.cols);
    CHECK(a.flagged > 0);
    CHECK(a.corner > 0);
    CHECK(a.disagreements == 0);
    CHECK(a.traversal_failures == 0);
    CHECK(a.longest <= a.ply_bound);
  }
}
