#include <algorithm>
#include <tuple>

#include "dukego/core.hpp"

namespace dukego {

Dims Transform::image(Dims from) const { return transpose ? Dims{from.cols, from.rows} : from; }

Square Transform::apply(Dims from, Square s) const {
  Dims to = image(from);
  Square t = transpose ? Square{s.col, s.row} : s;
  if (flip_rows) t.row = to.rows + 1 - t.row;
  if (flip_cols) t.col = to.cols + 1 - t.col;
  return t;
}

Dir Transform::apply(Dir d) const {
  if (transpose) {
    switch (d) {
      case Dir::N: d = Dir::W; break;
      case Dir::S: d = Dir::E; break;
      case Dir::E: d = Dir::S; break;
      case Dir::W: d = Dir::N; break;
    }
  }
  if (flip_rows && (d == Dir::N || d == Dir::S)) d = opposite(d);
  if (flip_cols && (d == Dir::E || d == Dir::W)) d = opposite(d);
  return d;
}

Transform Transform::inverse() const {
  if (!transpose) return *this;
  return {true, flip_cols, flip_rows};
}

Position Transform::apply(const Position& p) const {
  Position q;
  q.dims = image(p.dims);
  q.duke = apply(p.dims, p.duke);
  q.to_move = p.to_move;
  q.hand = p.hand;
  q.blacks.reserve(p.blacks.size());
  q.whites.reserve(p.whites.size());
  for (Square s : p.blacks) q.blacks.push_back(apply(p.dims, s));
  for (Square s : p.whites) q.whites.push_back(apply(p.dims, s));
  std::sort(q.blacks.begin(), q.blacks.end());
  std::sort(q.whites.begin(), q.whites.end());
  return q;
}

std::array<Transform, 8> Transform::all() {
  std::array<Transform, 8> out{};
  for (int i = 0; i < 8; ++i) out[i] = {(i & 4) != 0, (i & 2) != 0, (i & 1) != 0};
  return out;
}

std::vector<Transform> symmetries(Dims dims) {
  std::vector<Transform> out;
  for (const Transform& t : Transform::all())
    if (t.image(dims) == dims) out.push_back(t);
  return out;
}

bool position_less(const Position& a, const Position& b) {
  auto key = [](const Position& p) {
    return std::tie(p.dims.rows, p.dims.cols, p.duke, p.blacks, p.whites, p.to_move, p.hand.whites_in_hand,
                    p.hand.blacks_in_hand);
  };
  return key(a) < key(b);
}

Position canonicalize(const Position& p) {
  Position best = p;
  for (const Transform& t : symmetries(p.dims)) {
    Position q = t.apply(p);
    if (position_less(q, best)) best = std::move(q);
  }
  return best;
}

}  // namespace dukego
