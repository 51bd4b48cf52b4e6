#include <algorithm>
#include <cctype>

#include "dukego/core.hpp"

namespace dukego {

namespace {

std::string square_text(Square s) { return std::to_string(s.row) + "," + std::to_string(s.col); }

std::string stone_list(char tag, const std::vector<Square>& v) {
  std::string out(1, tag);
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += square_text(v[i]);
  }
  out += ']';
  return out;
}

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, 1, static_cast<int>(pos_) + 1); }

  bool done() const { return pos_ >= text_.size(); }
  char peek() const { return done() ? '\0' : text_[pos_]; }

  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  void skip_spaces(bool required) {
    std::size_t start = pos_;
    while (!done() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
    if (required && pos_ == start) fail("expected a space");
  }

  int integer() {
    if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected a number");
    long v = 0;
    while (std::isdigit(static_cast<unsigned char>(peek()))) {
      v = v * 10 + (text_[pos_++] - '0');
      if (v > 1000000) fail("number too large");
    }
    return static_cast<int>(v);
  }

  Square square() {
    int r = integer();
    expect(',');
    int c = integer();
    return {r, c};
  }

  std::vector<Square> list(char tag) {
    expect(tag);
    expect('[');
    std::vector<Square> out;
    if (peek() == ']') {
      ++pos_;
      return out;
    }
    for (;;) {
      out.push_back(square());
      if (peek() == ';') {
        ++pos_;
        continue;
      }
      expect(']');
      return out;
    }
  }

  bool keyword(std::string_view word) {
    if (text_.substr(pos_, word.size()) == word) {
      pos_ += word.size();
      return true;
    }
    return false;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string format_dpn(const Position& p) {
  std::string out = std::to_string(p.dims.rows) + "x" + std::to_string(p.dims.cols);
  out += " D" + square_text(p.duke);
  out += " " + stone_list('B', p.blacks);
  out += " " + stone_list('W', p.whites);
  out += ' ';
  out += player_letter(p.to_move);
  out += " w" + std::to_string(p.hand.whites_in_hand);
  out += " b" + (p.hand.blacks_unlimited() ? std::string("inf") : std::to_string(p.hand.blacks_in_hand));
  return out;
}

Position parse_dpn(std::string_view text) {
  while (!text.empty() && (text.back() == '\n' || text.back() == '\r' || text.back() == ' ')) text.remove_suffix(1);
  Cursor cur(text);
  Position p;
  cur.skip_spaces(false);
  p.dims.rows = cur.integer();
  cur.expect('x');
  p.dims.cols = cur.integer();
  cur.skip_spaces(true);
  cur.expect('D');
  p.duke = cur.square();
  cur.skip_spaces(true);
  p.blacks = cur.list('B');
  cur.skip_spaces(true);
  p.whites = cur.list('W');
  cur.skip_spaces(true);
  if (cur.peek() == 'D' || cur.peek() == 'G') {
    p.to_move = cur.peek() == 'D' ? Player::D : Player::G;
    cur.expect(cur.peek());
  } else {
    cur.fail("expected side to move 'D' or 'G'");
  }
  cur.skip_spaces(true);
  cur.expect('w');
  p.hand.whites_in_hand = cur.integer();
  cur.skip_spaces(true);
  cur.expect('b');
  p.hand.blacks_in_hand = cur.keyword("inf") ? kUnlimited : cur.integer();
  cur.skip_spaces(false);
  if (!cur.done()) cur.fail("unexpected trailing text");

  std::sort(p.blacks.begin(), p.blacks.end());
  std::sort(p.whites.begin(), p.whites.end());
  validate(p);
  return p;
}

}  // namespace dukego
