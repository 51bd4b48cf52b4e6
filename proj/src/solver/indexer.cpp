#include <algorithm>
#include <array>

#include "dukego/solver.hpp"

namespace dukego::solver {

namespace {

struct Binomials {
  std::array<std::array<std::uint64_t, kMaxStones + 1>, kMaxArea + 1> c{};
  Binomials() {
    for (int n = 0; n <= kMaxArea; ++n) {
      c[n][0] = 1;
      for (int k = 1; k <= kMaxStones; ++k) c[n][k] = n == 0 ? 0 : c[n - 1][k - 1] + c[n - 1][k];
    }
  }
};

const Binomials& binom() {
  static const Binomials b;
  return b;
}

std::vector<std::uint64_t> size_offsets(int area, int budget) {
  std::vector<std::uint64_t> off(budget + 2, 0);
  for (int k = 0; k <= budget; ++k) off[k + 1] = off[k] + binom().c[area][k];
  return off;
}

// Colexicographic unranking of k-subsets.
void unrank(std::uint64_t r, int k, int area, std::int16_t* out) {
  int hi = area - 1;
  for (int i = k; i >= 1; --i) {
    int c = hi;
    while (binom().c[c][i] > r) --c;
    out[i - 1] = static_cast<std::int16_t>(c);
    r -= binom().c[c][i];
    hi = c - 1;
  }
}

std::vector<std::int16_t> set_table(int area, int budget, const std::vector<std::uint64_t>& off) {
  std::uint64_t total = off[budget + 1];
  std::vector<std::int16_t> table(total * std::max(budget, 1), -1);
  if (budget == 0) return table;
  for (int k = 1; k <= budget; ++k)
    for (std::uint64_t r = 0; r < binom().c[area][k]; ++r) unrank(r, k, area, &table[(off[k] + r) * budget]);
  return table;
}

void check_budgets(Dims dims, int w, int b) {
  if (!dims.valid()) throw ContractViolation("board dimensions must be positive");
  if (dims.area() > kMaxArea) throw ContractViolation("board too large for the bounded solver");
  if (w < 0 || b < 0) throw ContractViolation("bounded solver needs finite, nonnegative budgets");
  if (w + b > kMaxStones) throw ContractViolation("too many stones for the bounded solver");
}

}  // namespace

std::uint64_t state_count(Dims dims, int white_budget, int black_budget) {
  check_budgets(dims, white_budget, black_budget);
  auto ow = size_offsets(dims.area(), white_budget);
  auto ob = size_offsets(dims.area(), black_budget);
  long double total = static_cast<long double>(dims.area()) * ow.back() * ob.back() * 2;
  if (total > 1e18L) return ~0ull;
  return static_cast<std::uint64_t>(dims.area()) * ow.back() * ob.back() * 2;
}

StateIndexer::StateIndexer(Dims dims, int white_budget, int black_budget)
    : dims_(dims), white_budget_(white_budget), black_budget_(black_budget) {
  check_budgets(dims, white_budget, black_budget);
  size_offset_w_ = size_offsets(dims.area(), white_budget);
  size_offset_b_ = size_offsets(dims.area(), black_budget);
  white_sets_ = size_offset_w_.back();
  black_sets_ = size_offset_b_.back();
  total_ = static_cast<std::uint64_t>(dims.area()) * white_sets_ * black_sets_ * 2;
  white_table_ = set_table(dims.area(), white_budget, size_offset_w_);
  black_table_ = set_table(dims.area(), black_budget, size_offset_b_);
}

std::uint64_t StateIndexer::rank(std::span<const int> ids) const {
  std::uint64_t r = 0;
  for (std::size_t i = 0; i < ids.size(); ++i) r += binom().c[ids[i]][i + 1];
  // Offsets for whites and blacks agree on every size both budgets allow.
  const auto& off = size_offset_w_.size() >= size_offset_b_.size() ? size_offset_w_ : size_offset_b_;
  return off[ids.size()] + r;
}

std::uint64_t StateIndexer::encode(const Raw& raw) const {
  std::uint64_t wr = rank(std::span<const int>(raw.whites.data(), raw.n_whites));
  std::uint64_t br = rank(std::span<const int>(raw.blacks.data(), raw.n_blacks));
  return encode(raw.duke, wr, br, raw.turn);
}

void StateIndexer::decode(std::uint64_t index, Raw& raw) const {
  raw.turn = (index & 1) ? Player::G : Player::D;
  std::uint64_t rest = index >> 1;
  std::uint64_t br = rest % black_sets_;
  rest /= black_sets_;
  std::uint64_t wr = rest % white_sets_;
  raw.duke = static_cast<int>(rest / white_sets_);
  raw.n_whites = 0;
  for (int i = 0; i < white_budget_; ++i) {
    std::int16_t v = white_table_[wr * white_budget_ + i];
    if (v < 0) break;
    raw.whites[raw.n_whites++] = v;
  }
  raw.n_blacks = 0;
  for (int i = 0; i < black_budget_; ++i) {
    std::int16_t v = black_table_[br * black_budget_ + i];
    if (v < 0) break;
    raw.blacks[raw.n_blacks++] = v;
  }
}

bool StateIndexer::valid(const Raw& raw) const {
  for (int i = 0; i < raw.n_whites; ++i) {
    if (raw.whites[i] == raw.duke) return false;
    for (int j = 0; j < raw.n_blacks; ++j)
      if (raw.whites[i] == raw.blacks[j]) return false;
  }
  for (int j = 0; j < raw.n_blacks; ++j)
    if (raw.blacks[j] == raw.duke) return false;
  return true;
}

bool StateIndexer::valid(std::uint64_t index) const {
  if (index >= total_) return false;
  Raw raw;
  decode(index, raw);
  return valid(raw);
}

bool StateIndexer::contains(const Position& p) const {
  if (p.dims != dims_ || p.hand.blacks_unlimited()) return false;
  if (p.white_budget() != white_budget_ || p.black_budget() != black_budget_) return false;
  try {
    validate(p);
  } catch (const InvalidPosition&) {
    return false;
  }
  return true;
}

std::uint64_t StateIndexer::index(const Position& p) const {
  if (!contains(p)) throw ContractViolation("position " + format_dpn(p) + " is outside the solved space");
  Raw raw;
  raw.duke = dims_.id(p.duke);
  raw.turn = p.to_move;
  raw.n_whites = static_cast<int>(p.whites.size());
  raw.n_blacks = static_cast<int>(p.blacks.size());
  for (int i = 0; i < raw.n_whites; ++i) raw.whites[i] = dims_.id(p.whites[i]);
  for (int i = 0; i < raw.n_blacks; ++i) raw.blacks[i] = dims_.id(p.blacks[i]);
  return encode(raw);
}

Position StateIndexer::position(std::uint64_t index) const {
  if (index >= total_) throw ContractViolation("state index out of range");
  Raw raw;
  decode(index, raw);
  Position p;
  p.dims = dims_;
  p.duke = dims_.square(raw.duke);
  p.to_move = raw.turn;
  for (int i = 0; i < raw.n_whites; ++i) p.whites.push_back(dims_.square(raw.whites[i]));
  for (int i = 0; i < raw.n_blacks; ++i) p.blacks.push_back(dims_.square(raw.blacks[i]));
  p.hand = {white_budget_ - raw.n_whites, black_budget_ - raw.n_blacks};
  return p;
}

}  // namespace dukego::solver
