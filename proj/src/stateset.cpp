#include "fenceinfer/stateset.h"

#include <bit>

#include "fenceinfer/error.h"

namespace fenceinfer {

namespace {

constexpr Bits low_half[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

void check_size(unsigned n)
{
  if (n == 0 || n > 26) throw CapExceeded("state set over " + std::to_string(n) + " variables");
}

}  // namespace

void require_enumerable(unsigned n, unsigned cap, const char * what)
{
  if (n > cap) {
    throw CapExceeded(std::string(what) + ": " + std::to_string(n) +
                      " variables exceeds the enumeration cap of " + std::to_string(cap));
  }
}

StateSet::StateSet(unsigned n) : n_(n)
{
  check_size(n);
  words_.assign(table_words(n), 0);
}

StateSet StateSet::full(unsigned n)
{
  StateSet s(n);
  for (auto & w : s.words_) w = ~Bits{0};
  s.mask_tail();
  return s;
}

StateSet StateSet::of(const Formula & f, unsigned n)
{
  check_size(n);
  return of_table(truth_table(f, n), n);
}

StateSet StateSet::of_table(std::vector<Bits> table, unsigned n)
{
  StateSet s(n);
  if (table.size() != s.words_.size()) throw Error("truth table size mismatch");
  s.words_ = std::move(table);
  s.mask_tail();
  return s;
}

void StateSet::mask_tail() { words_[0] &= n_ >= 6 ? ~Bits{0} : table_tail_mask(n_); }

std::size_t StateSet::count() const
{
  std::size_t c = 0;
  for (Bits w : words_) c += static_cast<std::size_t>(std::popcount(w));
  return c;
}

bool StateSet::empty() const
{
  for (Bits w : words_) {
    if (w) return false;
  }
  return true;
}

std::optional<State> StateSet::first() const
{
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i]) {
      return State(n_, (Bits{i} << 6) | static_cast<Bits>(std::countr_zero(words_[i])));
    }
  }
  return std::nullopt;
}

std::vector<State> StateSet::states() const
{
  std::vector<State> out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    Bits w = words_[i];
    while (w) {
      out.emplace_back(n_, (Bits{i} << 6) | static_cast<Bits>(std::countr_zero(w)));
      w &= w - 1;
    }
  }
  return out;
}

StateSet StateSet::complement() const
{
  StateSet s = *this;
  for (auto & w : s.words_) w = ~w;
  s.mask_tail();
  return s;
}

StateSet StateSet::operator&(const StateSet & o) const
{
  StateSet s = *this;
  s &= o;
  return s;
}

StateSet StateSet::operator|(const StateSet & o) const
{
  StateSet s = *this;
  s |= o;
  return s;
}

StateSet StateSet::operator-(const StateSet & o) const
{
  StateSet s = *this;
  for (std::size_t i = 0; i < s.words_.size(); ++i) s.words_[i] &= ~o.words_.at(i);
  return s;
}

StateSet & StateSet::operator|=(const StateSet & o)
{
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_.at(i);
  return *this;
}

StateSet & StateSet::operator&=(const StateSet & o)
{
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_.at(i);
  return *this;
}

bool StateSet::subset_of(const StateSet & o) const
{
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~o.words_.at(i)) return false;
  }
  return true;
}

StateSet StateSet::flip_var(unsigned i) const
{
  if (i >= n_) throw Error("flip_var index out of range");
  StateSet s(n_);
  if (i < 6) {
    const unsigned shift = 1U << i;
    const Bits lo = low_half[i];
    for (std::size_t w = 0; w < words_.size(); ++w) {
      const Bits x = words_[w];
      s.words_[w] = ((x & lo) << shift) | ((x >> shift) & lo);
    }
  } else {
    const std::size_t stride = std::size_t{1} << (i - 6);
    for (std::size_t w = 0; w < words_.size(); ++w) s.words_[w] = words_[w ^ stride];
  }
  return s;
}

}  // namespace fenceinfer
