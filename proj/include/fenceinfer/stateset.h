#pragma once

#include <optional>
#include <vector>

#include "fenceinfer/formula.h"
#include "fenceinfer/logic.h"

namespace fenceinfer {

// Caps for brute-force work: sets of states, and the materialized
// transition relation (2^n x 2^n bits).
struct EnumerationLimits
{
  unsigned state_cap = 20;
  unsigned relation_cap = 14;
};

// Throws CapExceeded if n > cap.
void require_enumerable(unsigned n, unsigned cap, const char * what);

// Set of states over n variables as a bitset indexed by state code.
class StateSet
{
 public:
  StateSet() = default;
  explicit StateSet(unsigned n);  // empty set

  static StateSet full(unsigned n);
  static StateSet of(const Formula & f, unsigned n);
  static StateSet of_table(std::vector<Bits> table, unsigned n);

  unsigned vars() const { return n_; }
  std::size_t universe() const { return std::size_t{1} << n_; }
  const std::vector<Bits> & words() const { return words_; }

  bool contains(Bits code) const { return (words_[code >> 6] >> (code & 63)) & 1U; }
  bool contains(const State & s) const { return contains(s.bits()); }
  void insert(Bits code) { words_[code >> 6] |= Bits{1} << (code & 63); }
  void insert(const State & s) { insert(s.bits()); }
  void erase(Bits code) { words_[code >> 6] &= ~(Bits{1} << (code & 63)); }

  std::size_t count() const;
  bool empty() const;
  bool is_full() const { return complement().empty(); }
  std::optional<State> first() const;
  std::vector<State> states() const;

  StateSet complement() const;
  StateSet operator&(const StateSet & o) const;
  StateSet operator|(const StateSet & o) const;
  StateSet operator-(const StateSet & o) const;
  StateSet & operator|=(const StateSet & o);
  StateSet & operator&=(const StateSet & o);
  bool subset_of(const StateSet & o) const;

  // {s xor e_i | s in this}
  StateSet flip_var(unsigned i) const;

  bool operator==(const StateSet & o) const = default;

 private:
  void mask_tail();

  unsigned n_ = 0;
  std::vector<Bits> words_;
};

}  // namespace fenceinfer
