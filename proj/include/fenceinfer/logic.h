#pragma once

// Propositional building blocks: vocabularies, states, literals and the
// literal-set normal forms (terms, clauses, DNF, CNF), plus the Hamming
// geometry and monotone theory that the inference engines are built on.

#include <bit>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace fenceinfer {

using Bits = std::uint64_t;

constexpr unsigned max_vars = 64;

inline constexpr Bits low_mask(unsigned n)
{
  return n >= 64 ? ~Bits{0} : ((Bits{1} << n) - 1);
}

class Vocabulary
{
 public:
  explicit Vocabulary(std::vector<std::string> names);

  unsigned size() const { return static_cast<unsigned>(names_.size()); }
  const std::string & name(unsigned i) const { return names_.at(i); }
  const std::vector<std::string> & names() const { return names_; }
  std::optional<unsigned> index_of(const std::string & name) const;
  bool contains(const std::string & name) const { return index_of(name).has_value(); }

  bool operator==(const Vocabulary & other) const { return names_ == other.names_; }

  // Vocabulary x1..xn
  static Vocabulary numbered(unsigned n, const std::string & prefix = "x");

 private:
  std::vector<std::string> names_;
  std::unordered_map<std::string, unsigned> index_;
};

using VocabularyPtr = std::shared_ptr<const Vocabulary>;

// A total valuation. Bit i holds the value of variable i.
class State
{
 public:
  State() = default;
  State(unsigned n, Bits bits) : bits_(bits & low_mask(n)), n_(n) {}

  static State all_false(unsigned n) { return State(n, 0); }
  static State all_true(unsigned n) { return State(n, low_mask(n)); }
  // "1010" -> x1=1, x2=0, ...
  static State parse(const std::string & text);

  unsigned size() const { return n_; }
  Bits bits() const { return bits_; }
  bool operator[](unsigned i) const { return (bits_ >> i) & 1U; }
  State with(unsigned i, bool value) const;
  State flipped(unsigned i) const { return State(n_, bits_ ^ (Bits{1} << i)); }
  unsigned distance(const State & other) const
  {
    return static_cast<unsigned>(std::popcount(bits_ ^ other.bits_));
  }
  std::string to_string() const;

  bool operator==(const State &) const = default;
  auto operator<=>(const State & other) const { return bits_ <=> other.bits_; }

 private:
  Bits bits_ = 0;
  unsigned n_ = 0;
};

struct Literal
{
  unsigned var = 0;
  bool positive = true;

  bool holds(const State & s) const { return s[var] == positive; }
  Literal negated() const { return {var, !positive}; }
  bool operator==(const Literal &) const = default;
};

// Conjunction (Term) or disjunction (Clause) of literals, stored as a pair
// of masks over the variable indices. Literal order is ascending index.
// A variable in both masks makes the set contradictory; such sets are
// representable but rejected where a candidate invariant is expected.
class LiteralSet
{
 public:
  LiteralSet() = default;
  LiteralSet(Bits positive, Bits negative) : pos_(positive), neg_(negative) {}

  Bits positive_mask() const { return pos_; }
  Bits negative_mask() const { return neg_; }
  Bits support() const { return pos_ | neg_; }
  std::size_t size() const
  {
    return static_cast<std::size_t>(std::popcount(pos_) + std::popcount(neg_));
  }
  bool empty() const { return (pos_ | neg_) == 0; }
  bool is_contradictory() const { return (pos_ & neg_) != 0; }
  bool contains(const Literal & l) const
  {
    return ((l.positive ? pos_ : neg_) >> l.var) & 1U;
  }
  std::vector<Literal> literals() const;

  bool operator==(const LiteralSet &) const = default;

 protected:
  void add(const Literal & l);
  void remove(const Literal & l);

  Bits pos_ = 0;
  Bits neg_ = 0;
};

class Term : public LiteralSet
{
 public:
  using LiteralSet::LiteralSet;
  static Term of(const std::vector<Literal> & lits);
  // Rejects contradictory literal sets.
  static Term candidate(const std::vector<Literal> & lits);

  bool eval(const State & s) const
  {
    return (s.bits() & pos_) == pos_ && (s.bits() & neg_) == 0;
  }
  Term with(const Literal & l) const;
  Term without(const Literal & l) const;
  std::string to_string(const Vocabulary & v) const;
  bool operator==(const Term &) const = default;
};

class Clause : public LiteralSet
{
 public:
  using LiteralSet::LiteralSet;
  static Clause of(const std::vector<Literal> & lits);
  static Clause candidate(const std::vector<Literal> & lits);

  bool eval(const State & s) const
  {
    return (s.bits() & pos_) != 0 || (~s.bits() & neg_) != 0;
  }
  Clause with(const Literal & l) const;
  Clause without(const Literal & l) const;
  std::string to_string(const Vocabulary & v) const;
  bool operator==(const Clause &) const = default;
};

// not(t) as a clause and vice versa.
Clause negate(const Term & t);
Term negate(const Clause & c);

// Empty DNF denotes false.
struct DnfFormula
{
  std::vector<Term> terms;

  bool eval(const State & s) const;
  std::string to_string(const Vocabulary & v) const;
  bool operator==(const DnfFormula &) const = default;
};

// Empty CNF denotes true.
struct CnfFormula
{
  std::vector<Clause> clauses;

  bool eval(const State & s) const;
  std::string to_string(const Vocabulary & v) const;
  bool operator==(const CnfFormula &) const = default;
};

CnfFormula negate(const DnfFormula & f);
DnfFormula negate(const CnfFormula & f);

// The conjunction of all literals satisfied by s.
Term cube(const State & s);

// The n states at Hamming distance one, ascending by flipped variable.
std::vector<State> hamming_neighbors(const State & s);

// A translation is a valuation; as an isometry it maps x to x xor a.
struct Translation
{
  State a;

  unsigned size() const { return a.size(); }
  bool operator==(const Translation &) const = default;
};

// v <=_a x: x disagrees with a wherever v does.
inline bool leq_translation(const State & v, const State & x, const Translation & t)
{
  const Bits a = t.a.bits();
  return ((v.bits() ^ a) & ~(x.bits() ^ a)) == 0;
}

// Conjunction of the a-monotone literals that hold in v.
Term monotone_cube(const State & v, const Translation & t);

// Least a-monotone overapproximation of a term: keep the literals a falsifies.
Term monotonize_term(const Term & term, const Translation & t);
DnfFormula monotonize_dnf(const DnfFormula & f, const Translation & t);

}  // namespace fenceinfer
