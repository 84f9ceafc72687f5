#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fenceinfer/logic.h"
#include "fenceinfer/sexpr.h"

namespace fenceinfer {

enum class Op
{
  Const,
  Var,
  Not,
  And,
  Or
};

class Formula;

namespace detail {
struct Node;
}

// Immutable propositional formula over V and its primed copy V'.
// Nodes are shared; copying a Formula is cheap.
class Formula
{
 public:
  Formula();  // false

  static Formula constant(bool value);
  static Formula var(unsigned index, bool primed = false);
  static Formula negation(const Formula & f);
  // Arity >= 1 enforced; single children are kept as a unary node.
  static Formula conjunction(std::vector<Formula> children);
  static Formula disjunction(std::vector<Formula> children);

  Op op() const;
  bool value() const;      // Const only
  unsigned index() const;  // Var only
  bool primed() const;     // Var only
  const std::vector<Formula> & children() const;

  bool is_true() const { return op() == Op::Const && value(); }
  bool is_false() const { return op() == Op::Const && !value(); }

  // Variables occurring unprimed / primed.
  Bits support() const;
  Bits primed_support() const;
  bool has_primed() const { return primed_support() != 0; }

  // Throws Error if a primed variable is reached and post is null.
  bool eval(const State & pre, const State * post = nullptr) const;
  bool eval(const State & pre, const State & post) const { return eval(pre, &post); }

  const void * id() const { return node_.get(); }
  std::size_t node_count() const;  // DAG nodes

  bool operator==(const Formula & other) const;
  bool operator!=(const Formula & other) const { return !(*this == other); }

 private:
  explicit Formula(std::shared_ptr<const detail::Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const detail::Node> node_;
};

Formula f_true();
Formula f_false();
Formula f_not(const Formula & f);
Formula f_and(const Formula & a, const Formula & b);
Formula f_or(const Formula & a, const Formula & b);
Formula f_and(std::vector<Formula> fs);  // empty -> true
Formula f_or(std::vector<Formula> fs);   // empty -> false
Formula f_implies(const Formula & a, const Formula & b);
Formula f_iff(const Formula & a, const Formula & b);
Formula f_xor(const Formula & a, const Formula & b);

Formula to_formula(const Literal & l, bool primed = false);
Formula to_formula(const Term & t, bool primed = false);
Formula to_formula(const Clause & c, bool primed = false);
Formula to_formula(const DnfFormula & f);
Formula to_formula(const CnfFormula & f);
Formula state_formula(const State & s, bool primed = false);

// Rebuild f with every variable occurrence replaced by leaf(index, primed).
Formula map_vars(const Formula & f, const std::function<Formula(unsigned, bool)> & leaf);
// V -> V' on an unprimed formula.
Formula prime(const Formula & f);
// Exchange V and V'.
Formula swap_primes(const Formula & f);

// If f is syntactically a term (a literal or an and of literals), return it.
std::optional<Term> as_term(const Formula & f);
// Same for a disjunction of terms (a single term counts).
std::optional<DnfFormula> as_dnf(const Formula & f);
std::optional<Clause> as_clause(const Formula & f);

// S-expression syntax. Primes are allowed only if allow_primed.
Formula parse_formula(const std::string & text, const Vocabulary & vocab, bool allow_primed);
Formula formula_from_sexpr(const SExpr & e, const Vocabulary & vocab, bool allow_primed);
std::string to_sexpr(const Formula & f, const Vocabulary & vocab);

// Truth table of an unprimed formula: bit (s mod 64) of word (s / 64) is
// f evaluated at the state with code s. Requires n <= 26.
std::vector<Bits> truth_table(const Formula & f, unsigned n);

// Truth table over post-states of a transition formula with the pre-state fixed.
// Subformulas without unprimed variables are evaluated once per evaluator.
class PostImageEvaluator
{
 public:
  PostImageEvaluator(const Formula & f, unsigned n);
  ~PostImageEvaluator();
  PostImageEvaluator(const PostImageEvaluator &) = delete;
  PostImageEvaluator & operator=(const PostImageEvaluator &) = delete;

  std::vector<Bits> successors(const State & pre);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Number of 64-bit words needed for a table over n variables.
inline std::size_t table_words(unsigned n) { return n >= 6 ? (std::size_t{1} << (n - 6)) : 1; }
// Mask of the valid bits in the (single) word when n < 6.
inline Bits table_tail_mask(unsigned n) { return n >= 6 ? ~Bits{0} : low_mask(1U << n); }

}  // namespace fenceinfer
