#include "fenceinfer/formula.h"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

#include "fenceinfer/error.h"

namespace fenceinfer {

namespace detail {

struct Node
{
  Op op = Op::Const;
  bool value = false;
  unsigned index = 0;
  bool primed = false;
  std::vector<Formula> children;
  Bits support = 0;
  Bits primed_support = 0;
};

}  // namespace detail

using detail::Node;

namespace {

const std::shared_ptr<const Node> & const_node(bool v)
{
  static const std::shared_ptr<const Node> t = [] {
    auto n = std::make_shared<Node>();
    n->value = true;
    return n;
  }();
  static const std::shared_ptr<const Node> f = std::make_shared<Node>();
  return v ? t : f;
}

}  // namespace

Formula::Formula() : node_(const_node(false)) {}

Formula Formula::constant(bool value) { return Formula(const_node(value)); }

Formula Formula::var(unsigned index, bool primed)
{
  if (index >= max_vars) throw Error("variable index out of range");
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = index;
  n->primed = primed;
  (primed ? n->primed_support : n->support) = Bits{1} << index;
  return Formula(std::move(n));
}

Formula Formula::negation(const Formula & f)
{
  auto n = std::make_shared<Node>();
  n->op = Op::Not;
  n->support = f.support();
  n->primed_support = f.primed_support();
  n->children.push_back(f);
  return Formula(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> children)
{
  if (children.empty()) throw Error("and requires at least one operand");
  auto n = std::make_shared<Node>();
  n->op = Op::And;
  for (const auto & c : children) {
    n->support |= c.support();
    n->primed_support |= c.primed_support();
  }
  n->children = std::move(children);
  return Formula(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> children)
{
  if (children.empty()) throw Error("or requires at least one operand");
  auto n = std::make_shared<Node>();
  n->op = Op::Or;
  for (const auto & c : children) {
    n->support |= c.support();
    n->primed_support |= c.primed_support();
  }
  n->children = std::move(children);
  return Formula(std::move(n));
}

Op Formula::op() const { return node_->op; }
bool Formula::value() const { return node_->value; }
unsigned Formula::index() const { return node_->index; }
bool Formula::primed() const { return node_->primed; }
const std::vector<Formula> & Formula::children() const { return node_->children; }
Bits Formula::support() const { return node_->support; }
Bits Formula::primed_support() const { return node_->primed_support; }

bool Formula::eval(const State & pre, const State * post) const
{
  const Node & n = *node_;
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      if (n.primed) {
        if (!post) throw Error("primed variable evaluated without a post-state");
        return (*post)[n.index];
      }
      return pre[n.index];
    case Op::Not:
      return !n.children[0].eval(pre, post);
    case Op::And:
      for (const auto & c : n.children) {
        if (!c.eval(pre, post)) return false;
      }
      return true;
    case Op::Or:
      for (const auto & c : n.children) {
        if (c.eval(pre, post)) return true;
      }
      return false;
  }
  return false;
}

std::size_t Formula::node_count() const
{
  std::unordered_set<const void *> seen;
  std::vector<Formula> stack{*this};
  while (!stack.empty()) {
    Formula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g.id()).second) continue;
    for (const auto & c : g.children()) stack.push_back(c);
  }
  return seen.size();
}

bool Formula::operator==(const Formula & other) const
{
  if (node_ == other.node_) return true;
  const Node & a = *node_;
  const Node & b = *other.node_;
  if (a.op != b.op) return false;
  switch (a.op) {
    case Op::Const:
      return a.value == b.value;
    case Op::Var:
      return a.index == b.index && a.primed == b.primed;
    default:
      if (a.support != b.support || a.primed_support != b.primed_support) return false;
      if (a.children.size() != b.children.size()) return false;
      for (std::size_t i = 0; i < a.children.size(); ++i) {
        if (a.children[i] != b.children[i]) return false;
      }
      return true;
  }
}

Formula f_true() { return Formula::constant(true); }
Formula f_false() { return Formula::constant(false); }
Formula f_not(const Formula & f) { return Formula::negation(f); }
Formula f_and(const Formula & a, const Formula & b) { return Formula::conjunction({a, b}); }
Formula f_or(const Formula & a, const Formula & b) { return Formula::disjunction({a, b}); }

Formula f_and(std::vector<Formula> fs)
{
  if (fs.empty()) return f_true();
  if (fs.size() == 1) return fs[0];
  return Formula::conjunction(std::move(fs));
}

Formula f_or(std::vector<Formula> fs)
{
  if (fs.empty()) return f_false();
  if (fs.size() == 1) return fs[0];
  return Formula::disjunction(std::move(fs));
}

Formula f_implies(const Formula & a, const Formula & b) { return f_or(f_not(a), b); }

Formula f_iff(const Formula & a, const Formula & b)
{
  return f_or(f_and(a, b), f_and(f_not(a), f_not(b)));
}

Formula f_xor(const Formula & a, const Formula & b)
{
  return f_or(f_and(a, f_not(b)), f_and(f_not(a), b));
}

Formula to_formula(const Literal & l, bool primed)
{
  Formula v = Formula::var(l.var, primed);
  return l.positive ? v : f_not(v);
}

Formula to_formula(const Term & t, bool primed)
{
  std::vector<Formula> lits;
  for (const auto & l : t.literals()) lits.push_back(to_formula(l, primed));
  return f_and(std::move(lits));
}

Formula to_formula(const Clause & c, bool primed)
{
  std::vector<Formula> lits;
  for (const auto & l : c.literals()) lits.push_back(to_formula(l, primed));
  return f_or(std::move(lits));
}

Formula to_formula(const DnfFormula & f)
{
  std::vector<Formula> terms;
  for (const auto & t : f.terms) terms.push_back(to_formula(t));
  return f_or(std::move(terms));
}

Formula to_formula(const CnfFormula & f)
{
  std::vector<Formula> clauses;
  for (const auto & c : f.clauses) clauses.push_back(to_formula(c));
  return f_and(std::move(clauses));
}

Formula state_formula(const State & s, bool primed) { return to_formula(cube(s), primed); }

Formula map_vars(const Formula & f, const std::function<Formula(unsigned, bool)> & leaf)
{
  std::unordered_map<const void *, Formula> memo;
  std::function<Formula(const Formula &)> go = [&](const Formula & g) -> Formula {
    auto it = memo.find(g.id());
    if (it != memo.end()) return it->second;
    Formula out;
    switch (g.op()) {
      case Op::Const:
        out = g;
        break;
      case Op::Var:
        out = leaf(g.index(), g.primed());
        break;
      case Op::Not:
        out = f_not(go(g.children()[0]));
        break;
      case Op::And:
      case Op::Or: {
        std::vector<Formula> kids;
        kids.reserve(g.children().size());
        for (const auto & c : g.children()) kids.push_back(go(c));
        out = g.op() == Op::And ? Formula::conjunction(std::move(kids))
                                : Formula::disjunction(std::move(kids));
        break;
      }
    }
    memo.emplace(g.id(), out);
    return out;
  };
  return go(f);
}

Formula prime(const Formula & f)
{
  if (f.has_primed()) throw Error("prime() applied to a formula with primed variables");
  return map_vars(f, [](unsigned i, bool) { return Formula::var(i, true); });
}

Formula swap_primes(const Formula & f)
{
  return map_vars(f, [](unsigned i, bool p) { return Formula::var(i, !p); });
}

namespace {

std::optional<Literal> as_literal(const Formula & f)
{
  if (f.op() == Op::Var && !f.primed()) return Literal{f.index(), true};
  if (f.op() == Op::Not) {
    const Formula & c = f.children()[0];
    if (c.op() == Op::Var && !c.primed()) return Literal{c.index(), false};
  }
  return std::nullopt;
}

}  // namespace

std::optional<Term> as_term(const Formula & f)
{
  if (f.is_true()) return Term();
  if (auto l = as_literal(f)) return Term::of({*l});
  if (f.op() != Op::And) return std::nullopt;
  std::vector<Literal> lits;
  for (const auto & c : f.children()) {
    auto l = as_literal(c);
    if (!l) return std::nullopt;
    lits.push_back(*l);
  }
  return Term::of(lits);
}

std::optional<DnfFormula> as_dnf(const Formula & f)
{
  if (f.is_false()) return DnfFormula{};
  if (auto t = as_term(f)) return DnfFormula{{*t}};
  if (f.op() != Op::Or) return std::nullopt;
  DnfFormula out;
  for (const auto & c : f.children()) {
    auto t = as_term(c);
    if (!t) return std::nullopt;
    out.terms.push_back(*t);
  }
  return out;
}

std::optional<Clause> as_clause(const Formula & f)
{
  if (f.is_false()) return Clause();
  if (auto l = as_literal(f)) return Clause::of({*l});
  if (f.op() != Op::Or) return std::nullopt;
  std::vector<Literal> lits;
  for (const auto & c : f.children()) {
    auto l = as_literal(c);
    if (!l) return std::nullopt;
    lits.push_back(*l);
  }
  return Clause::of(lits);
}

Formula formula_from_sexpr(const SExpr & e, const Vocabulary & vocab, bool allow_primed)
{
  if (e.is_atom) {
    if (e.atom == "true") return f_true();
    if (e.atom == "false") return f_false();
    std::string name = e.atom;
    bool primed = false;
    if (!name.empty() && name.back() == '\'') {
      primed = true;
      name.pop_back();
    }
    auto idx = vocab.index_of(name);
    if (!idx) throw ParseError("unknown variable '" + name + "'", e.line, e.column);
    if (primed && !allow_primed) {
      throw ParseError("primed variable '" + e.atom + "' not allowed here", e.line, e.column);
    }
    return Formula::var(*idx, primed);
  }
  if (e.items.empty() || !e.items[0].is_atom) {
    throw ParseError("expected an operator", e.line, e.column);
  }
  const std::string & op = e.items[0].atom;
  std::vector<Formula> args;
  for (std::size_t i = 1; i < e.items.size(); ++i) {
    args.push_back(formula_from_sexpr(e.items[i], vocab, allow_primed));
  }
  auto arity = [&](std::size_t want) {
    if (args.size() != want) {
      throw ParseError("'" + op + "' expects " + std::to_string(want) + " operand(s)", e.line,
                       e.column);
    }
  };
  if (op == "and" || op == "or") {
    if (args.empty()) throw ParseError("'" + op + "' needs an operand", e.line, e.column);
    return op == "and" ? Formula::conjunction(std::move(args))
                       : Formula::disjunction(std::move(args));
  }
  if (op == "not") {
    arity(1);
    return f_not(args[0]);
  }
  if (op == "=>") {
    arity(2);
    return f_implies(args[0], args[1]);
  }
  if (op == "iff" || op == "=") {
    arity(2);
    return f_iff(args[0], args[1]);
  }
  if (op == "xor") {
    arity(2);
    return f_xor(args[0], args[1]);
  }
  throw ParseError("unknown operator '" + op + "'", e.items[0].line, e.items[0].column);
}

Formula parse_formula(const std::string & text, const Vocabulary & vocab, bool allow_primed)
{
  auto exprs = read_sexprs(text);
  if (exprs.size() != 1) {
    std::size_t line = exprs.size() > 1 ? exprs[1].line : 1;
    std::size_t col = exprs.size() > 1 ? exprs[1].column : 1;
    throw ParseError("expected exactly one formula", line, col);
  }
  return formula_from_sexpr(exprs[0], vocab, allow_primed);
}

namespace {

void print(const Formula & f, const Vocabulary & v, std::string & out)
{
  switch (f.op()) {
    case Op::Const:
      out += f.value() ? "true" : "false";
      return;
    case Op::Var:
      out += v.name(f.index());
      if (f.primed()) out += '\'';
      return;
    case Op::Not:
      out += "(not ";
      print(f.children()[0], v, out);
      out += ')';
      return;
    case Op::And:
    case Op::Or:
      out += f.op() == Op::And ? "(and" : "(or";
      for (const auto & c : f.children()) {
        out += ' ';
        print(c, v, out);
      }
      out += ')';
      return;
  }
}

// Bits of variable i inside a 64-state word, for i < 6.
constexpr Bits var_pattern[6] = {
    0xAAAAAAAAAAAAAAAAULL, 0xCCCCCCCCCCCCCCCCULL, 0xF0F0F0F0F0F0F0F0ULL,
    0xFF00FF00FF00FF00ULL, 0xFFFF0000FFFF0000ULL, 0xFFFFFFFF00000000ULL,
};

std::vector<Bits> var_table(unsigned i, unsigned n)
{
  const std::size_t words = table_words(n);
  std::vector<Bits> t(words);
  for (std::size_t w = 0; w < words; ++w) {
    if (i < 6) {
      t[w] = var_pattern[i];
    } else {
      t[w] = ((w >> (i - 6)) & 1U) ? ~Bits{0} : 0;
    }
  }
  t[0] &= table_tail_mask(n);
  if (n < 6) t.resize(1);
  return t;
}

}  // namespace

std::string to_sexpr(const Formula & f, const Vocabulary & vocab)
{
  std::string out;
  print(f, vocab, out);
  return out;
}

std::vector<Bits> truth_table(const Formula & f, unsigned n)
{
  if (n > 26) throw CapExceeded("truth table requested for more than 26 variables");
  if (f.has_primed()) throw Error("truth_table() requires an unprimed formula");
  if (f.support() & ~low_mask(n)) throw Error("formula mentions variables beyond n");
  const std::size_t words = table_words(n);
  const Bits tail = table_tail_mask(n);
  std::unordered_map<const void *, std::vector<Bits>> memo;
  std::function<const std::vector<Bits> &(const Formula &)> go =
      [&](const Formula & g) -> const std::vector<Bits> & {
    auto it = memo.find(g.id());
    if (it != memo.end()) return it->second;
    std::vector<Bits> t;
    switch (g.op()) {
      case Op::Const:
        t.assign(words, g.value() ? ~Bits{0} : 0);
        t[0] &= tail;
        break;
      case Op::Var:
        t = var_table(g.index(), n);
        break;
      case Op::Not:
        t = go(g.children()[0]);
        for (auto & w : t) w = ~w;
        t[0] &= tail;
        break;
      case Op::And:
        t = go(g.children()[0]);
        for (std::size_t c = 1; c < g.children().size(); ++c) {
          const auto & u = go(g.children()[c]);
          for (std::size_t w = 0; w < words; ++w) t[w] &= u[w];
        }
        break;
      case Op::Or:
        t = go(g.children()[0]);
        for (std::size_t c = 1; c < g.children().size(); ++c) {
          const auto & u = go(g.children()[c]);
          for (std::size_t w = 0; w < words; ++w) t[w] |= u[w];
        }
        break;
    }
    return memo.emplace(g.id(), std::move(t)).first->second;
  };
  return go(f);
}

struct PostImageEvaluator::Impl
{
  struct Slot
  {
    Formula f;
    std::vector<std::size_t> kids;
    bool is_static = false;  // no unprimed variables: table fixed
    bool pure_pre = false;   // no primed variables: constant per pre-state
    bool value = false;      // per-call, for pure_pre slots
    std::vector<Bits> table;
  };

  unsigned n;
  std::size_t words;
  Bits tail;
  std::vector<Slot> slots;  // topological order, root last

  std::size_t build(const Formula & g, std::unordered_map<const void *, std::size_t> & index)
  {
    auto it = index.find(g.id());
    if (it != index.end()) return it->second;
    std::vector<std::size_t> kids;
    for (const auto & c : g.children()) kids.push_back(build(c, index));
    Slot s;
    s.f = g;
    s.kids = std::move(kids);
    s.is_static = g.support() == 0;
    s.pure_pre = g.primed_support() == 0;
    slots.push_back(std::move(s));
    const std::size_t id = slots.size() - 1;
    index.emplace(g.id(), id);
    return id;
  }

  // Children are already evaluated; s has primed variables.
  void compute_table(Slot & s)
  {
    const Formula & g = s.f;
    switch (g.op()) {
      case Op::Const:
        s.table.assign(words, g.value() ? ~Bits{0} : 0);
        s.table[0] &= tail;
        return;
      case Op::Var:
        s.table = var_table(g.index(), n);
        return;
      case Op::Not: {
        const Slot & c = slots[s.kids[0]];
        s.table.resize(words);
        for (std::size_t w = 0; w < words; ++w) s.table[w] = ~c.table[w];
        s.table[0] &= tail;
        return;
      }
      case Op::And:
      case Op::Or: {
        const bool is_and = g.op() == Op::And;
        // Constant children first: they may decide the node.
        bool decided = false;
        for (std::size_t k : s.kids) {
          const Slot & c = slots[k];
          if (c.pure_pre && c.value != is_and) {
            decided = true;
            break;
          }
        }
        s.table.assign(words, is_and ? ~Bits{0} : 0);
        if (decided) {
          std::fill(s.table.begin(), s.table.end(), is_and ? 0 : ~Bits{0});
        } else {
          for (std::size_t k : s.kids) {
            const Slot & c = slots[k];
            if (c.pure_pre) continue;
            for (std::size_t w = 0; w < words; ++w) {
              if (is_and) {
                s.table[w] &= c.table[w];
              } else {
                s.table[w] |= c.table[w];
              }
            }
          }
        }
        s.table[0] &= tail;
        return;
      }
    }
  }

  void compute_value(Slot & s, const State & pre)
  {
    const Formula & g = s.f;
    switch (g.op()) {
      case Op::Const:
        s.value = g.value();
        return;
      case Op::Var:
        s.value = pre[g.index()];
        return;
      case Op::Not:
        s.value = !slots[s.kids[0]].value;
        return;
      case Op::And:
        s.value = true;
        for (std::size_t k : s.kids) s.value = s.value && slots[k].value;
        return;
      case Op::Or:
        s.value = false;
        for (std::size_t k : s.kids) s.value = s.value || slots[k].value;
        return;
    }
  }
};

PostImageEvaluator::PostImageEvaluator(const Formula & f, unsigned n) : impl_(new Impl)
{
  if (n > 26) throw CapExceeded("post-image table requested for more than 26 variables");
  if ((f.support() | f.primed_support()) & ~low_mask(n)) {
    throw Error("formula mentions variables beyond n");
  }
  impl_->n = n;
  impl_->words = table_words(n);
  impl_->tail = table_tail_mask(n);
  std::unordered_map<const void *, std::size_t> index;
  impl_->build(f, index);
  const State zero = State::all_false(n);
  for (auto & s : impl_->slots) {
    if (!s.is_static) continue;
    // Constants are both static and pure_pre; their value never changes.
    if (s.pure_pre) {
      impl_->compute_value(s, zero);
    } else {
      impl_->compute_table(s);
    }
  }
}

PostImageEvaluator::~PostImageEvaluator() = default;

std::vector<Bits> PostImageEvaluator::successors(const State & pre)
{
  auto & slots = impl_->slots;
  for (auto & s : slots) {
    if (s.is_static) continue;
    if (s.pure_pre) {
      impl_->compute_value(s, pre);
    } else {
      impl_->compute_table(s);
    }
  }
  const auto & root = slots.back();
  if (root.pure_pre) {
    std::vector<Bits> t(impl_->words, root.value ? ~Bits{0} : 0);
    t[0] &= impl_->tail;
    return t;
  }
  return root.table;
}

}  // namespace fenceinfer
