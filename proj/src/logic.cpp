#include "fenceinfer/logic.h"

#include "fenceinfer/error.h"

namespace fenceinfer {

Vocabulary::Vocabulary(std::vector<std::string> names) : names_(std::move(names))
{
  if (names_.empty()) {
    throw Error("vocabulary must contain at least one variable");
  }
  if (names_.size() > max_vars) {
    throw Error("vocabulary exceeds " + std::to_string(max_vars) + " variables");
  }
  for (unsigned i = 0; i < names_.size(); ++i) {
    const std::string & nm = names_[i];
    if (nm.empty() || nm.back() == '\'') {
      throw Error("invalid variable name '" + nm + "'");
    }
    if (!index_.emplace(nm, i).second) {
      throw Error("duplicate variable name '" + nm + "'");
    }
  }
}

std::optional<unsigned> Vocabulary::index_of(const std::string & name) const
{
  auto it = index_.find(name);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary Vocabulary::numbered(unsigned n, const std::string & prefix)
{
  std::vector<std::string> names;
  names.reserve(n);
  for (unsigned i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
  return Vocabulary(std::move(names));
}

State State::parse(const std::string & text)
{
  if (text.empty() || text.size() > max_vars) {
    throw Error("invalid state string '" + text + "'");
  }
  Bits bits = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] == '1') {
      bits |= Bits{1} << i;
    } else if (text[i] != '0') {
      throw Error("invalid state string '" + text + "'");
    }
  }
  return State(static_cast<unsigned>(text.size()), bits);
}

State State::with(unsigned i, bool value) const
{
  const Bits bit = Bits{1} << i;
  return State(n_, value ? (bits_ | bit) : (bits_ & ~bit));
}

std::string State::to_string() const
{
  std::string out(n_, '0');
  for (unsigned i = 0; i < n_; ++i) {
    if ((*this)[i]) out[i] = '1';
  }
  return out;
}

std::vector<Literal> LiteralSet::literals() const
{
  std::vector<Literal> out;
  Bits all = pos_ | neg_;
  while (all) {
    const unsigned i = static_cast<unsigned>(std::countr_zero(all));
    all &= all - 1;
    if ((pos_ >> i) & 1U) out.push_back({i, true});
    if ((neg_ >> i) & 1U) out.push_back({i, false});
  }
  return out;
}

void LiteralSet::add(const Literal & l)
{
  (l.positive ? pos_ : neg_) |= Bits{1} << l.var;
}

void LiteralSet::remove(const Literal & l)
{
  (l.positive ? pos_ : neg_) &= ~(Bits{1} << l.var);
}

namespace {

template <class T>
T build(const std::vector<Literal> & lits)
{
  Bits pos = 0, neg = 0;
  for (const auto & l : lits) {
    if (l.var >= max_vars) throw Error("literal variable index out of range");
    (l.positive ? pos : neg) |= Bits{1} << l.var;
  }
  return T(pos, neg);
}

std::string join_literals(const LiteralSet & s, const Vocabulary & v, const char * op,
                          const char * empty)
{
  if (s.empty()) return empty;
  std::string out;
  for (const auto & l : s.literals()) {
    if (!out.empty()) out += op;
    if (!l.positive) out += "!";
    out += v.name(l.var);
  }
  return out;
}

}  // namespace

Term Term::of(const std::vector<Literal> & lits) { return build<Term>(lits); }

Term Term::candidate(const std::vector<Literal> & lits)
{
  Term t = of(lits);
  if (t.is_contradictory()) throw Error("contradictory term is not a valid candidate");
  return t;
}

Term Term::with(const Literal & l) const
{
  Term t = *this;
  t.add(l);
  return t;
}

Term Term::without(const Literal & l) const
{
  Term t = *this;
  t.remove(l);
  return t;
}

std::string Term::to_string(const Vocabulary & v) const
{
  return join_literals(*this, v, " & ", "true");
}

Clause Clause::of(const std::vector<Literal> & lits) { return build<Clause>(lits); }

Clause Clause::candidate(const std::vector<Literal> & lits)
{
  Clause c = of(lits);
  if (c.is_contradictory()) throw Error("tautological clause is not a valid candidate");
  return c;
}

Clause Clause::with(const Literal & l) const
{
  Clause c = *this;
  c.add(l);
  return c;
}

Clause Clause::without(const Literal & l) const
{
  Clause c = *this;
  c.remove(l);
  return c;
}

std::string Clause::to_string(const Vocabulary & v) const
{
  return join_literals(*this, v, " | ", "false");
}

Clause negate(const Term & t) { return Clause(t.negative_mask(), t.positive_mask()); }
Term negate(const Clause & c) { return Term(c.negative_mask(), c.positive_mask()); }

bool DnfFormula::eval(const State & s) const
{
  for (const auto & t : terms) {
    if (t.eval(s)) return true;
  }
  return false;
}

std::string DnfFormula::to_string(const Vocabulary & v) const
{
  if (terms.empty()) return "false";
  std::string out;
  for (const auto & t : terms) {
    if (!out.empty()) out += " | ";
    out += "(" + t.to_string(v) + ")";
  }
  return out;
}

bool CnfFormula::eval(const State & s) const
{
  for (const auto & c : clauses) {
    if (!c.eval(s)) return false;
  }
  return true;
}

std::string CnfFormula::to_string(const Vocabulary & v) const
{
  if (clauses.empty()) return "true";
  std::string out;
  for (const auto & c : clauses) {
    if (!out.empty()) out += " & ";
    out += "(" + c.to_string(v) + ")";
  }
  return out;
}

CnfFormula negate(const DnfFormula & f)
{
  CnfFormula out;
  out.clauses.reserve(f.terms.size());
  for (const auto & t : f.terms) out.clauses.push_back(negate(t));
  return out;
}

DnfFormula negate(const CnfFormula & f)
{
  DnfFormula out;
  out.terms.reserve(f.clauses.size());
  for (const auto & c : f.clauses) out.terms.push_back(negate(c));
  return out;
}

Term cube(const State & s)
{
  const Bits mask = low_mask(s.size());
  return Term(s.bits(), ~s.bits() & mask);
}

std::vector<State> hamming_neighbors(const State & s)
{
  std::vector<State> out;
  out.reserve(s.size());
  for (unsigned i = 0; i < s.size(); ++i) out.push_back(s.flipped(i));
  return out;
}

Term monotone_cube(const State & v, const Translation & t)
{
  const Bits disagree = (v.bits() ^ t.a.bits()) & low_mask(v.size());
  return Term(v.bits() & disagree, ~v.bits() & disagree);
}

Term monotonize_term(const Term & term, const Translation & t)
{
  const Bits a = t.a.bits();
  return Term(term.positive_mask() & ~a, term.negative_mask() & a);
}

DnfFormula monotonize_dnf(const DnfFormula & f, const Translation & t)
{
  DnfFormula out;
  out.terms.reserve(f.terms.size());
  for (const auto & term : f.terms) out.terms.push_back(monotonize_term(term, t));
  return out;
}

}  // namespace fenceinfer
