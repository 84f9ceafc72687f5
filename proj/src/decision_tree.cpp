#include "fenceinfer/decision_tree.h"

#include <functional>

#include "fenceinfer/error.h"

namespace fenceinfer {

DecisionTree DecisionTree::leaf(bool value)
{
  DecisionTree t;
  t.nodes_.push_back({-1, value, -1, -1});
  return t;
}

int DecisionTree::append(const DecisionTree & sub)
{
  const int offset = static_cast<int>(nodes_.size());
  for (Node nd : sub.nodes_) {
    if (nd.var >= 0) {
      nd.lo += offset;
      nd.hi += offset;
    }
    nodes_.push_back(nd);
  }
  return offset;
}

DecisionTree DecisionTree::branch(unsigned var, const DecisionTree & lo, const DecisionTree & hi)
{
  for (const auto * sub : {&lo, &hi}) {
    for (const auto & nd : sub->nodes_) {
      if (nd.var == static_cast<int>(var)) {
        throw Error("decision tree tests variable " + std::to_string(var + 1) +
                    " twice on one path");
      }
    }
  }
  DecisionTree t;
  t.nodes_.push_back({static_cast<int>(var), false, -1, -1});
  const int l = t.append(lo);
  const int h = t.append(hi);
  t.nodes_[0].lo = l;
  t.nodes_[0].hi = h;
  return t;
}

DecisionTree DecisionTree::random(unsigned n, unsigned leaves, std::mt19937_64 & rng)
{
  std::function<DecisionTree(unsigned, Bits)> build = [&](unsigned count, Bits used) {
    const Bits free = low_mask(n) & ~used;
    if (count <= 1 || free == 0) {
      return leaf(std::bernoulli_distribution(0.5)(rng));
    }
    std::vector<unsigned> vars;
    for (unsigned i = 0; i < n; ++i) {
      if ((free >> i) & 1U) vars.push_back(i);
    }
    const unsigned v = vars[std::uniform_int_distribution<std::size_t>(0, vars.size() - 1)(rng)];
    const unsigned left = std::uniform_int_distribution<unsigned>(1, count - 1)(rng);
    const Bits next = used | (Bits{1} << v);
    return branch(v, build(left, next), build(count - left, next));
  };
  return build(leaves, 0);
}

bool DecisionTree::eval(const State & s) const
{
  int i = 0;
  while (nodes_[i].var >= 0) i = s[nodes_[i].var] ? nodes_[i].hi : nodes_[i].lo;
  return nodes_[i].value;
}

std::size_t DecisionTree::size() const
{
  std::size_t c = 0;
  for (const auto & nd : nodes_) c += nd.var < 0;
  return c;
}

std::size_t DecisionTree::true_leaves() const
{
  std::size_t c = 0;
  for (const auto & nd : nodes_) c += nd.var < 0 && nd.value;
  return c;
}

std::size_t DecisionTree::false_leaves() const { return size() - true_leaves(); }

namespace {

void paths(const std::vector<DecisionTree::Node> & nodes, int i, Term path, bool want,
           std::vector<Term> & out)
{
  const auto & nd = nodes[i];
  if (nd.var < 0) {
    if (nd.value == want) out.push_back(path);
    return;
  }
  const unsigned v = static_cast<unsigned>(nd.var);
  paths(nodes, nd.lo, path.with({v, false}), want, out);
  paths(nodes, nd.hi, path.with({v, true}), want, out);
}

}  // namespace

DnfFormula DecisionTree::to_dnf() const
{
  DnfFormula f;
  paths(nodes_, 0, Term(), true, f.terms);
  return f;
}

CnfFormula DecisionTree::to_cnf() const
{
  std::vector<Term> falses;
  paths(nodes_, 0, Term(), false, falses);
  CnfFormula f;
  for (const auto & t : falses) f.clauses.push_back(negate(t));
  return f;
}

}  // namespace fenceinfer
