#pragma once

#include <random>
#include <vector>

#include "fenceinfer/formula.h"
#include "fenceinfer/logic.h"

namespace fenceinfer {

// Binary decision tree; every root-to-leaf path tests distinct variables.
class DecisionTree
{
 public:
  struct Node
  {
    int var = -1;  // -1 for a leaf
    bool value = false;
    int lo = -1;  // child taken when var is false
    int hi = -1;
  };

  static DecisionTree leaf(bool value);
  static DecisionTree branch(unsigned var, const DecisionTree & lo, const DecisionTree & hi);
  // A tree with exactly `leaves` leaves (fewer if the variables run out).
  static DecisionTree random(unsigned n, unsigned leaves, std::mt19937_64 & rng);

  bool eval(const State & s) const;
  std::size_t size() const;  // number of leaves
  std::size_t true_leaves() const;
  std::size_t false_leaves() const;
  // One term per true leaf / one clause per false leaf.
  DnfFormula to_dnf() const;
  CnfFormula to_cnf() const;

  const std::vector<Node> & nodes() const { return nodes_; }

 private:
  int append(const DecisionTree & sub);
  std::vector<Node> nodes_;  // root at index 0
};

}  // namespace fenceinfer
