#pragma once

#include <string>
#include <vector>

namespace fenceinfer {

// Minimal S-expression reader. ';' starts a comment running to end of line.
struct SExpr
{
  bool is_atom = false;
  std::string atom;
  std::vector<SExpr> items;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Reads all top-level expressions in text.
std::vector<SExpr> read_sexprs(const std::string & text);

}  // namespace fenceinfer
