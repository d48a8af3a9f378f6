#pragma once

#include <cstddef>
#include <iosfwd>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "wavesym/expr.hpp"

namespace wavesym {

std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParseOptions {
  // Identifiers read as constant parameters.
  std::set<std::string> parameters{"K", "c", "L", "e1", "e2", "c1", "c2", "c3", "c4", "c5",
                                   "m", "p", "q", "r", "s", "eps", "c_sep", "a", "b"};
  // Unknown bare identifiers become parameters instead of errors.
  bool auto_parameters = false;
};

// Grammar, loosely:
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := primary ('^' primary)?
//   primary:= number | '(' expr ')' | x | y | t | u | u_xyt.. | exp(..) | ln(..)
//           | name(args) | name'..(arg) | D[i,j,..](name)(args) | parameter
// Non-numeric exponents become exp(b*ln(a)).
Expr parse(std::string_view text, const ParseOptions& opts = {});

}  // namespace wavesym
