#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesym/expr.hpp"

namespace wavesym {

/// Partial derivative with respect to an atom: a base variable, parameter, jet
/// coordinate, or a specific function application treated as a symbol. Jet
/// coordinates are independent of the base variables.
Expr diff(const Expr& e, const Expr& var);
Expr diff(const Expr& e, const Expr& var, int times);

struct FunctionRule {
  std::vector<Expr> formals;
  Expr body;
};

/// Simultaneous substitution. Atom keys may be any atom, including a specific
/// function application. Function rules replace every application of the named
/// function, derivatives included.
struct Bindings {
  std::map<Expr, Expr, ExprLess> atoms;
  std::map<std::string, FunctionRule> functions;

  Bindings& set(const Expr& atom, const Expr& value) {
    atoms[atom] = value;
    return *this;
  }
  Bindings& define(const std::string& name, std::vector<Expr> formals, const Expr& body) {
    functions[name] = FunctionRule{std::move(formals), body};
    return *this;
  }
};

Expr substitute(const Expr& e, const Bindings& b);
Expr substitute(const Expr& e, const Expr& atom, const Expr& value);

bool depends_on(const Expr& e, const Expr& atom);

/// Distinct atoms of `e` (functions counted as whole applications; their
/// arguments are searched too).
std::vector<Expr> atoms_of(const Expr& e);

class NotPolynomialError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Coefficients of `e` as a polynomial in `vars` (keys are monomials, 1 for the
/// constant part). Throws NotPolynomialError if a coefficient still depends on
/// one of the variables.
std::map<Expr, Expr, ExprLess> collect(const Expr& e, const std::vector<Expr>& vars);

/// Groups the terms of `e` by their dependence on `vars`. Each key is the
/// product of the factors that depend on a variable, exponentials being split
/// into a dependent and an independent part. Values are the independent
/// cofactors, summed.
std::map<Expr, Expr, ExprLess> separate(const Expr& e, const std::vector<Expr>& vars);

/// Coefficient of `var` in an expression that is affine in it; throws if not.
std::pair<Expr, Expr> affine_split(const Expr& e, const Expr& var);

}  // namespace wavesym
