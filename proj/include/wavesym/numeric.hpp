#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesym/expr.hpp"

namespace wavesym {

/// Raised for log of a non-positive number, non-real powers, division by
/// zero, or an unbound atom.
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using FunctionImpl = std::function<double(std::span<const double> args, const MultiIndex& index)>;

struct NumericEnv {
  std::map<Expr, double, ExprLess> atoms;  // may hold whole function applications
  std::map<std::string, FunctionImpl> functions;

  NumericEnv& set(const Expr& atom, double v) {
    atoms[atom] = v;
    return *this;
  }
};

double eval_numeric(const Expr& e, const NumericEnv& env);

/// Expression compiled to a closure tree. Slot atoms are read from the input
/// span; everything else comes from the environment captured at compile time.
class CompiledExpr {
 public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, std::vector<Expr> slots, NumericEnv env = {});
  double operator()(std::span<const double> slots) const { return fn_(slots.data()); }
  std::size_t arity() const { return slots_.size(); }

 private:
  std::vector<Expr> slots_;
  std::function<double(const double*)> fn_;
};

struct SampleOptions {
  std::uint64_t seed = 0x5eed0001ULL;
  int points = 50;
  double lo = 0.5;
  double hi = 1.5;
  // Per-atom boxes and fixed values, keyed by the printed atom.
  std::map<std::string, std::pair<double, double>> boxes;
  std::map<std::string, double> fixed;
  double tol = 1e-9;
  int max_attempts = 2000;
};

struct ZeroTest {
  bool zero = false;
  int points = 0;
  double max_relative = 0.0;
};

/// Evaluates `e` at random points, every atom (function applications
/// included) drawn independently. Relative size is measured against the sum of
/// the absolute values of the top-level terms.
ZeroTest numeric_zero(const Expr& e, const SampleOptions& opts = {});
bool equal_numeric(const Expr& a, const Expr& b, const SampleOptions& opts = {});

struct FactorComparison {
  bool equivalent = false;
  Expr factor;  // derived = factor * reference
  bool constant_factor = false;
  ZeroTest test;
};

/// Decides whether derived = lambda * reference, with lambda read off from the
/// coefficients of `lead` (typically the highest derivative atom).
FactorComparison compare_up_to_factor(const Expr& derived, const Expr& reference, const Expr& lead,
                                      const SampleOptions& opts = {});

}  // namespace wavesym
