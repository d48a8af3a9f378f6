#pragma once

#include <random>

#include "wavesym/expr.hpp"
#include "wavesym/format.hpp"
#include "wavesym/jet.hpp"

namespace wavesym::testing {

constexpr int kInstances = 200;

// Random expressions over x, y, t, u, a few jets and constants.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  Expr expr(int depth, bool jets = true) {
    if (depth == 0 || pick(4) == 0) return leaf(jets);
    switch (pick(jets ? 7 : 6)) {
      case 0:
      case 1:
        return expr(depth - 1, jets) + expr(depth - 1, jets);
      case 2:
      case 3:
        return expr(depth - 1, jets) * expr(depth - 1, jets);
      case 4:
        return pow(expr(depth - 1, jets), Rational(pick(3) + 1));
      case 5:
        return exp(leaf(false) * number(Rational(pick(3) + 1, 2)));
      default:
        return function("g", {expr(depth - 1, false)});
    }
  }

  Expr leaf(bool jets) {
    static const char* kVars[] = {"x", "y", "t", "u", "K", "c"};
    static const MultiIndex kJets[] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 0, 1}, {0, 2, 0}};
    int k = pick(jets ? 9 : 7);
    if (k < 6) return parse(kVars[k]);
    if (k == 6) return number(Rational(pick(9) - 4, pick(3) + 1));
    return jet(kJets[pick(5)]);
  }

  // Something safe to divide by.
  Expr denominator(int depth) {
    for (;;) {
      Expr d = expr(depth, false) + 1;
      if (!is_zero(d)) return d;
    }
  }

  VectorField field() {
    auto c = [&] { return expr(2, false); };
    return {c(), c(), c(), c()};
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

 private:
  std::mt19937_64 rng_;
};

}  // namespace wavesym::testing
