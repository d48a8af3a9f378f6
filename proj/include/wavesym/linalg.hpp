#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "wavesym/expr.hpp"

namespace wavesym {

using Row = std::vector<Expr>;
using ZeroPredicate = std::function<bool(const Expr&)>;

/// Symbolic zero test backed by a numeric probe over the parameters.
bool probably_zero(const Expr& e);

struct Rref {
  std::vector<Row> rows;  // nonzero rows only, pivot entries equal to 1
  std::vector<std::size_t> pivots;
};

/// Gauss-Jordan elimination over rational functions of the parameters.
/// Pivot choice is deterministic: numeric entries first, then the smallest
/// tree, then the lowest row.
Rref rref(std::vector<Row> rows, std::size_t ncols, const ZeroPredicate& is_zero_fn = probably_zero);
std::size_t rank(const std::vector<Row>& rows, std::size_t ncols);

/// Basis of the right null space, one vector per free column.
std::vector<Row> nullspace(const std::vector<Row>& rows, std::size_t ncols);

/// Solves A z = b, or returns nullopt if inconsistent. Free variables are 0.
std::optional<Row> solve(const std::vector<Row>& a, const Row& b, std::size_t ncols);

}  // namespace wavesym
