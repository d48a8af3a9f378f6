#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "wavesym/jet.hpp"
#include "wavesym/linalg.hpp"

namespace wavesym {

VectorField bracket(const VectorField& v, const VectorField& w);
VectorField normalize(const VectorField& v);
bool operator==(const VectorField& a, const VectorField& b);

/// Coefficients of the fields with respect to (x, y, t, u)-monomials and other
/// basis functions, one row per field.
std::vector<Row> coordinates(const std::vector<VectorField>& fields, std::size_t* ncols = nullptr);

bool linearly_independent(const std::vector<VectorField>& fields);
/// Coefficients of w in the span of basis, if any.
std::optional<Row> decompose(const std::vector<VectorField>& basis, const VectorField& w);
bool in_span(const std::vector<VectorField>& basis, const VectorField& w);
bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b);

class DependentBasisError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CommutatorTable {
  std::size_t n = 0;
  // entries[i][j]: coefficients of [v_i, v_j]; nullopt marks non-closure.
  std::vector<std::vector<std::optional<Row>>> entries;

  bool closed() const;
  bool antisymmetric() const;
};

CommutatorTable commutator_table(const std::vector<VectorField>& basis);
/// The five-dimensional table both printed bases are expected to satisfy.
CommutatorTable reference_table();
bool operator==(const CommutatorTable& a, const CommutatorTable& b);

struct JacobiReport {
  int triples = 0;
  int zero = 0;
  bool ok() const { return triples == zero; }
};
JacobiReport jacobi_check(const std::vector<VectorField>& basis);

class UnsupportedFlow : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Closed-form flow of an affine field with triangular coupling. Maps are
/// expressions in (x, y, t, u) and the parameter eps.
struct FlowMap {
  Expr x, y, t, u;
  const Expr& coord(int k) const;
  /// Point image (x, y, t, u) -> flow at parameter value e.
  FlowMap at(const Expr& e) const;
};

Expr flow_parameter();
FlowMap flow(const VectorField& v);

/// F(e1) after F(e2) minus F(e1 + e2), all normalized; true when zero.
bool flow_group_law(const FlowMap& f);

}  // namespace wavesym
