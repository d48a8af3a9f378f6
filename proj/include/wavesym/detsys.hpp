#pragma once

#include <string>
#include <vector>

#include "wavesym/expr.hpp"
#include "wavesym/jet.hpp"

namespace wavesym {

class FFamily {
 public:
  enum class Type { Generic, Exponential, Power };

  static FFamily generic();
  static FFamily exponential();  // K exp(u/c)
  static FFamily power();        // L (e1 u + e2)^(1/e1)

  Type type() const { return type_; }
  std::string label() const;
  /// f and f_u as expressions in u.
  Expr f() const { return f_of(jet_u()); }
  Expr f_of(const Expr& arg) const;
  Expr f_u() const;
  /// Symbolic constants of the family.
  std::vector<Expr> parameters() const;

 private:
  explicit FFamily(Type t) : type_(t) {}
  Type type_;
};

Expr invariance_residual(const VectorField& v, const FFamily& fam);

/// Replaces every jet with two or more t-derivatives through the model
/// equation and its total derivatives.
Expr on_shell(const Expr& e, const FFamily& fam);

struct DeterminingEquation {
  Expr origin;  // jet monomial; 1 for the jet-free part
  Expr expr;
};

struct DeterminingSystem {
  std::vector<DeterminingEquation> equations;
};

DeterminingSystem extract_determining(const VectorField& v, const FFamily& fam);

struct PrintedCondition {
  std::string label;
  std::vector<Expr> residuals;
  bool satisfied = false;
};

/// The twelve printed conditions (thirteen labels, counting the tau_t = phi_u
/// line separately), each as residuals that vanish when the condition holds.
std::vector<PrintedCondition> check_printed_conditions(const VectorField& v, const FFamily& fam);

struct SolutionSpace {
  int degree = 0;
  std::size_t unknowns = 0;
  std::size_t equations = 0;
  std::vector<VectorField> basis;
  bool certified = false;  // every basis field leaves a residual of exactly 0
  std::vector<bool> certificate;
};

/// Polynomial ansatz: xi, eta, tau, alpha, beta of degree <= d in (x, y, t),
/// phi = alpha u + beta. For the generic family f and its derivatives are
/// treated as functionally independent of polynomials in u.
SolutionSpace ansatz_solve(const FFamily& fam, int degree);

/// Symmetry residual of one field, on-shell and normalized.
Expr symmetry_residual(const VectorField& v, const FFamily& fam);
bool is_symmetry(const VectorField& v, const FFamily& fam);

/// The reference bases for the two families, ordered v1..v5.
std::vector<VectorField> printed_basis(const FFamily& fam);

}  // namespace wavesym
