#pragma once

#include <string>
#include <vector>

#include "wavesym/calculus.hpp"
#include "wavesym/detsys.hpp"
#include "wavesym/numeric.hpp"

namespace wavesym {

enum class CaseId { I, II };

struct ReductionSpec {
  CaseId case_id = CaseId::I;
  std::string generator;  // v1..v5
  VectorField field;
  bool trivial = false;   // v2, v3, v5: invariants are arbitrary functions
  std::string trivial_name;
  std::vector<Expr> invariants;   // coordinate invariants, or the trivial triple
  std::vector<Expr> new_vars;     // symbols standing for the invariant coordinates
  std::string dependent;          // name of the reduced unknown
  Expr dependent_invariant;       // invariant combination of (x, y, t, u)
  Expr ansatz;                    // u as a function of (x, y, t)
  Expr printed_ansatz;            // the ansatz as printed, when it differs
  Bindings change;                // old coordinates in terms of new ones
  Expr eliminated;                // coordinate removed by the reduction
  Expr lead;                      // highest derivative atom of the reduced unknown
  std::string printed_form;       // reference reduced equation
  bool printed_labels_swapped = false;
};

ReductionSpec builtin_reduction(CaseId c, const std::string& generator);
FFamily family_for(CaseId c);

struct InvarianceReport {
  std::vector<Expr> residuals;     // generator applied to each invariant
  Expr characteristic_residual;    // Q at the ansatz
  Expr printed_characteristic_residual;
  bool ok = false;
  bool printed_ok = true;
};

InvarianceReport invariance_check(const ReductionSpec& spec);

/// Residual of the model equation for u given as an expression in (x, y, t).
Expr model_residual(const Expr& u, const FFamily& fam);

struct ReducedEquation {
  Expr expr;
  Expr cleared_factor;
  bool eliminated = false;
};

ReducedEquation reduce(const ReductionSpec& spec, const FFamily& fam);

struct PrintedComparison {
  bool equivalent = false;
  bool constant_factor = false;
  Expr factor;
  bool needs_absorbed_constant = false;  // only equivalent after L -> L e1^(1/e1)
  std::vector<std::string> notes;
};

PrintedComparison compare_with_printed(const ReductionSpec& spec, const ReducedEquation& eq,
                                       const SampleOptions& opts = {});

struct SeparationReport {
  Expr residual;
  bool ok = false;
  Expr control_residual;
  bool control_fails = false;
  std::vector<std::string> odes;
};

/// Additive separation for case (i), multiplicative with e1 = 1 for case (ii).
SeparationReport separation_check(CaseId c);

struct ExplicitSolutionReport {
  Expr constraint;          // reduced equation at linear h
  Expr derived_value;       // m^2 + p^2 must equal this
  Expr printed_value;       // 1/K
  bool agrees_with_printed = false;
  Expr solution;            // u(x, y, t) with K eliminated through the constraint
  Expr full_residual;       // model residual of `solution`, normalized
  bool exact = false;
};

ExplicitSolutionReport explicit_solution_residual();

}  // namespace wavesym
