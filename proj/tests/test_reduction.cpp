#include "doctest.h"

#include "wavesym/calculus.hpp"
#include "wavesym/format.hpp"
#include "wavesym/reduction.hpp"

using namespace wavesym;

namespace {
Expr P(const char* s) { return parse(s); }
}  // namespace

TEST_CASE("invariants are annihilated") {
  for (CaseId c : {CaseId::I, CaseId::II}) {
    for (const char* g : {"v1", "v4"}) {
      auto spec = builtin_reduction(c, g);
      auto r = invariance_check(spec);
      CHECK_MESSAGE(r.ok, g);
      for (const auto& e : r.residuals) CHECK(e.is_zero());
    }
  }
  CHECK_THROWS_AS(builtin_reduction(CaseId::I, "v9"), std::invalid_argument);
}

TEST_CASE("translation generators only have trivial invariants") {
  auto s = builtin_reduction(CaseId::I, "v3");
  CHECK(s.trivial);
  REQUIRE(s.invariants.size() == 3);
  CHECK(s.invariants[0] == var_x());
  CHECK_THROWS(reduce(s, FFamily::exponential()));
}

TEST_CASE("printed case (ii) ansatz shift") {
  auto r = invariance_check(builtin_reduction(CaseId::II, "v1"));
  CHECK(r.ok);
  CHECK_FALSE(r.printed_ok);
  CHECK(r.printed_characteristic_residual == P("4*e2"));
}

TEST_CASE("reduced equations agree with the printed ones") {
  struct Row {
    CaseId c;
    const char* g;
    bool constant;
  };
  for (auto [c, g, constant] : {Row{CaseId::I, "v1", true}, Row{CaseId::I, "v4", true},
                                Row{CaseId::II, "v1", true}, Row{CaseId::II, "v4", false}}) {
    auto spec = builtin_reduction(c, g);
    auto eq = reduce(spec, family_for(c));
    CHECK(eq.eliminated);
    auto cmp = compare_with_printed(spec, eq);
    CHECK_MESSAGE(cmp.equivalent, g);
    CHECK(cmp.constant_factor == constant);
  }
  auto spec = builtin_reduction(CaseId::I, "v4");
  auto cmp = compare_with_printed(spec, reduce(spec, FFamily::exponential()));
  CHECK(cmp.factor == P("2*K*c"));
}

TEST_CASE("case (ii) needs the absorbed constant") {
  auto spec = builtin_reduction(CaseId::II, "v1");
  auto cmp = compare_with_printed(spec, reduce(spec, FFamily::power()));
  CHECK(cmp.needs_absorbed_constant);
  CHECK(spec.printed_labels_swapped);
}

TEST_CASE("separated solutions") {
  for (CaseId c : {CaseId::I, CaseId::II}) {
    auto r = separation_check(c);
    CHECK(r.ok);
    CHECK(r.residual.is_zero());
    CHECK(r.control_fails);
    CHECK(r.odes.size() == 2);
  }
}

TEST_CASE("explicit solution of the t-scaling reduction") {
  auto r = explicit_solution_residual();
  CHECK(r.derived_value == P("-1/K"));
  CHECK_FALSE(r.agrees_with_printed);
  CHECK(r.exact);
  CHECK(r.full_residual.is_zero());
}

TEST_CASE("model residual of a trivial solution") {
  CHECK(is_zero(model_residual(P("c1 + x"), FFamily::exponential())));
  CHECK_FALSE(is_zero(model_residual(P("t^2"), FFamily::exponential())));
}
