#include "doctest.h"

#include "wavesym/calculus.hpp"
#include "wavesym/detsys.hpp"
#include "wavesym/format.hpp"
#include "wavesym/liealg.hpp"

using namespace wavesym;

namespace {
Expr P(const char* s) { return parse(s); }

bool condition_holds(const std::vector<PrintedCondition>& cs, const std::string& label) {
  for (const auto& c : cs) {
    if (c.label == label) return c.satisfied;
  }
  FAIL("missing label " << label);
  return false;
}
}  // namespace

TEST_CASE("family functions") {
  CHECK(FFamily::exponential().f() == P("K*exp(u/c)"));
  CHECK(is_zero(FFamily::exponential().f_u() - P("K/c*exp(u/c)")));
  CHECK(FFamily::generic().f_u() == P("f'(u)"));
  CHECK(FFamily::power().parameters().size() == 3);
  CHECK(FFamily::power().label() == "power");
}

TEST_CASE("on-shell substitution removes u_tt and its derivatives") {
  const auto fam = FFamily::exponential();
  Expr e = on_shell(P("u_tt + u_ttx"), fam);
  for (const auto& a : atoms_of(e)) {
    if (a.kind() == Kind::Jet) CHECK(a.index()[2] < 2);
  }
  CHECK(is_zero(on_shell(P("u_tt"), fam) - P("K*exp(u/c)*(u_xx + u_yy)")));
}

TEST_CASE("generic determining system is linear in the opaque functions") {
  auto sys = extract_determining(opaque_field(), FFamily::generic());
  CHECK(sys.equations.size() > 10);
  for (const auto& e : sys.equations) {
    CHECK_FALSE(e.expr.is_zero());
    for (const auto& a : atoms_of(e.expr)) {
      if (a.kind() == Kind::Jet) CHECK(jet_order(a) == 0);
    }
  }
}

TEST_CASE("printed conditions on known generators") {
  const auto fam = FFamily::generic();
  VectorField dx{1, 0, 0, 0};
  for (const auto& c : check_printed_conditions(dx, fam)) CHECK_MESSAGE(c.satisfied, c.label);
  // Rotation is a symmetry for every f but breaks xi_y = 0.
  VectorField rot{P("-y"), P("x"), 0, 0};
  CHECK(is_symmetry(rot, fam));
  auto cs = check_printed_conditions(rot, fam);
  CHECK_FALSE(condition_holds(cs, "xi_y=xi_u=0"));
  CHECK(condition_holds(cs, "xi_tt"));
  // x d_x + y d_y + t d_t is a symmetry with tau_t != phi_u.
  VectorField dil{P("x"), P("y"), P("t"), 0};
  CHECK(is_symmetry(dil, fam));
  CHECK_FALSE(condition_holds(check_printed_conditions(dil, fam), "tau_t=phi_u"));
}

TEST_CASE("printed bases are symmetries") {
  for (const auto& fam : {FFamily::exponential(), FFamily::power()}) {
    auto basis = printed_basis(fam);
    REQUIRE(basis.size() == 5);
    for (const auto& v : basis) CHECK(is_symmetry(v, fam));
  }
  CHECK_FALSE(is_symmetry(VectorField{0, 0, 0, P("u")}, FFamily::exponential()));
  CHECK(printed_basis(FFamily::generic()).empty());
}

TEST_CASE("ansatz solutions") {
  SUBCASE("generic") {
    auto s = ansatz_solve(FFamily::generic(), 2);
    CHECK(s.basis.size() == 5);
    CHECK(s.certified);
    CHECK(in_span(s.basis, VectorField{P("-y"), P("x"), 0, 0}));
  }
  SUBCASE("exponential") {
    auto s = ansatz_solve(FFamily::exponential(), 2);
    CHECK(s.basis.size() == 8);
    CHECK(s.certified);
    for (const auto& v : printed_basis(FFamily::exponential())) CHECK(in_span(s.basis, v));
    // The extra fields: rotation and two quadratic ones.
    CHECK(in_span(s.basis, VectorField{P("-y"), P("x"), 0, 0}));
    VectorField q{P("(x^2 - y^2)/(4*c)"), P("x*y/(2*c)"), 0, P("x")};
    CHECK(is_symmetry(q, FFamily::exponential()));
  }
  SUBCASE("power") {
    auto s = ansatz_solve(FFamily::power(), 2);
    CHECK(s.basis.size() == 6);
    CHECK(s.certified);
    for (const auto& v : printed_basis(FFamily::power())) CHECK(in_span(s.basis, v));
  }
  SUBCASE("degree zero gives translations") {
    auto s = ansatz_solve(FFamily::exponential(), 0);
    CHECK(s.basis.size() == 3);
  }
  CHECK_THROWS_AS(ansatz_solve(FFamily::generic(), -1), std::invalid_argument);
}
