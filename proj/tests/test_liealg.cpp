#include "doctest.h"

#include "wavesym/calculus.hpp"
#include "wavesym/detsys.hpp"
#include "wavesym/format.hpp"
#include "wavesym/liealg.hpp"

using namespace wavesym;

namespace {
Expr P(const char* s) { return parse(s); }
}  // namespace

TEST_CASE("bracket basics") {
  VectorField dx{1, 0, 0, 0};
  VectorField sc{P("x"), P("y"), 0, P("2*c")};
  CHECK(bracket(sc, dx) == VectorField{-1, 0, 0, 0});
  CHECK(bracket(dx, dx).is_zero());
  VectorField t4{0, 0, P("t"), P("-2*c")};
  CHECK(bracket(sc, t4).is_zero());
}

TEST_CASE("span and decomposition") {
  std::vector<VectorField> b{{1, 0, 0, 0}, {0, 1, 0, 0}, {P("x"), P("y"), 0, 0}};
  CHECK(linearly_independent(b));
  auto c = decompose(b, VectorField{P("x + 2"), P("y - 1"), 0, 0});
  REQUIRE(c);
  CHECK((*c)[0] == Expr(2));
  CHECK((*c)[1] == Expr(-1));
  CHECK((*c)[2] == Expr(1));
  CHECK_FALSE(in_span(b, VectorField{0, 0, 1, 0}));
  std::vector<VectorField> dep{{1, 0, 0, 0}, {2, 0, 0, 0}};
  CHECK_FALSE(linearly_independent(dep));
  CHECK_THROWS_AS(commutator_table(dep), DependentBasisError);
}

TEST_CASE("commutator tables of both bases") {
  auto ti = commutator_table(printed_basis(FFamily::exponential()));
  auto tii = commutator_table(printed_basis(FFamily::power()));
  CHECK(ti.closed());
  CHECK(ti.antisymmetric());
  CHECK(ti == reference_table());
  CHECK(tii == reference_table());
  CHECK(ti == tii);
  auto j = jacobi_check(printed_basis(FFamily::power()));
  CHECK(j.triples == 10);
  CHECK(j.zero == 10);
}

TEST_CASE("open bracket is reported") {
  std::vector<VectorField> b{{1, 0, 0, 0}, {P("x^2"), 0, 0, 0}};
  auto t = commutator_table(b);
  CHECK_FALSE(t.closed());
}

TEST_CASE("flows of affine generators") {
  auto basis = printed_basis(FFamily::exponential());
  auto f1 = flow(basis[0]);
  CHECK(f1.x == P("x*exp(eps)"));
  CHECK(f1.u == P("u + 2*c*eps"));
  auto f4 = flow(basis[3]);
  CHECK(f4.t == P("t*exp(eps)"));
  for (const auto& v : basis) CHECK(flow_group_law(flow(v)));
  for (const auto& v : printed_basis(FFamily::power())) CHECK(flow_group_law(flow(v)));
  auto fu = flow(VectorField{0, 0, 0, P("u")});
  CHECK(fu.u == P("u*exp(eps)"));
  CHECK(flow(basis[1]).at(Expr(0)).x == var_x());
}

TEST_CASE("unsupported flows") {
  CHECK_THROWS_AS(flow(VectorField{P("-y"), P("x"), 0, 0}), UnsupportedFlow);
  CHECK_THROWS_AS(flow(VectorField{P("x^2"), 0, 0, 0}), UnsupportedFlow);
}
