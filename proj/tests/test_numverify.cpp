#include "doctest.h"

#include <cmath>
#include <omp.h>

#include "wavesym/calculus.hpp"
#include "wavesym/format.hpp"
#include "wavesym/liealg.hpp"
#include "wavesym/verify.hpp"

using namespace wavesym;

namespace {
Expr P(const char* s) { return parse(s); }

GridSpec small_grid() {
  GridSpec g;
  g.n = {9, 9, 9};
  return g;
}
}  // namespace

TEST_CASE("rk4 is exact on cubics") {
  ODEProblem p;
  p.rhs = Expr();
  p.y0 = 0.0;
  p.yp0 = 1.0;
  p.s1 = 2.0;
  p.step = 0.1;
  auto tr = rk4_solve(p);
  CHECK(tr.value(1.234) == doctest::Approx(1.234).epsilon(1e-14));
  CHECK(tr.slope(0.5) == doctest::Approx(1.0));
  p.rhs = 6 * ode_var();  // y = s^3 + s
  tr = rk4_solve(p);
  CHECK(tr.value(2.0) == doctest::Approx(10.0).epsilon(1e-13));
  CHECK(tr.value(1.37) == doctest::Approx(1.37 * 1.37 * 1.37 + 1.37).epsilon(1e-12));
  CHECK(tr.second(1.37) == doctest::Approx(6 * 1.37).epsilon(1e-10));
}

TEST_CASE("backwards integration and interval checks") {
  ODEProblem p;
  p.rhs = -1 * ode_value();
  p.s0 = 1.0;
  p.s1 = -1.0;
  p.y0 = std::sin(1.0);
  p.yp0 = std::cos(1.0);
  p.step = 1e-2;
  auto tr = rk4_solve(p);
  CHECK(tr.value(-0.5) == doctest::Approx(std::sin(-0.5)).epsilon(1e-9));
  CHECK(tr.slope(0.25) == doctest::Approx(std::cos(0.25)).epsilon(1e-9));
  CHECK_THROWS_AS(tr.value(1.5), ODEError);
  p.step = 0.0;
  CHECK_THROWS_AS(rk4_solve(p), std::invalid_argument);
}

TEST_CASE("blow-up is detected") {
  ODEProblem p;
  p.rhs = ode_value() * ode_value();
  p.y0 = 10.0;
  p.s1 = 5.0;
  p.step = 1e-3;
  p.bound = 1e6;
  CHECK_THROWS_AS(rk4_solve(p), ODEError);
}

TEST_CASE("closed-form varsigma2 is reproduced") {
  ParamValues pv = default_params();
  pv["L"] = 2.0;
  pv["c_sep"] = 3.0;
  const double a = 0.5, b = 0.25, L = 2.0, cs = 3.0;
  auto exact = [&](double q) { return cs / (2 * L) + a * q + b * (q * q - 1); };
  // The quadratic satisfies the ODE symbolically.
  Expr q = parameter("q");
  Expr s2 = P("c_sep/(2*L) + a*q + b*(q^2 - 1)");
  Expr ode = (q * q + 1) * diff(s2, q, 2) - 2 * q * diff(s2, q) + 2 * s2 - P("c_sep/L");
  CHECK(is_zero(ode));
  ODEProblem p;
  p.rhs = ode_rhs(P("(q^2+1)*varsigma2''(q) - 2*q*varsigma2'(q) + 2*varsigma2(q) - c_sep/L"), "varsigma2");
  p.params = pv;
  p.s0 = -1.0;
  p.s1 = 2.0;
  p.y0 = exact(-1.0);
  p.yp0 = a + 2 * b * -1.0;
  p.step = 1e-2;
  auto tr = rk4_solve(p);
  for (double s : {-0.3, 0.7, 1.9}) CHECK(tr.value(s) == doctest::Approx(exact(s)).epsilon(1e-8));
}

TEST_CASE("ode_rhs solves for the second derivative") {
  Expr r = ode_rhs(P("(r^2+1)*z''(r) + 2*r*z'(r) - c"), "z");
  CHECK(is_zero(r - (P("c") - 2 * ode_var() * ode_slope()) / (ode_var() * ode_var() + 1)));
  CHECK_THROWS(ode_rhs(P("z'(r) + 1"), "z"));
  CHECK_THROWS(ode_rhs(P("z''(r) + z(s)"), "z"));
}

TEST_CASE("first integral drift is fourth order") {
  auto d = first_integral_drift(default_params());
  REQUIRE(d.orders.size() == 2);
  CHECK(d.pass);
  for (double o : d.orders) CHECK(o >= 3.5);
}

TEST_CASE("trivial residuals") {
  auto f = numeric_f(FFamily::generic(), {});
  auto r = fd_residual([](double, double, double) { return 3.0; }, small_grid(), f);
  CHECK(r.max_residual == 0.0);
  CHECK(r.pass);
  auto fe = numeric_f(FFamily::exponential(), default_params());
  auto rx = fd_residual([](double x, double, double) { return x; }, small_grid(), fe);
  CHECK(rx.max_residual < 1e-6);
}

TEST_CASE("singular set intrusion is reported") {
  auto f = numeric_f(FFamily::exponential(), default_params());
  GridSpec g = small_grid();
  g.lo = {-1.0, 2.0, 2.0};
  auto r = fd_residual([](double x, double, double) { return std::log(x); }, g, f);
  CHECK_FALSE(r.pass);
  CHECK_FALSE(r.bad_points.empty());
  CHECK(std::isinf(r.max_residual));
}

TEST_CASE("parallel and serial residuals agree exactly") {
  auto p = explicit_params();
  auto sol = explicit_solution(p);
  auto f = numeric_f(FFamily::exponential(), p);
  GridSpec g;
  auto a = fd_residual(sol.u, g, f);
  auto b = fd_residual_serial(sol.u, g, f);
  CHECK(a.max_residual == b.max_residual);
  CHECK(a.rms_residual == b.rms_residual);
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto c = fd_residual(sol.u, g, f);
  omp_set_num_threads(saved);
  CHECK(c.rms_residual == a.rms_residual);
}

TEST_CASE("explicit solution and violated constraint") {
  GridSpec g;
  auto p = explicit_params();
  auto r = fd_residual(explicit_solution(p).u, g, numeric_f(FFamily::exponential(), p));
  CHECK(r.pass);
  CHECK(r.max_residual <= 1e-6);
  auto bad = explicit_params(0.1);
  auto rb = fd_residual(explicit_solution(bad).u, g, numeric_f(FFamily::exponential(), bad));
  CHECK(rb.max_residual >= 1e-3);
  CHECK_THROWS(explicit_params(0.0, 1.0));
}

TEST_CASE("reductions converge at second order") {
  GridSpec g;
  for (auto [c, gen] : std::vector<std::pair<CaseId, std::string>>{
           {CaseId::I, "v1"}, {CaseId::I, "v4"}, {CaseId::II, "v1"}, {CaseId::II, "v4"}}) {
    auto r = verify_reduction_numeric(c, gen, default_params(), g);
    CHECK_MESSAGE(r.pass, gen);
    REQUIRE(r.ratios.size() == 2);
    for (double q : r.ratios) {
      CHECK(q >= 3.5);
      CHECK(q <= 4.5);
    }
    REQUIRE(r.order);
    CHECK(*r.order == doctest::Approx(2.0).epsilon(0.25));
  }
  auto pv = default_params();
  pv["c1"] = 0.0;
  CHECK(verify_reduction_numeric(CaseId::I, "v1", pv, g).pass);
}

TEST_CASE("coarse grids skip refinement") {
  GridSpec g;
  g.n = {5, 5, 5};
  auto r = verify_reduction_numeric(CaseId::I, "v1", default_params(), g);
  CHECK_FALSE(r.order);
  CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("tight tolerance hits the finite-difference floor") {
  auto r = verify_reduction_numeric(CaseId::I, "v4", default_params(), small_grid(), 1e-12);
  CHECK_FALSE(r.pass);
}

TEST_CASE("transport along symmetries") {
  auto p = explicit_params();
  auto sol = explicit_solution(p);
  auto f = numeric_f(FFamily::exponential(), p);
  GridSpec g;
  const std::array<double, 6> dom{0.1, 100, 0.1, 100, 0.1, 100};
  auto base = fd_residual(sol.u, g, f);
  for (const auto& v : printed_basis(FFamily::exponential())) {
    auto r = flow_transport_check(sol.u, v, 0.3, g, f, p, dom);
    CHECK(r.max_residual <= 10 * base.max_residual);
  }
  auto bad = flow_transport_check(sol.u, VectorField{0, 0, 0, jet_u()}, 0.3, g, f, p, dom);
  CHECK(bad.max_residual >= 1e3 * base.max_residual);
  CHECK(bad.max_residual >= 1e-2);
}

TEST_CASE("transport shrinks the box when it leaves the domain") {
  auto p = explicit_params();
  auto sol = explicit_solution(p);
  auto f = numeric_f(FFamily::exponential(), p);
  const std::array<double, 6> dom{1.9, 3.1, 1.9, 3.1, 1.9, 3.1};
  auto r = flow_transport_check(sol.u, VectorField{1, 0, 0, 0}, 0.3, small_grid(), f, p, dom);
  CHECK_FALSE(r.warnings.empty());
  CHECK(r.grid.hi[0] - r.grid.lo[0] < 1.0);
  CHECK_THROWS_AS(transported(sol.u, VectorField{P("-y"), P("x"), 0, 0}, 0.3, p), UnsupportedFlow);
}

TEST_CASE("convergence csv") {
  ResidualReport r;
  r.convergence = {{0.01, 1e-5, 2e-6}, {0.005, 2.5e-6, 5e-7}};
  auto csv = convergence_csv(r);
  CHECK(csv.rfind("h,max_residual,rms_residual\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
