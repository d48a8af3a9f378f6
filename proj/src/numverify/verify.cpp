#include "wavesym/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "wavesym/calculus.hpp"
#include "wavesym/format.hpp"
#include "wavesym/liealg.hpp"

namespace wavesym {

namespace {

Expr P(const char* s) { return parse(s); }

double get(const ParamValues& p, const std::string& k) {
  auto it = p.find(k);
  if (it == p.end()) throw std::invalid_argument("missing constant " + k);
  return it->second;
}

}  // namespace

ParamValues default_params() {
  return {{"K", 1.0}, {"c", 1.0}, {"L", 1.0}, {"e1", 1.0}, {"e2", 0.0}, {"c1", 1.0}, {"c_sep", 1.0}};
}

NumericEnv param_env(const ParamValues& p) {
  NumericEnv env;
  for (const auto& [k, v] : p) env.set(parameter(k), v);
  return env;
}

// ---------------------------------------------------------------------------
// ODEs

Expr ode_var() { return parameter("_s"); }
Expr ode_value() { return parameter("_y"); }
Expr ode_slope() { return parameter("_yp"); }

Trajectory rk4_solve(const ODEProblem& p) {
  if (!(p.step > 0.0)) throw std::invalid_argument("ODE step must be positive");
  const double span = p.s1 - p.s0;
  const auto n = std::max<long>(1, long(std::ceil(std::fabs(span) / p.step - 1e-9)));
  const double k = span / double(n);
  CompiledExpr rhs(p.rhs, {ode_var(), ode_value(), ode_slope()}, param_env(p.params));
  auto F = [&](double s, double y, double yp) {
    const double in[3] = {s, y, yp};
    double v;
    try {
      v = rhs(in);
    } catch (const DomainError& e) {
      throw ODEError(std::string("right-hand side failed at s=") + std::to_string(s) + ": " + e.what());
    }
    if (!std::isfinite(v)) throw ODEError("right-hand side is not finite at s=" + std::to_string(s));
    return v;
  };
  Trajectory tr;
  tr.s_.reserve(n + 1);
  double y = p.y0;
  double yp = p.yp0;
  double a = F(p.s0, y, yp);
  tr.s_.push_back(p.s0);
  tr.y_.push_back(y);
  tr.yp_.push_back(yp);
  tr.ypp_.push_back(a);
  for (long i = 0; i < n; ++i) {
    const double s = p.s0 + double(i) * k;
    const double k1y = yp, k1v = a;
    const double k2y = yp + 0.5 * k * k1v, k2v = F(s + 0.5 * k, y + 0.5 * k * k1y, k2y);
    const double k3y = yp + 0.5 * k * k2v, k3v = F(s + 0.5 * k, y + 0.5 * k * k2y, k3y);
    const double k4y = yp + k * k3v, k4v = F(s + k, y + k * k3y, k4y);
    y += k / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
    yp += k / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
    if (!std::isfinite(y) || !std::isfinite(yp) || std::fabs(y) > p.bound || std::fabs(yp) > p.bound) {
      throw ODEError("solution left the bound near s=" + std::to_string(s + k));
    }
    const double s_next = i + 1 == n ? p.s1 : p.s0 + double(i + 1) * k;
    a = F(s_next, y, yp);
    tr.s_.push_back(s_next);
    tr.y_.push_back(y);
    tr.yp_.push_back(yp);
    tr.ypp_.push_back(a);
  }
  return tr;
}

double Trajectory::eval(double s, int order) const {
  const std::size_t n = s_.size() - 1;
  const double k = (s_.back() - s_.front()) / double(n);
  const double pos = (s - s_.front()) / k;
  if (pos < -1e-9 || pos > double(n) + 1e-9) {
    throw ODEError("s=" + std::to_string(s) + " is outside the integrated interval");
  }
  std::size_t i = pos <= 0.0 ? 0 : std::min(n - 1, std::size_t(pos));
  const double H = s_[i + 1] - s_[i];
  const double th = (s - s_[i]) / H;
  const double y0 = y_[i], y1 = y_[i + 1];
  const double d0 = H * yp_[i], d1 = H * yp_[i + 1];
  const double q0 = H * H * ypp_[i], q1 = H * H * ypp_[i + 1];
  double c[6] = {
      y0,
      d0,
      0.5 * q0,
      -10 * y0 - 6 * d0 - 1.5 * q0 + 0.5 * q1 - 4 * d1 + 10 * y1,
      15 * y0 + 8 * d0 + 1.5 * q0 - q1 + 7 * d1 - 15 * y1,
      -6 * y0 - 3 * d0 - 0.5 * q0 + 0.5 * q1 - 3 * d1 + 6 * y1,
  };
  for (int d = 0; d < order; ++d) {
    for (int j = 0; j < 5; ++j) c[j] = c[j + 1] * double(j + 1);
    c[5] = 0.0;
  }
  double v = 0.0;
  for (int j = 5; j >= 0; --j) v = v * th + c[j];
  return v / std::pow(H, order);
}

Expr ode_rhs(const Expr& eq, const std::string& name) {
  Expr arg;
  Bindings fn;
  const Expr second = parameter("_ypp");
  for (const auto& a : atoms_of(eq)) {
    if (a.kind() != Kind::Function || a.name() != name) continue;
    if (a.operands().size() != 1) throw std::invalid_argument(name + " must take one argument");
    if (arg.is_zero()) {
      arg = a.operand(0);
    } else if (arg != a.operand(0)) {
      throw std::invalid_argument(name + " is applied to different arguments");
    }
    switch (a.index()[0]) {
      case 0:
        fn.set(a, ode_value());
        break;
      case 1:
        fn.set(a, ode_slope());
        break;
      case 2:
        fn.set(a, second);
        break;
      default:
        throw std::invalid_argument("derivative of " + name + " above second order");
    }
  }
  if (arg.is_zero() || !arg.is_atom()) throw std::invalid_argument("no usable occurrence of " + name);
  Expr e = substitute(substitute(eq, fn), arg, ode_var());
  auto [a, b] = affine_split(normalize(e), second);
  if (is_zero(a)) throw std::invalid_argument("equation does not involve " + name + "''");
  return normalize(-b / a);
}

// ---------------------------------------------------------------------------
// Grid residuals

double GridSpec::coord(int axis, int i) const {
  if (n[axis] <= 1) return 0.5 * (lo[axis] + hi[axis]);
  return lo[axis] + (hi[axis] - lo[axis]) * double(i) / double(n[axis] - 1);
}

ScalarFn numeric_f(const FFamily& fam, const ParamValues& p, ScalarFn generic) {
  if (fam.type() == FFamily::Type::Generic) {
    if (generic) return generic;
    return [](double) { return 1.0; };
  }
  const Expr slot = parameter("_u");
  auto f = std::make_shared<CompiledExpr>(fam.f_of(slot), std::vector<Expr>{slot}, param_env(p));
  return [f](double u) {
    const double in[1] = {u};
    try {
      return (*f)(in);
    } catch (const DomainError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
}

namespace {

double point_residual(const Field& u, const ScalarFn& f, double x, double y, double t, double h) {
  try {
    const double u0 = u(x, y, t);
    const double uxx = u(x + h, y, t) - 2 * u0 + u(x - h, y, t);
    const double uyy = u(x, y + h, t) - 2 * u0 + u(x, y - h, t);
    const double utt = u(x, y, t + h) - 2 * u0 + u(x, y, t - h);
    return (utt - f(u0) * (uxx + uyy)) / (h * h);
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

std::size_t flat(const GridSpec& g, int i, int j, int k) {
  return (std::size_t(i) * g.n[1] + j) * g.n[2] + k;
}

void summarize(const std::vector<double>& res, const GridSpec& g, ResidualReport& r) {
  double mx = 0.0;
  double ss = 0.0;
  std::size_t finite = 0;
  for (int i = 0; i < g.n[0]; ++i) {
    for (int j = 0; j < g.n[1]; ++j) {
      for (int k = 0; k < g.n[2]; ++k) {
        const double v = res[flat(g, i, j, k)];
        if (!std::isfinite(v)) {
          r.bad_points.push_back({g.coord(0, i), g.coord(1, j), g.coord(2, k)});
          continue;
        }
        mx = std::max(mx, std::fabs(v));
        ss += v * v;
        ++finite;
      }
    }
  }
  r.max_residual = r.bad_points.empty() ? mx : std::numeric_limits<double>::infinity();
  r.rms_residual = finite > 0 ? std::sqrt(ss / double(finite)) : 0.0;
  r.pass = r.max_residual <= r.tol;
}

void check_grid(const GridSpec& g) {
  for (int a = 0; a < 3; ++a) {
    if (g.n[a] < 1) throw std::invalid_argument("grid needs at least one point per axis");
    if (!(g.hi[a] >= g.lo[a])) throw std::invalid_argument("grid box is empty");
  }
  if (!(g.h > 0.0)) throw std::invalid_argument("finite-difference step must be positive");
}

}  // namespace

ResidualReport fd_residual(const Field& u, const GridSpec& grid, const ScalarFn& f, double tol) {
  check_grid(grid);
  ResidualReport r;
  r.grid = grid;
  r.tol = tol;
  std::vector<double> res(grid.points());
  const int nx = grid.n[0], ny = grid.n[1], nt = grid.n[2];
#pragma omp parallel for collapse(3) schedule(static)
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 0; k < nt; ++k) {
        res[flat(grid, i, j, k)] =
            point_residual(u, f, grid.coord(0, i), grid.coord(1, j), grid.coord(2, k), grid.h);
      }
    }
  }
  summarize(res, grid, r);
  return r;
}

ResidualReport fd_residual_serial(const Field& u, const GridSpec& grid, const ScalarFn& f, double tol) {
  check_grid(grid);
  ResidualReport r;
  r.grid = grid;
  r.tol = tol;
  std::vector<double> res;
  res.reserve(grid.points());
  for (int i = 0; i < grid.n[0]; ++i) {
    for (int j = 0; j < grid.n[1]; ++j) {
      for (int k = 0; k < grid.n[2]; ++k) {
        res.push_back(point_residual(u, f, grid.coord(0, i), grid.coord(1, j), grid.coord(2, k), grid.h));
      }
    }
  }
  summarize(res, grid, r);
  return r;
}

std::vector<double> default_refinement() { return {1e-2, 5e-3, 2.5e-3}; }

void convergence_study(const Field& u, const GridSpec& grid, const ScalarFn& f,
                       const std::vector<double>& steps, ResidualReport& into) {
  into.convergence.clear();
  into.ratios.clear();
  into.order.reset();
  for (double h : steps) {
    GridSpec g = grid;
    g.h = h;
    auto r = fd_residual(u, g, f, into.tol);
    into.convergence.push_back({h, r.max_residual, r.rms_residual});
  }
  if (into.convergence.size() < 2) return;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < into.convergence.size(); ++i) {
    const double a = into.convergence[i].max_residual;
    const double b = into.convergence[i + 1].max_residual;
    const double ratio = b > 0.0 ? a / b : std::numeric_limits<double>::infinity();
    into.ratios.push_back(ratio);
    sum += std::log2(ratio) / std::log2(steps[i] / steps[i + 1]);
  }
  into.order = sum / double(into.ratios.size());
}

std::string convergence_csv(const ResidualReport& r) {
  std::ostringstream os;
  os.precision(10);
  os << "h,max_residual,rms_residual\n";
  for (const auto& row : r.convergence) os << row.h << ',' << row.max_residual << ',' << row.rms_residual << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// Reductions

namespace {

struct Range {
  double lo, hi;
};

constexpr double kMargin = 0.05;

Range axis_range(const GridSpec& g, int a) { return {g.lo[a] - kMargin, g.hi[a] + kMargin}; }

// y/x over the grid box, padded.
Range ratio_range(const GridSpec& g) {
  Range x = axis_range(g, 0);
  Range y = axis_range(g, 1);
  if (x.lo <= 0.0) throw std::invalid_argument("box must keep x > 0");
  double c[4] = {y.lo / x.lo, y.lo / x.hi, y.hi / x.lo, y.hi / x.hi};
  return {*std::min_element(c, c + 4) - kMargin, *std::max_element(c, c + 4) + kMargin};
}

std::shared_ptr<Trajectory> integrate(const Expr& eq, const std::string& name, const ParamValues& p, Range r,
                                      double y0, double yp0) {
  ODEProblem prob;
  prob.rhs = ode_rhs(eq, name);
  prob.params = p;
  prob.s0 = r.lo;
  prob.s1 = r.hi;
  prob.y0 = y0;
  prob.yp0 = yp0;
  prob.step = 1e-3;
  return std::make_shared<Trajectory>(rk4_solve(prob));
}

// Restricts the reduced equation of a v4 reduction to an unknown of x alone.
Expr restrict_to_x(CaseId c, const std::string& from, const std::string& to) {
  auto spec = builtin_reduction(c, "v4");
  Expr reduced = reduce(spec, family_for(c)).expr;
  Bindings b;
  b.define(from, {parameter("_a"), parameter("_b")}, function(to, {parameter("_a")}));
  return normalize(substitute(reduced, b));
}

}  // namespace

NumericSolution reconstruct(CaseId c, const std::string& generator, const ParamValues& p, const GridSpec& grid) {
  NumericSolution out;
  if (c == CaseId::I && generator == "v1") {
    const double cc = get(p, "c");
    auto z1 = integrate(P("(r^2+1)*zeta1''(r) + c1*exp(-zeta1(r)/c) + 2*(r*zeta1'(r) - c)"), "zeta1", p,
                        ratio_range(grid), 0.0, 0.0);
    auto z2 = integrate(P("zeta2''(s) + K*c1*exp(zeta2(s)/c)"), "zeta2", p, axis_range(grid, 2), 0.0, 0.0);
    out.u = [z1, z2, cc](double x, double y, double t) {
      return z1->value(y / x) + z2->value(t) + 2 * cc * std::log(x);
    };
    out.formula = "zeta1(y/x) + zeta2(t) + 2*c*ln(x)";
    out.notes.push_back("zeta1, zeta2 by RK4 from zero initial data at the lower end of their ranges");
    return out;
  }
  if (c == CaseId::I && generator == "v4") {
    const double cc = get(p, "c");
    auto h = integrate(restrict_to_x(c, "h", "hx"), "hx", p, axis_range(grid, 0), 1.0, 0.0);
    out.u = [h, cc](double x, double, double t) { return 2 * cc * std::log(h->value(x) / t); };
    out.formula = "2*c*ln(h(x)/t)";
    out.notes.push_back("h(x) by RK4 from h = 1, h' = 0");
    return out;
  }
  if (c == CaseId::II && generator == "v1") {
    if (get(p, "e1") != 1.0) throw std::invalid_argument("the separated case (ii) solution needs e1 = 1");
    const double L = get(p, "L");
    const double cs = get(p, "c_sep");
    const double e2 = get(p, "e2");
    const double a = p.contains("a") ? p.at("a") : 0.5;
    const double b = p.contains("b") ? p.at("b") : 0.25;
    auto s1 = integrate(P("varsigma1''(q) - c_sep*varsigma1(q)^2"), "varsigma1", p, axis_range(grid, 2), 0.5,
                        0.0);
    out.u = [s1, L, cs, a, b, e2](double x, double y, double t) {
      const double q = y / x;
      const double s2 = cs / (2 * L) + a * q + b * (q * q - 1);
      return s1->value(t) * s2 * x * x - e2;
    };
    out.formula = "varsigma1(t)*varsigma2(y/x)*x^2 - e2";
    out.notes.push_back("varsigma1 by RK4 from 1/2 with zero slope; varsigma2 = c_sep/(2L) + a*q + b*(q^2-1)");
    return out;
  }
  if (c == CaseId::II && generator == "v4") {
    const double e1 = get(p, "e1");
    const double e2 = get(p, "e2");
    auto l = integrate(restrict_to_x(c, "l", "lx"), "lx", p, axis_range(grid, 0), 1.0, 0.0);
    out.u = [l, e1, e2](double x, double, double t) { return l->value(x) * std::pow(t, -2 * e1) - e2 / e1; };
    out.formula = "l(x)*t^(-2*e1) - e2/e1";
    out.notes.push_back("l(x) by RK4 from l = 1, l' = 0");
    return out;
  }
  throw std::invalid_argument("no numeric reconstruction for " + generator);
}

ResidualReport verify_reduction_numeric(CaseId c, const std::string& generator, const ParamValues& p,
                                        const GridSpec& grid, double tol) {
  auto sol = reconstruct(c, generator, p, grid);
  auto f = numeric_f(family_for(c), p);
  auto r = fd_residual(sol.u, grid, f, tol);
  if (*std::min_element(grid.n.begin(), grid.n.end()) < 9) {
    r.warnings.push_back("grid too coarse for a convergence estimate; refinement skipped");
  } else {
    convergence_study(sol.u, grid, f, default_refinement(), r);
  }
  return r;
}

ParamValues explicit_params(double violation, double K) {
  if (!(K < 0.0)) throw std::invalid_argument("the explicit solution needs K < 0");
  ParamValues p = default_params();
  const double s = std::sqrt((1.0 + violation) / -K);
  p["K"] = K;
  p["m"] = 0.6 * s;
  p["p"] = 0.8 * s;
  p["q"] = 0.0;
  return p;
}

NumericSolution explicit_solution(const ParamValues& pv) {
  const double c = get(pv, "c"), m = get(pv, "m"), p = get(pv, "p"), q = get(pv, "q");
  NumericSolution out;
  out.u = [c, m, p, q](double x, double y, double t) { return 2 * c * std::log((m * x + p * y + q) / t); };
  out.formula = "2*c*ln((m*x + p*y + q)/t)";
  return out;
}

// ---------------------------------------------------------------------------
// Flow transport

namespace {

struct CompiledFlow {
  CompiledExpr fwd_u;
  CompiledExpr inv[3];
};

CompiledFlow compile_flow(const VectorField& v, double eps, const ParamValues& p) {
  FlowMap fm = flow(v);
  for (int k = 0; k < 3; ++k) {
    if (depends_on(fm.coord(k), jet_u())) {
      throw UnsupportedFlow("base coordinates of the flow depend on u");
    }
  }
  const std::vector<Expr> slots{var_x(), var_y(), var_t(), jet_u()};
  NumericEnv env = param_env(p);
  env.set(flow_parameter(), eps);
  NumericEnv back = param_env(p);
  back.set(flow_parameter(), -eps);
  CompiledFlow cf;
  cf.fwd_u = CompiledExpr(fm.u, slots, env);
  for (int k = 0; k < 3; ++k) cf.inv[k] = CompiledExpr(fm.coord(k), slots, back);
  return cf;
}

}  // namespace

Field transported(const Field& u, const VectorField& v, double eps, const ParamValues& p) {
  auto cf = std::make_shared<CompiledFlow>(compile_flow(v, eps, p));
  return [cf, u](double X, double Y, double T) {
    const double at[4] = {X, Y, T, 0.0};
    double pre[4] = {cf->inv[0](at), cf->inv[1](at), cf->inv[2](at), 0.0};
    pre[3] = u(pre[0], pre[1], pre[2]);
    return cf->fwd_u(pre);
  };
}

ResidualReport flow_transport_check(const Field& u, const VectorField& v, double eps, const GridSpec& grid,
                                    const ScalarFn& f, const ParamValues& p, const std::array<double, 6>& domain,
                                    double tol) {
  auto cf = compile_flow(v, eps, p);
  GridSpec g = grid;
  std::vector<std::string> warnings;
  auto inside = [&](const GridSpec& box) {
    const double pad = box.h;
    for (int corner = 0; corner < 8; ++corner) {
      double at[4];
      for (int a = 0; a < 3; ++a) at[a] = (corner >> a & 1) ? box.hi[a] + pad : box.lo[a] - pad;
      at[3] = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double z = cf.inv[a](at);
        if (!(z >= domain[2 * a] && z <= domain[2 * a + 1])) return false;
      }
    }
    return true;
  };
  int shrinks = 0;
  while (!inside(g) && shrinks < 40) {
    for (int a = 0; a < 3; ++a) {
      const double mid = 0.5 * (g.lo[a] + g.hi[a]);
      const double half = 0.45 * (g.hi[a] - g.lo[a]);
      g.lo[a] = mid - half;
      g.hi[a] = mid + half;
    }
    ++shrinks;
  }
  if (shrinks > 0) {
    std::ostringstream os;
    os << "transformed grid left the solution domain; box shrunk " << shrinks << " time(s)";
    warnings.push_back(os.str());
  }
  auto r = fd_residual(transported(u, v, eps, p), g, f, tol);
  r.warnings.insert(r.warnings.begin(), warnings.begin(), warnings.end());
  return r;
}

// ---------------------------------------------------------------------------

DriftStudy first_integral_drift(const ParamValues& p, double length, const std::vector<double>& steps) {
  const double K = get(p, "K"), c = get(p, "c"), c1 = get(p, "c1");
  DriftStudy out;
  out.steps = steps;
  const Expr rhs = mul({Expr(-1), parameter("K"), parameter("c1"), exp(ode_value() / parameter("c"))});
  for (double k : steps) {
    ODEProblem prob;
    prob.rhs = rhs;
    prob.params = p;
    prob.s0 = 0.0;
    prob.s1 = length;
    prob.step = k;
    auto tr = rk4_solve(prob);
    auto energy = [&](double y, double yp) { return 0.5 * yp * yp + K * c1 * c * std::exp(y / c); };
    const double e0 = energy(prob.y0, prob.yp0);
    double drift = 0.0;
    for (std::size_t i = 0; i < tr.size(); ++i) {
      drift = std::max(drift, std::fabs(energy(tr.values()[i], tr.slopes()[i]) - e0));
    }
    out.drift.push_back(drift);
  }
  out.pass = out.drift.size() >= 2;
  for (std::size_t i = 0; i + 1 < out.drift.size(); ++i) {
    const double ord = std::log2(out.drift[i] / out.drift[i + 1]) / std::log2(steps[i] / steps[i + 1]);
    out.orders.push_back(ord);
    if (!(ord >= 3.5)) out.pass = false;
  }
  return out;
}

}  // namespace wavesym
