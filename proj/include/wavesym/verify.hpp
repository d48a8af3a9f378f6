#pragma once

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wavesym/detsys.hpp"
#include "wavesym/jet.hpp"
#include "wavesym/numeric.hpp"
#include "wavesym/reduction.hpp"

namespace wavesym {

/// Numeric values for the family constants and the separation constants.
using ParamValues = std::map<std::string, double>;

/// K=1, c=1, L=1, e1=1, e2=0, c1=1, c_sep=1.
ParamValues default_params();

NumericEnv param_env(const ParamValues& p);

// ---------------------------------------------------------------------------
// ODEs

/// Symbols the right-hand side of an ODEProblem is written in.
Expr ode_var();
Expr ode_value();
Expr ode_slope();

/// y'' = rhs(s, y, y') on [s0, s1]. s1 < s0 integrates backwards.
struct ODEProblem {
  Expr rhs;
  ParamValues params;
  double s0 = 0.0;
  double s1 = 1.0;
  double y0 = 0.0;
  double yp0 = 0.0;
  double step = 1e-3;
  double bound = 1e8;
};

class ODEError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sampled solution with C2 dense output (quintic Hermite on y, y', y'').
class Trajectory {
 public:
  double value(double s) const { return eval(s, 0); }
  double slope(double s) const { return eval(s, 1); }
  double second(double s) const { return eval(s, 2); }
  double begin() const { return s_.front(); }
  double end() const { return s_.back(); }
  std::size_t size() const { return s_.size(); }
  const std::vector<double>& nodes() const { return s_; }
  const std::vector<double>& values() const { return y_; }
  const std::vector<double>& slopes() const { return yp_; }

 private:
  friend Trajectory rk4_solve(const ODEProblem& p);
  double eval(double s, int order) const;

  std::vector<double> s_, y_, yp_, ypp_;
};

/// Classical RK4. Throws ODEError when |y| or |y'| exceeds the bound or the
/// right-hand side stops being finite.
Trajectory rk4_solve(const ODEProblem& p);

/// Rewrites eq = 0, affine in the second derivative of the one-argument
/// function `name`, as y'' = rhs in the ode_* symbols.
Expr ode_rhs(const Expr& eq, const std::string& name);

// ---------------------------------------------------------------------------
// Grid residuals

struct GridSpec {
  std::array<double, 3> lo{2.0, 2.0, 2.0};
  std::array<double, 3> hi{3.0, 3.0, 3.0};
  std::array<int, 3> n{21, 21, 21};
  double h = 1e-3;

  double coord(int axis, int i) const;
  std::size_t points() const { return std::size_t(n[0]) * n[1] * n[2]; }
};

struct ConvergenceRow {
  double h = 0.0;
  double max_residual = 0.0;
  double rms_residual = 0.0;
};

struct ResidualReport {
  double max_residual = 0.0;
  double rms_residual = 0.0;
  GridSpec grid;
  double tol = 1e-6;
  bool pass = false;
  std::vector<std::array<double, 3>> bad_points;  // non-finite residuals
  std::vector<ConvergenceRow> convergence;
  std::vector<double> ratios;       // max residual(h) / max residual(h/2)
  std::optional<double> order;      // mean observed order over the halvings
  std::vector<std::string> warnings;
};

using Field = std::function<double(double x, double y, double t)>;
using ScalarFn = std::function<double(double u)>;

/// f(u) for the family at the given constants. The generic family has no
/// numeric form; it evaluates as f = 1 unless `generic` is supplied.
ScalarFn numeric_f(const FFamily& fam, const ParamValues& p, ScalarFn generic = {});

/// Residual u_tt - f(u)(u_xx + u_yy) at every grid point by central second
/// differences with step grid.h. OpenMP over points; rms is summed in point
/// order so the result does not depend on the thread count.
ResidualReport fd_residual(const Field& u, const GridSpec& grid, const ScalarFn& f, double tol = 1e-6);

/// Single-threaded reference for fd_residual.
ResidualReport fd_residual_serial(const Field& u, const GridSpec& grid, const ScalarFn& f,
                                  double tol = 1e-6);

/// Repeats fd_residual over `steps` and fills convergence, ratios and order
/// in `into`.
void convergence_study(const Field& u, const GridSpec& grid, const ScalarFn& f,
                       const std::vector<double>& steps, ResidualReport& into);

std::vector<double> default_refinement();  // 1e-2, 5e-3, 2.5e-3

std::string convergence_csv(const ResidualReport& r);

// ---------------------------------------------------------------------------
// Reductions and explicit solutions

struct NumericSolution {
  Field u;
  std::string formula;
  std::vector<std::string> notes;
};

/// Reconstructs u for a built-in reduction from integrated component ODEs.
/// (i,v1): zeta1(y/x) + zeta2(t) + 2c ln x.
/// (i,v4): 2c ln(h(x)/t), h from the reduced equation restricted to h(x).
/// (ii,v1): varsigma1(t) varsigma2(y/x) x^(2 e1) - e2/e1, e1 = 1.
/// (ii,v4): l(x) t^(-2 e1) - e2/e1, l from the reduced equation.
NumericSolution reconstruct(CaseId c, const std::string& generator, const ParamValues& p,
                            const GridSpec& grid);

ResidualReport verify_reduction_numeric(CaseId c, const std::string& generator, const ParamValues& p,
                                        const GridSpec& grid, double tol = 1e-6);

/// 2c ln((m x + p y + q)/t) with the constants taken from `p` (m, p, q, c).
NumericSolution explicit_solution(const ParamValues& p);

/// Constants for the explicit solution: m = 0.6 s, p = 0.8 s, q = 0 with
/// s^2 = -1/K, so that m^2 + p^2 = -1/K. `violation` scales m^2 + p^2 by
/// (1 + violation). K must be negative.
ParamValues explicit_params(double violation = 0.0, double K = -1.0);

// ---------------------------------------------------------------------------
// Flow transport

/// Transformed solution u~ = Phi_eps(u) evaluated on the grid. The generator
/// must have u-independent xi, eta, tau. When the pulled-back box leaves
/// `domain`, the grid box is shrunk toward its center and a warning is added.
ResidualReport flow_transport_check(const Field& u, const VectorField& v, double eps,
                                    const GridSpec& grid, const ScalarFn& f, const ParamValues& p,
                                    const std::array<double, 6>& domain, double tol = 1e-6);

/// Same transformation, returned as a field.
Field transported(const Field& u, const VectorField& v, double eps, const ParamValues& p);

// ---------------------------------------------------------------------------
// First integral of zeta2'' = -K c1 exp(zeta2/c)

struct DriftStudy {
  std::vector<double> steps;
  std::vector<double> drift;  // max |E - E0| over the run
  std::vector<double> orders; // log2(drift(k) / drift(k/2))
  bool pass = false;          // every order >= 3.5
};

DriftStudy first_integral_drift(const ParamValues& p, double length = 4.0,
                                const std::vector<double>& steps = {0.2, 0.1, 0.05});

}  // namespace wavesym
