#include "wavesym/detsys.hpp"

#include <map>
#include <mutex>
#include <set>
#include <sstream>

#include "wavesym/calculus.hpp"
#include "wavesym/format.hpp"
#include "wavesym/linalg.hpp"
#include "wavesym/numeric.hpp"

namespace wavesym {

FFamily FFamily::generic() { return FFamily(Type::Generic); }
FFamily FFamily::exponential() { return FFamily(Type::Exponential); }
FFamily FFamily::power() { return FFamily(Type::Power); }

std::string FFamily::label() const {
  switch (type_) {
    case Type::Generic:
      return "generic";
    case Type::Exponential:
      return "exponential";
    case Type::Power:
      return "power";
  }
  return "?";
}

Expr FFamily::f_of(const Expr& arg) const {
  switch (type_) {
    case Type::Generic:
      return function("f", {arg});
    case Type::Exponential:
      return parameter("K") * exp(arg / parameter("c"));
    case Type::Power: {
      Expr e1 = parameter("e1");
      return parameter("L") * exp(ln(e1 * arg + parameter("e2")) / e1);
    }
  }
  return Expr();
}

Expr FFamily::f_u() const {
  if (type_ == Type::Generic) return function("f", {jet_u()}, {1});
  return diff(f(), jet_u());
}

std::vector<Expr> FFamily::parameters() const {
  switch (type_) {
    case Type::Generic:
      return {};
    case Type::Exponential:
      return {parameter("K"), parameter("c")};
    case Type::Power:
      return {parameter("L"), parameter("e1"), parameter("e2")};
  }
  return {};
}

Expr invariance_residual(const VectorField& v, const FFamily& fam) {
  Expr lap = jet({2, 0, 0}) + jet({0, 2, 0});
  return add({prolong_coeff_second(v, Axis::T, Axis::T), -mul({v.phi, fam.f_u(), lap}),
              -mul({fam.f(), prolong_coeff_second(v, Axis::X, Axis::X) +
                                 prolong_coeff_second(v, Axis::Y, Axis::Y)})});
}

namespace {

class OnShell {
 public:
  explicit OnShell(const FFamily& fam) : rhs_(mul({fam.f(), jet({2, 0, 0}) + jet({0, 2, 0})})) {}

  Expr apply(const Expr& e, int depth = 0) {
    if (depth > 8) throw std::logic_error("on-shell substitution did not terminate");
    Bindings b;
    for (const auto& a : atoms_of(e)) {
      if (a.kind() == Kind::Jet && a.index()[2] >= 2) b.atoms[a] = replacement(a.index(), depth);
    }
    if (b.atoms.empty()) return e;
    return substitute(e, b);
  }

 private:
  Expr replacement(const MultiIndex& idx, int depth) {
    if (auto it = memo_.find(idx); it != memo_.end()) return it->second;
    Expr cur = rhs_;
    for (int k = 2; k < idx[2]; ++k) cur = apply(total_derivative(cur, Axis::T), depth + 1);
    for (int k = 0; k < idx[0]; ++k) cur = apply(total_derivative(cur, Axis::X), depth + 1);
    for (int k = 0; k < idx[1]; ++k) cur = apply(total_derivative(cur, Axis::Y), depth + 1);
    memo_.emplace(idx, cur);
    return cur;
  }

  Expr rhs_;
  std::map<MultiIndex, Expr> memo_;
};

std::vector<Expr> derivative_jets(const Expr& e) {
  std::vector<Expr> out;
  for (const auto& a : atoms_of(e)) {
    if (a.kind() == Kind::Jet && jet_order(a) > 0) out.push_back(a);
  }
  return out;
}

bool residual_vanishes(const Expr& r) {
  Expr n = normalize(r);
  if (n.is_zero()) return true;
  SampleOptions opts;
  opts.points = 50;
  opts.tol = 1e-9;
  return numeric_zero(n, opts).zero;
}

}  // namespace

Expr on_shell(const Expr& e, const FFamily& fam) { return OnShell(fam).apply(e); }

DeterminingSystem extract_determining(const VectorField& v, const FFamily& fam) {
  Expr r = on_shell(invariance_residual(v, fam), fam);
  DeterminingSystem sys;
  for (auto& [mono, coeff] : collect(r, derivative_jets(r))) sys.equations.push_back({mono, coeff});
  return sys;
}

std::vector<PrintedCondition> check_printed_conditions(const VectorField& v, const FFamily& fam) {
  const Expr x = var_x();
  const Expr y = var_y();
  const Expr t = var_t();
  const Expr u = jet_u();
  const Expr f = fam.f();
  const Expr fu = fam.f_u();
  auto d = [](const Expr& e, const Expr& a) { return diff(e, a); };
  auto d2 = [](const Expr& e, const Expr& a, const Expr& b) { return diff(diff(e, a), b); };
  const Expr& xi = v.xi;
  const Expr& eta = v.eta;
  const Expr& tau = v.tau;
  const Expr& phi = v.phi;

  std::vector<PrintedCondition> out{
      {"xi_y=xi_u=0", {d(xi, y), d(xi, u)}},
      {"eta_x=eta_u=0", {d(eta, x), d(eta, u)}},
      {"tau_u=0", {d(tau, u)}},
      {"phi_uu=0", {d2(phi, u, u)}},
      {"tau_t=phi_u", {d(tau, t) - d(phi, u)}},
      {"xi_tt", {d2(xi, t, t) - f * (d2(xi, x, x) - 2 * d2(phi, x, u))}},
      {"eta_tt", {d2(eta, t, t) - f * (d2(eta, y, y) - 2 * d2(phi, y, u))}},
      {"tau_tt", {d2(tau, t, t) - f * (d2(tau, x, x) + d2(tau, y, y)) - 2 * d2(phi, t, u)}},
      {"xi_x-tau_t", {fu * phi - 2 * f * (d(xi, x) - d(tau, t))}},
      {"eta_y-tau_t", {fu * phi - 2 * f * (d(eta, y) - d(tau, t))}},
      {"xi_t", {f * d(tau, x) - d(xi, t)}},
      {"eta_t", {f * d(tau, y) - d(eta, t)}},
      {"phi_tt", {d2(phi, t, t) - f * (d2(phi, x, x) + d2(phi, y, y))}},
  };
  for (auto& c : out) {
    c.satisfied = true;
    for (auto& r : c.residuals) {
      r = normalize(r);
      if (!residual_vanishes(r)) c.satisfied = false;
    }
  }
  return out;
}

Expr symmetry_residual(const VectorField& v, const FFamily& fam) {
  return normalize(on_shell(invariance_residual(v, fam), fam));
}

bool is_symmetry(const VectorField& v, const FFamily& fam) { return symmetry_residual(v, fam).is_zero(); }

std::vector<VectorField> printed_basis(const FFamily& fam) {
  const Expr x = var_x();
  const Expr y = var_y();
  const Expr t = var_t();
  const Expr u = jet_u();
  switch (fam.type()) {
    case FFamily::Type::Exponential: {
      Expr c = parameter("c");
      return {{x, y, 0, 2 * c}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, t, -2 * c}, {0, 0, 1, 0}};
    }
    case FFamily::Type::Power: {
      Expr g = parameter("e1") * u + parameter("e2");
      return {{x, y, 0, 2 * g}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, t, -2 * g}, {0, 0, 1, 0}};
    }
    case FFamily::Type::Generic:
      break;
  }
  return {};
}

namespace {

std::vector<Expr> monomials(int degree) {
  std::vector<Expr> out;
  for (int total = 0; total <= degree; ++total) {
    for (int a = total; a >= 0; --a) {
      for (int b = total - a; b >= 0; --b) {
        int c = total - a - b;
        out.push_back(mul({pow(var_x(), a), pow(var_y(), b), pow(var_t(), c)}));
      }
    }
  }
  return out;
}

const DeterminingSystem& generic_system() {
  static const DeterminingSystem sys = extract_determining(opaque_field(), FFamily::generic());
  return sys;
}

std::string row_key(const Row& r) {
  std::ostringstream os;
  for (const auto& e : r) os << e << '|';
  return os.str();
}

}  // namespace

SolutionSpace ansatz_solve(const FFamily& fam, int degree) {
  if (degree < 0) throw std::invalid_argument("ansatz degree must be non-negative");
  SolutionSpace out;
  out.degree = degree;
  const std::vector<Expr> mono = monomials(degree);
  static const char* kNames[5] = {"xi", "eta", "tau", "alpha", "beta"};
  std::vector<Expr> unknowns;
  Expr comps[5];
  for (int k = 0; k < 5; ++k) {
    std::vector<Expr> terms;
    for (std::size_t i = 0; i < mono.size(); ++i) {
      Expr a = parameter(std::string("A_") + kNames[k] + "_" + std::to_string(i));
      unknowns.push_back(a);
      terms.push_back(a * mono[i]);
    }
    comps[k] = add(std::move(terms));
  }
  out.unknowns = unknowns.size();
  const Expr u = jet_u();
  VectorField ansatz{comps[0], comps[1], comps[2], comps[3] * u + comps[4]};

  Bindings rules;
  const std::vector<Expr> formals{var_x(), var_y(), var_t(), u};
  rules.define("xi", formals, ansatz.xi);
  rules.define("eta", formals, ansatz.eta);
  rules.define("tau", formals, ansatz.tau);
  rules.define("phi", formals, ansatz.phi);
  if (fam.type() != FFamily::Type::Generic) {
    Expr w0 = parameter("_w");
    rules.define("f", {w0}, fam.f_of(w0));
  }
  Bindings shift;
  std::vector<Expr> dep{var_x(), var_y(), var_t(), u};
  if (fam.type() == FFamily::Type::Power) {
    Expr w = parameter("w");
    shift.set(u, (w - parameter("e2")) / parameter("e1"));
    dep.back() = w;
  }

  std::map<Expr, std::size_t, ExprLess> column;
  for (std::size_t j = 0; j < unknowns.size(); ++j) column.emplace(unknowns[j], j);
  std::vector<Row> rows;
  std::set<std::string> seen;
  for (const auto& eq : generic_system().equations) {
    Expr e = substitute(substitute(eq.expr, rules), shift);
    for (const auto& [key, coeff] : separate(e, dep)) {
      (void)key;
      Row row(unknowns.size(), Expr());
      for (const auto& [m, c] : collect(coeff, unknowns)) {
        auto it = column.find(m);
        if (it == column.end()) throw std::logic_error("ansatz equation is not linear homogeneous");
        row[it->second] = c;
      }
      Expr lead;
      for (const auto& r : row) {
        if (!r.is_zero()) {
          lead = r;
          break;
        }
      }
      if (lead.is_zero()) continue;
      Expr inv = pow(lead, -1);
      for (auto& r : row) {
        if (!r.is_zero()) r = normalize(r * inv);
      }
      if (seen.insert(row_key(row)).second) rows.push_back(std::move(row));
    }
  }
  out.equations = rows.size();

  for (const auto& vec : nullspace(rows, unknowns.size())) {
    Bindings values;
    for (std::size_t j = 0; j < unknowns.size(); ++j) values.set(unknowns[j], vec[j]);
    VectorField v;
    for (int k = 0; k < 4; ++k) v.component(k) = normalize(substitute(ansatz.component(k), values));
    out.basis.push_back(v);
  }
  out.certified = true;
  for (const auto& v : out.basis) {
    bool ok = is_symmetry(v, fam);
    out.certificate.push_back(ok);
    out.certified = out.certified && ok;
  }
  return out;
}

}  // namespace wavesym
