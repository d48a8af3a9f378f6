#include "wavesym/reduction.hpp"

#include "wavesym/format.hpp"

namespace wavesym {

namespace {

Expr P(const char* s) { return parse(s); }

Bindings jet_bindings(const Expr& u) {
  const Expr x = var_x();
  const Expr y = var_y();
  const Expr t = var_t();
  Bindings b;
  b.set(jet_u(), u);
  Expr ux = diff(u, x);
  Expr uy = diff(u, y);
  Expr ut = diff(u, t);
  b.set(jet({1, 0, 0}), ux).set(jet({0, 1, 0}), uy).set(jet({0, 0, 1}), ut);
  b.set(jet({2, 0, 0}), diff(ux, x)).set(jet({0, 2, 0}), diff(uy, y)).set(jet({0, 0, 2}), diff(ut, t));
  return b;
}

std::vector<Expr> terms_of(const Expr& e) {
  if (e.kind() == Kind::Sum) return {e.operands().begin(), e.operands().end()};
  if (e.is_zero()) return {};
  return {e};
}

}  // namespace

FFamily family_for(CaseId c) { return c == CaseId::I ? FFamily::exponential() : FFamily::power(); }

ReductionSpec builtin_reduction(CaseId c, const std::string& generator) {
  ReductionSpec s;
  s.case_id = c;
  s.generator = generator;
  const auto basis = printed_basis(family_for(c));
  const Expr x = var_x();
  const Expr y = var_y();
  const Expr t = var_t();
  const Expr u = jet_u();
  static const char* kGens[5] = {"v1", "v2", "v3", "v4", "v5"};
  int idx = -1;
  for (int i = 0; i < 5; ++i) {
    if (generator == kGens[i]) idx = i;
  }
  if (idx < 0) throw std::invalid_argument("unknown generator " + generator);
  s.field = basis[static_cast<std::size_t>(idx)];

  if (idx == 1 || idx == 2 || idx == 4) {
    s.trivial = true;
    static const char* kNamesI[3] = {"lambda", "mu", "nu"};
    static const char* kNamesII[3] = {"r", "m", "n"};
    int k = idx == 1 ? 0 : (idx == 2 ? 1 : 2);
    s.trivial_name = c == CaseId::I ? kNamesI[k] : kNamesII[k];
    if (idx == 1) s.invariants = {y, t, u};
    if (idx == 2) s.invariants = {x, t, u};
    if (idx == 4) s.invariants = {x, y, u};
    return s;
  }

  if (c == CaseId::I && idx == 0) {
    s.invariants = {y / x, t};
    s.new_vars = {parameter("r"), parameter("s")};
    s.dependent = "omega";
    s.dependent_invariant = P("u - 2*c*ln(x)");
    s.ansatz = P("omega(y/x, t) + 2*c*ln(x)");
    s.change.set(y, P("r*x")).set(t, parameter("s"));
    s.eliminated = x;
    s.lead = P("D[0,2](omega)(r,s)");
    s.printed_form =
        "D[0,2](omega)(r,s) - K*exp(omega(r,s)/c)*((1+r^2)*D[2,0](omega)(r,s) + 2*r*D[1,0](omega)(r,s) - 2*c)";
  } else if (c == CaseId::I) {
    s.invariants = {x, y};
    s.dependent = "h";
    s.dependent_invariant = P("exp(-2*c*ln(t) - u)");
    s.ansatz = P("2*c*ln(h(x,y)/t)");
    s.eliminated = t;
    s.lead = P("D[2,0](h)(x,y)");
    s.printed_form = "1/K - h(x,y)*(D[2,0](h)(x,y) + D[0,2](h)(x,y)) + D[1,0](h)(x,y)^2 + D[0,1](h)(x,y)^2";
  } else if (idx == 0) {
    s.invariants = {t, y / x};
    s.new_vars = {parameter("q"), parameter("p")};
    s.dependent = "vartheta";
    s.dependent_invariant = P("(u + e2/e1)*exp(-2*e1*ln(x))");
    s.ansatz = P("vartheta(t, y/x)*exp(2*e1*ln(x)) - e2/e1");
    s.printed_ansatz = P("vartheta(t, y/x)*exp(2*e1*ln(x)) + e2/e1");
    s.change.set(y, P("p*x")).set(t, parameter("q"));
    s.eliminated = x;
    s.lead = P("D[2,0](vartheta)(q,p)");
    // Printed with the roles of the two slots exchanged; rewritten here so
    // that q is the t-slot, matching the ansatz.
    s.printed_form =
        "D[2,0](vartheta)(q,p) - L*exp(ln(vartheta(q,p))/e1)*((p^2+1)*D[0,2](vartheta)(q,p) + "
        "2*p*(1-2*e1)*D[0,1](vartheta)(q,p) + 2*e1*(2*e1-1)*vartheta(q,p))";
    s.printed_labels_swapped = true;
  } else {
    s.invariants = {x, y};
    s.dependent = "l";
    s.dependent_invariant = P("(u + e2/e1)*exp(2*e1*ln(t))");
    s.ansatz = P("l(x,y)*exp(-2*e1*ln(t)) - e2/e1");
    s.eliminated = t;
    s.lead = P("D[2,0](l)(x,y)");
    s.printed_form = "L*(D[2,0](l)(x,y) + D[0,2](l)(x,y))*exp((1/e1 - 1)*ln(l(x,y))) - 2*e1*(2*e1+1)";
  }
  return s;
}

InvarianceReport invariance_check(const ReductionSpec& spec) {
  InvarianceReport r;
  r.ok = true;
  std::vector<Expr> all = spec.invariants;
  if (!spec.trivial) all.push_back(spec.dependent_invariant);
  for (const auto& inv : all) {
    Expr res = normalize(spec.field.apply(inv));
    r.ok = r.ok && res.is_zero();
    r.residuals.push_back(res);
  }
  if (spec.trivial) return r;
  Expr q = characteristic(spec.field);
  r.characteristic_residual = normalize(substitute(q, jet_bindings(spec.ansatz)));
  r.ok = r.ok && r.characteristic_residual.is_zero();
  if (!spec.printed_ansatz.is_zero()) {
    r.printed_characteristic_residual = normalize(substitute(q, jet_bindings(spec.printed_ansatz)));
    r.printed_ok = r.printed_characteristic_residual.is_zero();
  }
  return r;
}

Expr model_residual(const Expr& u, const FFamily& fam) {
  Expr lap = jet({2, 0, 0}) + jet({0, 2, 0});
  Expr eq = jet({0, 0, 2}) - fam.f() * lap;
  return substitute(eq, jet_bindings(u));
}

ReducedEquation reduce(const ReductionSpec& spec, const FFamily& fam) {
  if (spec.trivial) throw std::invalid_argument("no reduction for " + spec.generator);
  ReducedEquation out;
  Expr r = normalize(substitute(model_residual(spec.ansatz, fam), spec.change));
  auto terms = terms_of(r);
  if (terms.empty()) {
    out.eliminated = true;
    return out;
  }
  std::vector<Expr> dep;
  const Expr& first = terms.front();
  auto take = [&](const Expr& f) {
    if (!depends_on(f, spec.eliminated)) return;
    if (f.kind() != Kind::Exp || f.operand(0).kind() != Kind::Sum) {
      dep.push_back(f);
      return;
    }
    std::vector<Expr> arg;
    for (const auto& a : f.operand(0).operands()) {
      if (depends_on(a, spec.eliminated)) arg.push_back(a);
    }
    dep.push_back(exp(add(std::move(arg))));
  };
  if (first.kind() == Kind::Product) {
    for (const auto& f : first.operands()) take(f);
  } else {
    take(first);
  }
  out.cleared_factor = mul(std::move(dep));
  out.expr = normalize(r / out.cleared_factor);
  out.eliminated = !depends_on(out.expr, spec.eliminated);
  for (const auto& a : atoms_of(out.expr)) {
    if (a.kind() == Kind::Jet) out.eliminated = false;
  }
  return out;
}

PrintedComparison compare_with_printed(const ReductionSpec& spec, const ReducedEquation& eq,
                                       const SampleOptions& opts) {
  PrintedComparison out;
  Expr printed = parse(spec.printed_form);
  auto cmp = compare_up_to_factor(eq.expr, printed, spec.lead, opts);
  if (!cmp.equivalent && spec.case_id == CaseId::II) {
    Expr e1 = parameter("e1");
    Expr absorbed = substitute(printed, parameter("L"), parameter("L") * exp(ln(e1) / e1));
    auto again = compare_up_to_factor(eq.expr, absorbed, spec.lead, opts);
    if (again.equivalent) {
      cmp = again;
      out.needs_absorbed_constant = true;
      out.notes.push_back("matches only after absorbing e1^(1/e1) into L");
    }
  }
  out.equivalent = cmp.equivalent;
  out.constant_factor = cmp.constant_factor;
  out.factor = cmp.factor;
  if (spec.printed_labels_swapped) {
    out.notes.push_back("printed form names the t-slot p and the y/x-slot q; compared with labels exchanged");
  }
  if (!spec.printed_ansatz.is_zero()) {
    out.notes.push_back("printed ansatz shift +e2/e1 is not invariant; derived with -e2/e1");
  }
  if (!out.constant_factor && out.equivalent) {
    out.notes.push_back("overall factor is not constant: " + to_string(out.factor));
  }
  return out;
}

SeparationReport separation_check(CaseId c) {
  SeparationReport rep;
  const Expr a = parameter("_a");
  const Expr b = parameter("_b");
  Expr reduced;
  Bindings split;
  Bindings odes;
  Bindings control;
  if (c == CaseId::I) {
    reduced = reduce(builtin_reduction(c, "v1"), FFamily::exponential()).expr;
    split.define("omega", {a, b}, function("zeta1", {a}) + function("zeta2", {b}));
    Expr z1 = P("zeta1''(r)");
    Expr z2 = P("zeta2''(s)");
    Expr rhs1 = P("(-c1*exp(-zeta1(r)/c) - 2*(r*zeta1'(r) - c))/(r^2 + 1)");
    odes.set(z1, rhs1).set(z2, P("-K*c1*exp(zeta2(s)/c)"));
    control.set(z1, rhs1).set(z2, P("K*c1*exp(zeta2(s)/c)"));
    rep.odes = {"(r^2+1)*zeta1'' + c1*exp(-zeta1/c) + 2*(r*zeta1' - c) = 0", "zeta2'' + K*c1*exp(zeta2/c) = 0"};
  } else {
    reduced = reduce(builtin_reduction(c, "v1"), FFamily::power()).expr;
    reduced = normalize(substitute(reduced, parameter("e1"), Expr(1)));
    split.define("vartheta", {a, b}, function("varsigma1", {a}) * function("varsigma2", {b}));
    Expr s1 = P("varsigma1''(q)");
    Expr s2 = P("varsigma2''(p)");
    Expr rhs2 = P("(2*p*varsigma2'(p) - 2*varsigma2(p) + c_sep/L)/(p^2 + 1)");
    odes.set(s1, P("c_sep*varsigma1(q)^2")).set(s2, rhs2);
    control.set(s1, P("-c_sep*varsigma1(q)^2")).set(s2, rhs2);
    rep.odes = {"varsigma1'' - c_sep*varsigma1^2 = 0",
                "(p^2+1)*varsigma2'' - 2*p*varsigma2' + 2*varsigma2 - c_sep/L = 0"};
  }
  Expr separated = substitute(reduced, split);
  rep.residual = normalize(substitute(separated, odes));
  rep.ok = rep.residual.is_zero();
  rep.control_residual = normalize(substitute(separated, control));
  rep.control_fails = !rep.control_residual.is_zero() && !numeric_zero(rep.control_residual).zero;
  return rep;
}

ExplicitSolutionReport explicit_solution_residual() {
  ExplicitSolutionReport rep;
  const auto spec = builtin_reduction(CaseId::I, "v4");
  const auto fam = FFamily::exponential();
  const Expr m = parameter("m");
  const Expr p = parameter("p");
  const Expr K = parameter("K");
  Bindings lin;
  lin.define("h", {parameter("_a"), parameter("_b")}, m * parameter("_a") + p * parameter("_b") + parameter("q"));
  rep.constraint = normalize(substitute(reduce(spec, fam).expr, lin));
  Bindings origin;
  origin.set(m, Expr()).set(p, Expr());
  Expr a0 = normalize(substitute(rep.constraint, origin));
  Expr b0 = normalize(diff(rep.constraint, m, 2) / 2);
  Expr rest = normalize(rep.constraint - a0 - b0 * (m * m + p * p));
  if (!rest.is_zero()) throw std::logic_error("constraint is not a function of m^2 + p^2");
  rep.derived_value = normalize(-a0 / b0);
  rep.printed_value = pow(K, -1);
  rep.agrees_with_printed = normalize(rep.derived_value - rep.printed_value).is_zero();

  // Solve derived_value = m^2 + p^2 for K; derived_value is a multiple of 1/K.
  Expr k_factor = normalize(rep.derived_value * K);
  if ((k_factor.flags() & kHasParam) != 0 && depends_on(k_factor, K)) {
    throw std::logic_error("derived constraint is not proportional to 1/K");
  }
  Expr k_value = normalize(k_factor / (m * m + p * p));
  rep.solution = P("2*c*ln((m*x + p*y + q)/t)");
  rep.full_residual = normalize(substitute(model_residual(rep.solution, fam), K, k_value));
  rep.exact = rep.full_residual.is_zero();
  return rep;
}

}  // namespace wavesym
