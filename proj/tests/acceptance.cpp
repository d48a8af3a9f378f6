// One line per acceptance criterion. Exit status is 0 when every criterion
// passes, or, with --known-failures, when exactly the listed ones fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "random_expr.hpp"
#include "wavesym/calculus.hpp"
#include "wavesym/detsys.hpp"
#include "wavesym/format.hpp"
#include "wavesym/liealg.hpp"
#include "wavesym/numeric.hpp"
#include "wavesym/reduction.hpp"
#include "wavesym/verify.hpp"

using namespace wavesym;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

Outcome determining_system() {
  const auto fam = FFamily::generic();
  auto space = ansatz_solve(fam, 2);
  std::set<std::string> bad;
  for (const auto& v : space.basis) {
    for (const auto& c : check_printed_conditions(v, fam)) {
      if (!c.satisfied) bad.insert(c.label);
    }
  }
  std::string d = std::to_string(space.basis.size()) + " solution fields, 13 printed conditions";
  if (!bad.empty()) {
    d += "; not implied:";
    for (const auto& l : bad) d += " " + l;
  }
  return {bad.empty(), d};
}

Outcome classification(const FFamily& fam) {
  auto s = ansatz_solve(fam, 2);
  const auto printed = printed_basis(fam);
  const bool span = s.basis.size() == 5 && same_span(s.basis, printed);
  bool contained = true;
  for (const auto& v : printed) contained = contained && in_span(s.basis, v);
  std::ostringstream os;
  os << "dimension " << s.basis.size() << ", certified " << (s.certified ? "yes" : "no")
     << ", printed fields contained " << (contained ? "yes" : "no");
  return {span && s.certified, os.str()};
}

Outcome tables() {
  auto ti = commutator_table(printed_basis(FFamily::exponential()));
  auto tii = commutator_table(printed_basis(FFamily::power()));
  auto ji = jacobi_check(printed_basis(FFamily::exponential()));
  auto jii = jacobi_check(printed_basis(FFamily::power()));
  const bool ok = ti == reference_table() && tii == reference_table() && ti == tii && ji.zero == ji.triples &&
                  jii.zero == jii.triples;
  std::ostringstream os;
  os << "jacobi " << ji.zero << "/" << ji.triples << " and " << jii.zero << "/" << jii.triples;
  return {ok, os.str()};
}

Outcome reductions() {
  bool ok = true;
  std::string d;
  bool shift = false, absorbed = false;
  for (auto [c, g] : std::vector<std::pair<CaseId, const char*>>{
           {CaseId::I, "v1"}, {CaseId::I, "v4"}, {CaseId::II, "v1"}, {CaseId::II, "v4"}}) {
    auto spec = builtin_reduction(c, g);
    auto cmp = compare_with_printed(spec, reduce(spec, family_for(c)));
    ok = ok && cmp.equivalent;
    d += std::string(c == CaseId::I ? " i/" : " ii/") + g + (cmp.equivalent ? " ok" : " MISMATCH");
    if (!invariance_check(spec).printed_ok) shift = true;
    if (cmp.needs_absorbed_constant) absorbed = true;
  }
  const bool sign = !explicit_solution_residual().agrees_with_printed;
  d += std::string("; flags: sign ") + (sign ? "yes" : "no") + ", shift " + (shift ? "yes" : "no") +
       ", factor " + (absorbed ? "yes" : "no");
  return {ok && sign && shift && absorbed, d};
}

Outcome separations() {
  auto a = separation_check(CaseId::I);
  auto b = separation_check(CaseId::II);
  return {a.ok && b.ok && a.control_fails && b.control_fails,
          std::string("i ") + (a.ok ? "ok" : "fail") + ", ii " + (b.ok ? "ok" : "fail") + ", controls fail " +
              (a.control_fails && b.control_fails ? "yes" : "no")};
}

Outcome reconstruction() {
  auto p = default_params();
  auto r = verify_reduction_numeric(CaseId::I, "v1", p, GridSpec{});
  bool ok = r.max_residual <= 1e-6 && r.ratios.size() == 2;
  for (double q : r.ratios) ok = ok && q >= 3.5 && q <= 4.5;
  auto drift = first_integral_drift(p);
  bool order = drift.orders.size() == 2;
  for (double o : drift.orders) order = order && o >= 3.5 && o <= 4.5;
  char buf[200];
  std::snprintf(buf, sizeof buf, "max %.2e, ratios %.3f %.3f, drift orders %.2f %.2f", r.max_residual,
                r.ratios.size() > 0 ? r.ratios[0] : 0.0, r.ratios.size() > 1 ? r.ratios[1] : 0.0,
                drift.orders.size() > 0 ? drift.orders[0] : 0.0, drift.orders.size() > 1 ? drift.orders[1] : 0.0);
  return {ok && order, buf};
}

Outcome explicit_solution_check() {
  auto sym = explicit_solution_residual();
  auto p = explicit_params();
  auto good = fd_residual(explicit_solution(p).u, GridSpec{}, numeric_f(FFamily::exponential(), p));
  auto q = explicit_params(0.1);
  auto bad = fd_residual(explicit_solution(q).u, GridSpec{}, numeric_f(FFamily::exponential(), q));
  char buf[200];
  std::snprintf(buf, sizeof buf, "m^2+p^2 = %s, symbolic %s, fd %.2e, violated %.2e", to_string(sym.derived_value).c_str(),
                sym.exact ? "0" : "nonzero", good.max_residual, bad.max_residual);
  return {sym.exact && good.max_residual <= 1e-6 && bad.max_residual >= 1e-3, buf};
}

Outcome transport() {
  auto p = explicit_params();
  auto sol = explicit_solution(p);
  auto f = numeric_f(FFamily::exponential(), p);
  GridSpec g;
  const std::array<double, 6> dom{0.1, 100, 0.1, 100, 0.1, 100};
  auto base = fd_residual(sol.u, g, f);
  double worst = 0.0;
  for (const auto& v : printed_basis(FFamily::exponential())) {
    auto r = flow_transport_check(sol.u, v, 0.3, g, f, p, dom);
    worst = std::max(worst, r.max_residual / base.max_residual);
  }
  auto ctl = flow_transport_check(sol.u, VectorField{0, 0, 0, jet_u()}, 0.3, g, f, p, dom);
  const double ctl_ratio = ctl.max_residual / base.max_residual;
  char buf[200];
  std::snprintf(buf, sizeof buf, "worst ratio %.2f, control ratio %.2e", worst, ctl_ratio);
  return {worst <= 10.0 && ctl_ratio >= 1e3, buf};
}

Outcome invariants() {
  using testing::Gen;
  using testing::kInstances;
  const Axis axes[3] = {Axis::X, Axis::Y, Axis::T};
  int fail[5] = {0, 0, 0, 0, 0};
  Gen g(0xacce);
  for (int n = 0; n < kInstances; ++n) {
    VectorField v = g.field();
    for (const auto& a : atoms_of(prolong_coeff_second(v, axes[g.pick(3)], axes[g.pick(3)]))) {
      if (a.kind() == Kind::Jet && jet_order(a) > 2) ++fail[0];
    }
    Expr e = g.expr(3);
    Axis a = axes[g.pick(3)], b = axes[g.pick(3)];
    if (!is_zero(total_derivative(total_derivative(e, a), b) - total_derivative(total_derivative(e, b), a))) {
      ++fail[1];
    }
    Expr r = g.expr(4);
    if (parse(to_string(r)) != r) ++fail[2];
    Expr w = normalize(g.expr(4) * pow(g.denominator(2), -1));
    if (normalize(w) != w) ++fail[3];
    Expr p = g.expr(3, false), q = g.expr(3, false);
    if (!numeric_zero(normalize(p * q) - p * q).zero) ++fail[4];
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "%d instances each; failures %d %d %d %d %d", kInstances, fail[0], fail[1],
                fail[2], fail[3], fail[4]);
  return {fail[0] + fail[1] + fail[2] + fail[3] + fail[4] == 0, buf};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> known;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--known-failures" && i + 1 < argc) {
      std::stringstream ss(argv[++i]);
      for (std::string tok; std::getline(ss, tok, ',');) known.insert(std::stoi(tok));
    }
  }
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"determining system fidelity", determining_system},
      {"case (i) classification", [] { return classification(FFamily::exponential()); }},
      {"case (ii) classification", [] { return classification(FFamily::power()); }},
      {"commutator tables", tables},
      {"reduced equations", reductions},
      {"separated solutions", separations},
      {"numeric reconstruction", reconstruction},
      {"explicit solution", explicit_solution_check},
      {"symmetry transport", transport},
      {"engine invariants", invariants},
  };
  std::set<int> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) failed.insert(int(i + 1));
    std::printf("criterion %2zu %s: %s (%s; %.2fs)\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first,
                o.detail.c_str(), secs);
  }
  if (!known.empty()) {
    std::printf("known failures:");
    for (int k : known) std::printf(" %d", k);
    std::printf("\n");
    return failed == known ? 0 : 1;
  }
  return failed.empty() ? 0 : 1;
}
