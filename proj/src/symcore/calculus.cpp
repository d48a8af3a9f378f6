#include "wavesym/calculus.hpp"

#include <set>
#include <unordered_map>

#include "wavesym/format.hpp"

namespace wavesym {

namespace {

std::uint8_t atom_flag(const Expr& a) {
  switch (a.kind()) {
    case Kind::BaseVar:
      return a.flags();
    case Kind::Parameter:
      return kHasParam;
    case Kind::Jet:
      return jet_order(a) == 0 ? kHasU : kHasJet;
    case Kind::Function:
      return kHasFunction;
    default:
      throw std::invalid_argument("not an atom: " + to_string(a));
  }
}

class Differentiator {
 public:
  explicit Differentiator(const Expr& var) : var_(var), flag_(atom_flag(var)) {}

  Expr operator()(const Expr& e) {
    if ((e.flags() & flag_) == 0) return Expr();
    if (e == var_) return Expr(1);
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr r = compute(e);
    memo_.emplace(e.get(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Number:
      case Kind::BaseVar:
      case Kind::Parameter:
      case Kind::Jet:
        return Expr();
      case Kind::Function: {
        std::vector<Expr> terms;
        auto args = e.operands();
        for (std::size_t i = 0; i < args.size(); ++i) {
          Expr da = (*this)(args[i]);
          if (da.is_zero()) continue;
          MultiIndex idx = e.index();
          ++idx[i];
          terms.push_back(mul({function(e.name(), std::vector<Expr>(args.begin(), args.end()), idx), da}));
        }
        return add(std::move(terms));
      }
      case Kind::Exp:
        return mul({e, (*this)(e.operand(0))});
      case Kind::Ln:
        return mul({(*this)(e.operand(0)), pow(e.operand(0), -1)});
      case Kind::Power: {
        Expr db = (*this)(e.operand(0));
        if (db.is_zero()) return Expr();
        return mul({number(e.value()), pow(e.operand(0), e.value() - 1), db});
      }
      case Kind::Product: {
        auto ops = e.operands();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < ops.size(); ++i) {
          Expr d = (*this)(ops[i]);
          if (d.is_zero()) continue;
          std::vector<Expr> fs;
          fs.reserve(ops.size());
          for (std::size_t j = 0; j < ops.size(); ++j) fs.push_back(j == i ? d : ops[j]);
          terms.push_back(mul(std::move(fs)));
        }
        return add(std::move(terms));
      }
      case Kind::Sum: {
        std::vector<Expr> terms;
        for (const auto& op : e.operands()) terms.push_back((*this)(op));
        return add(std::move(terms));
      }
    }
    return Expr();
  }

  Expr var_;
  std::uint8_t flag_;
  std::unordered_map<const Node*, Expr> memo_;
};

class Substituter {
 public:
  explicit Substituter(const Bindings& b) : b_(b) {
    for (const auto& [k, v] : b.atoms) mask_ |= atom_flag(k);
    if (!b.functions.empty()) mask_ |= kHasFunction;
  }

  Expr operator()(const Expr& e) {
    if ((e.flags() & mask_) == 0) return e;
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    Expr r = compute(e);
    memo_.emplace(e.get(), r);
    return r;
  }

 private:
  Expr compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Number:
        return e;
      case Kind::BaseVar:
      case Kind::Parameter:
      case Kind::Jet: {
        auto it = b_.atoms.find(e);
        return it == b_.atoms.end() ? e : it->second;
      }
      case Kind::Function: {
        if (auto it = b_.atoms.find(e); it != b_.atoms.end()) return it->second;
        std::vector<Expr> args;
        for (const auto& a : e.operands()) args.push_back((*this)(a));
        auto rule = b_.functions.find(e.name());
        if (rule == b_.functions.end()) return function(e.name(), std::move(args), e.index());
        const FunctionRule& fr = rule->second;
        if (fr.formals.size() != args.size()) {
          throw std::invalid_argument("arity mismatch substituting " + e.name());
        }
        Expr body = fr.body;
        for (std::size_t i = 0; i < args.size(); ++i) body = diff(body, fr.formals[i], e.index()[i]);
        Bindings inner;
        for (std::size_t i = 0; i < args.size(); ++i) inner.atoms[fr.formals[i]] = args[i];
        return substitute(body, inner);
      }
      case Kind::Exp:
        return exp((*this)(e.operand(0)));
      case Kind::Ln:
        return ln((*this)(e.operand(0)));
      case Kind::Power:
        return pow((*this)(e.operand(0)), e.value());
      case Kind::Product: {
        std::vector<Expr> ops;
        for (const auto& op : e.operands()) ops.push_back((*this)(op));
        return mul(std::move(ops));
      }
      case Kind::Sum: {
        std::vector<Expr> ops;
        for (const auto& op : e.operands()) ops.push_back((*this)(op));
        return add(std::move(ops));
      }
    }
    return e;
  }

  const Bindings& b_;
  std::uint8_t mask_ = 0;
  std::unordered_map<const Node*, Expr> memo_;
};

void gather_atoms(const Expr& e, std::set<Expr, ExprLess>& out) {
  if (e.is_atom()) out.insert(e);
  if (e.kind() == Kind::Number || e.kind() == Kind::BaseVar || e.kind() == Kind::Parameter ||
      e.kind() == Kind::Jet) {
    return;
  }
  for (const auto& op : e.operands()) gather_atoms(op, out);
}

std::vector<Expr> terms_of(const Expr& e) {
  if (e.kind() == Kind::Sum) return {e.operands().begin(), e.operands().end()};
  if (e.is_zero()) return {};
  return {e};
}

std::vector<Expr> factors_of(const Expr& t) {
  if (t.kind() == Kind::Product) return {t.operands().begin(), t.operands().end()};
  return {t};
}

bool depends_on_any(const Expr& e, const std::vector<Expr>& vars) {
  for (const auto& v : vars) {
    if (depends_on(e, v)) return true;
  }
  return false;
}

}  // namespace

Expr diff(const Expr& e, const Expr& var) { return Differentiator(var)(e); }

Expr diff(const Expr& e, const Expr& var, int times) {
  Expr r = e;
  for (int i = 0; i < times && !r.is_zero(); ++i) r = diff(r, var);
  return r;
}

Expr substitute(const Expr& e, const Bindings& b) {
  if (b.atoms.empty() && b.functions.empty()) return e;
  return Substituter(b)(e);
}

Expr substitute(const Expr& e, const Expr& atom, const Expr& value) {
  Bindings b;
  b.atoms[atom] = value;
  return substitute(e, b);
}

bool depends_on(const Expr& e, const Expr& atom) {
  if ((e.flags() & atom_flag(atom)) == 0) return false;
  if (e == atom) return true;
  if (e.kind() == Kind::Number || e.kind() == Kind::BaseVar || e.kind() == Kind::Parameter ||
      e.kind() == Kind::Jet) {
    return false;
  }
  for (const auto& op : e.operands()) {
    if (depends_on(op, atom)) return true;
  }
  return false;
}

std::vector<Expr> atoms_of(const Expr& e) {
  std::set<Expr, ExprLess> s;
  gather_atoms(e, s);
  return {s.begin(), s.end()};
}

std::map<Expr, Expr, ExprLess> collect(const Expr& e, const std::vector<Expr>& vars) {
  std::map<Expr, std::vector<Expr>, ExprLess> acc;
  for (const auto& t : terms_of(e)) {
    std::vector<Expr> mono;
    std::vector<Expr> coeff;
    for (const auto& f : factors_of(t)) {
      bool is_var = false;
      for (const auto& v : vars) {
        if (f == v || (f.kind() == Kind::Power && f.operand(0) == v && f.value() > 0 &&
                       f.value().get_den() == 1)) {
          is_var = true;
          break;
        }
      }
      if (is_var) {
        mono.push_back(f);
      } else {
        if (depends_on_any(f, vars)) {
          throw NotPolynomialError("not polynomial in the requested variables: " + to_string(f));
        }
        coeff.push_back(f);
      }
    }
    acc[mul(std::move(mono))].push_back(mul(std::move(coeff)));
  }
  std::map<Expr, Expr, ExprLess> out;
  for (auto& [k, v] : acc) {
    Expr c = normalize(add(std::move(v)));
    if (!c.is_zero()) out.emplace(k, c);
  }
  return out;
}

std::map<Expr, Expr, ExprLess> separate(const Expr& e, const std::vector<Expr>& vars) {
  std::map<Expr, std::vector<Expr>, ExprLess> acc;
  for (const auto& t : terms_of(e)) {
    std::vector<Expr> key;
    std::vector<Expr> coeff;
    for (const auto& f : factors_of(t)) {
      if (!depends_on_any(f, vars)) {
        coeff.push_back(f);
        continue;
      }
      if (f.kind() == Kind::Exp && f.operand(0).kind() == Kind::Sum) {
        std::vector<Expr> dep;
        std::vector<Expr> indep;
        for (const auto& a : f.operand(0).operands()) {
          (depends_on_any(a, vars) ? dep : indep).push_back(a);
        }
        key.push_back(exp(add(std::move(dep))));
        if (!indep.empty()) coeff.push_back(exp(add(std::move(indep))));
        continue;
      }
      key.push_back(f);
    }
    acc[mul(std::move(key))].push_back(mul(std::move(coeff)));
  }
  std::map<Expr, Expr, ExprLess> out;
  for (auto& [k, v] : acc) {
    Expr c = normalize(add(std::move(v)));
    if (!c.is_zero()) out.emplace(k, c);
  }
  return out;
}

std::pair<Expr, Expr> affine_split(const Expr& e, const Expr& var) {
  Expr a = diff(e, var);
  if (depends_on(a, var)) {
    throw NotPolynomialError("not affine in " + to_string(var) + ": " + to_string(e));
  }
  return {a, substitute(e, var, Expr())};
}

}  // namespace wavesym
