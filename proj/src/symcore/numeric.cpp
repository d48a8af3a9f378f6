#include "wavesym/numeric.hpp"

#include <cmath>
#include <random>
#include <unordered_map>

#include "wavesym/calculus.hpp"
#include "wavesym/format.hpp"

namespace wavesym {

namespace {

double checked(double v, const char* what) {
  if (!std::isfinite(v)) throw DomainError(std::string("non-finite value in ") + what);
  return v;
}

double real_power(double b, const Rational& q) {
  if (b == 0.0) {
    if (q < 0) throw DomainError("division by zero");
    return 0.0;
  }
  double qd = q.get_d();
  if (b > 0.0) return std::pow(b, qd);
  if (q.get_den() == 1) return std::pow(b, qd);
  if (mpz_even_p(q.get_den_mpz_t())) throw DomainError("even root of a negative number");
  double m = std::pow(-b, qd);
  return mpz_odd_p(q.get_num_mpz_t()) ? -m : m;
}

double safe_ln(double v) {
  if (v <= 0.0) throw DomainError("log of a non-positive number");
  return std::log(v);
}

class Evaluator {
 public:
  explicit Evaluator(const NumericEnv& env) : env_(env) {}

  double operator()(const Expr& e) {
    if (e.is_number()) return e.value().get_d();
    if (auto it = memo_.find(e.get()); it != memo_.end()) return it->second;
    double v = compute(e);
    memo_.emplace(e.get(), v);
    return v;
  }

 private:
  double compute(const Expr& e) {
    switch (e.kind()) {
      case Kind::Number:
        return e.value().get_d();
      case Kind::BaseVar:
      case Kind::Parameter:
      case Kind::Jet: {
        auto it = env_.atoms.find(e);
        if (it == env_.atoms.end()) throw DomainError("unbound symbol " + to_string(e));
        return it->second;
      }
      case Kind::Function: {
        if (auto it = env_.atoms.find(e); it != env_.atoms.end()) return it->second;
        auto fn = env_.functions.find(e.name());
        if (fn == env_.functions.end()) throw DomainError("unbound function " + e.name());
        std::vector<double> args;
        for (const auto& a : e.operands()) args.push_back((*this)(a));
        return checked(fn->second(args, e.index()), "function call");
      }
      case Kind::Exp:
        return checked(std::exp((*this)(e.operand(0))), "exp");
      case Kind::Ln:
        return safe_ln((*this)(e.operand(0)));
      case Kind::Power:
        return checked(real_power((*this)(e.operand(0)), e.value()), "power");
      case Kind::Product: {
        double p = 1.0;
        for (const auto& op : e.operands()) p *= (*this)(op);
        return p;
      }
      case Kind::Sum: {
        double s = 0.0;
        for (const auto& op : e.operands()) s += (*this)(op);
        return s;
      }
    }
    return 0.0;
  }

  const NumericEnv& env_;
  std::unordered_map<const Node*, double> memo_;
};

using Closure = std::function<double(const double*)>;

Closure build(const Expr& e, const std::map<Expr, std::size_t, ExprLess>& slots,
              const std::shared_ptr<NumericEnv>& env) {
  if (auto it = slots.find(e); it != slots.end()) {
    std::size_t i = it->second;
    return [i](const double* p) { return p[i]; };
  }
  switch (e.kind()) {
    case Kind::Number: {
      double v = e.value().get_d();
      return [v](const double*) { return v; };
    }
    case Kind::BaseVar:
    case Kind::Parameter:
    case Kind::Jet: {
      auto it = env->atoms.find(e);
      if (it == env->atoms.end()) throw DomainError("unbound symbol " + to_string(e));
      double v = it->second;
      return [v](const double*) { return v; };
    }
    case Kind::Function: {
      if (auto it = env->atoms.find(e); it != env->atoms.end()) {
        double v = it->second;
        return [v](const double*) { return v; };
      }
      auto fn = env->functions.find(e.name());
      if (fn == env->functions.end()) throw DomainError("unbound function " + e.name());
      std::vector<Closure> args;
      for (const auto& a : e.operands()) args.push_back(build(a, slots, env));
      FunctionImpl impl = fn->second;
      MultiIndex idx = e.index();
      return [args, impl, idx](const double* p) {
        std::vector<double> v;
        v.reserve(args.size());
        for (const auto& a : args) v.push_back(a(p));
        return checked(impl(v, idx), "function call");
      };
    }
    case Kind::Exp: {
      Closure a = build(e.operand(0), slots, env);
      return [a](const double* p) { return checked(std::exp(a(p)), "exp"); };
    }
    case Kind::Ln: {
      Closure a = build(e.operand(0), slots, env);
      return [a](const double* p) { return safe_ln(a(p)); };
    }
    case Kind::Power: {
      Closure a = build(e.operand(0), slots, env);
      Rational q = e.value();
      if (q == 2) {
        return [a](const double* p) {
          double v = a(p);
          return v * v;
        };
      }
      if (q == -1) {
        return [a](const double* p) {
          double v = a(p);
          if (v == 0.0) throw DomainError("division by zero");
          return 1.0 / v;
        };
      }
      return [a, q](const double* p) { return checked(real_power(a(p), q), "power"); };
    }
    case Kind::Product:
    case Kind::Sum: {
      std::vector<Closure> ops;
      for (const auto& op : e.operands()) ops.push_back(build(op, slots, env));
      if (e.kind() == Kind::Product) {
        return [ops](const double* p) {
          double r = 1.0;
          for (const auto& f : ops) r *= f(p);
          return r;
        };
      }
      return [ops](const double* p) {
        double r = 0.0;
        for (const auto& f : ops) r += f(p);
        return r;
      };
    }
  }
  throw DomainError("cannot compile expression");
}

}  // namespace

double eval_numeric(const Expr& e, const NumericEnv& env) { return Evaluator(env)(e); }

CompiledExpr::CompiledExpr(const Expr& e, std::vector<Expr> slots, NumericEnv env)
    : slots_(std::move(slots)) {
  std::map<Expr, std::size_t, ExprLess> index;
  for (std::size_t i = 0; i < slots_.size(); ++i) index.emplace(slots_[i], i);
  fn_ = build(e, index, std::make_shared<NumericEnv>(std::move(env)));
}

ZeroTest numeric_zero(const Expr& e, const SampleOptions& opts) {
  ZeroTest out;
  if (e.is_zero()) {
    out.zero = true;
    out.points = opts.points;
    return out;
  }
  std::vector<Expr> atoms = atoms_of(e);
  std::vector<std::string> names;
  names.reserve(atoms.size());
  for (const auto& a : atoms) names.push_back(to_string(a));
  std::mt19937_64 rng(opts.seed);
  std::vector<Expr> terms;
  if (e.kind() == Kind::Sum) {
    terms.assign(e.operands().begin(), e.operands().end());
  } else {
    terms.push_back(e);
  }
  bool all_small = true;
  for (int attempt = 0; attempt < opts.max_attempts && out.points < opts.points; ++attempt) {
    NumericEnv env;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (auto f = opts.fixed.find(names[i]); f != opts.fixed.end()) {
        env.atoms[atoms[i]] = f->second;
        continue;
      }
      auto [lo, hi] = std::pair{opts.lo, opts.hi};
      if (auto b = opts.boxes.find(names[i]); b != opts.boxes.end()) std::tie(lo, hi) = b->second;
      env.atoms[atoms[i]] = std::uniform_real_distribution<double>(lo, hi)(rng);
    }
    double sum = 0.0;
    double mag = 0.0;
    try {
      Evaluator ev(env);
      for (const auto& t : terms) {
        double v = ev(t);
        sum += v;
        mag += std::fabs(v);
      }
    } catch (const DomainError&) {
      continue;
    }
    double rel = mag > 0.0 ? std::fabs(sum) / mag : 0.0;
    out.max_relative = std::max(out.max_relative, rel);
    if (rel > opts.tol) all_small = false;
    ++out.points;
  }
  out.zero = all_small && out.points == opts.points;
  return out;
}

bool equal_numeric(const Expr& a, const Expr& b, const SampleOptions& opts) {
  return numeric_zero(a - b, opts).zero;
}

FactorComparison compare_up_to_factor(const Expr& derived, const Expr& reference, const Expr& lead,
                                      const SampleOptions& opts) {
  FactorComparison out;
  Expr cd = diff(derived, lead);
  Expr cr = diff(reference, lead);
  if (is_zero(cr) || is_zero(cd)) return out;
  out.factor = cd / cr;
  out.constant_factor =
      (out.factor.flags() & (kHasX | kHasY | kHasT | kHasU | kHasJet | kHasFunction)) == 0;
  out.test = numeric_zero(derived - out.factor * reference, opts);
  out.equivalent = out.test.zero && !numeric_zero(out.factor, opts).zero;
  return out;
}

}  // namespace wavesym
