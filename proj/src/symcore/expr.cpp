#include "wavesym/expr.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <unordered_map>
#include <utility>

namespace wavesym {

struct Node {
  Kind kind{Kind::Number};
  Rational value;
  std::string name;
  MultiIndex index;
  std::vector<Expr> ops;
  std::size_t hash{0};
  std::uint8_t flags{0};
};

namespace {

inline void mix(std::size_t& h, std::size_t v) {
  h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6U) + (h >> 2U);
}

std::size_t hash_rational(const Rational& q) {
  std::size_t h = static_cast<std::size_t>(mpz_get_si(q.get_num_mpz_t()));
  mix(h, static_cast<std::size_t>(mpz_get_si(q.get_den_mpz_t())));
  mix(h, mpz_size(q.get_num_mpz_t()));
  return h;
}

}  // namespace

Expr make_node(Node&& n) {
  std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
  std::uint8_t flags = 0;
  switch (n.kind) {
    case Kind::Number:
      mix(h, hash_rational(n.value));
      break;
    case Kind::BaseVar:
      mix(h, std::hash<std::string>{}(n.name));
      flags = n.name == "x" ? kHasX : (n.name == "y" ? kHasY : kHasT);
      break;
    case Kind::Parameter:
      mix(h, std::hash<std::string>{}(n.name));
      flags = kHasParam;
      break;
    case Kind::Jet: {
      int order = 0;
      for (int c : n.index) {
        mix(h, static_cast<std::size_t>(c));
        order += c;
      }
      flags = order == 0 ? kHasU : kHasJet;
      break;
    }
    case Kind::Function:
      mix(h, std::hash<std::string>{}(n.name));
      for (int c : n.index) mix(h, static_cast<std::size_t>(c));
      flags = kHasFunction;
      break;
    case Kind::Power:
      mix(h, hash_rational(n.value));
      break;
    default:
      break;
  }
  for (const auto& op : n.ops) {
    mix(h, op.hash());
    flags |= op.flags();
  }
  n.hash = h;
  n.flags = flags;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

namespace {

const Expr& zero_expr() {
  static const Expr z = [] {
    Node n;
    n.kind = Kind::Number;
    n.value = 0;
    return make_node(std::move(n));
  }();
  return z;
}

const Expr& one_expr() {
  static const Expr o = [] {
    Node n;
    n.kind = Kind::Number;
    n.value = 1;
    return make_node(std::move(n));
  }();
  return o;
}

Expr raw(Kind k, std::vector<Expr> ops, Rational value = 0) {
  Node n;
  n.kind = k;
  n.ops = std::move(ops);
  n.value = std::move(value);
  return make_node(std::move(n));
}

}  // namespace

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(int v) : Expr(number(Rational(v))) {}
Expr::Expr(const Rational& v) : Expr(number(v)) {}

Kind Expr::kind() const { return node_->kind; }
const Rational& Expr::value() const { return node_->value; }
const std::string& Expr::name() const { return node_->name; }
const MultiIndex& Expr::index() const { return node_->index; }
std::span<const Expr> Expr::operands() const { return node_->ops; }
std::size_t Expr::hash() const { return node_->hash; }
std::uint8_t Expr::flags() const { return node_->flags; }
bool Expr::is_zero() const { return kind() == Kind::Number && node_->value == 0; }
bool Expr::is_one() const { return kind() == Kind::Number && node_->value == 1; }
bool Expr::is_atom() const {
  switch (kind()) {
    case Kind::BaseVar:
    case Kind::Parameter:
    case Kind::Jet:
    case Kind::Function:
      return true;
    default:
      return false;
  }
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Ordering

namespace {

int cmp_int(long a, long b) { return a < b ? -1 : (a > b ? 1 : 0); }

int cmp_rational(const Rational& a, const Rational& b) {
  int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

int index_total(const MultiIndex& m) { return std::accumulate(m.begin(), m.end(), 0); }

// Lower total order first; within an order, larger leading counts first so
// that u_x < u_y < u_t.
int cmp_index(const MultiIndex& a, const MultiIndex& b) {
  int c = cmp_int(index_total(a), index_total(b));
  if (c != 0) return c;
  c = cmp_int(static_cast<long>(a.size()), static_cast<long>(b.size()));
  if (c != 0) return c;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] > b[i] ? -1 : 1;
  }
  return 0;
}

int cmp_ops(std::span<const Expr> a, std::span<const Expr> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  return cmp_int(static_cast<long>(a.size()), static_cast<long>(b.size()));
}

int compare_nonpower(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  if (a.kind() != b.kind()) {
    return cmp_int(static_cast<long>(a.kind()), static_cast<long>(b.kind()));
  }
  switch (a.kind()) {
    case Kind::Number:
      return cmp_rational(a.value(), b.value());
    case Kind::BaseVar:
    case Kind::Parameter: {
      int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::Jet:
      return cmp_index(a.index(), b.index());
    case Kind::Function: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      c = cmp_ops(a.operands(), b.operands());
      if (c != 0) return c;
      return cmp_index(a.index(), b.index());
    }
    default:
      return cmp_ops(a.operands(), b.operands());
  }
}

}  // namespace

int compare(const Expr& a, const Expr& b) {
  if (a.get() == b.get()) return 0;
  const bool ap = a.kind() == Kind::Power;
  const bool bp = b.kind() == Kind::Power;
  if (!ap && !bp) return compare_nonpower(a, b);
  const Expr& ba = ap ? a.operand(0) : a;
  const Expr& bb = bp ? b.operand(0) : b;
  int c = compare_nonpower(ba, bb);
  if (c != 0) return c;
  static const Rational one(1);
  return cmp_rational(ap ? a.value() : one, bp ? b.value() : one);
}

// ---------------------------------------------------------------------------
// Atoms

Expr number(const Rational& v) {
  Node n;
  n.kind = Kind::Number;
  n.value = v;
  n.value.canonicalize();
  return make_node(std::move(n));
}

Expr parameter(const std::string& name) {
  Node n;
  n.kind = Kind::Parameter;
  n.name = name;
  return make_node(std::move(n));
}

const char* axis_name(Axis a) {
  switch (a) {
    case Axis::X:
      return "x";
    case Axis::Y:
      return "y";
    case Axis::T:
      return "t";
  }
  return "?";
}

Expr base_var(Axis a) {
  static const Expr vars[3] = {
      [] {
        Node n;
        n.kind = Kind::BaseVar;
        n.name = "x";
        return make_node(std::move(n));
      }(),
      [] {
        Node n;
        n.kind = Kind::BaseVar;
        n.name = "y";
        return make_node(std::move(n));
      }(),
      [] {
        Node n;
        n.kind = Kind::BaseVar;
        n.name = "t";
        return make_node(std::move(n));
      }(),
  };
  return vars[static_cast<int>(a)];
}

Expr var_x() { return base_var(Axis::X); }
Expr var_y() { return base_var(Axis::Y); }
Expr var_t() { return base_var(Axis::T); }

Expr jet(const MultiIndex& counts) {
  if (counts.size() != 3) throw std::invalid_argument("jet multi-index needs three slots");
  for (int c : counts) {
    if (c < 0) throw std::invalid_argument("negative jet multi-index");
  }
  Node n;
  n.kind = Kind::Jet;
  n.index = counts;
  return make_node(std::move(n));
}

Expr jet_u() {
  static const Expr u = jet({0, 0, 0});
  return u;
}

int jet_order(const Expr& jet_atom) { return index_total(jet_atom.index()); }

Expr function(const std::string& name, std::vector<Expr> args, MultiIndex index) {
  if (index.empty()) index.assign(args.size(), 0);
  if (index.size() != args.size()) {
    throw std::invalid_argument("derivative index of " + name + " does not match its arity");
  }
  Node n;
  n.kind = Kind::Function;
  n.name = name;
  n.ops = std::move(args);
  n.index = std::move(index);
  return make_node(std::move(n));
}

// ---------------------------------------------------------------------------
// Builders

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_number()) return {term.value(), one_expr()};
  if (term.kind() == Kind::Product && term.operand(0).is_number()) {
    auto ops = term.operands();
    if (ops.size() == 2) return {ops[0].value(), ops[1]};
    return {ops[0].value(), raw(Kind::Product, std::vector<Expr>(ops.begin() + 1, ops.end()))};
  }
  return {Rational(1), term};
}

namespace {

Expr scale_term(const Rational& c, const Expr& rest) {
  if (c == 1) return rest;
  if (rest.is_one()) return number(c);
  std::vector<Expr> ops{number(c)};
  if (rest.kind() == Kind::Product) {
    ops.insert(ops.end(), rest.operands().begin(), rest.operands().end());
  } else {
    ops.push_back(rest);
  }
  return raw(Kind::Product, std::move(ops));
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

Rational floor_rational(const Rational& q) {
  mpz_class f;
  mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(f);
}

// v^n for integer n.
Rational int_power(const Rational& v, const Rational& n) {
  if (!n.get_num().fits_slong_p()) throw std::overflow_error("exponent too large");
  long e = n.get_num().get_si();
  if (e < 0 && v == 0) throw SingularError("0 raised to a negative power");
  unsigned long ue = static_cast<unsigned long>(e < 0 ? -e : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), v.get_num_mpz_t(), ue);
  mpz_pow_ui(den.get_mpz_t(), v.get_den_mpz_t(), ue);
  Rational r = e < 0 ? Rational(den, num) : Rational(num, den);
  r.canonicalize();
  return r;
}

// Exact k-th root of a rational, when one exists in Q.
bool exact_root(const Rational& v, unsigned long k, Rational& out) {
  if (v < 0 && k % 2 == 0) return false;
  mpz_class n = abs(v.get_num());
  mpz_class d = v.get_den();
  mpz_class rn, rd;
  if (mpz_root(rn.get_mpz_t(), n.get_mpz_t(), k) == 0) return false;
  if (mpz_root(rd.get_mpz_t(), d.get_mpz_t(), k) == 0) return false;
  if (v < 0) rn = -rn;
  out = Rational(rn, rd);
  out.canonicalize();
  return true;
}

Expr make_exp(const Expr& arg);

bool is_sum_denominator(const Expr& f) {
  return f.kind() == Kind::Power && f.value() < 0 && f.operand(0).kind() == Kind::Sum;
}

bool has_sum_denominators(const Expr& sum) {
  for (const auto& t : sum.operands()) {
    if (is_sum_denominator(t)) return true;
    if (t.kind() != Kind::Product) continue;
    for (const auto& f : t.operands()) {
      if (is_sum_denominator(f)) return true;
    }
  }
  return false;
}

class ProductBuilder {
 public:
  void absorb(const Expr& e, const Rational& q) {
    if (q == 0) return;
    switch (e.kind()) {
      case Kind::Number:
        absorb_number(e.value(), q);
        break;
      case Kind::Product:
        for (const auto& op : e.operands()) absorb(op, q);
        break;
      case Kind::Power:
        absorb(e.operand(0), e.value() * q);
        break;
      case Kind::Exp:
        exp_terms_.push_back(q == 1 ? e.operand(0) : mul({number(q), e.operand(0)}));
        break;
      case Kind::Sum:
        absorb_sum(e, q);
        break;
      default:
        powers_[e] += q;
        break;
    }
  }

  Expr finish() {
    if (is_zero_) return zero_expr();
    std::vector<Expr> factors;
    if (!exp_terms_.empty()) {
      Expr e = make_exp(add(std::move(exp_terms_)));
      exp_terms_.clear();
      if (e.kind() == Kind::Product) {
        for (const auto& f : e.operands()) {
          if (f.kind() == Kind::Exp) {
            factors.push_back(f);
          } else {
            absorb(f, 1);
          }
        }
      } else if (e.kind() == Kind::Exp) {
        factors.push_back(e);
      } else {
        absorb(e, 1);
      }
      if (is_zero_) return zero_expr();
    }
    for (auto& [base, q] : powers_) {
      if (q == 0) continue;
      if (base.is_number()) {
        fold_number_power(base.value(), q, factors);
        continue;
      }
      factors.push_back(q == 1 ? base : raw(Kind::Power, {base}, q));
    }
    if (coeff_ == 0) return zero_expr();

    // Distribute over a sum raised to a positive integer power, preferring
    // sums whose terms carry negative powers so those can cancel.
    std::size_t pick = factors.size();
    for (std::size_t i = 0; i < factors.size(); ++i) {
      const Expr& f = factors[i];
      const bool plain_sum = f.kind() == Kind::Sum;
      const bool sum_power = f.kind() == Kind::Power && f.operand(0).kind() == Kind::Sum &&
                             is_integer(f.value()) && f.value() > 0;
      if (!plain_sum && !sum_power) continue;
      if (pick == factors.size()) pick = i;
      if (has_sum_denominators(plain_sum ? f : f.operand(0))) {
        pick = i;
        break;
      }
    }
    if (pick != factors.size()) {
      const std::size_t i = pick;
      const Expr& f = factors[i];
      const bool plain_sum = f.kind() == Kind::Sum;
      const Expr sum = plain_sum ? f : f.operand(0);
      const Rational n = plain_sum ? Rational(1) : f.value();
      std::vector<Expr> rest;
      rest.reserve(factors.size() + 1);
      rest.push_back(number(coeff_));
      for (std::size_t j = 0; j < factors.size(); ++j) {
        if (j != i) rest.push_back(factors[j]);
      }
      if (n > 1) rest.push_back(raw(Kind::Power, {sum}, n - 1));
      std::vector<Expr> terms;
      terms.reserve(sum.operands().size());
      for (const auto& s : sum.operands()) {
        std::vector<Expr> fs = rest;
        fs.push_back(s);
        terms.push_back(mul(std::move(fs)));
      }
      return add(std::move(terms));
    }

    std::sort(factors.begin(), factors.end(), ExprLess{});
    if (factors.empty()) return number(coeff_);
    if (coeff_ == 1 && factors.size() == 1) return factors[0];
    std::vector<Expr> ops;
    ops.reserve(factors.size() + 1);
    if (coeff_ != 1) ops.push_back(number(coeff_));
    ops.insert(ops.end(), factors.begin(), factors.end());
    return raw(Kind::Product, std::move(ops));
  }

 private:
  void absorb_number(const Rational& v, const Rational& q) {
    if (v == 0) {
      if (q < 0) throw SingularError("0 raised to a negative power");
      is_zero_ = true;
      return;
    }
    if (v == 1) return;
    if (is_integer(q)) {
      coeff_ *= int_power(v, q);
      return;
    }
    powers_[number(v)] += q;
  }

  // Powers of sums other than positive integers are kept as kernels; the sum
  // is first made primitive (leading non-constant coefficient 1).
  void absorb_sum(const Expr& s, const Rational& q) {
    const Expr* lead = nullptr;
    for (const auto& op : s.operands()) {
      if (!op.is_number()) {
        lead = &op;
        break;
      }
    }
    Rational a = lead != nullptr ? split_coefficient(*lead).first : Rational(1);
    if (a == 1 || (!is_integer(q) && a < 0)) {
      powers_[s] += q;
      return;
    }
    std::vector<Expr> scaled;
    scaled.reserve(s.operands().size());
    Rational inv = 1 / a;
    for (const auto& op : s.operands()) {
      auto [c, rest] = split_coefficient(op);
      scaled.push_back(scale_term(c * inv, rest));
    }
    absorb_number(a, q);
    powers_[add(std::move(scaled))] += q;
  }

  void fold_number_power(const Rational& v, const Rational& q, std::vector<Expr>& factors) {
    Rational n = floor_rational(q);
    Rational frac = q - n;
    coeff_ *= int_power(v, n);
    if (frac == 0) return;
    Rational vp = int_power(v, Rational(frac.get_num()));
    Rational root;
    if (frac.get_den().fits_ulong_p() && exact_root(vp, frac.get_den().get_ui(), root)) {
      coeff_ *= root;
      return;
    }
    factors.push_back(raw(Kind::Power, {number(v)}, frac));
  }

  Rational coeff_{1};
  bool is_zero_{false};
  std::map<Expr, Rational, ExprLess> powers_;
  std::vector<Expr> exp_terms_;
};

Expr make_exp(const Expr& arg) {
  if (arg.is_zero()) return one_expr();
  if (arg.kind() == Kind::Ln) return arg.operand(0);
  std::vector<Expr> terms;
  if (arg.kind() == Kind::Sum) {
    terms.assign(arg.operands().begin(), arg.operands().end());
  } else {
    terms.push_back(arg);
  }
  std::vector<Expr> pulled;
  std::vector<Expr> rest;
  for (const auto& term : terms) {
    if (term.kind() == Kind::Ln) {
      pulled.push_back(term.operand(0));
      continue;
    }
    if (term.kind() == Kind::Product && term.operands().size() == 2 && term.operand(0).is_number() &&
        term.operand(1).kind() == Kind::Ln) {
      pulled.push_back(pow(term.operand(1).operand(0), term.operand(0).value()));
      continue;
    }
    rest.push_back(term);
  }
  if (pulled.empty()) return raw(Kind::Exp, {arg});
  Expr r = add(std::move(rest));
  if (!r.is_zero()) pulled.push_back(raw(Kind::Exp, {r}));
  return mul(std::move(pulled));
}

}  // namespace

Expr add(std::vector<Expr> terms) {
  Rational constant = 0;
  std::map<Expr, Rational, ExprLess> acc;
  std::function<void(const Expr&)> absorb = [&](const Expr& e) {
    switch (e.kind()) {
      case Kind::Number:
        constant += e.value();
        break;
      case Kind::Sum:
        for (const auto& op : e.operands()) absorb(op);
        break;
      default: {
        auto [c, rest] = split_coefficient(e);
        acc[rest] += c;
        break;
      }
    }
  };
  for (const auto& t : terms) absorb(t);
  std::vector<Expr> out;
  out.reserve(acc.size() + 1);
  if (constant != 0) out.push_back(number(constant));
  for (const auto& [rest, c] : acc) {
    if (c != 0) out.push_back(scale_term(c, rest));
  }
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out[0];
  return raw(Kind::Sum, std::move(out));
}

Expr mul(std::vector<Expr> factors) {
  ProductBuilder b;
  for (const auto& f : factors) b.absorb(f, 1);
  return b.finish();
}

Expr pow(const Expr& base, const Rational& exponent) {
  if (exponent == 0) {
    if (base.is_zero()) throw SingularError("0^0");
    return one_expr();
  }
  if (exponent == 1) return base;
  ProductBuilder b;
  b.absorb(base, exponent);
  return b.finish();
}

Expr exp(const Expr& arg) { return make_exp(arg); }

Expr ln(const Expr& arg) {
  if (arg.is_one()) return zero_expr();
  if (arg.kind() == Kind::Exp) return arg.operand(0);
  if (arg.kind() == Kind::Product) {
    // ln(a * exp(b)) = ln(a) + b holds for every real a > 0.
    std::vector<Expr> rest;
    Expr exponent = zero_expr();
    bool found = false;
    for (const auto& f : arg.operands()) {
      if (f.kind() == Kind::Exp) {
        exponent = f.operand(0);
        found = true;
      } else {
        rest.push_back(f);
      }
    }
    if (found) return add({ln(mul(std::move(rest))), exponent});
  }
  return raw(Kind::Ln, {arg});
}

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({number(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, -1)}); }
Expr operator-(const Expr& a) { return mul({number(-1), a}); }

// ---------------------------------------------------------------------------
// Normalization

namespace {

Expr rebuild(const Expr& e, std::unordered_map<const Node*, Expr>& memo) {
  if (e.is_number() || e.kind() == Kind::BaseVar || e.kind() == Kind::Parameter ||
      e.kind() == Kind::Jet) {
    return e;
  }
  if (auto it = memo.find(e.get()); it != memo.end()) return it->second;
  std::vector<Expr> ops;
  ops.reserve(e.operands().size());
  for (const auto& op : e.operands()) ops.push_back(rebuild(op, memo));
  Expr r;
  switch (e.kind()) {
    case Kind::Function:
      r = function(e.name(), std::move(ops), e.index());
      break;
    case Kind::Exp:
      r = exp(ops[0]);
      break;
    case Kind::Ln:
      r = ln(ops[0]);
      break;
    case Kind::Power:
      r = pow(ops[0], e.value());
      break;
    case Kind::Product:
      r = mul(std::move(ops));
      break;
    case Kind::Sum:
      r = add(std::move(ops));
      break;
    default:
      r = e;
      break;
  }
  memo.emplace(e.get(), r);
  return r;
}

void factors_of(const Expr& term, std::vector<Expr>& out) {
  if (term.kind() == Kind::Product) {
    out.assign(term.operands().begin(), term.operands().end());
  } else {
    out.assign(1, term);
  }
}

bool has_sum_denominator(const Expr& sum) {
  std::vector<Expr> fs;
  for (const auto& t : sum.operands()) {
    factors_of(t, fs);
    for (const auto& f : fs) {
      if (f.kind() == Kind::Power && f.operand(0).kind() == Kind::Sum && f.value() < 0) return true;
    }
  }
  return false;
}

// Multiplies through by every sum kernel that appears with a negative
// exponent, until the expression is free of them.
Expr clear_sum_denominators(Expr cur) {
  std::vector<Expr> fs;
  for (int iter = 0; iter < 16; ++iter) {
    if (cur.kind() != Kind::Sum) return cur;
    std::map<Expr, Rational, ExprLess> most_negative;
    for (const auto& t : cur.operands()) {
      factors_of(t, fs);
      for (const auto& f : fs) {
        if (f.kind() == Kind::Power && f.operand(0).kind() == Kind::Sum && f.value() < 0) {
          auto [it, inserted] = most_negative.emplace(f.operand(0), f.value());
          if (!inserted && f.value() < it->second) it->second = f.value();
        }
      }
    }
    if (most_negative.empty()) return cur;
    std::vector<Expr> mult{cur};
    for (const auto& [s, q] : most_negative) mult.push_back(raw(Kind::Power, {s}, -q));
    cur = mul(std::move(mult));
  }
  return cur;
}

}  // namespace

Expr normalize(const Expr& e) {
  std::unordered_map<const Node*, Expr> memo;
  Expr r = rebuild(e, memo);
  if (r.kind() == Kind::Sum && has_sum_denominator(r)) {
    if (clear_sum_denominators(r).is_zero()) return zero_expr();
  }
  return r;
}

bool is_zero(const Expr& e) { return normalize(e).is_zero(); }

std::size_t node_count(const Expr& e) {
  std::size_t n = 1;
  for (const auto& op : e.operands()) n += node_count(op);
  return n;
}

}  // namespace wavesym
