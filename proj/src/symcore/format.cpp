#include "wavesym/format.hpp"

#include <cctype>
#include <ostream>
#include <sstream>

namespace wavesym {

namespace {

std::string rational_str(const Rational& q) { return q.get_str(); }

bool needs_parens_as_base(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      return e.value() < 0 || e.value().get_den() != 1;
    case Kind::BaseVar:
    case Kind::Parameter:
    case Kind::Jet:
    case Kind::Function:
    case Kind::Exp:
    case Kind::Ln:
      return false;
    default:
      return true;
  }
}

void write(std::ostream& os, const Expr& e);

void write_exponent(std::ostream& os, const Rational& q) {
  if (q.get_den() == 1 && q > 0) {
    os << '^' << rational_str(q);
  } else {
    os << "^(" << rational_str(q) << ')';
  }
}

void write_factor(std::ostream& os, const Expr& f) {
  if (f.kind() == Kind::Sum) {
    os << '(';
    write(os, f);
    os << ')';
  } else {
    write(os, f);
  }
}

void write_product(std::ostream& os, const Expr& e) {
  auto ops = e.operands();
  std::size_t start = 0;
  if (ops[0].is_number()) {
    const Rational& c = ops[0].value();
    start = 1;
    if (c == -1) {
      os << '-';
    } else if (c.get_den() != 1 && c < 0) {
      os << "-(" << rational_str(-c) << ")*";
    } else if (c.get_den() != 1) {
      os << '(' << rational_str(c) << ")*";
    } else {
      os << rational_str(c) << '*';
    }
  }
  for (std::size_t i = start; i < ops.size(); ++i) {
    if (i > start) os << '*';
    write_factor(os, ops[i]);
  }
}

void write_function(std::ostream& os, const Expr& e) {
  const auto& idx = e.index();
  int order = 0;
  for (int c : idx) order += c;
  if (order == 0) {
    os << e.name();
  } else if (idx.size() == 1) {
    os << e.name() << std::string(static_cast<std::size_t>(order), '\'');
  } else {
    os << "D[";
    for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i];
    os << "](" << e.name() << ')';
  }
  os << '(';
  auto args = e.operands();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ',';
    write(os, args[i]);
  }
  os << ')';
}

void write(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      os << rational_str(e.value());
      break;
    case Kind::BaseVar:
    case Kind::Parameter:
      os << e.name();
      break;
    case Kind::Jet: {
      os << 'u';
      const auto& idx = e.index();
      if (jet_order(e) > 0) {
        os << '_';
        static const char letters[3] = {'x', 'y', 't'};
        for (int k = 0; k < 3; ++k) os << std::string(static_cast<std::size_t>(idx[k]), letters[k]);
      }
      break;
    }
    case Kind::Function:
      write_function(os, e);
      break;
    case Kind::Exp:
      os << "exp(";
      write(os, e.operand(0));
      os << ')';
      break;
    case Kind::Ln:
      os << "ln(";
      write(os, e.operand(0));
      os << ')';
      break;
    case Kind::Power:
      if (needs_parens_as_base(e.operand(0))) {
        os << '(';
        write(os, e.operand(0));
        os << ')';
      } else {
        write(os, e.operand(0));
      }
      write_exponent(os, e.value());
      break;
    case Kind::Product:
      write_product(os, e);
      break;
    case Kind::Sum: {
      bool first = true;
      for (const auto& t : e.operands()) {
        auto [c, rest] = split_coefficient(t);
        if (first) {
          write(os, t);
          first = false;
        } else if (c < 0) {
          os << " - ";
          write(os, t.is_number() ? number(-c) : mul({number(-c), rest}));
        } else {
          os << " + ";
          write(os, t);
        }
      }
      break;
    }
  }
}

// ---------------------------------------------------------------------------

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& opts) : s_(text), opts_(opts) {}

  Expr run() {
    Expr e = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  char peek() {
    skip();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(-term());
      } else {
        break;
      }
    }
    return add(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        std::size_t at = pos_;
        Expr d = unary();
        try {
          acc = acc / d;
        } catch (const SingularError&) {
          pos_ = at;
          fail("division by zero");
        }
      } else {
        break;
      }
    }
    return acc;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!accept('^')) return base;
    Expr ex;
    if (accept('-')) {
      ex = -primary();
    } else {
      ex = primary();
    }
    if (ex.is_number()) {
      try {
        return pow(base, ex.value());
      } catch (const SingularError&) {
        fail("0 raised to a negative power");
      }
    }
    return exp(ex * ln(base));
  }

  std::string identifier() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    return std::string(s_.substr(start, pos_ - start));
  }

  Rational numeral() {
    skip();
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    std::string digits(s_.substr(start, pos_ - start));
    mpz_class den = 1;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      std::size_t fs = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string frac(s_.substr(fs, pos_ - fs));
      digits += frac;
      for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    }
    if (digits.empty()) fail("malformed number");
    int exp10 = 0;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) neg = s_[pos_++] == '-';
      std::size_t es = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (es == pos_) {
        pos_ = save;
      } else {
        exp10 = std::stoi(std::string(s_.substr(es, pos_ - es)));
        if (neg) exp10 = -exp10;
      }
    }
    Rational q(mpz_class(digits), den);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
    if (exp10 > 0) q *= Rational(scale);
    if (exp10 < 0) q /= Rational(scale);
    q.canonicalize();
    return q;
  }

  std::vector<Expr> arguments() {
    expect('(');
    std::vector<Expr> args;
    if (accept(')')) return args;
    do {
      args.push_back(expr());
    } while (accept(','));
    expect(')');
    return args;
  }

  Expr derivative_form() {
    expect('[');
    MultiIndex idx;
    do {
      skip();
      std::size_t at = pos_;
      Rational n = numeral();
      if (n.get_den() != 1 || n < 0) {
        pos_ = at;
        fail("derivative counts must be non-negative integers");
      }
      idx.push_back(static_cast<int>(n.get_num().get_si()));
    } while (accept(','));
    expect(']');
    expect('(');
    std::string name = identifier();
    if (name.empty()) fail("expected function name");
    expect(')');
    std::size_t at = pos_;
    auto args = arguments();
    if (args.size() != idx.size()) {
      pos_ = at;
      fail("derivative index of " + name + " does not match its arity");
    }
    return function(name, std::move(args), std::move(idx));
  }

  Expr jet_from_name(const std::string& name, std::size_t at) {
    MultiIndex idx{0, 0, 0};
    for (std::size_t i = 2; i < name.size(); ++i) {
      switch (name[i]) {
        case 'x':
          ++idx[0];
          break;
        case 'y':
          ++idx[1];
          break;
        case 't':
          ++idx[2];
          break;
        default:
          pos_ = at;
          fail("bad jet name " + name);
      }
    }
    return jet(idx);
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.') return number(numeral());
    if (ch == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!(std::isalpha(static_cast<unsigned char>(ch)) || ch == '_')) {
      fail("unexpected '" + std::string(1, ch) + "'");
    }
    std::size_t at = pos_;
    std::string name = identifier();
    if (name == "D" && peek() == '[') return derivative_form();
    if (name == "exp" || name == "ln") {
      auto args = arguments();
      if (args.size() != 1) {
        pos_ = at;
        fail(name + " takes one argument");
      }
      return name == "exp" ? exp(args[0]) : ln(args[0]);
    }
    if (pos_ < s_.size() && s_[pos_] == '\'') {
      int primes = 0;
      while (pos_ < s_.size() && s_[pos_] == '\'') {
        ++primes;
        ++pos_;
      }
      auto args = arguments();
      if (args.size() != 1) {
        pos_ = at;
        fail("primes are only allowed on functions of one argument");
      }
      return function(name, std::move(args), MultiIndex{primes});
    }
    if (peek() == '(') return function(name, arguments());
    if (name == "x") return var_x();
    if (name == "y") return var_y();
    if (name == "t") return var_t();
    if (name == "u") return jet_u();
    if (name.size() > 2 && name[0] == 'u' && name[1] == '_') return jet_from_name(name, at);
    if (opts_.parameters.count(name) != 0 || opts_.auto_parameters) return parameter(name);
    pos_ = at;
    fail("unknown symbol '" + name + "'");
  }

  std::string_view s_;
  const ParseOptions& opts_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  write(os, e);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  write(os, e);
  return os;
}

Expr parse(std::string_view text, const ParseOptions& opts) { return Parser(text, opts).run(); }

}  // namespace wavesym
