#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace wavesym {

using Rational = mpq_class;

/// Node kinds of the expression tree. The declaration order is the canonical
/// ordering used for sorting sum terms and product factors.
enum class Kind : std::uint8_t {
  Number,
  BaseVar,
  Parameter,
  Jet,
  Function,
  Ln,
  Exp,
  Power,
  Product,
  Sum,
};

/// The three independent variables of the model.
enum class Axis : std::uint8_t { X = 0, Y = 1, T = 2 };

/// Derivative counts. Jets use three slots (x, y, t); opaque functions use one
/// slot per argument.
using MultiIndex = std::vector<int>;

/// Thrown when a power of zero with a negative exponent is formed.
class SingularError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Node;

/// Immutable, shared expression value. Every Expr produced by the builders in
/// this header is in normal form: sums and products flattened and sorted,
/// rational constants folded, products fully distributed over sums.
class Expr {
 public:
  Expr();  // the number 0
  Expr(int v);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& v);  // NOLINT(google-explicit-constructor)

  Kind kind() const;
  /// Number value, or the exponent of a Power.
  const Rational& value() const;
  /// Parameter, base variable or function name.
  const std::string& name() const;
  const MultiIndex& index() const;
  /// Function arguments, Exp/Ln argument, Power base, Sum/Product operands.
  std::span<const Expr> operands() const;
  const Expr& operand(std::size_t i) const { return operands()[i]; }

  std::size_t hash() const;
  std::uint8_t flags() const;

  bool is(Kind k) const { return kind() == k; }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_zero() const;
  bool is_one() const;
  bool is_atom() const;

  const Node* get() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
  friend Expr make_node(Node&& n);
};

// Presence flags, used to prune differentiation and dependency queries.
inline constexpr std::uint8_t kHasX = 1U << 0U;
inline constexpr std::uint8_t kHasY = 1U << 1U;
inline constexpr std::uint8_t kHasT = 1U << 2U;
inline constexpr std::uint8_t kHasU = 1U << 3U;     // jet of order 0
inline constexpr std::uint8_t kHasJet = 1U << 4U;   // jet of order >= 1
inline constexpr std::uint8_t kHasParam = 1U << 5U;
inline constexpr std::uint8_t kHasFunction = 1U << 6U;

/// Total order on expressions; returns <0, 0, >0.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

// Atoms.
Expr number(const Rational& v);
Expr parameter(const std::string& name);
Expr base_var(Axis a);
Expr jet(const MultiIndex& counts);  // {nx, ny, nt}
Expr jet_u();
Expr function(const std::string& name, std::vector<Expr> args, MultiIndex index = {});

Expr var_x();
Expr var_y();
Expr var_t();

const char* axis_name(Axis a);
int jet_order(const Expr& jet_atom);

// Builders. Inputs must already be in normal form; outputs are.
Expr add(std::vector<Expr> terms);
Expr mul(std::vector<Expr> factors);
Expr pow(const Expr& base, const Rational& exponent);
Expr exp(const Expr& arg);
Expr ln(const Expr& arg);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);

/// Rebuilds `e` bottom-up through the builders and reduces rational-function
/// sums whose numerator over the common denominator expands to zero.
Expr normalize(const Expr& e);

/// True when normalize(e) is the number 0.
bool is_zero(const Expr& e);

/// Number of nodes in the tree.
std::size_t node_count(const Expr& e);

/// Splits a term into its rational coefficient and the remaining factor.
std::pair<Rational, Expr> split_coefficient(const Expr& term);

}  // namespace wavesym

template <>
struct std::hash<wavesym::Expr> {
  std::size_t operator()(const wavesym::Expr& e) const noexcept { return e.hash(); }
};
