#pragma once

#include <stdexcept>

#include "wavesym/expr.hpp"

namespace wavesym {

inline constexpr int kMaxJetOrder = 4;

class JetOrderError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point vector field xi d_x + eta d_y + tau d_t + phi d_u.
struct VectorField {
  Expr xi;
  Expr eta;
  Expr tau;
  Expr phi;

  /// The field acting on a function of (x, y, t, u).
  Expr apply(const Expr& f) const;
  const Expr& component(int k) const;
  Expr& component(int k);
  bool is_zero() const;
};

/// Field whose components are the opaque functions xi, eta, tau, phi of
/// (x, y, t, u).
VectorField opaque_field();

/// Jet coordinate u_J with one more derivative along `d`.
Expr raise_jet(const Expr& jet_atom, Axis d);

Expr total_derivative(const Expr& e, Axis d);

Expr characteristic(const VectorField& v);
Expr prolong_coeff_first(const VectorField& v, Axis i);
Expr prolong_coeff_second(const VectorField& v, Axis i, Axis j);

}  // namespace wavesym
