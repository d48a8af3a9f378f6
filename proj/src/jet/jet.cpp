#include "wavesym/jet.hpp"

#include "wavesym/calculus.hpp"
#include "wavesym/format.hpp"

namespace wavesym {

Expr VectorField::apply(const Expr& f) const {
  return add({mul({xi, diff(f, var_x())}), mul({eta, diff(f, var_y())}), mul({tau, diff(f, var_t())}),
              mul({phi, diff(f, jet_u())})});
}

const Expr& VectorField::component(int k) const {
  switch (k) {
    case 0:
      return xi;
    case 1:
      return eta;
    case 2:
      return tau;
    default:
      return phi;
  }
}

Expr& VectorField::component(int k) {
  return const_cast<Expr&>(static_cast<const VectorField&>(*this).component(k));
}

bool VectorField::is_zero() const { return xi.is_zero() && eta.is_zero() && tau.is_zero() && phi.is_zero(); }

VectorField opaque_field() {
  std::vector<Expr> args{var_x(), var_y(), var_t(), jet_u()};
  return {function("xi", args), function("eta", args), function("tau", args), function("phi", args)};
}

Expr raise_jet(const Expr& jet_atom, Axis d) {
  MultiIndex idx = jet_atom.index();
  ++idx[static_cast<int>(d)];
  if (idx[0] + idx[1] + idx[2] > kMaxJetOrder) {
    throw JetOrderError("jet order cap exceeded differentiating " + to_string(jet_atom));
  }
  return jet(idx);
}

Expr total_derivative(const Expr& e, Axis d) {
  std::vector<Expr> terms{diff(e, base_var(d))};
  if ((e.flags() & (kHasU | kHasJet)) != 0) {
    for (const auto& a : atoms_of(e)) {
      if (a.kind() != Kind::Jet) continue;
      terms.push_back(mul({raise_jet(a, d), diff(e, a)}));
    }
  }
  return add(std::move(terms));
}

Expr characteristic(const VectorField& v) {
  for (int k = 0; k < 4; ++k) {
    if ((v.component(k).flags() & kHasJet) != 0) {
      throw std::invalid_argument("vector field component depends on derivatives of u");
    }
  }
  return add({v.phi, -mul({v.xi, jet({1, 0, 0})}), -mul({v.eta, jet({0, 1, 0})}),
              -mul({v.tau, jet({0, 0, 1})})});
}

namespace {

Expr transport_terms(const VectorField& v, const MultiIndex& base) {
  std::vector<Expr> terms;
  for (int k = 0; k < 3; ++k) {
    MultiIndex idx = base;
    ++idx[k];
    terms.push_back(mul({v.component(k), jet(idx)}));
  }
  return add(std::move(terms));
}

}  // namespace

Expr prolong_coeff_first(const VectorField& v, Axis i) {
  MultiIndex base{0, 0, 0};
  ++base[static_cast<int>(i)];
  return total_derivative(characteristic(v), i) + transport_terms(v, base);
}

Expr prolong_coeff_second(const VectorField& v, Axis i, Axis j) {
  MultiIndex base{0, 0, 0};
  ++base[static_cast<int>(i)];
  ++base[static_cast<int>(j)];
  return total_derivative(total_derivative(characteristic(v), j), i) + transport_terms(v, base);
}

}  // namespace wavesym
