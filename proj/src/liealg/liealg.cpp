#include "wavesym/liealg.hpp"

#include <map>

#include "wavesym/calculus.hpp"
#include "wavesym/format.hpp"

namespace wavesym {

VectorField bracket(const VectorField& v, const VectorField& w) {
  VectorField out;
  for (int k = 0; k < 4; ++k) {
    out.component(k) = normalize(v.apply(w.component(k)) - w.apply(v.component(k)));
  }
  return out;
}

VectorField normalize(const VectorField& v) {
  return {normalize(v.xi), normalize(v.eta), normalize(v.tau), normalize(v.phi)};
}

bool operator==(const VectorField& a, const VectorField& b) {
  for (int k = 0; k < 4; ++k) {
    if (!normalize(a.component(k) - b.component(k)).is_zero()) return false;
  }
  return true;
}

std::vector<Row> coordinates(const std::vector<VectorField>& fields, std::size_t* ncols) {
  const std::vector<Expr> vars{var_x(), var_y(), var_t(), jet_u()};
  std::map<std::pair<int, Expr>, std::size_t, decltype([](const auto& a, const auto& b) {
             if (a.first != b.first) return a.first < b.first;
             return compare(a.second, b.second) < 0;
           })>
      column;
  std::vector<std::vector<std::pair<std::size_t, Expr>>> sparse(fields.size());
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (int k = 0; k < 4; ++k) {
      for (const auto& [key, coeff] : separate(fields[i].component(k), vars)) {
        auto [it, inserted] = column.emplace(std::pair{k, key}, column.size());
        sparse[i].emplace_back(it->second, coeff);
      }
    }
  }
  std::vector<Row> rows(fields.size(), Row(column.size(), Expr()));
  for (std::size_t i = 0; i < fields.size(); ++i) {
    for (const auto& [j, c] : sparse[i]) rows[i][j] = c;
  }
  if (ncols != nullptr) *ncols = column.size();
  return rows;
}

namespace {

// Transposed coordinates: one row per coordinate, one column per field.
std::vector<Row> transpose(const std::vector<Row>& rows, std::size_t ncols) {
  std::vector<Row> t(ncols, Row(rows.size(), Expr()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < ncols; ++j) t[j][i] = rows[i][j];
  }
  return t;
}

}  // namespace

bool linearly_independent(const std::vector<VectorField>& fields) {
  std::size_t ncols = 0;
  auto rows = coordinates(fields, &ncols);
  return rank(rows, ncols) == fields.size();
}

std::optional<Row> decompose(const std::vector<VectorField>& basis, const VectorField& w) {
  std::vector<VectorField> all = basis;
  all.push_back(w);
  std::size_t ncols = 0;
  auto rows = coordinates(all, &ncols);
  auto cols = transpose(rows, ncols);
  std::vector<Row> a;
  Row b;
  for (auto& r : cols) {
    b.push_back(r.back());
    r.pop_back();
    a.push_back(std::move(r));
  }
  auto sol = solve(a, b, basis.size());
  if (!sol) return std::nullopt;
  for (auto& e : *sol) e = normalize(e);
  return sol;
}

bool in_span(const std::vector<VectorField>& basis, const VectorField& w) {
  return decompose(basis, w).has_value();
}

bool same_span(const std::vector<VectorField>& a, const std::vector<VectorField>& b) {
  for (const auto& v : a) {
    if (!in_span(b, v)) return false;
  }
  for (const auto& v : b) {
    if (!in_span(a, v)) return false;
  }
  return true;
}

bool CommutatorTable::closed() const {
  for (const auto& row : entries) {
    for (const auto& e : row) {
      if (!e) return false;
    }
  }
  return true;
}

bool CommutatorTable::antisymmetric() const {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const auto& a = entries[i][j];
      const auto& b = entries[j][i];
      if (!a || !b) return false;
      for (std::size_t k = 0; k < n; ++k) {
        if (!normalize((*a)[k] + (*b)[k]).is_zero()) return false;
      }
    }
  }
  return true;
}

CommutatorTable commutator_table(const std::vector<VectorField>& basis) {
  if (!linearly_independent(basis)) throw DependentBasisError("basis is linearly dependent");
  CommutatorTable t;
  t.n = basis.size();
  t.entries.assign(t.n, std::vector<std::optional<Row>>(t.n));
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t j = 0; j < t.n; ++j) {
      if (i == j) {
        t.entries[i][j] = Row(t.n, Expr());
      } else if (j < i && t.entries[j][i]) {
        Row r = *t.entries[j][i];
        for (auto& e : r) e = normalize(-e);
        t.entries[i][j] = r;
      } else {
        t.entries[i][j] = decompose(basis, bracket(basis[i], basis[j]));
      }
    }
  }
  return t;
}

CommutatorTable reference_table() {
  CommutatorTable t;
  t.n = 5;
  t.entries.assign(5, std::vector<std::optional<Row>>(5, Row(5, Expr())));
  auto set = [&](int i, int j, int k, int v) {
    (*t.entries[i][j])[k] = Expr(v);
    (*t.entries[j][i])[k] = Expr(-v);
  };
  set(0, 1, 1, -1);
  set(0, 2, 2, -1);
  set(3, 4, 4, -1);
  return t;
}

bool operator==(const CommutatorTable& a, const CommutatorTable& b) {
  if (a.n != b.n) return false;
  for (std::size_t i = 0; i < a.n; ++i) {
    for (std::size_t j = 0; j < a.n; ++j) {
      const auto& x = a.entries[i][j];
      const auto& y = b.entries[i][j];
      if (x.has_value() != y.has_value()) return false;
      if (!x) continue;
      for (std::size_t k = 0; k < a.n; ++k) {
        if (!normalize((*x)[k] - (*y)[k]).is_zero()) return false;
      }
    }
  }
  return true;
}

JacobiReport jacobi_check(const std::vector<VectorField>& basis) {
  JacobiReport r;
  const std::size_t n = basis.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        ++r.triples;
        VectorField a = bracket(basis[i], bracket(basis[j], basis[k]));
        VectorField b = bracket(basis[j], bracket(basis[k], basis[i]));
        VectorField c = bracket(basis[k], bracket(basis[i], basis[j]));
        bool zero = true;
        for (int m = 0; m < 4; ++m) {
          if (!normalize(a.component(m) + b.component(m) + c.component(m)).is_zero()) zero = false;
        }
        if (zero) ++r.zero;
      }
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Flows

Expr flow_parameter() { return parameter("eps"); }

const Expr& FlowMap::coord(int k) const {
  switch (k) {
    case 0:
      return x;
    case 1:
      return y;
    case 2:
      return t;
    default:
      return u;
  }
}

FlowMap FlowMap::at(const Expr& e) const {
  Bindings b;
  b.set(flow_parameter(), e);
  return {substitute(x, b), substitute(y, b), substitute(t, b), substitute(u, b)};
}

namespace {

// c * eps^k * exp(mu * eps)
struct QuasiTerm {
  Expr coeff;
  int k = 0;
  Expr mu;
};

Expr factorial(int k) {
  Rational f = 1;
  for (int i = 2; i <= k; ++i) f *= i;
  return Expr(f);
}

// integral_0^eps s^k exp(delta s) ds, as quasi-polynomial terms.
std::vector<QuasiTerm> integrate_monomial(int k, const Expr& delta) {
  std::vector<QuasiTerm> out;
  if (probably_zero(delta)) {
    out.push_back({pow(Expr(k + 1), -1), k + 1, Expr()});
    return out;
  }
  for (int m = 0; m <= k; ++m) {
    Expr c = mul({Expr(m % 2 == 0 ? 1 : -1), factorial(k), pow(factorial(k - m), -1), pow(delta, -(m + 1))});
    out.push_back({c, k - m, delta});
  }
  out.push_back({mul({Expr(k % 2 == 0 ? -1 : 1), factorial(k), pow(delta, -(k + 1))}), 0, Expr()});
  return out;
}

Expr assemble(const std::vector<QuasiTerm>& terms) {
  const Expr eps = flow_parameter();
  std::vector<Expr> parts;
  for (const auto& q : terms) parts.push_back(mul({q.coeff, pow(eps, q.k), exp(q.mu * eps)}));
  return normalize(add(std::move(parts)));
}

}  // namespace

FlowMap flow(const VectorField& v) {
  const std::vector<Expr> z{var_x(), var_y(), var_t(), jet_u()};
  Expr a[4][4];
  Expr b[4];
  Bindings origin;
  for (const auto& c : z) origin.set(c, Expr());
  for (int i = 0; i < 4; ++i) {
    const Expr& comp = v.component(i);
    for (int j = 0; j < 4; ++j) {
      a[i][j] = normalize(diff(comp, z[j]));
      if ((a[i][j].flags() & (kHasX | kHasY | kHasT | kHasU)) != 0) {
        throw UnsupportedFlow("component is not affine: " + to_string(comp));
      }
    }
    b[i] = normalize(substitute(comp, origin));
  }
  // Order coordinates so each depends only on itself and earlier ones.
  std::vector<int> order;
  std::vector<bool> done(4, false);
  while (order.size() < 4) {
    bool progressed = false;
    for (int i = 0; i < 4; ++i) {
      if (done[i]) continue;
      bool ready = true;
      for (int j = 0; j < 4; ++j) {
        if (j != i && !done[j] && !a[i][j].is_zero()) ready = false;
      }
      if (ready) {
        order.push_back(i);
        done[i] = true;
        progressed = true;
      }
    }
    if (!progressed) throw UnsupportedFlow("coupled coordinates (e.g. a rotation) are not triangular");
  }
  std::vector<QuasiTerm> sol[4];
  for (int i : order) {
    // g(s) = sum_j a_ij z_j(s) + b_i for j != i, all already solved.
    std::vector<QuasiTerm> g;
    if (!b[i].is_zero()) g.push_back({b[i], 0, Expr()});
    for (int j = 0; j < 4; ++j) {
      if (j == i || a[i][j].is_zero()) continue;
      for (const auto& q : sol[j]) g.push_back({a[i][j] * q.coeff, q.k, q.mu});
    }
    // z_i = exp(a eps) (z0 + integral_0^eps exp(-a s) g(s) ds)
    const Expr& lam = a[i][i];
    std::vector<QuasiTerm> out{{z[i], 0, lam}};
    for (const auto& q : g) {
      for (const auto& r : integrate_monomial(q.k, normalize(q.mu - lam))) {
        out.push_back({q.coeff * r.coeff, r.k, normalize(r.mu + lam)});
      }
    }
    sol[i] = std::move(out);
  }
  return {assemble(sol[0]), assemble(sol[1]), assemble(sol[2]), assemble(sol[3])};
}

bool flow_group_law(const FlowMap& f) {
  const Expr e1 = parameter("eps_1");
  const Expr e2 = parameter("eps_2");
  FlowMap inner = f.at(e2);
  FlowMap outer = f.at(e1);
  FlowMap joint = f.at(e1 + e2);
  Bindings b;
  b.set(var_x(), inner.x).set(var_y(), inner.y).set(var_t(), inner.t).set(jet_u(), inner.u);
  for (int k = 0; k < 4; ++k) {
    if (!normalize(substitute(outer.coord(k), b) - joint.coord(k)).is_zero()) return false;
  }
  return true;
}

}  // namespace wavesym
