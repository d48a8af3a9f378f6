#include "wavesym/linalg.hpp"

#include <utility>

#include "wavesym/numeric.hpp"

namespace wavesym {

bool probably_zero(const Expr& e) {
  if (e.is_zero()) return true;
  if (e.is_number()) return false;
  Expr n = normalize(e);
  if (n.is_zero()) return true;
  SampleOptions opts;
  opts.points = 6;
  opts.tol = 1e-11;
  opts.seed = 0x11a1ULL;
  return numeric_zero(n, opts).zero;
}

Rref rref(std::vector<Row> rows, std::size_t ncols, const ZeroPredicate& is_zero_fn) {
  Rref out;
  for (auto& row : rows) {
    row.resize(ncols, Expr());
    for (auto& v : row) {
      if (!v.is_number() && is_zero_fn(v)) v = Expr();
    }
  }
  std::size_t next = 0;
  for (std::size_t col = 0; col < ncols && next < rows.size(); ++col) {
    std::size_t best = rows.size();
    for (std::size_t r = next; r < rows.size(); ++r) {
      const Expr& v = rows[r][col];
      if (v.is_zero()) continue;
      if (best == rows.size()) {
        best = r;
        continue;
      }
      const Expr& b = rows[best][col];
      if (v.is_number() != b.is_number()) {
        if (v.is_number()) best = r;
      } else if (node_count(v) < node_count(b)) {
        best = r;
      }
    }
    if (best == rows.size()) continue;
    std::swap(rows[next], rows[best]);
    Row& p = rows[next];
    Expr inv = pow(p[col], -1);
    for (std::size_t j = col; j < ncols; ++j) {
      if (!p[j].is_zero()) p[j] = j == col ? Expr(1) : normalize(p[j] * inv);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next || rows[r][col].is_zero()) continue;
      Expr f = rows[r][col];
      for (std::size_t j = col; j < ncols; ++j) {
        if (p[j].is_zero()) continue;
        Expr v = normalize(rows[r][j] - f * p[j]);
        rows[r][j] = is_zero_fn(v) ? Expr() : v;
      }
      rows[r][col] = Expr();
    }
    out.pivots.push_back(col);
    ++next;
  }
  rows.resize(next);
  out.rows = std::move(rows);
  return out;
}

std::size_t rank(const std::vector<Row>& rows, std::size_t ncols) { return rref(rows, ncols).pivots.size(); }

std::vector<Row> nullspace(const std::vector<Row>& rows, std::size_t ncols) {
  Rref r = rref(rows, ncols);
  std::vector<bool> is_pivot(ncols, false);
  for (auto c : r.pivots) is_pivot[c] = true;
  std::vector<Row> basis;
  for (std::size_t f = 0; f < ncols; ++f) {
    if (is_pivot[f]) continue;
    Row v(ncols, Expr());
    v[f] = Expr(1);
    for (std::size_t i = 0; i < r.pivots.size(); ++i) {
      if (!r.rows[i][f].is_zero()) v[r.pivots[i]] = -r.rows[i][f];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<Row> solve(const std::vector<Row>& a, const Row& b, std::size_t ncols) {
  std::vector<Row> aug;
  aug.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Row r = a[i];
    r.resize(ncols, Expr());
    r.push_back(b[i]);
    aug.push_back(std::move(r));
  }
  Rref r = rref(std::move(aug), ncols + 1);
  Row z(ncols, Expr());
  for (std::size_t i = 0; i < r.pivots.size(); ++i) {
    if (r.pivots[i] == ncols) return std::nullopt;
    z[r.pivots[i]] = r.rows[i][ncols];
  }
  return z;
}

}  // namespace wavesym
