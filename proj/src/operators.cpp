#include "crinv/operators.hpp"

#include <stdexcept>

namespace crinv {

DefiningFunction::DefiningFunction(Poly r) : rho(std::move(r)) {
  if (rho.is_zero())
    throw std::invalid_argument("DefiningFunction: rho is identically zero");
  if (!rho.is_real())
    throw std::invalid_argument("DefiningFunction: rho is not real");
}

Poly LinearFieldOp::apply(const Poly& p) const {
  Poly out;
  for (int i = 0; i < 4; ++i) {
    Var v = static_cast<Var>(i);
    if (coeff[i].is_zero()) continue;
    out += coeff[i] * p.diff(v);
  }
  return out;
}

LinearFieldOp field_L(const DefiningFunction& f) {
  LinearFieldOp op;
  op.coeff[static_cast<int>(Var::z)] = -f.d(Var::w);
  op.coeff[static_cast<int>(Var::w)] = f.d(Var::z);
  return op;
}

LinearFieldOp field_Lbar(const DefiningFunction& f) {
  LinearFieldOp op;
  op.coeff[static_cast<int>(Var::zb)] = -f.d(Var::wb);
  op.coeff[static_cast<int>(Var::wb)] = f.d(Var::zb);
  return op;
}

Poly apply_power(const LinearFieldOp& op, unsigned j, const Poly& p) {
  Poly out = p;
  for (unsigned i = 0; i < j; ++i) out = op.apply(out);
  return out;
}

Poly hessian_LL(const DefiningFunction& f) {
  Poly rz = f.d(Var::z), rw = f.d(Var::w);
  return f.rho.diff(Var::z).diff(Var::z) * rw * rw -
         GaussianRational(2) * (f.rho.diff(Var::z).diff(Var::w) * rz * rw) +
         f.rho.diff(Var::w).diff(Var::w) * rz * rz;
}

PolyMatrix build_A(const DefiningFunction& f, int n) {
  if (n < 3) throw std::invalid_argument("build_A: n must be >= 3");
  const size_t dim = 2 * n - 1;
  PolyMatrix m(dim);
  LinearFieldOp lbar = field_Lbar(f);
  Poly rz = f.d(Var::z), rw = f.d(Var::w);
  Poly hess = hessian_LL(f);
  std::vector<Poly> base;
  base.reserve(dim);
  for (int k = 0; k <= n; ++k) base.push_back(rz.pow(k) * rw.pow(n - k));
  for (int s = 0; s <= n - 3; ++s)
    base.push_back(rz.pow(s) * rw.pow(n - 3 - s) * hess);
  for (size_t i = 0; i < dim; ++i) {
    Poly cur = base[i];
    for (size_t j = 0; j < dim; ++j) {
      m.at(i, j) = cur;
      if (j + 1 < dim) cur = lbar.apply(cur);
    }
  }
  return m;
}

PolyMatrix build_D(const DefiningFunction& f, int n) {
  if (n < 1) throw std::invalid_argument("build_D: n must be >= 1");
  const size_t dim = n + 1;
  PolyMatrix m(dim);
  LinearFieldOp lbar = field_Lbar(f);
  Poly rz = f.d(Var::z), rw = f.d(Var::w);
  for (size_t k = 0; k < dim; ++k) {
    Poly cur = rz.pow(k) * rw.pow(n - k);
    for (size_t j = 0; j < dim; ++j) {
      m.at(k, j) = cur;
      if (j + 1 < dim) cur = lbar.apply(cur);
    }
  }
  return m;
}

Poly divide_exact(const Poly& f, const Poly& g) {
  if (g.is_zero()) throw std::domain_error("divide_exact: division by zero");
  Poly q = Poly::zero().with_eps_cap(min_cap(f.eps_cap(), g.eps_cap()));
  Poly r = f;
  const Term& glead = g.leading();
  while (!r.is_zero()) {
    const Term& rlead = r.leading();
    if (!glead.m.divides(rlead.m))
      throw std::domain_error("divide_exact: inexact division");
    Poly t = Poly::term(rlead.c / glead.c, rlead.m.divide_by(glead.m));
    q += t;
    r -= t * g;
  }
  return q;
}

namespace {

Poly det_cofactor(const PolyMatrix& m, std::vector<size_t> rows,
                  std::vector<size_t> cols) {
  if (rows.size() == 1) return m.at(rows[0], cols[0]);
  Poly out;
  for (size_t k = 0; k < cols.size(); ++k) {
    const Poly& e = m.at(rows[0], cols[k]);
    if (e.is_zero()) continue;
    std::vector<size_t> sub_rows(rows.begin() + 1, rows.end());
    std::vector<size_t> sub_cols;
    for (size_t j = 0; j < cols.size(); ++j)
      if (j != k) sub_cols.push_back(cols[j]);
    Poly minor = det_cofactor(m, std::move(sub_rows), std::move(sub_cols));
    out += (k % 2 == 0) ? e * minor : -(e * minor);
  }
  return out;
}

// Division-free expansion, memoized over column subsets. Safe for
// eps-truncated entries because it only adds and multiplies.
Poly det_laplace(const PolyMatrix& m) {
  const size_t n = m.n;
  std::vector<std::vector<Poly>> memo(n + 1);  // memo[popcount][mask index]
  std::vector<std::vector<bool>> seen(n + 1);
  const size_t full = (size_t(1) << n) - 1;
  std::vector<Poly> table(full + 1);
  std::vector<bool> have(full + 1, false);
  // det of the submatrix using rows n-|mask| .. n-1 and the columns in mask
  auto rec = [&](auto&& self, size_t mask) -> Poly {
    if (mask == 0) return Poly::constant(GaussianRational(1));
    if (have[mask]) return table[mask];
    size_t count = static_cast<size_t>(__builtin_popcountll(mask));
    size_t row = n - count;
    Poly out;
    int parity = 0;
    for (size_t c = 0; c < n; ++c) {
      if (!(mask & (size_t(1) << c))) continue;
      const Poly& e = m.at(row, c);
      if (!e.is_zero()) {
        Poly minor = self(self, mask & ~(size_t(1) << c));
        out += (parity % 2 == 0) ? e * minor : -(e * minor);
      }
      ++parity;
    }
    have[mask] = true;
    table[mask] = out;
    return out;
  };
  return rec(rec, full);
}

Poly det_bareiss(PolyMatrix m) {
  const size_t n = m.n;
  bool negate = false;
  Poly prev = Poly::constant(GaussianRational(1));
  for (size_t k = 0; k + 1 < n; ++k) {
    size_t piv = k;
    while (piv < n && m.at(piv, k).is_zero()) ++piv;
    if (piv == n) return Poly::zero();
    if (piv != k) {
      for (size_t j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(k, j));
      negate = !negate;
    }
    for (size_t i = k + 1; i < n; ++i) {
      for (size_t j = k + 1; j < n; ++j) {
        Poly num = m.at(k, k) * m.at(i, j) - m.at(i, k) * m.at(k, j);
        m.at(i, j) = divide_exact(num, prev);
      }
      m.at(i, k) = Poly::zero();
    }
    prev = m.at(k, k);
  }
  Poly det = m.at(n - 1, n - 1);
  return negate ? -det : det;
}

}  // namespace

Poly poly_det(const PolyMatrix& m) {
  if (m.n == 0) return Poly::constant(GaussianRational(1));
  bool truncated = false;
  for (const Poly& e : m.a)
    if (e.eps_cap()) truncated = true;
  if (truncated) return det_laplace(m);
  if (m.n <= 4) {
    std::vector<size_t> idx(m.n);
    for (size_t i = 0; i < m.n; ++i) idx[i] = i;
    return det_cofactor(m, idx, idx);
  }
  return det_bareiss(m);
}

Poly fefferman_J(const DefiningFunction& f) {
  PolyMatrix m(3);
  m.at(0, 0) = f.rho;
  m.at(0, 1) = f.d(Var::zb);
  m.at(0, 2) = f.d(Var::wb);
  m.at(1, 0) = f.d(Var::z);
  m.at(1, 1) = f.rho.diff(Var::z).diff(Var::zb);
  m.at(1, 2) = f.rho.diff(Var::z).diff(Var::wb);
  m.at(2, 0) = f.d(Var::w);
  m.at(2, 1) = f.rho.diff(Var::w).diff(Var::zb);
  m.at(2, 2) = f.rho.diff(Var::w).diff(Var::wb);
  return poly_det(m);
}

Monomial sphere_selector() {
  Monomial m;
  m.at(Var::w) = 1;
  m.at(Var::wb) = 1;
  return m;
}

Poly reduce_mod(const Poly& p, const Poly& rho, const Monomial& selector) {
  GaussianRational c = rho.coefficient(selector);
  if (c.is_zero())
    throw std::invalid_argument("reduce_mod: selector does not occur in rho");
  int sel_support_deg = 0;
  for (Var v : {Var::z, Var::w, Var::zb, Var::wb})
    if (selector[v] > 0) sel_support_deg += selector[v];
  if (sel_support_deg == 0)
    throw std::invalid_argument("reduce_mod: selector must involve geometric variables");
  for (const Term& t : rho.terms()) {
    if (t.m == selector) continue;
    if (selector.divides(t.m))
      throw std::invalid_argument("reduce_mod: another monomial of rho is divisible by the selector");
    int deg = 0;
    for (Var v : {Var::z, Var::w, Var::zb, Var::wb})
      if (selector[v] > 0) deg += t.m[v];
    if (deg >= sel_support_deg)
      throw std::invalid_argument(
          "reduce_mod: rewrite would not terminate (monomial " +
          std::string("of rho is not smaller in the selector's support)"));
  }
  // rule: selector == selector - rho/c (mod rho); iterate to the normal form
  Poly out = p;
  while (true) {
    const Term* hit = nullptr;
    for (const Term& t : out.terms()) {
      if (selector.divides(t.m)) {
        hit = &t;
        break;
      }
    }
    if (!hit) return out;
    Poly cofactor = Poly::term(hit->c / c, hit->m.divide_by(selector));
    out -= cofactor * rho;  // cancels the hit term, introduces smaller ones
  }
}

std::map<Var, GaussianRational> SpherePoint::bindings() const {
  return {{Var::z, z}, {Var::w, w}, {Var::zb, z.conj()}, {Var::wb, w.conj()}};
}

namespace {

SpherePoint quaternion_square_point(long p, long q, long r, long s) {
  // (p^2-q^2-r^2-s^2, 2pq, 2pr, 2ps) has Euclidean norm p^2+q^2+r^2+s^2, so
  // the two complex coordinates below land exactly on the unit sphere.
  long d = p * p + q * q + r * r + s * s;
  GaussianRational z(mpq_class(p * p - q * q - r * r - s * s, d),
                     mpq_class(2 * p * q, d));
  GaussianRational w(mpq_class(2 * p * r, d), mpq_class(2 * p * s, d));
  z.re.canonicalize();
  z.im.canonicalize();
  w.re.canonicalize();
  w.im.canonicalize();
  return {z, w};
}

void check_on_sphere(const SpherePoint& pt) {
  mpq_class n = pt.z.norm2() + pt.w.norm2();
  if (n != 1) throw std::logic_error("sphere point is off the sphere");
}

}  // namespace

std::vector<SpherePoint> stock_sphere_points(size_t count) {
  static const std::vector<SpherePoint> stock = [] {
    std::vector<SpherePoint> pts;
    auto push = [&pts](SpherePoint p) {
      for (const SpherePoint& q : pts)
        if (q.z == p.z && q.w == p.w) return;
      check_on_sphere(p);
      pts.push_back(std::move(p));
    };
    auto gr = [](long num, long den) { return GaussianRational::ratio(num, den); };
    push({gr(1, 1), gr(0, 1)});
    push({gr(0, 1), gr(1, 1)});
    push({gr(3, 5), gr(4, 5)});
    push({gr(4, 5), gr(3, 5)});
    push({GaussianRational(mpq_class(1, 5), mpq_class(2, 5)),
          GaussianRational(mpq_class(2, 5), mpq_class(4, 5))});
    push({gr(1, 3), GaussianRational(mpq_class(2, 3), mpq_class(2, 3))});
    push({gr(2, 3), GaussianRational(mpq_class(1, 3), mpq_class(2, 3))});
    push({gr(5, 13), gr(12, 13)});
    push({gr(12, 13), gr(5, 13)});
    push({GaussianRational(mpq_class(3, 13), mpq_class(4, 13)), gr(12, 13)});
    push({GaussianRational(mpq_class(1, 2), mpq_class(1, 2)),
          GaussianRational(mpq_class(1, 2), mpq_class(1, 2))});
    // Fill the rest from small quaternions, deterministically ordered.
    for (long p = 1; p <= 3 && pts.size() < 64; ++p)
      for (long q = 0; q <= 3 && pts.size() < 64; ++q)
        for (long r = 0; r <= 3 && pts.size() < 64; ++r)
          for (long s = 0; s <= 3 && pts.size() < 64; ++s) {
            if (q == 0 && r == 0 && s == 0) continue;
            push(quaternion_square_point(p, q, r, s));
          }
    return pts;
  }();
  if (count > stock.size()) count = stock.size();
  return {stock.begin(), stock.begin() + count};
}

SpherePoint random_sphere_point(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> dist(-9, 9);
  while (true) {
    long p = dist(rng), q = dist(rng), r = dist(rng), s = dist(rng);
    if (p == 0 && q == 0 && r == 0 && s == 0) continue;
    SpherePoint pt = quaternion_square_point(p, q, r, s);
    check_on_sphere(pt);
    return pt;
  }
}

GaussianRational eval_at_sphere_point(const Poly& p, const SpherePoint& pt) {
  return p.eval(pt.bindings());
}

}  // namespace crinv
