#include "crinv/poly.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

namespace crinv {

namespace {
constexpr uint16_t kMaxExp = 511;  // 9 bits per variable in the packed key
constexpr int kEps = static_cast<int>(Var::eps);
}  // namespace

const char* var_name(Var v) {
  static const char* names[kNumVars] = {"z", "w", "zb", "wb", "A", "B", "eps"};
  return names[static_cast<int>(v)];
}

std::optional<Var> var_from_name(const std::string& name) {
  for (Var v : kAllVars)
    if (name == var_name(v)) return v;
  return std::nullopt;
}

Var conjugate_var(Var v) {
  switch (v) {
    case Var::z: return Var::zb;
    case Var::zb: return Var::z;
    case Var::w: return Var::wb;
    case Var::wb: return Var::w;
    default: return v;  // A, B, eps are real parameters
  }
}

int Monomial::total_degree() const {
  int d = 0;
  for (uint16_t x : e) d += x;
  return d;
}

uint64_t Monomial::pack() const {
  uint64_t key = 0;
  for (int i = 0; i < kNumVars; ++i) key = (key << 9) | e[i];
  return key;
}

Monomial Monomial::unpack(uint64_t key) {
  Monomial m;
  for (int i = kNumVars - 1; i >= 0; --i) {
    m.e[i] = key & 0x1ff;
    key >>= 9;
  }
  return m;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) {
    uint32_t s = uint32_t(e[i]) + uint32_t(o.e[i]);
    if (s > kMaxExp) throw std::overflow_error("Monomial: exponent exceeds 511");
    r.e[i] = static_cast<uint16_t>(s);
  }
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (int i = 0; i < kNumVars; ++i)
    if (e[i] > o.e[i]) return false;
  return true;
}

Monomial Monomial::divide_by(const Monomial& o) const {
  Monomial r;
  for (int i = 0; i < kNumVars; ++i) {
    if (o.e[i] > e[i]) throw std::domain_error("Monomial: inexact division");
    r.e[i] = static_cast<uint16_t>(e[i] - o.e[i]);
  }
  return r;
}

int Monomial::compare(const Monomial& a, const Monomial& b) {
  int da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db ? -1 : 1;
  for (int i = 0; i < kNumVars; ++i)
    if (a.e[i] != b.e[i]) return a.e[i] < b.e[i] ? -1 : 1;
  return 0;
}

Poly Poly::constant(GaussianRational c) {
  Poly p;
  if (!c.is_zero()) p.terms_.push_back({Monomial{}, std::move(c)});
  return p;
}

Poly Poly::variable(Var v) {
  Poly p;
  Monomial m;
  m.at(v) = 1;
  p.terms_.push_back({m, GaussianRational(1)});
  return p;
}

Poly Poly::term(GaussianRational c, Monomial m) {
  Poly p;
  if (!c.is_zero()) p.terms_.push_back({std::move(m), std::move(c)});
  p.normalize();
  return p;
}

Poly Poly::from_terms(std::vector<Term> terms, std::optional<uint32_t> eps_cap) {
  Poly p;
  p.terms_ = std::move(terms);
  p.eps_cap_ = eps_cap;
  p.normalize();
  return p;
}

Poly Poly::with_eps_cap(std::optional<uint32_t> cap) const {
  Poly p = *this;
  p.eps_cap_ = min_cap(p.eps_cap_, cap);
  if (cap) p.normalize();
  return p;
}

void Poly::normalize() {
  if (eps_cap_) {
    uint32_t cap = *eps_cap_;
    std::erase_if(terms_, [cap](const Term& t) {
      return static_cast<uint32_t>(t.m.e[kEps]) >= cap;
    });
  }
  std::sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    return Monomial::compare(a.m, b.m) > 0;
  });
  size_t out = 0;
  for (size_t i = 0; i < terms_.size();) {
    Term acc = terms_[i];
    size_t j = i + 1;
    while (j < terms_.size() && terms_[j].m == acc.m) acc.c += terms_[j++].c;
    if (!acc.c.is_zero()) terms_[out++] = std::move(acc);
    i = j;
  }
  terms_.resize(out);
}

bool Poly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].m.total_degree() == 0);
}

int Poly::total_degree() const {
  int d = -1;
  for (const Term& t : terms_) d = std::max(d, t.m.total_degree());
  return d;
}

int Poly::degree_in(Var v) const {
  int d = 0;
  for (const Term& t : terms_) d = std::max(d, t.m[v]);
  return d;
}

bool Poly::geometric_only() const {
  for (const Term& t : terms_)
    for (Var v : {Var::A, Var::B, Var::eps})
      if (t.m[v] > 0) return false;
  return true;
}

bool Poly::is_real() const { return conj() == *this; }

bool Poly::same_terms(const Poly& o) const {
  if (terms_.size() != o.terms_.size()) return false;
  for (size_t i = 0; i < terms_.size(); ++i)
    if (!(terms_[i].m == o.terms_[i].m) || terms_[i].c != o.terms_[i].c) return false;
  return true;
}

Poly Poly::operator-() const {
  Poly p = *this;
  for (Term& t : p.terms_) t.c = -t.c;
  return p;
}

Poly Poly::operator+(const Poly& o) const {
  Poly r;
  r.eps_cap_ = min_cap(eps_cap_, o.eps_cap_);
  r.terms_.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() && j < o.terms_.size()) {
    int c = Monomial::compare(terms_[i].m, o.terms_[j].m);
    if (c > 0) {
      r.terms_.push_back(terms_[i++]);
    } else if (c < 0) {
      r.terms_.push_back(o.terms_[j++]);
    } else {
      GaussianRational s = terms_[i].c + o.terms_[j].c;
      if (!s.is_zero()) r.terms_.push_back({terms_[i].m, std::move(s)});
      ++i, ++j;
    }
  }
  for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
  for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
  if (r.eps_cap_) r.normalize();  // merged input may carry over-cap terms
  return r;
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
  Poly r;
  r.eps_cap_ = min_cap(eps_cap_, o.eps_cap_);
  if (terms_.empty() || o.terms_.empty()) return r;
  std::unordered_map<uint64_t, GaussianRational> acc;
  acc.reserve(terms_.size() * o.terms_.size());
  for (const Term& a : terms_) {
    for (const Term& b : o.terms_) {
      if (r.eps_cap_ &&
          uint32_t(a.m.e[kEps]) + uint32_t(b.m.e[kEps]) >= *r.eps_cap_)
        continue;
      Monomial m = a.m * b.m;
      acc[m.pack()] += a.c * b.c;
    }
  }
  r.terms_.reserve(acc.size());
  for (auto& [key, c] : acc)
    if (!c.is_zero()) r.terms_.push_back({Monomial::unpack(key), std::move(c)});
  // hash order is not canonical; sort once at the end
  std::sort(r.terms_.begin(), r.terms_.end(), [](const Term& a, const Term& b) {
    return Monomial::compare(a.m, b.m) > 0;
  });
  return r;
}

Poly operator*(const GaussianRational& c, const Poly& p) {
  return Poly::constant(c) * p;
}

Poly Poly::pow(long k) const {
  if (k < 0) throw std::invalid_argument("Poly::pow: negative exponent");
  Poly r = Poly::constant(GaussianRational(1)).with_eps_cap(eps_cap_);
  for (long i = 0; i < k; ++i) r *= *this;
  return r;
}

Poly Poly::diff(Var v) const {
  Poly r;
  r.eps_cap_ = eps_cap_;
  // d/d eps of a value known mod eps^K is only known mod eps^(K-1)
  if (v == Var::eps && eps_cap_) r.eps_cap_ = *eps_cap_ == 0 ? 0 : *eps_cap_ - 1;
  for (const Term& t : terms_) {
    int k = t.m[v];
    if (k == 0) continue;
    Term d = t;
    d.c *= GaussianRational(k);
    d.m.at(v) = static_cast<uint16_t>(k - 1);
    r.terms_.push_back(std::move(d));
  }
  r.normalize();
  return r;
}

Poly Poly::conj() const {
  Poly r;
  r.eps_cap_ = eps_cap_;
  r.terms_.reserve(terms_.size());
  for (const Term& t : terms_) {
    Monomial m;
    for (Var v : kAllVars) m.at(conjugate_var(v)) = static_cast<uint16_t>(t.m[v]);
    r.terms_.push_back({m, t.c.conj()});
  }
  r.normalize();
  return r;
}

GaussianRational Poly::coefficient(const Monomial& m) const {
  for (const Term& t : terms_)
    if (t.m == m) return t.c;
  return GaussianRational(0);
}

GaussianRational Poly::constant_term() const { return coefficient(Monomial{}); }

const Term& Poly::leading() const {
  if (terms_.empty()) throw std::domain_error("Poly::leading: zero polynomial");
  return terms_.front();
}

Poly Poly::substitute(const std::map<Var, Poly>& bindings) const {
  std::optional<uint32_t> cap = eps_cap_;
  for (const auto& [v, q] : bindings) cap = min_cap(cap, q.eps_cap());
  Poly r = Poly::zero().with_eps_cap(cap);
  // cache binding powers; exponents repeat heavily across terms
  std::map<std::pair<Var, int>, Poly> powers;
  for (const Term& t : terms_) {
    Poly prod = Poly::constant(t.c).with_eps_cap(cap);
    for (Var v : kAllVars) {
      int k = t.m[v];
      if (k == 0) continue;
      auto it = bindings.find(v);
      if (it == bindings.end()) {
        Monomial m;
        m.at(v) = static_cast<uint16_t>(k);
        prod *= Poly::term(GaussianRational(1), m);
      } else {
        auto key = std::make_pair(v, k);
        auto cached = powers.find(key);
        if (cached == powers.end())
          cached = powers.emplace(key, it->second.with_eps_cap(cap).pow(k)).first;
        prod *= cached->second;
      }
    }
    r += prod;
  }
  return r;
}

template <typename Scalar>
static Scalar eval_impl(const std::vector<Term>& terms,
                        const std::map<Var, Scalar>& point, Scalar one) {
  Scalar total = one - one;
  for (const Term& t : terms) {
    Scalar prod = one;
    for (Var v : kAllVars) {
      int k = t.m[v];
      if (k == 0) continue;
      auto it = point.find(v);
      if (it == point.end())
        throw std::invalid_argument(std::string("Poly::eval: unbound variable ") +
                                    var_name(v));
      for (int i = 0; i < k; ++i) prod = prod * it->second;
    }
    if constexpr (std::is_same_v<Scalar, GaussianRational>) {
      total += t.c * prod;
    } else {
      total += t.c.to_complex() * prod;
    }
  }
  return total;
}

GaussianRational Poly::eval(const std::map<Var, GaussianRational>& point) const {
  return eval_impl<GaussianRational>(terms_, point, GaussianRational(1));
}

std::complex<double> Poly::eval(const std::map<Var, std::complex<double>>& point) const {
  return eval_impl<std::complex<double>>(terms_, point, {1.0, 0.0});
}

Poly Poly::eps_coefficient(uint32_t k) const {
  if (eps_cap_ && k >= *eps_cap_)
    throw std::invalid_argument("Poly::eps_coefficient: order at or above eps_cap");
  Poly r;
  for (const Term& t : terms_) {
    if (static_cast<uint32_t>(t.m.e[kEps]) != k) continue;
    Term s = t;
    s.m.e[kEps] = 0;
    r.terms_.push_back(std::move(s));
  }
  r.normalize();
  return r;
}

std::map<std::pair<int, int>, Poly> Poly::bidegree_split() const {
  std::map<std::pair<int, int>, Poly> parts;
  for (const Term& t : terms_) {
    int p = t.m[Var::z] + t.m[Var::w];
    int q = t.m[Var::zb] + t.m[Var::wb];
    parts[{p, q}] += Poly::term(t.c, t.m);
  }
  for (auto& [key, comp] : parts) comp = comp.with_eps_cap(eps_cap_);
  return parts;
}

Poly Poly::fourier_coefficient(int k) const {
  Poly r;
  r.eps_cap_ = eps_cap_;
  for (const Term& t : terms_) {
    int p = t.m[Var::z] + t.m[Var::w];
    int q = t.m[Var::zb] + t.m[Var::wb];
    if (p - q == k) r.terms_.push_back(t);
  }
  r.normalize();
  return r;
}

}  // namespace crinv
