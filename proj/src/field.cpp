#include "fgdesc/field.hpp"

#include <numeric>
#include <stdexcept>

#include "fgdesc/config.hpp"
#include "fgdesc/numtheory.hpp"

namespace fgdesc {

namespace {

// Polynomials over F_p as coefficient vectors, low-to-high, trimmed.
using Poly = std::vector<int>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, int p) {
  trim(a);
  while (a.size() >= m.size()) {
    int lead = a.back();
    int shift = static_cast<int>(a.size() - m.size());
    // m is monic.
    for (std::size_t i = 0; i < m.size(); ++i) {
      int& c = a[shift + i];
      c = ((c - lead * m[i]) % p + p) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mul(const Poly& a, const Poly& b, int p) {
  if (a.empty() || b.empty()) return {};
  Poly c(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + a[i] * b[j]) % p;
  return c;
}

bool divides(const Poly& d, Poly a, int p) {
  // d monic.
  a = poly_mod(std::move(a), d, p);
  return a.empty();
}

// Lexicographically least (by digit encoding) monic irreducible of degree n.
Poly least_irreducible(int p, int n) {
  if (n == 1) return {0, 1};  // x
  long long count = 1;
  for (int i = 0; i < n; ++i) count *= p;
  for (long long code = 0; code < count; ++code) {
    Poly f(n + 1, 0);
    long long c = code;
    for (int i = 0; i < n; ++i) {
      f[i] = static_cast<int>(c % p);
      c /= p;
    }
    f[n] = 1;
    // Trial division by all monic polynomials of degree 1..n/2.
    bool irred = true;
    for (int dd = 1; dd <= n / 2 && irred; ++dd) {
      long long dcount = 1;
      for (int i = 0; i < dd; ++i) dcount *= p;
      for (long long dc = 0; dc < dcount && irred; ++dc) {
        Poly g(dd + 1, 0);
        long long x = dc;
        for (int i = 0; i < dd; ++i) {
          g[i] = static_cast<int>(x % p);
          x /= p;
        }
        g[dd] = 1;
        if (divides(g, f, p)) irred = false;
      }
    }
    if (irred) return f;
  }
  throw std::logic_error("no irreducible polynomial found");
}

}  // namespace

FiniteField::FiniteField(int q) : q_(q) {
  long long p = 0;
  int n = 0;
  if (!is_prime_power(q, &p, &n))
    throw std::invalid_argument("field size must be a prime power");
  if (q > config::kMaxTableOrder)
    throw std::invalid_argument("field size exceeds table bound");
  p_ = static_cast<int>(p);
  n_ = n;
  irred_ = least_irreducible(p_, n_);

  auto decode = [&](int e) {
    Poly f;
    for (int i = 0; i < n_; ++i) {
      f.push_back(e % p_);
      e /= p_;
    }
    trim(f);
    return f;
  };
  auto encode = [&](const Poly& f) {
    int e = 0;
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) e = e * p_ + f[i];
    return e;
  };

  add_.resize(q_ * q_);
  mul_.resize(q_ * q_);
  neg_.resize(q_);
  for (int a = 0; a < q_; ++a) {
    Poly fa = decode(a);
    Poly na(fa.size());
    for (std::size_t i = 0; i < fa.size(); ++i) na[i] = (p_ - fa[i]) % p_;
    trim(na);
    neg_[a] = encode(na);
    for (int b = 0; b < q_; ++b) {
      Poly fb = decode(b);
      Poly s(std::max(fa.size(), fb.size()), 0);
      for (std::size_t i = 0; i < s.size(); ++i) {
        int va = i < fa.size() ? fa[i] : 0;
        int vb = i < fb.size() ? fb[i] : 0;
        s[i] = (va + vb) % p_;
      }
      trim(s);
      add_[a * q_ + b] = encode(s);
      mul_[a * q_ + b] = encode(poly_mod(poly_mul(fa, fb, p_), irred_, p_));
    }
  }
}

int FiniteField::pow(int a, long long e) const {
  if (e < 0) return pow(inverse(a), -e);
  int acc = 1, base = a;
  while (e > 0) {
    if (e & 1) acc = mul(acc, base);
    base = mul(base, base);
    e >>= 1;
  }
  return acc;
}

int FiniteField::inverse(int a) const {
  if (a == 0) throw std::domain_error("zero has no inverse");
  return pow(a, q_ - 2);
}

int FiniteField::mult_order(int a) const {
  if (a == 0) throw std::domain_error("zero has no multiplicative order");
  int x = a, k = 1;
  while (x != 1) {
    x = mul(x, a);
    ++k;
  }
  return k;
}

int FiniteField::primitive_element() const {
  for (int a = 1; a < q_; ++a)
    if (mult_order(a) == q_ - 1) return a;
  throw std::logic_error("no primitive element");
}

std::vector<int> FiniteField::minimal_polynomial(int c) const {
  // Frobenius orbit {c, c^p, ...}; the minimal polynomial is
  // prod (x - c^{p^i}) with coefficients in the prime field.
  std::vector<int> orbit{c};
  int x = frobenius(c);
  while (x != c) {
    orbit.push_back(x);
    x = frobenius(x);
  }
  std::vector<int> poly{1};  // constant 1, as field elements
  for (int root : orbit) {
    std::vector<int> next(poly.size() + 1, 0);
    for (std::size_t i = 0; i < poly.size(); ++i) {
      next[i + 1] = add(next[i + 1], poly[i]);
      next[i] = add(next[i], mul(neg(root), poly[i]));
    }
    poly = std::move(next);
  }
  // Coefficients lie in the prime field {0, 1, ..., p-1} (multiples of 1).
  std::vector<int> out;
  for (int coeff : poly) {
    int k = 0, acc = 0;
    while (acc != coeff) {
      acc = add(acc, 1);
      ++k;
      if (k > p_) throw std::logic_error("minimal polynomial coefficient not in F_p");
    }
    out.push_back(k);
  }
  return out;
}

FiniteGroup psl2(int q) {
  FiniteField f(q);
  // Points of the projective line: 0..q-1 are the field elements, q is
  // infinity. Generators: translations x -> x+c over an F_p-basis of F_q
  // (the upper unipotent subgroup), and x -> -1/x which swaps it with the
  // lower one; together they generate the whole group.
  int deg = q + 1;
  const int inf = q;
  std::vector<std::vector<int>> gens;
  for (int i = 0, c = 1; i < f.degree(); ++i, c *= f.p()) {
    std::vector<int> t(deg);
    for (int x = 0; x < q; ++x) t[x] = f.add(x, c);
    t[inf] = inf;
    gens.push_back(std::move(t));
  }
  std::vector<int> s(deg);
  s[0] = inf;
  s[inf] = 0;
  for (int x = 1; x < q; ++x) s[x] = f.neg(f.inverse(x));
  gens.push_back(std::move(s));
  return group_from_permutations(deg, gens, "PSL(2," + std::to_string(q) + ")");
}

}  // namespace fgdesc
