#include "qprog/field.hpp"

#include <numeric>
#include <string>

namespace qprog {

namespace {

// Dense polynomials over F_p, coefficient i at index i, kept trimmed.
using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

// Remainder of a modulo a monic-or-not nonzero b.
Poly poly_rem(Poly a, const Poly& b, std::uint64_t p) {
  trim(a);
  const std::size_t db = b.size() - 1;
  const std::uint64_t lead_inv = powmod(b.back(), p - 2, p);
  while (a.size() >= b.size()) {
    const std::uint64_t f = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i <= db; ++i) {
      a[shift + i] = (a[shift + i] + p - f * b[i] % p) % p;
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  return poly_rem(std::move(r), m, p);
}

Poly poly_powmod(Poly b, std::uint64_t e, const Poly& m, std::uint64_t p) {
  Poly r{1};
  b = poly_rem(std::move(b), m, p);
  while (e) {
    if (e & 1) r = poly_mulmod(r, b, m, p);
    b = poly_mulmod(b, b, m, p);
    e >>= 1;
  }
  return r;
}

Poly poly_gcd(Poly a, Poly b, std::uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

// Irreducible iff gcd(f, X^{p^i} - X) = 1 for every i <= deg/2.
bool is_irreducible(const Poly& f, std::uint64_t p) {
  const std::size_t deg = f.size() - 1;
  Poly xpow{0, 1};
  for (std::size_t i = 1; i <= deg / 2; ++i) {
    xpow = poly_powmod(xpow, p, f, p);
    Poly g = xpow;
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = (g[1] + p - 1) % p;
    if (poly_gcd(f, g, p).size() != 1) return false;
  }
  return true;
}

Poly code_to_poly(std::uint64_t code, std::uint64_t p, std::size_t s) {
  Poly a(s, 0);
  for (std::size_t i = 0; i < s; ++i) {
    a[i] = code % p;
    code /= p;
  }
  trim(a);
  return a;
}

std::uint64_t poly_to_code(const Poly& a, std::uint64_t p) {
  std::uint64_t code = 0;
  for (std::size_t i = a.size(); i-- > 0;) code = code * p + a[i];
  return code;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

Field Field::build(std::uint32_t p, std::uint32_t s, std::uint32_t cap) {
  if (!is_prime(p)) throw PreconditionError("p = " + std::to_string(p) + " is not prime");
  if (p == 2) throw PreconditionError("even characteristic is not supported (p = 2)");
  if (s == 0) throw PreconditionError("extension degree s must be positive");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < s; ++i) {
    q *= p;
    if (q > cap)
      throw PreconditionError("field size " + std::to_string(p) + "^" + std::to_string(s) +
                              " exceeds the cap of " + std::to_string(cap) + " elements");
  }

  auto t = std::make_shared<Tables>();
  t->p = p;
  t->s = s;
  t->q = static_cast<std::uint32_t>(q);

  // Modulus: smallest coefficient code among monic irreducibles of degree s.
  Poly modulus;
  if (s == 1) {
    modulus = {0, 1};
  } else {
    for (std::uint64_t code = 0; code < q; ++code) {
      Poly f(s + 1, 0);
      std::uint64_t c = code;
      for (std::uint32_t i = 0; i < s; ++i) {
        f[i] = c % p;
        c /= p;
      }
      f[s] = 1;
      if (f[0] == 0) continue;
      if (is_irreducible(f, p)) {
        modulus = std::move(f);
        break;
      }
    }
    if (modulus.empty()) throw ConsistencyError("no irreducible polynomial found");
  }
  t->modulus.assign(modulus.begin(), modulus.end());

  // Generator: smallest code of order q - 1.
  const std::uint64_t n = q - 1;
  const auto factors = prime_factors(n);
  auto slow_pow = [&](std::uint64_t code, std::uint64_t e) -> std::uint64_t {
    if (s == 1) return powmod(code, e, p);
    return poly_to_code(poly_powmod(code_to_poly(code, p, s), e, modulus, p), p);
  };
  std::uint64_t gen = 0;
  for (std::uint64_t code = 1; code < q && gen == 0; ++code) {
    bool full = (slow_pow(code, n) == 1);
    for (std::uint64_t r : factors) {
      if (!full) break;
      if (slow_pow(code, n / r) == 1) full = false;
    }
    if (full) gen = code;
  }
  if (gen == 0) throw ConsistencyError("no generator found");
  t->generator = static_cast<std::uint32_t>(gen);

  // Exp/log by repeated multiplication by the generator.
  t->log.assign(q, kNoLog);
  t->exp.assign(2 * n, 0);
  {
    std::uint64_t x = 1;
    const Poly gpoly = code_to_poly(gen, p, s);
    Poly xpoly{1};
    for (std::uint64_t k = 0; k < n; ++k) {
      if (t->log[x] != kNoLog) throw ConsistencyError("generator order below q-1");
      t->exp[k] = t->exp[k + n] = static_cast<std::uint32_t>(x);
      t->log[x] = static_cast<std::uint32_t>(k);
      if (s == 1) {
        x = x * gen % p;
      } else {
        xpoly = poly_mulmod(xpoly, gpoly, modulus, p);
        x = poly_to_code(xpoly, p);
      }
    }
  }

  // Negation and Zech logarithms work digit-wise on codes.
  std::vector<std::uint64_t> pow_p(s + 1, 1);
  for (std::uint32_t i = 1; i <= s; ++i) pow_p[i] = pow_p[i - 1] * p;
  t->neg.assign(q, 0);
  for (std::uint64_t code = 0; code < q; ++code) {
    std::uint64_t c = code, out = 0;
    for (std::uint32_t i = 0; i < s; ++i) {
      const std::uint64_t d = c % p;
      c /= p;
      out += ((p - d) % p) * pow_p[i];
    }
    t->neg[code] = static_cast<std::uint32_t>(out);
  }
  t->zech.assign(n, kNoLog);
  for (std::uint64_t k = 0; k < n; ++k) {
    const std::uint64_t x = t->exp[k];
    const std::uint64_t d0 = x % p;
    const std::uint64_t y = x - d0 + (d0 + 1) % p;
    t->zech[k] = (y == 0) ? kNoLog : t->log[y];
  }

  Field field(t);

  // Trace is F_p-linear: evaluate on the monomial basis, extend by digits.
  std::vector<std::uint32_t> basis_trace(s, 0);
  for (std::uint32_t i = 0; i < s; ++i) {
    FieldElement b(static_cast<std::uint32_t>(pow_p[i]));
    FieldElement acc = zero(), cur = b;
    for (std::uint32_t j = 0; j < s; ++j) {
      acc = field.add(acc, cur);
      cur = field.frobenius(cur);
    }
    if (acc.code >= p) throw ConsistencyError("trace left the prime field");
    basis_trace[i] = acc.code;
  }
  t->trace.assign(q, 0);
  for (std::uint64_t code = 0; code < q; ++code) {
    std::uint64_t c = code, tr = 0;
    for (std::uint32_t i = 0; i < s; ++i) {
      tr += (c % p) * basis_trace[i];
      c /= p;
    }
    t->trace[code] = static_cast<std::uint32_t>(tr % p);
  }
  return field;
}

FieldElement Field::inv(FieldElement a) const {
  if (a.code == 0) throw PreconditionError("inverse of zero");
  const std::uint32_t n = t_->q - 1;
  return FieldElement(t_->exp[(n - t_->log[a.code]) % n]);
}

FieldElement Field::div(FieldElement a, FieldElement b) const {
  if (b.code == 0) throw PreconditionError("division by zero");
  if (a.code == 0) return zero();
  const std::uint32_t n = t_->q - 1;
  return FieldElement(t_->exp[t_->log[a.code] + (n - t_->log[b.code])]);
}

FieldElement Field::pow(FieldElement a, std::int64_t k) const {
  if (a.code == 0) {
    if (k > 0) return zero();
    if (k == 0) return one();
    throw PreconditionError("negative power of zero");
  }
  const std::int64_t n = t_->q - 1;
  std::int64_t e = (static_cast<std::int64_t>(t_->log[a.code]) * (k % n)) % n;
  if (e < 0) e += n;
  return FieldElement(t_->exp[static_cast<std::size_t>(e)]);
}

std::uint32_t Field::log(FieldElement a) const {
  if (a.code == 0) throw PreconditionError("discrete log of zero");
  return t_->log[a.code];
}

FieldElement Field::from_int(std::int64_t n) const {
  const std::int64_t p = t_->p;
  std::int64_t r = n % p;
  if (r < 0) r += p;
  return FieldElement(static_cast<std::uint32_t>(r));
}

std::vector<std::uint32_t> Field::digits(FieldElement a) const {
  std::vector<std::uint32_t> d(t_->s, 0);
  std::uint32_t c = a.code;
  for (auto& x : d) {
    x = c % t_->p;
    c /= t_->p;
  }
  return d;
}

FieldElement Field::from_digits(std::span<const std::uint32_t> digits) const {
  if (digits.size() != t_->s) throw PreconditionError("digit vector length must equal s");
  std::uint32_t code = 0;
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (digits[i] >= t_->p) throw PreconditionError("digit out of range");
    code = code * t_->p + digits[i];
  }
  return FieldElement(code);
}

FieldElement SubfieldEmbedding::restrict(FieldElement y) const {
  const std::int32_t c = preimage[y.code];
  if (c < 0) throw PreconditionError("element is not in the embedded subfield");
  return FieldElement(static_cast<std::uint32_t>(c));
}

SubfieldEmbedding subfield_embed(const Field& small, const Field& big) {
  if (small.p() != big.p()) throw PreconditionError("subfield embedding needs equal characteristic");
  if (big.s() % small.s() != 0) throw PreconditionError("big field degree is not a multiple of the small one");
  const std::uint32_t m = big.s() / small.s();
  if (m != 2 && m != 3) throw PreconditionError("only quadratic and cubic extensions are supported");

  const std::uint32_t n_small = small.q() - 1;
  const std::uint64_t cofactor = (big.q() - 1) / n_small;
  const FieldElement base = big.exp(cofactor);

  SubfieldEmbedding emb{small, big, m, {}, {}};
  for (std::uint32_t j = 1; j <= n_small; ++j) {
    if (std::gcd(j, n_small) != 1) continue;
    const FieldElement gamma = big.pow(base, j);
    std::vector<std::uint32_t> map(small.q(), 0);
    for (std::uint32_t k = 0; k < n_small; ++k) map[small.exp(k).code] = big.pow(gamma, k).code;
    // A multiplicative bijection onto the subfield is additive iff it
    // commutes with x -> x + 1.
    bool additive = true;
    for (std::uint32_t x = 0; x < small.q() && additive; ++x) {
      const FieldElement lhs(map[small.add(FieldElement(x), Field::one()).code]);
      const FieldElement rhs = big.add(FieldElement(map[x]), Field::one());
      additive = (lhs == rhs);
    }
    if (additive) {
      emb.map = std::move(map);
      break;
    }
  }
  if (emb.map.empty()) throw ConsistencyError("no additive generator image found");

  emb.preimage.assign(big.q(), -1);
  for (std::uint32_t x = 0; x < small.q(); ++x) {
    if (emb.preimage[emb.map[x]] != -1) throw ConsistencyError("embedding is not injective");
    emb.preimage[emb.map[x]] = static_cast<std::int32_t>(x);
  }
  return emb;
}

CubicRelation min_poly(const SubfieldEmbedding& emb, FieldElement y) {
  if (emb.degree != 3) throw PreconditionError("min_poly needs a cubic extension");
  if (emb.contains(y)) throw PreconditionError("element lies in the subfield (degree < 3)");
  const Field& K = emb.big;
  const std::int64_t q = emb.small.q();
  const FieldElement y1 = K.pow(y, q);
  const FieldElement y2 = K.pow(y1, q);
  // (X - y)(X - y^q)(X - y^{q^2}) = X^3 - a X^2 - b X - c
  const FieldElement a = K.add(K.add(y, y1), y2);
  const FieldElement e2 = K.add(K.add(K.mul(y, y1), K.mul(y, y2)), K.mul(y1, y2));
  const FieldElement b = K.neg(e2);
  const FieldElement c = K.mul(K.mul(y, y1), y2);
  if (!emb.contains(a) || !emb.contains(b) || !emb.contains(c))
    throw ConsistencyError("minimal polynomial coefficients left the subfield");
  const FieldElement y_sq = K.square(y);
  const FieldElement rhs = K.add(K.add(K.mul(a, y_sq), K.mul(b, y)), c);
  if (K.mul(y_sq, y) != rhs || c.is_zero()) throw ConsistencyError("cubic relation check failed");
  return {emb.restrict(a), emb.restrict(b), emb.restrict(c)};
}

}  // namespace qprog
