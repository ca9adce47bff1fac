#include <gtest/gtest.h>

#include <random>

#include "qprog/error.hpp"
#include "qprog/field.hpp"

using namespace qprog;

namespace {

FieldElement E(std::uint32_t c) { return FieldElement(c); }

// Field axioms on every element triple for small q, sampled for large q.
void check_axioms(const Field& F, std::uint32_t samples) {
  const std::uint32_t q = F.q();
  std::mt19937_64 rng(q);
  const auto pick = [&](std::uint32_t i) { return q <= 27 ? E(i % q) : E(static_cast<std::uint32_t>(rng() % q)); };
  const std::uint32_t n = q <= 27 ? q * q * q : samples;
  for (std::uint32_t i = 0; i < n; ++i) {
    const FieldElement a = pick(i / (q * q)), b = pick(i / q), c = pick(i);
    ASSERT_EQ(F.add(a, b), F.add(b, a));
    ASSERT_EQ(F.mul(a, b), F.mul(b, a));
    ASSERT_EQ(F.add(F.add(a, b), c), F.add(a, F.add(b, c)));
    ASSERT_EQ(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)));
    ASSERT_EQ(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)));
    ASSERT_EQ(F.add(a, F.neg(a)), Field::zero());
    if (!a.is_zero()) {
      ASSERT_EQ(F.mul(a, F.inv(a)), Field::one());
    }
  }
}

}  // namespace

TEST(Field, SmallPrimeGenerators) {
  EXPECT_EQ(Field::build(3, 1).generator(), E(2));
  EXPECT_EQ(Field::build(5, 1).generator(), E(2));
  EXPECT_EQ(Field::build(7, 1).generator(), E(3));
}

TEST(Field, RejectsBadParameters) {
  EXPECT_THROW(Field::build(4, 1), PreconditionError);
  EXPECT_THROW(Field::build(2, 3), PreconditionError);
  EXPECT_THROW(Field::build(3, 0), PreconditionError);
  EXPECT_THROW(Field::build(3, 9), PreconditionError);  // 19683 > cap
  try {
    Field::build(2, 3);
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("even characteristic"), std::string::npos);
  }
}

TEST(Field, NineHasModulusXSquaredPlusOne) {
  const Field F = Field::build(3, 2);
  EXPECT_EQ(F.modulus(), (std::vector<std::uint32_t>{1, 0, 1}));
  const FieldElement X = E(3);  // digits [0, 1]
  EXPECT_EQ(F.mul(X, X), E(2));
}

TEST(Field, PrimeFieldArithmetic) {
  const Field F = Field::build(5, 1);
  EXPECT_EQ(F.mul(E(2), E(3)), E(1));
  EXPECT_EQ(F.inv(E(4)), E(4));
  EXPECT_EQ(F.add(E(3), E(4)), E(2));
  EXPECT_EQ(F.sub(E(1), E(3)), E(3));
  EXPECT_EQ(F.div(E(1), E(2)), E(3));
  EXPECT_EQ(F.from_int(-1), E(4));
  EXPECT_THROW(F.inv(E(0)), PreconditionError);
}

TEST(Field, AxiomsAcrossSizes) {
  for (auto [p, s] : std::vector<std::pair<int, int>>{{3, 1}, {3, 2}, {5, 2}, {3, 3}, {7, 2}, {3, 4}, {11, 2},
                                                       {5, 3}, {101, 1}, {13, 3}, {3, 8}, {9973, 1}}) {
    SCOPED_TRACE(std::to_string(p) + "^" + std::to_string(s));
    check_axioms(Field::build(p, s), 20000);
  }
}

TEST(Field, GeneratorHasFullOrder) {
  for (auto [p, s] : std::vector<std::pair<int, int>>{{3, 2}, {5, 2}, {3, 3}, {7, 3}, {13, 3}}) {
    const Field F = Field::build(p, s);
    std::vector<bool> seen(F.q(), false);
    FieldElement x = Field::one();
    for (std::uint32_t k = 0; k + 1 < F.q(); ++k) {
      ASSERT_FALSE(seen[x.code]);
      seen[x.code] = true;
      EXPECT_EQ(F.log(x), k);
      EXPECT_EQ(F.exp(k), x);
      x = F.mul(x, F.generator());
    }
    EXPECT_EQ(x, Field::one());
  }
}

TEST(Field, TraceIsLinearAndFrobeniusInvariant) {
  const Field F = Field::build(3, 3);
  std::vector<std::uint32_t> counts(3, 0);
  for (std::uint32_t a = 0; a < F.q(); ++a) {
    const FieldElement x = E(a);
    EXPECT_EQ(F.trace(F.frobenius(x)), F.trace(x));
    // Tr(x) = x + x^p + x^{p^2} read as an element of the prime field.
    const FieldElement t = F.add(F.add(x, F.frobenius(x)), F.frobenius(F.frobenius(x)));
    EXPECT_EQ(t.code, F.trace(x));
    for (std::uint32_t b = 0; b < F.q(); b += 5)
      EXPECT_EQ(F.trace(F.add(x, E(b))), (F.trace(x) + F.trace(E(b))) % 3);
    ++counts[F.trace(x)];
  }
  EXPECT_EQ(counts, (std::vector<std::uint32_t>{9, 9, 9}));
}

TEST(Field, PowAndSquares) {
  const Field F = Field::build(7, 1);
  EXPECT_EQ(F.pow(E(3), 6), E(1));
  EXPECT_EQ(F.pow(E(3), -1), E(5));
  for (std::uint32_t c : {1u, 2u, 4u}) EXPECT_TRUE(F.is_square(E(c)));
  for (std::uint32_t c : {3u, 5u, 6u}) EXPECT_FALSE(F.is_square(E(c)));
}

TEST(Field, DigitsRoundTrip) {
  const Field F = Field::build(5, 3);
  for (std::uint32_t a = 0; a < F.q(); ++a) {
    const auto d = F.digits(E(a));
    ASSERT_EQ(d.size(), 3u);
    EXPECT_EQ(F.from_digits(d), E(a));
  }
}

TEST(Field, PrimalityHelper) {
  EXPECT_TRUE(is_prime(2));
  EXPECT_TRUE(is_prime(9973));
  EXPECT_FALSE(is_prime(1));
  EXPECT_FALSE(is_prime(91));
}

TEST(Subfield, EmbeddingIsAFieldHomomorphism) {
  for (auto [p, s, m] : std::vector<std::tuple<int, int, int>>{{3, 1, 2}, {3, 1, 3}, {5, 1, 3}, {3, 2, 2}, {7, 1, 2},
                                                               {13, 1, 3}, {3, 2, 3}}) {
    const Field small = Field::build(p, s), big = Field::build(p, s * m);
    const SubfieldEmbedding emb = subfield_embed(small, big);
    std::uint32_t image = 0;
    for (std::uint32_t a = 0; a < small.q(); ++a) {
      for (std::uint32_t b = 0; b < small.q(); ++b) {
        ASSERT_EQ(emb(small.add(E(a), E(b))), big.add(emb(E(a)), emb(E(b))));
        ASSERT_EQ(emb(small.mul(E(a), E(b))), big.mul(emb(E(a)), emb(E(b))));
      }
      EXPECT_EQ(emb.restrict(emb(E(a))), E(a));
    }
    for (std::uint32_t y = 0; y < big.q(); ++y) {
      const bool fixed = big.pow(E(y), small.q()) == E(y);
      EXPECT_EQ(emb.contains(E(y)), fixed);
      image += fixed;
    }
    EXPECT_EQ(image, small.q());
  }
}

TEST(Subfield, RejectsNonExtensions) {
  EXPECT_THROW(subfield_embed(Field::build(3, 2), Field::build(3, 3)), PreconditionError);
  EXPECT_THROW(subfield_embed(Field::build(3, 1), Field::build(5, 2)), PreconditionError);
}

TEST(Subfield, CubicMinimalPolynomialOnRandomElements) {
  for (auto [p, s] : std::vector<std::pair<int, int>>{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {13, 1}}) {
    const Field small = Field::build(p, s), big = Field::build(p, 3 * s);
    const SubfieldEmbedding emb = subfield_embed(small, big);
    std::mt19937_64 rng(17);
    for (int i = 0; i < 100;) {
      const FieldElement y(static_cast<std::uint32_t>(rng() % big.q()));
      if (emb.contains(y)) {
        EXPECT_THROW(min_poly(emb, y), PreconditionError);
        continue;
      }
      ++i;
      const CubicRelation r = min_poly(emb, y);
      EXPECT_FALSE(r.c.is_zero());
      const FieldElement y2 = big.square(y), y3 = big.mul(y2, y);
      const FieldElement rhs = big.add(big.add(big.mul(emb(r.a), y2), big.mul(emb(r.b), y)), emb(r.c));
      EXPECT_EQ(y3, rhs);
    }
  }
}
