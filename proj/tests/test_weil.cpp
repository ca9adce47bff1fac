#include <gtest/gtest.h>

#include <cmath>

#include "qprog/error.hpp"
#include "qprog/kernels.hpp"
#include "qprog/weil.hpp"

using namespace qprog;

namespace {

FieldElement E(std::uint32_t c) { return FieldElement(c); }

const std::vector<std::pair<int, int>> kFields{{5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}, {5, 2}, {3, 3}};

}  // namespace

TEST(MixedSum, EmptyOverThree) {
  const CharacterTable ct(Field::build(3, 1));
  for (std::uint32_t t = 0; t < 2; ++t)
    for (std::uint32_t l = 1; l < 3; ++l) EXPECT_EQ(mixed_sum(ct, t, E(l)), Complex(0.0));
  const WeilScanReport r = weil_scan(ct);
  EXPECT_EQ(r.term_count, 0u);
  EXPECT_EQ(r.max_abs_sum, 0.0);
}

TEST(MixedSum, RejectsZeroLambda) {
  const CharacterTable ct(Field::build(5, 1));
  EXPECT_THROW(mixed_sum(ct, 0, E(0)), PreconditionError);
}

// For the trivial eta the substitution s = (r-1)/(r+1) turns chi(1 - r^2)
// into chi(-s), so the sum is a Gauss sum minus the two deleted points:
// chi(-lambda) sigma sqrt(q) - chi(-1) e(lambda) - e(-lambda).
TEST(MixedSum, TrivialCharacterClosedForm) {
  for (auto [p, s] : kFields) {
    const CharacterTable ct(Field::build(p, s));
    const Field& F = ct.field();
    const double chi_m1 = ct.chi(F.neg(Field::one()));
    for (std::uint32_t l = 1; l < ct.q(); ++l) {
      const FieldElement lam(l);
      const Complex expect = static_cast<double>(ct.chi(F.neg(lam))) * ct.sigma() * ct.sqrt_q() -
                             chi_m1 * ct.e(lam) - ct.e(F.neg(lam));
      EXPECT_NEAR(std::abs(mixed_sum(ct, 0, lam) - expect), 0.0, 1e-10);
    }
  }
}

TEST(MixedSum, SubstitutionSpotCheckOverSeven) {
  // r = 2 corresponds to s = (2-1)/(2+1) = 1/3 = 5 in F_7.
  const Field F = Field::build(7, 1);
  const FieldElement r(2), s = F.div(F.sub(r, Field::one()), F.add(r, Field::one()));
  EXPECT_EQ(s, E(5));
  EXPECT_EQ(F.div(F.add(Field::one(), s), F.sub(Field::one(), s)), r);
  const CharacterTable ct(F);
  const int lhs = ct.chi(F.sub(Field::one(), F.square(r)));
  const int rhs = ct.chi(F.div(F.mul(F.from_int(-4), s), F.square(F.sub(Field::one(), s))));
  EXPECT_EQ(lhs, rhs);
}

TEST(MixedSum, SubstitutionIdentityOnFullGrid) {
  for (auto [p, s] : kFields) {
    const CharacterTable ct(Field::build(p, s));
    for (std::uint32_t t = 0; t + 1 < ct.q(); ++t)
      for (std::uint32_t l = 1; l < ct.q(); ++l) {
        const SubstitutionCheck c = substitution_identity(ct, t, E(l));
        ASSERT_TRUE(c.pass);
        ASSERT_EQ(c.r_terms, ct.q() - 3);
        ASSERT_EQ(c.s_terms, ct.q() - 3);
        ASSERT_NEAR(std::abs(c.r_side - mixed_sum(ct, t, E(l))), 0.0, 1e-12);
      }
  }
}

TEST(MixedSum, LhCharacterSumIsOmegaTimesMixedSum) {
  const CharacterTable ct(Field::build(11, 1));
  for (std::uint32_t h = 1; h < 11; ++h)
    for (std::uint32_t t = 0; t < 10; ++t)
      EXPECT_NEAR(std::abs(lh_char_sum(ct, E(h), t) - omega(ct, E(h)) * mixed_sum(ct, t, E(h))), 0.0, 1e-12);
}

TEST(WeilScan, GridAndEnvelope) {
  for (auto [p, s] : kFields) {
    const CharacterTable ct(Field::build(p, s));
    const WeilScanReport r = weil_scan(ct, 2, true);
    const std::uint64_t q = ct.q();
    EXPECT_EQ(r.grid_size, (q - 1) * (q - 1));
    EXPECT_EQ(r.rows.size(), r.grid_size);
    EXPECT_EQ(r.term_count, q - 3);
    EXPECT_TRUE(r.unimodular_terms);
    EXPECT_LE(r.max_abs_sum, 4 * ct.sqrt_q() + 3);
    EXPECT_LT(r.max_ratio, 4.0);
    EXPECT_NEAR(r.max_ratio, r.max_abs_sum / ct.sqrt_q(), 1e-15);
    EXPECT_LE(r.quadratic_max_abs, r.max_abs_sum);
    EXPECT_NEAR(std::abs(mixed_sum(ct, r.argmax_t, E(r.argmax_lambda))), r.max_abs_sum, 1e-12);
  }
}

TEST(WeilScan, DeterministicAcrossJobs) {
  const CharacterTable ct(Field::build(5, 2));
  const WeilScanReport a = weil_scan(ct, 1), b = weil_scan(ct, 4);
  EXPECT_EQ(a.max_abs_sum, b.max_abs_sum);
  EXPECT_EQ(a.argmax_t, b.argmax_t);
  EXPECT_EQ(a.argmax_lambda, b.argmax_lambda);
}
