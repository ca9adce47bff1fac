#include <gtest/gtest.h>

#include <cmath>

#include "qprog/error.hpp"
#include "qprog/kernels.hpp"

using namespace qprog;

namespace {

FieldElement E(std::uint32_t c) { return FieldElement(c); }

const std::vector<std::pair<int, int>> kFields{{3, 1}, {5, 1}, {7, 1}, {3, 2}, {11, 1}, {13, 1}, {5, 2}, {3, 3}};

}  // namespace

TEST(KernelK, ZeroFrequencyCases) {
  const CharacterTable ct(Field::build(5, 1));
  const KernelValue k00 = K_closed(ct, E(0), E(0));
  EXPECT_EQ(k00.tag, KernelCase::kBZeroAZero);
  EXPECT_NEAR(std::abs(k00.value - 1.0), 0.0, 1e-15);
  const KernelValue k10 = K_closed(ct, E(1), E(0));
  EXPECT_EQ(k10.tag, KernelCase::kBZeroANonzero);
  EXPECT_NEAR(std::abs(k10.value), 0.0, 1e-15);
}

TEST(KernelK, ThreeElementValue) {
  // K(0, 1) over F_3 = (1/3)(1 + 2 e(1/3)) = i / sqrt(3).
  const CharacterTable ct(Field::build(3, 1));
  EXPECT_NEAR(std::abs(K_closed(ct, E(0), E(1)).value - Complex(0, 1 / std::sqrt(3.0))), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(K_brute(ct, E(0), E(1)) - Complex(0, 1 / std::sqrt(3.0))), 0.0, 1e-12);
}

TEST(KernelK, ClosedMatchesBruteEverywhere) {
  for (auto [p, s] : kFields) {
    const CharacterTable ct(Field::build(p, s));
    const KernelScan r = scan_K(ct, 2);
    EXPECT_EQ(r.cases_checked, std::uint64_t(ct.q()) * ct.q());
    EXPECT_LT(r.max_abs_error, 1e-12);
    const Eigen::MatrixXcd M = kernel_matrix(ct);
    for (std::uint32_t a = 0; a < ct.q(); ++a)
      for (std::uint32_t b = 1; b < ct.q(); ++b)
        ASSERT_NEAR(std::abs(M(a, b)), 1 / ct.sqrt_q(), 1e-12);
  }
}

TEST(KernelBh, DiagonalAndAntidiagonal) {
  const CharacterTable ct(Field::build(7, 1));
  const Field& F = ct.field();
  for (std::uint32_t h = 1; h < 7; ++h)
    for (std::uint32_t y = 1; y < 7; ++y) {
      if (E(y) == F.neg(E(h))) continue;
      const BhClosed d = Bh_closed(ct, E(h), E(y), E(y));
      EXPECT_EQ(d.tag, KernelCase::kDiagonal);
      EXPECT_EQ(d.value, Complex(7.0));
      EXPECT_NEAR(std::abs(Bh_brute(ct, E(h), E(y), E(y)) - 7.0), 0.0, 1e-12);
      const FieldElement z = F.neg(F.add(E(h), E(y)));
      if (z.is_zero() || z == E(y)) continue;
      const BhClosed a = Bh_closed(ct, E(h), E(y), z);
      EXPECT_EQ(a.tag, KernelCase::kAntidiagonalZero);
      EXPECT_EQ(a.value, Complex(0.0));
      EXPECT_NEAR(std::abs(Bh_brute(ct, E(h), E(y), z)), 0.0, 1e-12);
    }
}

TEST(KernelBh, GenericModulusIsSqrtQ) {
  const CharacterTable ct(Field::build(7, 1));
  const BhClosed b = Bh_closed(ct, E(1), E(2), E(3));
  EXPECT_EQ(b.tag, KernelCase::kGeneric);
  EXPECT_NEAR(std::abs(b.value), std::sqrt(7.0), 1e-12);
  EXPECT_NEAR(std::abs(Bh_brute(ct, E(1), E(2), E(3)) - b.value), 0.0, 1e-12);
}

TEST(KernelBh, RejectsInadmissibleArguments) {
  const CharacterTable ct(Field::build(5, 1));
  EXPECT_THROW(Bh_brute(ct, E(0), E(1), E(2)), PreconditionError);
  EXPECT_THROW(Bh_closed(ct, E(1), E(0), E(2)), PreconditionError);
  EXPECT_THROW(Bh_closed(ct, E(1), E(2), E(4)), PreconditionError);  // z = -h
}

TEST(KernelBh, ClosedMatchesBruteExhaustively) {
  for (auto [p, s] : kFields) {
    const CharacterTable ct(Field::build(p, s));
    const KernelScan r = scan_Bh(ct, 2);
    const std::uint64_t q = ct.q();
    EXPECT_EQ(r.cases_checked, (q - 1) * (q - 2) * (q - 2));
    EXPECT_LT(r.max_abs_error, 1e-10);
    EXPECT_LT(r.max_prefactor_deviation, 1e-10);
  }
}

TEST(KernelL, VanishesAtPlusMinusOneAndIsUnimodularElsewhere) {
  const CharacterTable ct(Field::build(11, 1));
  const Field& F = ct.field();
  for (std::uint32_t h = 1; h < 11; ++h) {
    EXPECT_EQ(Lh(ct, E(h), E(1)), Complex(0.0));
    EXPECT_EQ(Lh(ct, E(h), F.neg(E(1))), Complex(0.0));
    EXPECT_NEAR(std::abs(omega(ct, E(h))), 1.0, 1e-12);
    for (std::uint32_t r = 0; r < 11; ++r) {
      const FieldElement fr(r);
      if (fr == E(1) || fr == F.neg(E(1))) continue;
      EXPECT_NEAR(std::abs(Lh(ct, E(h), fr)), 1.0, 1e-12);
    }
  }
  EXPECT_THROW(Lh(ct, E(0), E(2)), PreconditionError);
}

TEST(KernelBh0, ClosedAndBruteRoutesAgree) {
  const CharacterTable ct(Field::build(3, 2));
  const Field& F = ct.field();
  for (std::uint32_t h = 1; h < 9; ++h) {
    const FieldElement c = half(F, E(h));
    EXPECT_EQ(F.add(c, c), E(h));
    for (std::uint32_t Y = 0; Y < 9; ++Y)
      for (std::uint32_t Z = 0; Z < 9; ++Z) {
        if (E(Y) == c || E(Y) == F.neg(c) || E(Z) == c || E(Z) == F.neg(c)) continue;
        EXPECT_NEAR(std::abs(Bh0(ct, E(h), E(Y), E(Z), Route::kClosed) - Bh0(ct, E(h), E(Y), E(Z), Route::kBrute)),
                    0.0, 1e-10);
      }
  }
}

TEST(KernelBh0, DecompositionIdentity) {
  for (auto [p, s] : kFields) {
    const CharacterTable ct(Field::build(p, s));
    const KernelScan r = scan_decomposition(ct, 2);
    // Over F_3 every nonzero Y is +-h/2, so nothing is admissible.
    if (ct.q() > 3) {
      EXPECT_GT(r.cases_checked, 0u);
    }
    EXPECT_LT(r.max_abs_error, 1e-10);
  }
}

TEST(KernelBh0, DiagonalIsQPlusRootQTimesLAtOne) {
  // At Y = Z the decomposition gives q + q^{1/2} L_h(1) = q.
  const CharacterTable ct(Field::build(13, 1));
  for (std::uint32_t Y = 1; Y < 13; ++Y)
    EXPECT_NEAR(std::abs(Bh0_decomposed(ct, E(5), E(Y), E(Y)) - 13.0), 0.0, 1e-12);
}

TEST(KernelCase, Names) {
  EXPECT_EQ(to_string(KernelCase::kGeneric), "generic");
  EXPECT_EQ(to_string(KernelCase::kDiagonal), "diagonal");
}
