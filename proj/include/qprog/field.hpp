#ifndef QPROG_FIELD_HPP
#define QPROG_FIELD_HPP

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "qprog/error.hpp"

namespace qprog {

/// An element of F_q, stored as its canonical code 0..q-1. The code read in
/// base p is the coefficient vector of the representing polynomial, least
/// significant digit = constant term. Code 0 is zero, code 1 is one.
struct FieldElement {
  std::uint32_t code = 0;

  constexpr FieldElement() = default;
  constexpr explicit FieldElement(std::uint32_t c) : code(c) {}

  constexpr bool is_zero() const { return code == 0; }
  friend constexpr auto operator<=>(FieldElement, FieldElement) = default;
};

/// A fully materialized finite field F_{p^s} of odd characteristic.
///
/// Construction fixes a deterministic model: the modulus is the monic
/// irreducible of degree s with the smallest coefficient code, and the
/// generator is the smallest code of multiplicative order q-1. Addition in
/// extension fields goes through Zech logarithms, so every arithmetic
/// operation is O(1) with O(q) memory.
///
/// Instances are immutable and cheap to copy (tables are shared).
class Field {
 public:
  static constexpr std::uint32_t kDefaultCap = 10000;

  /// Throws PreconditionError for a non-prime or even p, s == 0, or p^s > cap.
  static Field build(std::uint32_t p, std::uint32_t s,
                     std::uint32_t cap = kDefaultCap);

  std::uint32_t p() const { return t_->p; }
  std::uint32_t s() const { return t_->s; }
  std::uint32_t q() const { return t_->q; }

  /// Coefficients c_0..c_s of the monic modulus (c_s = 1). For s = 1 this is
  /// the degenerate X, i.e. {0, 1}.
  const std::vector<std::uint32_t>& modulus() const { return t_->modulus; }
  FieldElement generator() const { return FieldElement(t_->generator); }

  static constexpr FieldElement zero() { return FieldElement(0); }
  static constexpr FieldElement one() { return FieldElement(1); }

  FieldElement add(FieldElement a, FieldElement b) const {
    if (t_->s == 1) {
      std::uint32_t r = a.code + b.code;
      return FieldElement(r >= t_->p ? r - t_->p : r);
    }
    if (a.code == 0) return b;
    if (b.code == 0) return a;
    const std::uint32_t n = t_->q - 1;
    const std::uint32_t la = t_->log[a.code];
    const std::uint32_t lb = t_->log[b.code];
    const std::uint32_t d = lb >= la ? lb - la : lb + n - la;
    const std::uint32_t z = t_->zech[d];
    if (z == kNoLog) return zero();
    return FieldElement(t_->exp[la + z]);
  }
  FieldElement neg(FieldElement a) const { return FieldElement(t_->neg[a.code]); }
  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }
  FieldElement mul(FieldElement a, FieldElement b) const {
    if (a.code == 0 || b.code == 0) return zero();
    return FieldElement(t_->exp[t_->log[a.code] + t_->log[b.code]]);
  }
  FieldElement square(FieldElement a) const { return mul(a, a); }
  /// Throws PreconditionError on a == 0.
  FieldElement inv(FieldElement a) const;
  /// Throws PreconditionError on b == 0.
  FieldElement div(FieldElement a, FieldElement b) const;
  /// a^k for any integer k; negative k requires a != 0.
  FieldElement pow(FieldElement a, std::int64_t k) const;

  /// Discrete log base the generator; throws PreconditionError on zero.
  std::uint32_t log(FieldElement a) const;
  /// generator^k.
  FieldElement exp(std::uint64_t k) const {
    return FieldElement(t_->exp[k % (t_->q - 1)]);
  }

  /// Absolute trace Tr_{F_q/F_p}(a) in {0..p-1}.
  std::uint32_t trace(FieldElement a) const { return t_->trace[a.code]; }
  /// a^p.
  FieldElement frobenius(FieldElement a) const { return pow(a, t_->p); }
  /// True for nonzero squares.
  bool is_square(FieldElement a) const {
    return a.code != 0 && t_->log[a.code] % 2 == 0;
  }

  /// Image of an integer in the prime subfield.
  FieldElement from_int(std::int64_t n) const;
  /// Base-p digits (polynomial coefficients), length s.
  std::vector<std::uint32_t> digits(FieldElement a) const;
  FieldElement from_digits(std::span<const std::uint32_t> digits) const;

  bool same_as(const Field& other) const { return t_ == other.t_; }
  friend bool operator==(const Field& a, const Field& b) {
    return a.p() == b.p() && a.s() == b.s();
  }

 private:
  static constexpr std::uint32_t kNoLog = 0xffffffffu;

  struct Tables {
    std::uint32_t p = 0, s = 0, q = 0;
    std::vector<std::uint32_t> modulus;
    std::uint32_t generator = 0;
    std::vector<std::uint32_t> log;   // length q, log[0] unused
    std::vector<std::uint32_t> exp;   // length 2(q-1), so log sums need no reduction
    std::vector<std::uint32_t> zech;  // log(1 + g^k), kNoLog when 1 + g^k = 0
    std::vector<std::uint32_t> neg;
    std::vector<std::uint32_t> trace;
  };

  explicit Field(std::shared_ptr<const Tables> t) : t_(std::move(t)) {}

  std::shared_ptr<const Tables> t_;
};

bool is_prime(std::uint64_t n);

/// Embedding F_q -> F_{q^m} (m = 2 or 3) realized as a code table.
struct SubfieldEmbedding {
  Field small;
  Field big;
  std::uint32_t degree = 0;            // m
  std::vector<std::uint32_t> map;      // small code -> big code
  std::vector<std::int32_t> preimage;  // big code -> small code, or -1

  FieldElement operator()(FieldElement a) const { return FieldElement(map[a.code]); }
  bool contains(FieldElement y) const { return preimage[y.code] >= 0; }
  /// Throws PreconditionError when y is outside the image.
  FieldElement restrict(FieldElement y) const;
};

/// Builds the embedding from generator powers: small.generator() maps to
/// the smallest power G^{j(Q-1)/(q-1)}, gcd(j, q-1) = 1, that makes the map
/// additive. Throws PreconditionError for mismatched characteristic or
/// orders that are not q^2 / q^3.
SubfieldEmbedding subfield_embed(const Field& small, const Field& big);

/// y^3 = a y^2 + b y + c with a, b, c in the small field.
struct CubicRelation {
  FieldElement a, b, c;
};

/// Minimal polynomial over the small field of y in a cubic extension.
/// Throws PreconditionError if the extension is not cubic or y lies in the
/// subfield.
CubicRelation min_poly(const SubfieldEmbedding& emb, FieldElement y);

}  // namespace qprog

#endif  // QPROG_FIELD_HPP
