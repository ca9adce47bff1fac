#ifndef QPROG_CHARACTERS_HPP
#define QPROG_CHARACTERS_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qprog/field.hpp"

namespace qprog {

using Complex = std::complex<double>;

/// exp(2 pi i num / den), computed from the rational angle directly.
inline Complex unit_root(std::int64_t num, std::int64_t den) {
  std::int64_t r = num % den;
  if (r < 0) r += den;
  const double angle = 2.0 * M_PI * static_cast<double>(r) / static_cast<double>(den);
  return std::polar(1.0, angle);
}

enum class Domain { kFullField, kPunctured };

/// A complex-valued function on F_q, dense in element-code order.
/// Punctured functions live on F_q^x and hold 0 at code 0.
template <typename Scalar = double>
struct BasicComplexFn {
  using Vector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1>;

  Vector values;
  Domain domain = Domain::kFullField;

  BasicComplexFn() = default;
  explicit BasicComplexFn(Eigen::Index q, Domain d = Domain::kFullField)
      : values(Vector::Zero(q)), domain(d) {}
  BasicComplexFn(Vector v, Domain d = Domain::kFullField) : values(std::move(v)), domain(d) {}

  Eigen::Index size() const { return values.size(); }
  std::complex<Scalar>& operator[](FieldElement x) { return values[x.code]; }
  const std::complex<Scalar>& operator[](FieldElement x) const { return values[x.code]; }
};

using ComplexFn = BasicComplexFn<double>;

/// Averaged mean E[f] = (1/q) sum_x f(x).
template <typename Derived>
auto mean(const Eigen::MatrixBase<Derived>& f) {
  return f.mean();
}

/// Averaged norm ((1/q) sum |f|^r)^{1/r}.
template <typename Derived>
double norm_avg(const Eigen::MatrixBase<Derived>& f, double r = 2.0) {
  const double n = static_cast<double>(f.size());
  if (r == 2.0) return std::sqrt(f.squaredNorm() / n);
  return std::pow(f.cwiseAbs().array().pow(r).sum() / n, 1.0 / r);
}

/// Counting norm (sum |g|^2)^{1/2}.
template <typename Derived>
double norm_count(const Eigen::MatrixBase<Derived>& g) {
  return g.norm();
}

inline double norm_avg(const ComplexFn& f, double r = 2.0) { return norm_avg(f.values, r); }
inline double norm_count(const ComplexFn& f) { return norm_count(f.values); }

/// Gauss sum of the fixed additive character: raw_sum = sum_y e(y^2) =
/// sigma * sqrt(q).
struct GaussSumInfo {
  Complex sigma;
  Complex raw_sum;
};

/// Character data over a field: the additive character
/// e(x) = exp(2 pi i Tr(x) / p), the quadratic character (with chi(0) = 0),
/// the multiplicative characters eta_t(g^k) = exp(2 pi i t k / (q-1)) and the
/// measured Gauss sum. Immutable after construction.
class CharacterTable {
 public:
  /// Throws ConsistencyError if the Gauss sum has |sigma| != 1.
  explicit CharacterTable(Field field);

  const Field& field() const { return field_; }
  std::uint32_t q() const { return field_.q(); }
  double sqrt_q() const { return sqrt_q_; }

  Complex e(FieldElement x) const { return additive_[x.code]; }
  /// Conjugate additive character e(-x).
  Complex e_neg(FieldElement x) const { return std::conj(additive_[x.code]); }
  int chi(FieldElement x) const { return chi_[x.code]; }
  /// eta_t(x); throws PreconditionError on x == 0.
  Complex eta(std::uint32_t t, FieldElement x) const;
  /// Index of the quadratic character, (q-1)/2.
  std::uint32_t quadratic_index() const { return (q() - 1) / 2; }

  const GaussSumInfo& gauss() const { return gauss_; }
  Complex sigma() const { return gauss_.sigma; }

 private:
  Field field_;
  double sqrt_q_;
  std::vector<Complex> additive_;
  std::vector<Complex> roots_;  // exp(2 pi i k / (q-1))
  std::vector<int> chi_;
  GaussSumInfo gauss_;
};

/// e(x) for a field element.
inline Complex additive_char(const CharacterTable& ct, FieldElement x) { return ct.e(x); }
Complex mult_char(const CharacterTable& ct, std::uint32_t t, FieldElement x);
int quadratic_char(const CharacterTable& ct, FieldElement x);
GaussSumInfo gauss_sum(const CharacterTable& ct);

/// fhat(xi) = (1/q) sum_x f(x) e(-x xi). Averaged on the physical side,
/// counting on the frequency side.
ComplexFn fourier(const CharacterTable& ct, const ComplexFn& f);
/// f(x) = sum_xi fhat(xi) e(x xi).
ComplexFn fourier_inverse(const CharacterTable& ct, const ComplexFn& fhat);

/// M_f(eta_t) = sum_{Y != 0} f(Y) conj(eta_t(Y)) for t = 0..q-2.
/// Throws PreconditionError if f(0) != 0.
Eigen::VectorXcd mult_fourier(const CharacterTable& ct, const ComplexFn& f);
/// f(Y) = (1/(q-1)) sum_t M(t) eta_t(Y), returned as a punctured function.
ComplexFn mult_fourier_inverse(const CharacterTable& ct, const Eigen::VectorXcd& coeffs);

}  // namespace qprog

#endif  // QPROG_CHARACTERS_HPP
