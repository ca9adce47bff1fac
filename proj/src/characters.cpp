#include "qprog/characters.hpp"

#include <string>

namespace qprog {

CharacterTable::CharacterTable(Field field)
    : field_(std::move(field)), sqrt_q_(std::sqrt(static_cast<double>(field_.q()))) {
  const std::uint32_t q = field_.q();
  const std::uint32_t p = field_.p();
  additive_.resize(q);
  for (std::uint32_t x = 0; x < q; ++x)
    additive_[x] = unit_root(field_.trace(FieldElement(x)), p);

  roots_.resize(q - 1);
  for (std::uint32_t k = 0; k + 1 < q; ++k) roots_[k] = unit_root(k, q - 1);

  chi_.assign(q, 0);
  for (std::uint32_t x = 1; x < q; ++x) chi_[x] = field_.is_square(FieldElement(x)) ? 1 : -1;

  Complex raw = 0.0;
  for (std::uint32_t y = 0; y < q; ++y) raw += e(field_.square(FieldElement(y)));
  gauss_ = {raw / sqrt_q_, raw};
  if (std::abs(std::abs(gauss_.sigma) - 1.0) > 1e-9)
    throw ConsistencyError("Gauss sum modulus check failed for q = " + std::to_string(q));
}

Complex CharacterTable::eta(std::uint32_t t, FieldElement x) const {
  if (x.is_zero()) throw PreconditionError("multiplicative character evaluated at zero");
  const std::uint64_t n = q() - 1;
  return roots_[(static_cast<std::uint64_t>(t % n) * field_.log(x)) % n];
}

Complex mult_char(const CharacterTable& ct, std::uint32_t t, FieldElement x) { return ct.eta(t, x); }

int quadratic_char(const CharacterTable& ct, FieldElement x) { return ct.chi(x); }

GaussSumInfo gauss_sum(const CharacterTable& ct) { return ct.gauss(); }

ComplexFn fourier(const CharacterTable& ct, const ComplexFn& f) {
  const Field& F = ct.field();
  const std::uint32_t q = F.q();
  if (f.size() != q) throw PreconditionError("function length does not match the field");
  ComplexFn out(q);
  for (std::uint32_t xi = 0; xi < q; ++xi) {
    Complex acc = 0.0;
    for (std::uint32_t x = 0; x < q; ++x)
      acc += f.values[x] * ct.e_neg(F.mul(FieldElement(x), FieldElement(xi)));
    out.values[xi] = acc / static_cast<double>(q);
  }
  return out;
}

ComplexFn fourier_inverse(const CharacterTable& ct, const ComplexFn& fhat) {
  const Field& F = ct.field();
  const std::uint32_t q = F.q();
  if (fhat.size() != q) throw PreconditionError("function length does not match the field");
  ComplexFn out(q);
  for (std::uint32_t x = 0; x < q; ++x) {
    Complex acc = 0.0;
    for (std::uint32_t xi = 0; xi < q; ++xi)
      acc += fhat.values[xi] * ct.e(F.mul(FieldElement(x), FieldElement(xi)));
    out.values[x] = acc;
  }
  return out;
}

Eigen::VectorXcd mult_fourier(const CharacterTable& ct, const ComplexFn& f) {
  const Field& F = ct.field();
  const std::uint32_t q = F.q();
  if (f.size() != q) throw PreconditionError("function length does not match the field");
  if (f.values[0] != Complex(0.0)) throw PreconditionError("multiplicative transform needs f(0) = 0");
  const std::uint32_t n = q - 1;
  Eigen::VectorXcd out(n);
  for (std::uint32_t t = 0; t < n; ++t) {
    Complex acc = 0.0;
    for (std::uint32_t k = 0; k < n; ++k)
      acc += f.values[F.exp(k).code] * unit_root(-static_cast<std::int64_t>(t) * k, n);
    out[t] = acc;
  }
  return out;
}

ComplexFn mult_fourier_inverse(const CharacterTable& ct, const Eigen::VectorXcd& coeffs) {
  const Field& F = ct.field();
  const std::uint32_t q = F.q();
  const std::uint32_t n = q - 1;
  if (coeffs.size() != n) throw PreconditionError("expected q-1 multiplicative coefficients");
  ComplexFn out(q, Domain::kPunctured);
  for (std::uint32_t k = 0; k < n; ++k) {
    Complex acc = 0.0;
    for (std::uint32_t t = 0; t < n; ++t)
      acc += coeffs[t] * unit_root(static_cast<std::int64_t>(t) * k, n);
    out.values[F.exp(k).code] = acc / static_cast<double>(n);
  }
  return out;
}

}  // namespace qprog
