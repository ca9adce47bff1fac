#include "qprog/kernels.hpp"

#include <algorithm>

#include "qprog/parallel.hpp"

namespace qprog {

std::string_view to_string(KernelCase c) {
  switch (c) {
    case KernelCase::kDiagonal: return "diagonal";
    case KernelCase::kAntidiagonalZero: return "antidiagonal-zero";
    case KernelCase::kGeneric: return "generic";
    case KernelCase::kBZeroAZero: return "b-zero-a-zero";
    case KernelCase::kBZeroANonzero: return "b-zero-a-nonzero";
  }
  return "unknown";
}

FieldElement half(const Field& F, FieldElement h) { return F.div(h, F.from_int(2)); }

KernelValue K_closed(const CharacterTable& ct, FieldElement a, FieldElement b) {
  if (b.is_zero()) {
    if (a.is_zero()) return {Complex(1.0), KernelCase::kBZeroAZero};
    return {Complex(0.0), KernelCase::kBZeroANonzero};
  }
  const Field& F = ct.field();
  const FieldElement phase = F.neg(F.div(F.square(a), F.mul(F.from_int(4), b)));
  return {ct.sigma() / ct.sqrt_q() * static_cast<double>(ct.chi(b)) * ct.e(phase),
          KernelCase::kGeneric};
}

Complex K_brute(const CharacterTable& ct, FieldElement a, FieldElement b) {
  const Field& F = ct.field();
  Complex acc = 0.0;
  for (std::uint32_t y = 0; y < F.q(); ++y) {
    const FieldElement Y(y);
    acc += ct.e(F.add(F.mul(a, Y), F.mul(b, F.square(Y))));
  }
  return acc / static_cast<double>(F.q());
}

Eigen::MatrixXcd kernel_matrix(const CharacterTable& ct) {
  const std::uint32_t q = ct.q();
  Eigen::MatrixXcd K(q, q);
  for (std::uint32_t b = 0; b < q; ++b)
    for (std::uint32_t a = 0; a < q; ++a)
      K(a, b) = K_closed(ct, FieldElement(a), FieldElement(b)).value;
  return K;
}

namespace {

void check_bh_args(const Field& F, FieldElement h, FieldElement y, FieldElement z) {
  if (h.is_zero()) throw PreconditionError("B_h needs h != 0");
  const FieldElement mh = F.neg(h);
  if (y.is_zero() || z.is_zero() || y == mh || z == mh)
    throw PreconditionError("B_h arguments must avoid 0 and -h");
}

}  // namespace

QuadraticPhase Bh_phase(const Field& F, FieldElement h, FieldElement y, FieldElement z) {
  check_bh_args(F, h, y, z);
  const FieldElement hy = F.add(h, y), hz = F.add(h, z);
  const FieldElement y_minus_z = F.sub(y, z);
  const FieldElement hyz = F.add(hy, z);
  const FieldElement den = F.mul(hy, hz);
  QuadraticPhase ph;
  ph.a = F.div(F.mul(F.mul(h, y_minus_z), hyz), F.mul(den, F.mul(y, z)));
  ph.b = F.div(F.mul(F.from_int(2), F.mul(h, y_minus_z)), den);
  ph.c = F.div(F.mul(F.square(h), F.neg(y_minus_z)), den);
  return ph;
}

Complex Bh_brute(const CharacterTable& ct, FieldElement h, FieldElement y, FieldElement z) {
  const Field& F = ct.field();
  check_bh_args(F, h, y, z);
  const FieldElement iy = F.inv(y), iyh = F.inv(F.add(y, h));
  const FieldElement iz = F.inv(z), izh = F.inv(F.add(z, h));
  Complex acc = 0.0;
  for (std::uint32_t xc = 0; xc < F.q(); ++xc) {
    const FieldElement x(xc);
    const FieldElement x2 = F.square(x);
    const FieldElement xh2 = F.square(F.sub(x, h));
    FieldElement t = F.neg(F.mul(x2, iy));
    t = F.add(t, F.mul(xh2, iyh));
    t = F.add(t, F.mul(x2, iz));
    t = F.sub(t, F.mul(xh2, izh));
    acc += ct.e(t);
  }
  return acc;
}

BhClosed Bh_closed(const CharacterTable& ct, FieldElement h, FieldElement y, FieldElement z) {
  const Field& F = ct.field();
  BhClosed out;
  out.phase = Bh_phase(F, h, y, z);
  const FieldElement hyz = F.add(F.add(h, y), z);
  if (y == z) {
    out.value = static_cast<double>(F.q());
    out.tag = KernelCase::kDiagonal;
  } else if (hyz.is_zero()) {
    out.value = 0.0;
    out.tag = KernelCase::kAntidiagonalZero;
  } else {
    const FieldElement arg = F.div(F.mul(h, F.sub(z, y)), hyz);
    out.value = ct.sigma() * ct.sqrt_q() * static_cast<double>(ct.chi(out.phase.a)) * ct.e(arg);
    out.tag = KernelCase::kGeneric;
  }
  return out;
}

Complex omega(const CharacterTable& ct, FieldElement h) {
  return ct.sigma() * static_cast<double>(ct.chi(h));
}

Complex Lh(const CharacterTable& ct, FieldElement h, FieldElement r) {
  if (h.is_zero()) throw PreconditionError("L_h needs h != 0");
  const Field& F = ct.field();
  const FieldElement rp1 = F.add(r, Field::one());
  const FieldElement rm1 = F.sub(r, Field::one());
  if (rp1.is_zero() || rm1.is_zero()) return 0.0;
  const int c = ct.chi(F.sub(Field::one(), F.square(r)));
  return omega(ct, h) * static_cast<double>(c) * ct.e(F.mul(h, F.div(rm1, rp1)));
}

int twist(const CharacterTable& ct, FieldElement h, FieldElement Y) {
  const Field& F = ct.field();
  const FieldElement c = half(F, h);
  return ct.chi(F.sub(F.square(Y), F.square(c)));
}

Complex Bh0(const CharacterTable& ct, FieldElement h, FieldElement Y, FieldElement Z, Route route) {
  const Field& F = ct.field();
  if (h.is_zero()) throw PreconditionError("B_{h,0} needs h != 0");
  const FieldElement c = half(F, h);
  const FieldElement mc = F.neg(c);
  if (Y == c || Y == mc || Z == c || Z == mc) throw PreconditionError("B_{h,0} arguments must avoid +-h/2");
  const FieldElement y = F.sub(Y, c), z = F.sub(Z, c);
  const Complex b = route == Route::kClosed ? Bh_closed(ct, h, y, z).value : Bh_brute(ct, h, y, z);
  return static_cast<double>(twist(ct, h, Y) * twist(ct, h, Z)) * b;
}

Complex Bh0_decomposed(const CharacterTable& ct, FieldElement h, FieldElement Y, FieldElement Z) {
  if (Y.is_zero() || Z.is_zero()) throw PreconditionError("decomposition needs Y, Z != 0");
  const Field& F = ct.field();
  const double diag = (Y == Z) ? static_cast<double>(F.q()) : 0.0;
  return diag + ct.sqrt_q() * Lh(ct, h, F.div(Z, Y));
}

KernelScan scan_K(const CharacterTable& ct, int jobs) {
  const std::uint32_t q = ct.q();
  std::vector<double> err(q, 0.0);
  parallel_for(q, jobs, [&](std::size_t a) {
    for (std::uint32_t b = 0; b < q; ++b) {
      const FieldElement A(static_cast<std::uint32_t>(a)), B(b);
      err[a] = std::max(err[a], std::abs(K_closed(ct, A, B).value - K_brute(ct, A, B)));
    }
  });
  KernelScan out{q, "K", static_cast<std::uint64_t>(q) * q, 0.0, 0.0};
  for (double e : err) out.max_abs_error = std::max(out.max_abs_error, e);
  return out;
}

KernelScan scan_Bh(const CharacterTable& ct, int jobs) {
  const Field& F = ct.field();
  const std::uint32_t q = ct.q();
  struct Partial {
    std::uint64_t cases = 0;
    double err = 0.0, prefactor = 0.0;
  };
  std::vector<Partial> parts(q);
  parallel_for(q - 1, jobs, [&](std::size_t i) {
    const FieldElement h(static_cast<std::uint32_t>(i + 1));
    const FieldElement mh = F.neg(h);
    Partial& part = parts[i];
    for (std::uint32_t yc = 1; yc < q; ++yc) {
      const FieldElement y(yc);
      if (y == mh) continue;
      for (std::uint32_t zc = 1; zc < q; ++zc) {
        const FieldElement z(zc);
        if (z == mh) continue;
        const Complex brute = Bh_brute(ct, h, y, z);
        const BhClosed closed = Bh_closed(ct, h, y, z);
        ++part.cases;
        part.err = std::max(part.err, std::abs(brute - closed.value));
        if (closed.tag == KernelCase::kGeneric) {
          // Measured unimodular prefactor of the generic closed form.
          const FieldElement arg = F.div(F.mul(h, F.sub(z, y)), F.add(F.add(h, y), z));
          const Complex shape = ct.sqrt_q() * static_cast<double>(ct.chi(closed.phase.a)) * ct.e(arg);
          part.prefactor = std::max(part.prefactor, std::abs(brute / shape - ct.sigma()));
        }
      }
    }
  });
  KernelScan out{q, "B_h", 0, 0.0, 0.0};
  for (const auto& p : parts) {
    out.cases_checked += p.cases;
    out.max_abs_error = std::max(out.max_abs_error, p.err);
    out.max_prefactor_deviation = std::max(out.max_prefactor_deviation, p.prefactor);
  }
  return out;
}

KernelScan scan_decomposition(const CharacterTable& ct, int jobs) {
  const Field& F = ct.field();
  const std::uint32_t q = ct.q();
  std::vector<std::uint64_t> cases(q, 0);
  std::vector<double> err(q, 0.0);
  parallel_for(q - 1, jobs, [&](std::size_t i) {
    const FieldElement h(static_cast<std::uint32_t>(i + 1));
    const FieldElement c = half(F, h), mc = F.neg(c);
    for (std::uint32_t Yc = 1; Yc < q; ++Yc) {
      const FieldElement Y(Yc);
      if (Y == c || Y == mc) continue;
      for (std::uint32_t Zc = 1; Zc < q; ++Zc) {
        const FieldElement Z(Zc);
        if (Z == c || Z == mc) continue;
        const Complex lhs = Bh0(ct, h, Y, Z, Route::kBrute);
        err[i] = std::max(err[i], std::abs(lhs - Bh0_decomposed(ct, h, Y, Z)));
        ++cases[i];
      }
    }
  });
  KernelScan out{q, "B_h0-decomposition", 0, 0.0, 0.0};
  for (std::uint32_t i = 0; i < q; ++i) {
    out.cases_checked += cases[i];
    out.max_abs_error = std::max(out.max_abs_error, err[i]);
  }
  return out;
}

}  // namespace qprog
