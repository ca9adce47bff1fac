#ifndef QPROG_KERNELS_HPP
#define QPROG_KERNELS_HPP

#include <string_view>

#include "qprog/characters.hpp"

namespace qprog {

enum class KernelCase {
  kDiagonal,         // B_h: y = z
  kAntidiagonalZero, // B_h: h + y + z = 0, y != z
  kGeneric,          // K: b != 0; B_h: neither of the above
  kBZeroAZero,       // K: a = b = 0
  kBZeroANonzero,    // K: b = 0, a != 0
};

std::string_view to_string(KernelCase c);

struct KernelValue {
  Complex value;
  KernelCase tag;
};

// K(a, b) = E_y e(a y + b y^2). Averaged (divided by q).

/// Closed form: sigma q^{-1/2} chi(b) e(-a^2 / 4b) for b != 0, else 1 or 0.
KernelValue K_closed(const CharacterTable& ct, FieldElement a, FieldElement b);
/// Literal average (1/q) sum_y e(a y + b y^2).
Complex K_brute(const CharacterTable& ct, FieldElement a, FieldElement b);
/// Full table K(a, b), row a, column b, from the closed form.
Eigen::MatrixXcd kernel_matrix(const CharacterTable& ct);

// B_h(y, z) = sum_x e(-x^2/y + (x-h)^2/(y+h) + x^2/z - (x-h)^2/(z+h)).
// A counting sum over x, not an average. Requires h != 0 and y, z not in
// {0, -h}; violations raise PreconditionError.

/// Quadratic-phase coefficients of the B_h exponent in x: A x^2 + B x + C.
struct QuadraticPhase {
  FieldElement a, b, c;
};
QuadraticPhase Bh_phase(const Field& F, FieldElement h, FieldElement y, FieldElement z);

Complex Bh_brute(const CharacterTable& ct, FieldElement h, FieldElement y, FieldElement z);

struct BhClosed {
  Complex value;
  KernelCase tag;
  QuadraticPhase phase;
};
BhClosed Bh_closed(const CharacterTable& ct, FieldElement h, FieldElement y, FieldElement z);

/// L_h(r) = omega_h chi(1 - r^2) e(h (r-1)/(r+1)), omega_h = sigma chi(h);
/// zero at r = +-1. Requires h != 0.
Complex Lh(const CharacterTable& ct, FieldElement h, FieldElement r);

/// omega_h = sigma chi(h).
Complex omega(const CharacterTable& ct, FieldElement h);

/// D(Y) = chi(Y^2 - c^2) with c = h/2.
int twist(const CharacterTable& ct, FieldElement h, FieldElement Y);

enum class Route { kClosed, kBrute };

/// B_{h,0}(Y, Z) = D(Y) B_h(Y - c, Z - c) D(Z), c = h/2, with B_h taken
/// from the chosen route. Requires Y, Z not in {c, -c}.
Complex Bh0(const CharacterTable& ct, FieldElement h, FieldElement Y, FieldElement Z,
            Route route = Route::kClosed);

/// q 1_{Y=Z} + q^{1/2} L_h(Z/Y) for Y, Z != 0.
Complex Bh0_decomposed(const CharacterTable& ct, FieldElement h, FieldElement Y, FieldElement Z);

/// Half of h in the field.
FieldElement half(const Field& F, FieldElement h);

/// Result of an exhaustive closed-vs-brute comparison.
struct KernelScan {
  std::uint32_t q = 0;
  std::string kernel;
  std::uint64_t cases_checked = 0;
  double max_abs_error = 0.0;
  // B_h only: max |measured generic prefactor - sigma|, see Bh_prefactor.
  double max_prefactor_deviation = 0.0;
};

KernelScan scan_K(const CharacterTable& ct, int jobs = 1);
KernelScan scan_Bh(const CharacterTable& ct, int jobs = 1);
KernelScan scan_decomposition(const CharacterTable& ct, int jobs = 1);

}  // namespace qprog

#endif  // QPROG_KERNELS_HPP
