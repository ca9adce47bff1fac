#ifndef QPROG_OPERATORS_HPP
#define QPROG_OPERATORS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qprog/characters.hpp"
#include "qprog/element_set.hpp"
#include "qprog/kernels.hpp"

namespace qprog {

/// Character data plus the full kernel table K(a, b); shared by every
/// Fourier-side evaluation over one field.
class OperatorContext {
 public:
  explicit OperatorContext(Field field) : chars_(std::move(field)), kernel_(kernel_matrix(chars_)) {}

  const CharacterTable& chars() const { return chars_; }
  const Field& field() const { return chars_.field(); }
  std::uint32_t q() const { return chars_.q(); }
  /// K(a, b), row a, column b.
  Complex K(FieldElement a, FieldElement b) const { return kernel_(a.code, b.code); }
  const Eigen::MatrixXcd& kernel() const { return kernel_; }

 private:
  CharacterTable chars_;
  Eigen::MatrixXcd kernel_;
};

// Normalizations: physical-side functions use averaged norms ||.||_2 and
// means E; frequency-side functions (hats, G, F_h, T_h inputs) use counting
// norms ||.||_{l2}.

/// A(f1, f2)(x) = (1/q) sum_y f1(x + y) f2(x + y^2), the literal double loop.
ComplexFn averaging_apply(const Field& F, const ComplexFn& f1, const ComplexFn& f2);

/// The same operator through its Fourier expansion
/// sum_{n1,n2} f1hat(n1) f2hat(n2) e((n1+n2) x) K(n1, n2).
ComplexFn averaging_apply_fourier(const OperatorContext& ctx, const ComplexFn& f1, const ComplexFn& f2);

/// S(m) = sum_{n != 0} f1hat(m - n) f2hat(n) K(m - n, n); the frequency
/// coefficients of A(f1, f2) - E f1 E f2.
Eigen::VectorXcd deviation_coefficients(const OperatorContext& ctx, const ComplexFn& f1hat,
                                        const ComplexFn& f2hat);

struct DeviationNorm {
  double direct = 0.0;    // ||A(f1,f2) - E f1 E f2||_2, averaged
  double parseval = 0.0;  // ||S||_{l2}, counting
  double ratio = 0.0;     // direct / (||f1||_2 ||f2||_2), 0 if either is 0
};

/// Both routes; throws ConsistencyError if they differ by more than
/// tol * max(1, direct).
DeviationNorm deviation_norm(const OperatorContext& ctx, const ComplexFn& f1, const ComplexFn& f2,
                             double tol = 1e-8);

struct FGForm {
  Complex total;       // sum over all h
  Complex h0_slice;    // h = 0 term alone
  double h0_bound = 0; // q^{-1} ||f1hat||^2_{l2} ||f2hat||^2_{l2}
};

/// sum_h sum_{u, v: v != 0, v+h != 0} F_h(u) G_h(v) K(u, v) conj K(u-h, v+h),
/// with F_h(u) = f1hat(u) conj f1hat(u-h), G_h(v) = f2hat(v) conj f2hat(v+h).
/// Equals ||S||_{l2}^2, i.e. the squared deviation norm.
FGForm fg_form(const OperatorContext& ctx, const ComplexFn& f1, const ComplexFn& f2);

/// Matrix of T_h: entry (u, v) = K(u, v) conj K(u-h, v+h) for v not in
/// {0, -h}, zero columns otherwise. Throws PreconditionError on h == 0.
Eigen::MatrixXcd sliced_matrix(const OperatorContext& ctx, FieldElement h);

/// T_h(G)(u) as the literal sum over admissible v.
ComplexFn T_h_apply(const OperatorContext& ctx, FieldElement h, const ComplexFn& G);

struct OpNorm {
  double norm = 0.0;
  int iterations = 0;
  bool used_fallback = false;
};

struct PowerIterationOptions {
  double rel_tol = 1e-10;
  int max_iterations = 20000;
  std::uint32_t fallback_max_q = 49;
};

/// Largest singular value of a dense matrix by iterating M^* M from a fixed
/// deterministic start vector until the Rayleigh quotient stabilizes. When
/// the iteration cap is hit, falls back to a full SVD if rows <= fallback_max_q,
/// otherwise throws ConsistencyError naming the last two iterates.
OpNorm spectral_norm(const Eigen::MatrixXcd& M, const PowerIterationOptions& opts = {});

/// Largest singular value from the full spectrum.
double spectral_norm_exact(const Eigen::MatrixXcd& M);

OpNorm T_h_opnorm(const OperatorContext& ctx, FieldElement h, const PowerIterationOptions& opts = {});

struct SlicedNormReport {
  std::uint32_t q = 0;
  std::vector<double> norms;  // index h.code - 1
  double max_norm = 0.0;
  double max_norm_times_sqrt_q = 0.0;
};

SlicedNormReport sliced_norm_scan(const OperatorContext& ctx, int jobs = 1,
                                  const PowerIterationOptions& opts = {});

struct ProgressionCount {
  std::uint64_t count = 0;
  // First (x, y) in lexicographic code order, when count > 0.
  std::optional<std::pair<FieldElement, FieldElement>> witness;
};

/// Pairs (x, y), y != 0, with x, x+y, x+y^2 all in A. Entries may repeat.
ProgressionCount count_progressions(const Field& F, const ElementSet& A);

struct Threshold {
  double alpha = 0.0;     // root of alpha^3 - C q^{-delta} alpha^{3/2} - alpha/q
  double size = 0.0;      // alpha * q
  double exponent = 0.0;  // 1 - (2/3) delta
  bool feasible = false;  // alpha <= 1
};

/// Density above which the lower bound for progressions with y != 0 turns
/// positive. Throws PreconditionError unless 0 < delta < 3/4, C >= 0, q >= 2.
Threshold threshold(double delta, double C, double q);

/// One instantiation of the counting chain for f = 1_A:
///   E_x E_y f(x) f(x+y) f(x+y^2) >= alpha^3 - ||f||_2 ||A(f,f) - E[f]^2||_2.
struct InequalityChain {
  double alpha = 0.0;
  double lhs = 0.0;           // from the progression count (y = 0 included)
  double lhs_operator = 0.0;  // E_x f(x) A(f,f)(x), same quantity second route
  double deviation = 0.0;     // ||A(f,f) - alpha^2||_2
  double rhs = 0.0;           // alpha^3 - sqrt(alpha) * deviation
  double y0_term = 0.0;       // alpha / q
  bool holds = false;
};

InequalityChain inequality_chain(const Field& F, const ElementSet& A);

struct DeviationScanOptions {
  std::uint32_t trials = 64;  // per random ensemble
  std::uint64_t seed = 1;
  std::uint32_t starts = 0;   // alternating-maximization starts, 0 disables
  std::uint32_t rounds = 20;
  int jobs = 1;
};

struct DeviationReport {
  std::uint32_t q = 0;
  std::uint64_t seed = 0;
  std::uint32_t trial_count = 0;    // random pairs tried, all ensembles
  double max_ratio = 0.0;           // max over everything tried
  double ratio_times_q_delta = 0.0; // max_ratio * q^{1/4}
  std::string witness;              // which pair attained max_ratio
  double sign_max_ratio = 0.0;
  double indicator_max_ratio = 0.0;
  double ensemble_max_ratio = 0.0;  // max of the two random ensembles
  double alternating_max_ratio = 0.0;  // lower envelope for the bilinear sup
  std::uint32_t alternating_starts = 0;
  std::uint32_t alternating_rounds = 0;
};

/// Random-ensemble and alternating-maximization estimate of
/// sup ||A(f1,f2) - E f1 E f2||_2 / (||f1||_2 ||f2||_2). A lower bound.
DeviationReport deviation_scan(const OperatorContext& ctx, const DeviationScanOptions& opts = {});

}  // namespace qprog

#endif  // QPROG_OPERATORS_HPP
