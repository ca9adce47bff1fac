#ifndef QPROG_WEIL_HPP
#define QPROG_WEIL_HPP

#include <cstdint>
#include <vector>

#include "qprog/characters.hpp"

namespace qprog {

/// sum_{r != 0, +-1} eta_t(r) chi(1 - r^2) e(lambda (r-1)/(r+1)).
/// Throws PreconditionError on lambda == 0.
Complex mixed_sum(const CharacterTable& ct, std::uint32_t t, FieldElement lambda);

struct SubstitutionCheck {
  Complex r_side;   // sum over r != 0, +-1
  Complex s_side;   // sum over s != -1, 0, 1 after s = (r-1)/(r+1)
  std::uint32_t r_terms = 0;
  std::uint32_t s_terms = 0;
  bool pass = false;
};

/// Evaluates both sides of the fractional-linear reindexing
///   eta(r) chi(1 - r^2)  ->  eta((1+s)/(1-s)) chi(-4s/(1-s)^2)
/// and compares them to `tol` absolute.
SubstitutionCheck substitution_identity(const CharacterTable& ct, std::uint32_t t, FieldElement lambda,
                                        double tol = 1e-9);

/// sum_{r != 0} L_h(r) eta_t(r). Requires h != 0.
Complex lh_char_sum(const CharacterTable& ct, FieldElement h, std::uint32_t t);

struct WeilScanRow {
  std::uint32_t t = 0;
  std::uint32_t lambda = 0;
  double abs_sum = 0.0;
};

struct WeilScanReport {
  std::uint32_t q = 0;
  std::uint64_t grid_size = 0;   // pairs (t, lambda) covered
  std::uint32_t term_count = 0;  // q - 3 summands per pair
  double max_abs_sum = 0.0;
  double max_ratio = 0.0;        // max_abs_sum / sqrt(q)
  std::uint32_t argmax_t = 0;
  std::uint32_t argmax_lambda = 0;
  double quadratic_max_abs = 0.0;  // max over lambda at t = (q-1)/2
  bool unimodular_terms = true;    // every summand had modulus 1
  std::vector<WeilScanRow> rows;   // filled only when requested
};

/// Full (t, lambda) grid; ties broken by smallest (t, lambda).
WeilScanReport weil_scan(const CharacterTable& ct, int jobs = 1, bool keep_rows = false);

}  // namespace qprog

#endif  // QPROG_WEIL_HPP
