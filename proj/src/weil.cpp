#include "qprog/weil.hpp"

#include <cmath>

#include "qprog/parallel.hpp"

namespace qprog {

namespace {

struct Summand {
  FieldElement r;
  std::uint32_t log_r;
  int chi;         // chi(1 - r^2), never 0 because r != +-1
  FieldElement s;  // (r - 1)/(r + 1)
};

std::vector<Summand> summands(const CharacterTable& ct) {
  const Field& F = ct.field();
  const FieldElement one = Field::one(), minus_one = F.neg(one);
  std::vector<Summand> out;
  for (std::uint32_t rc = 1; rc < F.q(); ++rc) {
    const FieldElement r(rc);
    if (r == one || r == minus_one) continue;
    out.push_back({r, F.log(r), ct.chi(F.sub(one, F.square(r))), F.div(F.sub(r, one), F.add(r, one))});
  }
  return out;
}

}  // namespace

Complex mixed_sum(const CharacterTable& ct, std::uint32_t t, FieldElement lambda) {
  if (lambda.is_zero()) throw PreconditionError("mixed sum needs lambda != 0 (nonconstant phase)");
  const Field& F = ct.field();
  Complex acc = 0.0;
  for (const Summand& x : summands(ct))
    acc += ct.eta(t, x.r) * static_cast<double>(x.chi) * ct.e(F.mul(lambda, x.s));
  return acc;
}

SubstitutionCheck substitution_identity(const CharacterTable& ct, std::uint32_t t, FieldElement lambda, double tol) {
  if (lambda.is_zero()) throw PreconditionError("mixed sum needs lambda != 0 (nonconstant phase)");
  const Field& F = ct.field();
  const FieldElement one = Field::one(), minus_one = F.neg(one);
  SubstitutionCheck out;
  for (const Summand& x : summands(ct)) {
    out.r_side += ct.eta(t, x.r) * static_cast<double>(x.chi) * ct.e(F.mul(lambda, x.s));
    ++out.r_terms;
  }
  const FieldElement minus_four = F.from_int(-4);
  for (std::uint32_t sc = 0; sc < F.q(); ++sc) {
    const FieldElement s(sc);
    if (s.is_zero() || s == one || s == minus_one) continue;
    const FieldElement one_minus_s = F.sub(one, s);
    const FieldElement r = F.div(F.add(one, s), one_minus_s);
    const FieldElement w = F.div(F.mul(minus_four, s), F.square(one_minus_s));
    out.s_side += ct.eta(t, r) * static_cast<double>(ct.chi(w)) * ct.e(F.mul(lambda, s));
    ++out.s_terms;
  }
  out.pass = out.r_terms == out.s_terms && std::abs(out.r_side - out.s_side) <= tol;
  return out;
}

Complex lh_char_sum(const CharacterTable& ct, FieldElement h, std::uint32_t t) {
  if (h.is_zero()) throw PreconditionError("L_h needs h != 0");
  const Field& F = ct.field();
  const Complex w = ct.sigma() * static_cast<double>(ct.chi(h));
  const FieldElement one = Field::one(), minus_one = F.neg(one);
  Complex acc = 0.0;
  for (std::uint32_t rc = 1; rc < F.q(); ++rc) {
    const FieldElement r(rc);
    if (r == one || r == minus_one) continue;  // L_h(+-1) = 0
    const int c = ct.chi(F.sub(one, F.square(r)));
    const FieldElement s = F.div(F.sub(r, one), F.add(r, one));
    acc += w * static_cast<double>(c) * ct.e(F.mul(h, s)) * ct.eta(t, r);
  }
  return acc;
}

WeilScanReport weil_scan(const CharacterTable& ct, int jobs, bool keep_rows) {
  const Field& F = ct.field();
  const std::uint32_t q = F.q();
  const std::uint32_t n = q - 1;
  const auto terms = summands(ct);

  std::vector<Complex> roots(n);
  for (std::uint32_t k = 0; k < n; ++k) roots[k] = unit_root(k, n);

  WeilScanReport rep;
  rep.q = q;
  rep.term_count = static_cast<std::uint32_t>(terms.size());
  for (const Summand& x : terms) rep.unimodular_terms = rep.unimodular_terms && (x.chi == 1 || x.chi == -1);

  // abs_sum[(lambda - 1) * n + t]
  std::vector<double> abs_sum(static_cast<std::size_t>(n) * n, 0.0);
  parallel_for(n, jobs, [&](std::size_t li) {
    const FieldElement lambda(static_cast<std::uint32_t>(li + 1));
    std::vector<Complex> weight(terms.size());
    for (std::size_t i = 0; i < terms.size(); ++i)
      weight[i] = static_cast<double>(terms[i].chi) * ct.e(F.mul(lambda, terms[i].s));
    for (std::uint32_t t = 0; t < n; ++t) {
      Complex acc = 0.0;
      for (std::size_t i = 0; i < terms.size(); ++i)
        acc += weight[i] * roots[(static_cast<std::uint64_t>(t) * terms[i].log_r) % n];
      abs_sum[li * n + t] = std::abs(acc);
    }
  });

  // Deterministic argmax: smallest (t, lambda) among maxima.
  for (std::uint32_t t = 0; t < n; ++t) {
    for (std::uint32_t li = 0; li < n; ++li) {
      const double v = abs_sum[static_cast<std::size_t>(li) * n + t];
      if (v > rep.max_abs_sum) {
        rep.max_abs_sum = v;
        rep.argmax_t = t;
        rep.argmax_lambda = li + 1;
      }
      ++rep.grid_size;
      if (keep_rows) rep.rows.push_back({t, li + 1, v});
    }
  }
  rep.max_ratio = rep.max_abs_sum / ct.sqrt_q();

  // Recompute the eta = chi column with the quadratic character directly.
  if (q > 3) {
    const std::uint32_t tq = ct.quadratic_index();
    double grid_max = 0.0;
    for (std::uint32_t li = 0; li < n; ++li) {
      const FieldElement lambda(li + 1);
      Complex acc = 0.0;
      for (const Summand& x : terms)
        acc += static_cast<double>(ct.chi(x.r) * x.chi) * ct.e(F.mul(lambda, x.s));
      rep.quadratic_max_abs = std::max(rep.quadratic_max_abs, std::abs(acc));
      grid_max = std::max(grid_max, abs_sum[static_cast<std::size_t>(li) * n + tq]);
    }
    if (std::abs(grid_max - rep.quadratic_max_abs) > 1e-9)
      throw ConsistencyError("quadratic-character column disagrees with the character grid");
  }
  return rep;
}

}  // namespace qprog
