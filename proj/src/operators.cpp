#include "qprog/operators.hpp"

#include <cmath>
#include <sstream>

#include "qprog/parallel.hpp"
#include "qprog/random.hpp"

namespace qprog {

namespace {

void check_len(const Field& F, const ComplexFn& f) {
  if (f.size() != F.q()) throw PreconditionError("function length does not match the field");
}

std::vector<FieldElement> squares(const Field& F) {
  std::vector<FieldElement> sq(F.q());
  for (std::uint32_t y = 0; y < F.q(); ++y) sq[y] = F.square(FieldElement(y));
  return sq;
}

struct TopPair {
  double sigma = 0.0;
  Eigen::VectorXcd right;  // unit right singular vector
  int iterations = 0;
  bool converged = false;
  double last = 0.0, previous = 0.0;
};

// Power iteration on M^* M from v0.
TopPair power_iterate(const Eigen::MatrixXcd& M, Eigen::VectorXcd v, double rel_tol, int max_iterations) {
  TopPair out;
  const Eigen::MatrixXcd adj = M.adjoint();
  v.normalize();
  double prev = -1.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const Eigen::VectorXcd w = M * v;
    const double lambda = w.squaredNorm();
    Eigen::VectorXcd u = adj * w;
    const double un = u.norm();
    out.iterations = it;
    out.previous = prev;
    out.last = lambda;
    if (un == 0.0) {
      out.sigma = 0.0;
      out.right = v;
      out.converged = true;
      return out;
    }
    v = u / un;
    if (prev >= 0.0 && std::abs(lambda - prev) <= rel_tol * lambda) {
      out.converged = true;
      break;
    }
    prev = lambda;
  }
  out.sigma = std::sqrt((M * v).squaredNorm());
  out.right = v;
  return out;
}

Eigen::VectorXcd start_vector(Eigen::Index n) {
  auto rng = trial_rng(0x5eedULL, 0, 0);
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Complex(1.0 + 0.5 * uniform_pm1(rng), 0.5 * uniform_pm1(rng));
  return v;
}

}  // namespace

ComplexFn averaging_apply(const Field& F, const ComplexFn& f1, const ComplexFn& f2) {
  check_len(F, f1);
  check_len(F, f2);
  const std::uint32_t q = F.q();
  const auto sq = squares(F);
  ComplexFn out(q);
  for (std::uint32_t xc = 0; xc < q; ++xc) {
    const FieldElement x(xc);
    Complex acc = 0.0;
    for (std::uint32_t y = 0; y < q; ++y)
      acc += f1[F.add(x, FieldElement(y))] * f2[F.add(x, sq[y])];
    out.values[xc] = acc / static_cast<double>(q);
  }
  return out;
}

ComplexFn averaging_apply_fourier(const OperatorContext& ctx, const ComplexFn& f1, const ComplexFn& f2) {
  const CharacterTable& ct = ctx.chars();
  const Field& F = ctx.field();
  const std::uint32_t q = F.q();
  const ComplexFn h1 = fourier(ct, f1), h2 = fourier(ct, f2);
  // Group the double sum by m = n1 + n2.
  Eigen::VectorXcd inner = Eigen::VectorXcd::Zero(q);
  for (std::uint32_t n1 = 0; n1 < q; ++n1) {
    for (std::uint32_t n2 = 0; n2 < q; ++n2) {
      const FieldElement m = F.add(FieldElement(n1), FieldElement(n2));
      inner[m.code] += h1.values[n1] * h2.values[n2] * ctx.kernel()(n1, n2);
    }
  }
  ComplexFn out(q);
  for (std::uint32_t x = 0; x < q; ++x) {
    Complex acc = 0.0;
    for (std::uint32_t m = 0; m < q; ++m) acc += inner[m] * ct.e(F.mul(FieldElement(m), FieldElement(x)));
    out.values[x] = acc;
  }
  return out;
}

Eigen::VectorXcd deviation_coefficients(const OperatorContext& ctx, const ComplexFn& f1hat,
                                        const ComplexFn& f2hat) {
  const Field& F = ctx.field();
  const std::uint32_t q = F.q();
  Eigen::VectorXcd S(q);
  for (std::uint32_t m = 0; m < q; ++m) {
    Complex acc = 0.0;
    for (std::uint32_t n = 1; n < q; ++n) {
      const FieldElement mn = F.sub(FieldElement(m), FieldElement(n));
      acc += f1hat.values[mn.code] * f2hat.values[n] * ctx.kernel()(mn.code, n);
    }
    S[m] = acc;
  }
  return S;
}

DeviationNorm deviation_norm(const OperatorContext& ctx, const ComplexFn& f1, const ComplexFn& f2, double tol) {
  const Field& F = ctx.field();
  const ComplexFn a = averaging_apply(F, f1, f2);
  const Complex m12 = f1.values.mean() * f2.values.mean();
  DeviationNorm out;
  out.direct = norm_avg((a.values.array() - m12).matrix());
  const ComplexFn h1 = fourier(ctx.chars(), f1), h2 = fourier(ctx.chars(), f2);
  out.parseval = norm_count(deviation_coefficients(ctx, h1, h2));
  if (std::abs(out.direct - out.parseval) > tol * std::max(1.0, out.direct)) {
    std::ostringstream msg;
    msg << "deviation routes disagree: direct " << out.direct << " vs Parseval " << out.parseval;
    throw ConsistencyError(msg.str());
  }
  const double denom = norm_avg(f1) * norm_avg(f2);
  out.ratio = denom > 0.0 ? out.direct / denom : 0.0;
  return out;
}

FGForm fg_form(const OperatorContext& ctx, const ComplexFn& f1, const ComplexFn& f2) {
  const Field& F = ctx.field();
  const std::uint32_t q = F.q();
  const ComplexFn h1 = fourier(ctx.chars(), f1), h2 = fourier(ctx.chars(), f2);
  const Eigen::MatrixXcd& K = ctx.kernel();
  FGForm out;
  for (std::uint32_t hc = 0; hc < q; ++hc) {
    const FieldElement h(hc);
    Complex slice = 0.0;
    for (std::uint32_t uc = 0; uc < q; ++uc) {
      const FieldElement u(uc);
      const FieldElement u_h = F.sub(u, h);
      const Complex Fh = h1.values[uc] * std::conj(h1.values[u_h.code]);
      if (Fh == Complex(0.0)) continue;
      Complex inner = 0.0;
      for (std::uint32_t vc = 1; vc < q; ++vc) {
        const FieldElement vh = F.add(FieldElement(vc), h);
        if (vh.is_zero()) continue;
        const Complex Gh = h2.values[vc] * std::conj(h2.values[vh.code]);
        inner += Gh * K(uc, vc) * std::conj(K(u_h.code, vh.code));
      }
      slice += Fh * inner;
    }
    out.total += slice;
    if (hc == 0) out.h0_slice = slice;
  }
  out.h0_bound = h1.values.squaredNorm() * h2.values.squaredNorm() / static_cast<double>(q);
  return out;
}

Eigen::MatrixXcd sliced_matrix(const OperatorContext& ctx, FieldElement h) {
  if (h.is_zero()) throw PreconditionError("T_h needs h != 0 (the h = 0 slice lives in fg_form)");
  const Field& F = ctx.field();
  const std::uint32_t q = F.q();
  const Eigen::MatrixXcd& K = ctx.kernel();
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(q, q);
  for (std::uint32_t vc = 1; vc < q; ++vc) {
    const FieldElement vh = F.add(FieldElement(vc), h);
    if (vh.is_zero()) continue;
    for (std::uint32_t uc = 0; uc < q; ++uc) {
      const FieldElement u_h = F.sub(FieldElement(uc), h);
      M(uc, vc) = K(uc, vc) * std::conj(K(u_h.code, vh.code));
    }
  }
  return M;
}

ComplexFn T_h_apply(const OperatorContext& ctx, FieldElement h, const ComplexFn& G) {
  if (h.is_zero()) throw PreconditionError("T_h needs h != 0 (the h = 0 slice lives in fg_form)");
  const Field& F = ctx.field();
  check_len(F, G);
  const std::uint32_t q = F.q();
  ComplexFn out(q);
  for (std::uint32_t uc = 0; uc < q; ++uc) {
    const FieldElement u(uc);
    const FieldElement u_h = F.sub(u, h);
    Complex acc = 0.0;
    for (std::uint32_t vc = 1; vc < q; ++vc) {
      const FieldElement v(vc);
      const FieldElement vh = F.add(v, h);
      if (vh.is_zero()) continue;
      acc += G[v] * ctx.K(u, v) * std::conj(ctx.K(u_h, vh));
    }
    out.values[uc] = acc;
  }
  return out;
}

double spectral_norm_exact(const Eigen::MatrixXcd& M) {
  if (M.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

OpNorm spectral_norm(const Eigen::MatrixXcd& M, const PowerIterationOptions& opts) {
  const TopPair top = power_iterate(M, start_vector(M.cols()), opts.rel_tol, opts.max_iterations);
  OpNorm out{top.sigma, top.iterations, false};
  if (top.converged) return out;
  if (static_cast<std::uint32_t>(M.rows()) <= opts.fallback_max_q) {
    out.norm = spectral_norm_exact(M);
    out.used_fallback = true;
    return out;
  }
  std::ostringstream msg;
  msg.precision(17);
  msg << "power iteration did not converge after " << top.iterations
      << " iterations; last Rayleigh quotients " << top.previous << ", " << top.last;
  throw ConsistencyError(msg.str());
}

OpNorm T_h_opnorm(const OperatorContext& ctx, FieldElement h, const PowerIterationOptions& opts) {
  return spectral_norm(sliced_matrix(ctx, h), opts);
}

SlicedNormReport sliced_norm_scan(const OperatorContext& ctx, int jobs, const PowerIterationOptions& opts) {
  const std::uint32_t q = ctx.q();
  SlicedNormReport out;
  out.q = q;
  out.norms.assign(q - 1, 0.0);
  parallel_for(q - 1, jobs, [&](std::size_t i) {
    out.norms[i] = T_h_opnorm(ctx, FieldElement(static_cast<std::uint32_t>(i + 1)), opts).norm;
  });
  for (double n : out.norms) out.max_norm = std::max(out.max_norm, n);
  out.max_norm_times_sqrt_q = out.max_norm * std::sqrt(static_cast<double>(q));
  return out;
}

ProgressionCount count_progressions(const Field& F, const ElementSet& A) {
  if (A.universe() != F.q()) throw PreconditionError("set universe does not match the field");
  const std::uint32_t q = F.q();
  const auto sq = squares(F);
  ProgressionCount out;
  for (std::uint32_t xc = 0; xc < q; ++xc) {
    const FieldElement x(xc);
    if (!A.contains(x)) continue;
    for (std::uint32_t yc = 1; yc < q; ++yc) {
      if (!A.contains(F.add(x, FieldElement(yc)))) continue;
      if (!A.contains(F.add(x, sq[yc]))) continue;
      if (out.count == 0) out.witness = {{x, FieldElement(yc)}};
      ++out.count;
    }
  }
  return out;
}

Threshold threshold(double delta, double C, double q) {
  if (!(delta > 0.0 && delta < 0.75)) throw PreconditionError("threshold needs 0 < delta < 3/4");
  if (!(C >= 0.0)) throw PreconditionError("threshold needs C >= 0");
  if (!(q >= 2.0)) throw PreconditionError("threshold needs q >= 2");
  const double decay = C * std::pow(q, -delta);
  // alpha^3 - decay alpha^{3/2} - alpha/q, divided by alpha > 0; convex with
  // a negative value at 0, hence a single positive root.
  auto phi = [&](double a) { return a * a - decay * std::sqrt(a) - 1.0 / q; };
  double lo = 0.0, hi = 1.0;
  while (phi(hi) <= 0.0) hi *= 2.0;
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (phi(mid) > 0.0 ? hi : lo) = mid;
  }
  Threshold out;
  out.alpha = hi;
  out.size = hi * q;
  out.exponent = 1.0 - 2.0 * delta / 3.0;
  out.feasible = hi <= 1.0;
  return out;
}

InequalityChain inequality_chain(const Field& F, const ElementSet& A) {
  const std::uint32_t q = F.q();
  const double dq = static_cast<double>(q);
  ComplexFn f(q);
  for (std::uint32_t c : A.codes()) f.values[c] = 1.0;
  const ComplexFn a = averaging_apply(F, f, f);

  InequalityChain out;
  out.alpha = A.size() / dq;
  const auto count = count_progressions(F, A);
  out.lhs = (static_cast<double>(count.count) + A.size()) / (dq * dq);
  out.lhs_operator = (f.values.array() * a.values.array()).mean().real();
  out.deviation = norm_avg((a.values.array() - out.alpha * out.alpha).matrix());
  out.rhs = out.alpha * out.alpha * out.alpha - std::sqrt(out.alpha) * out.deviation;
  out.y0_term = out.alpha / dq;
  if (std::abs(out.lhs - out.lhs_operator) > 1e-12)
    throw ConsistencyError("progression density routes disagree");
  out.holds = out.lhs >= out.rhs - 1e-12;
  return out;
}

namespace {

// Linear map f1 -> A(f1, f2) - E f1 E f2.
Eigen::MatrixXcd first_slot_matrix(const Field& F, const ComplexFn& f2, const std::vector<FieldElement>& sq) {
  const std::uint32_t q = F.q();
  const double dq = q;
  const Complex mean2 = f2.values.mean();
  Eigen::MatrixXcd M(q, q);
  for (std::uint32_t w = 0; w < q; ++w) {
    for (std::uint32_t x = 0; x < q; ++x) {
      const FieldElement y = F.sub(FieldElement(w), FieldElement(x));
      M(x, w) = (f2[F.add(FieldElement(x), sq[y.code])] - mean2) / dq;
    }
  }
  return M;
}

// Linear map f2 -> A(f1, f2) - E f1 E f2.
Eigen::MatrixXcd second_slot_matrix(const Field& F, const ComplexFn& f1, const std::vector<FieldElement>& sq) {
  const std::uint32_t q = F.q();
  const double dq = q;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Constant(q, q, -f1.values.mean() / dq);
  for (std::uint32_t x = 0; x < q; ++x)
    for (std::uint32_t y = 0; y < q; ++y)
      M(x, F.add(FieldElement(x), sq[y]).code) += f1[F.add(FieldElement(x), FieldElement(y))] / dq;
  return M;
}

}  // namespace

DeviationReport deviation_scan(const OperatorContext& ctx, const DeviationScanOptions& opts) {
  const Field& F = ctx.field();
  const std::uint32_t q = F.q();
  DeviationReport rep;
  rep.q = q;
  rep.seed = opts.seed;
  rep.trial_count = 2 * opts.trials;
  rep.alternating_starts = opts.starts;
  rep.alternating_rounds = opts.rounds;

  auto consider = [&](double ratio, const std::string& who) {
    if (ratio > rep.max_ratio) {
      rep.max_ratio = ratio;
      rep.witness = who;
    }
  };

  std::vector<double> sign(opts.trials), ind(opts.trials);
  parallel_for(opts.trials, opts.jobs, [&](std::size_t i) {
    auto rng = trial_rng(opts.seed, 1, i);
    const ComplexFn a = random_sign_fn(q, rng), b = random_sign_fn(q, rng);
    sign[i] = deviation_norm(ctx, a, b).ratio;
    auto rng2 = trial_rng(opts.seed, 2, i);
    const ComplexFn c = random_indicator_fn(q, rng2), d = random_indicator_fn(q, rng2);
    ind[i] = deviation_norm(ctx, c, d).ratio;
  });
  for (std::uint32_t i = 0; i < opts.trials; ++i) {
    rep.sign_max_ratio = std::max(rep.sign_max_ratio, sign[i]);
    rep.indicator_max_ratio = std::max(rep.indicator_max_ratio, ind[i]);
    consider(sign[i], "sign#" + std::to_string(i));
  }
  for (std::uint32_t i = 0; i < opts.trials; ++i) consider(ind[i], "indicator#" + std::to_string(i));
  rep.ensemble_max_ratio = std::max(rep.sign_max_ratio, rep.indicator_max_ratio);

  if (opts.starts > 0) {
    const auto sq = squares(F);
    std::vector<double> best(opts.starts, 0.0);
    parallel_for(opts.starts, opts.jobs, [&](std::size_t s) {
      auto rng = trial_rng(opts.seed, 3, s);
      ComplexFn f2 = random_complex_fn(q, rng);
      ComplexFn f1(q);
      for (std::uint32_t r = 0; r < opts.rounds; ++r) {
        const auto top1 = power_iterate(first_slot_matrix(F, f2, sq), start_vector(q), 1e-9, 500);
        f1.values = top1.right;
        const auto top2 = power_iterate(second_slot_matrix(F, f1, sq), f2.values, 1e-9, 500);
        f2.values = top2.right;
      }
      // Certify the final pair through both evaluation routes.
      best[s] = deviation_norm(ctx, f1, f2).ratio;
    });
    for (std::uint32_t s = 0; s < opts.starts; ++s) {
      rep.alternating_max_ratio = std::max(rep.alternating_max_ratio, best[s]);
      consider(best[s], "alternating#" + std::to_string(s));
    }
  }
  rep.ratio_times_q_delta = rep.max_ratio * std::pow(static_cast<double>(q), 0.25);
  return rep;
}

}  // namespace qprog
