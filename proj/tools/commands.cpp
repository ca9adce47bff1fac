#include "commands.hpp"

#include <chrono>
#include <deque>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "qprog/constructions.hpp"
#include "qprog/error.hpp"
#include "qprog/random.hpp"

namespace qprog::cli {
namespace {

// Exhaustive B_h and decomposition checks are q^4 work; above this size the
// verify suite records them as skipped.
constexpr std::uint32_t kExhaustiveKernelMaxQ = 49;
// Dense q x q operator work (kernel table, T_h, fg_form) is skipped above this.
constexpr std::uint32_t kOperatorMaxQ = 243;
// Brute-force K and the full Weil grid are q^3 work.
constexpr std::uint32_t kCubicWorkMaxQ = 729;
// Fourier suites are q^2 work per trial.
constexpr std::uint32_t kQuadraticWorkMaxQ = 2197;
// Power iteration against the full SVD, relative.
constexpr double kPowerIterationAgreement = 1e-7;
// Random elements checked for the cubic relation and the rank fact.
constexpr std::uint32_t kCubicSamples = 100;
constexpr std::uint32_t kRankSamples = 1000;

// Random streams, one per suite, so adding trials to one suite never shifts
// another.
enum Stream : std::uint32_t {
  kStreamFourier = 101,
  kStreamMultFourier = 102,
  kStreamAveraging = 103,
  kStreamDeviation = 104,
  kStreamSlices = 105,
  kStreamCubic = 106,
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

json element_pair(FieldElement x, FieldElement y) { return json{{"x", x.code}, {"y", y.code}}; }

// One named check inside a suite.
struct Check {
  std::string name;
  bool pass = true;
  bool skipped = false;
  std::uint64_t cases = 0;
  double max_error = 0.0;
  std::string detail;
  json failure = nullptr;  // inputs of the first failing case
};

json to_json(const Check& c) {
  json j{{"name", c.name}, {"status", c.skipped ? "skipped" : (c.pass ? "pass" : "fail")}, {"cases", c.cases}};
  j["max_error"] = c.max_error;
  if (!c.detail.empty()) j["detail"] = c.detail;
  if (!c.failure.is_null()) j["first_failure"] = c.failure;
  return j;
}

class Suite {
 public:
  Check& add(std::string name) {
    Check c;
    c.name = std::move(name);
    checks_.push_back(std::move(c));
    return checks_.back();
  }
  void skip(std::string name, std::string why) {
    Check& c = add(std::move(name));
    c.skipped = true;
    c.detail = std::move(why);
  }
  bool pass() const {
    for (const auto& c : checks_)
      if (!c.pass) return false;
    return true;
  }
  json report() const {
    json j{{"status", pass() ? "pass" : "fail"}};
    json arr = json::array();
    json first = nullptr;
    for (const auto& c : checks_) {
      arr.push_back(to_json(c));
      if (!c.pass && first.is_null()) first = json{{"check", c.name}, {"inputs", c.failure}, {"detail", c.detail}};
    }
    j["checks"] = arr;
    j["first_failure"] = first;
    return j;
  }

 private:
  std::deque<Check> checks_;  // references returned by add() stay valid
};

// Records err into c and, on the first breach of tol, the failing inputs.
void observe(Check& c, double err, double tol, const std::function<json()>& inputs) {
  ++c.cases;
  if (!(err <= c.max_error)) c.max_error = err;  // also propagates NaN
  if (!(err <= tol) && c.pass) {
    c.pass = false;
    c.failure = inputs();
  }
}

void require(Check& c, bool ok, const std::string& detail, json inputs = nullptr) {
  ++c.cases;
  if (!ok && c.pass) {
    c.pass = false;
    c.detail = detail;
    c.failure = std::move(inputs);
  }
}

double rel_error(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

// ---------------------------------------------------------------- verify suites

json verify_kernels(const CharacterTable& ct, const CommonOptions& o) {
  const Field& F = ct.field();
  const std::uint32_t q = ct.q();
  Suite suite;

  Check& k = suite.add("K_closed_vs_brute");
  const KernelScan ks = scan_K(ct, o.jobs);
  k.cases = ks.cases_checked;
  k.max_error = ks.max_abs_error;
  if (!(ks.max_abs_error <= o.tol_abs)) {
    k.pass = false;
    for (std::uint32_t a = 0; a < q && k.failure.is_null(); ++a)
      for (std::uint32_t b = 0; b < q; ++b) {
        const FieldElement fa(a), fb(b);
        if (!(std::abs(K_closed(ct, fa, fb).value - K_brute(ct, fa, fb)) <= o.tol_abs)) {
          k.failure = json{{"a", a}, {"b", b}};
          break;
        }
      }
  }

  if (q > kExhaustiveKernelMaxQ) {
    const std::string why = "exhaustive scan limited to q <= " + std::to_string(kExhaustiveKernelMaxQ);
    suite.skip("B_h_closed_vs_brute", why);
    suite.skip("B_h_generic_prefactor_is_sigma", why);
    suite.skip("B_h0_decomposition", why);
    return suite.report();
  }

  const KernelScan bs = scan_Bh(ct, o.jobs);
  Check& b = suite.add("B_h_closed_vs_brute");
  b.cases = bs.cases_checked;
  b.max_error = bs.max_abs_error;
  if (!(bs.max_abs_error <= o.tol_abs)) {
    b.pass = false;
    for (std::uint32_t h = 1; h < q && b.failure.is_null(); ++h) {
      const FieldElement fh(h), mh = F.neg(fh);
      for (std::uint32_t y = 1; y < q && b.failure.is_null(); ++y)
        for (std::uint32_t z = 1; z < q; ++z) {
          const FieldElement fy(y), fz(z);
          if (fy == mh || fz == mh) continue;
          if (!(std::abs(Bh_brute(ct, fh, fy, fz) - Bh_closed(ct, fh, fy, fz).value) <= o.tol_abs)) {
            b.failure = json{{"h", h}, {"y", y}, {"z", z}};
            break;
          }
        }
    }
  }

  Check& pref = suite.add("B_h_generic_prefactor_is_sigma");
  pref.cases = bs.cases_checked;
  pref.max_error = bs.max_prefactor_deviation;
  pref.pass = bs.max_prefactor_deviation <= o.tol_abs;
  pref.detail = "measured generic prefactor compared with the Gauss-sum sigma";

  const KernelScan ds = scan_decomposition(ct, o.jobs);
  Check& d = suite.add("B_h0_decomposition");
  d.cases = ds.cases_checked;
  d.max_error = ds.max_abs_error;
  if (!(ds.max_abs_error <= o.tol_abs)) {
    d.pass = false;
    for (std::uint32_t h = 1; h < q && d.failure.is_null(); ++h) {
      const FieldElement fh(h), c = half(F, fh), mc = F.neg(c);
      for (std::uint32_t Y = 1; Y < q && d.failure.is_null(); ++Y)
        for (std::uint32_t Z = 1; Z < q; ++Z) {
          const FieldElement fY(Y), fZ(Z);
          if (fY == c || fY == mc || fZ == c || fZ == mc) continue;
          if (!(std::abs(Bh0(ct, fh, fY, fZ, Route::kBrute) - Bh0_decomposed(ct, fh, fY, fZ)) <= o.tol_abs)) {
            d.failure = json{{"h", h}, {"Y", Y}, {"Z", Z}};
            break;
          }
        }
    }
  }
  return suite.report();
}

json verify_fourier(const CharacterTable& ct, const CommonOptions& o) {
  const Field& F = ct.field();
  const std::uint32_t q = ct.q();
  Suite suite;

  Check& add_orth = suite.add("additive_orthogonality");
  for (std::uint32_t a = 0; a < q; ++a) {
    Complex s = 0;
    for (std::uint32_t x = 0; x < q; ++x) s += ct.e(F.mul(FieldElement(a), FieldElement(x)));
    observe(add_orth, std::abs(s - (a == 0 ? Complex(q) : Complex(0))), o.tol_abs, [&] { return json{{"a", a}}; });
  }

  Check& mult_orth = suite.add("multiplicative_orthogonality");
  for (std::uint32_t t = 0; t + 1 < q; ++t) {
    Complex s = 0;
    for (std::uint32_t x = 1; x < q; ++x) s += ct.eta(t, FieldElement(x));
    observe(mult_orth, std::abs(s - (t == 0 ? Complex(q - 1) : Complex(0))), o.tol_abs,
            [&] { return json{{"t", t}}; });
  }

  Check& gauss = suite.add("gauss_sum_unimodular_and_sigma_squared");
  const Complex sigma = ct.sigma();
  observe(gauss, std::abs(std::abs(sigma) - 1.0), o.tol_abs, [] { return json{{"quantity", "|sigma|"}}; });
  observe(gauss, std::abs(sigma * sigma - static_cast<double>(ct.chi(F.neg(Field::one())))), o.tol_abs,
          [] { return json{{"quantity", "sigma^2 - chi(-1)"}}; });
  gauss.detail = "sigma = " + fmt(sigma.real()) + (sigma.imag() < 0 ? " - " : " + ") + fmt(std::abs(sigma.imag())) + "i";

  Check& round = suite.add("additive_round_trip");
  Check& pars = suite.add("additive_parseval");
  Check& mround = suite.add("multiplicative_round_trip");
  Check& mpars = suite.add("multiplicative_parseval");
  for (std::uint32_t i = 0; i < o.trials; ++i) {
    auto rng = trial_rng(o.seed, kStreamFourier, i);
    const ComplexFn f = random_complex_fn(q, rng);
    const ComplexFn fhat = fourier(ct, f);
    const double back = (fourier_inverse(ct, fhat).values - f.values).cwiseAbs().maxCoeff();
    observe(round, back, o.tol_abs, [&] { return json{{"trial", i}}; });
    const double lhs = norm_count(fhat) * norm_count(fhat), rhs = norm_avg(f) * norm_avg(f);
    observe(pars, rel_error(lhs, rhs), o.tol_rel, [&] { return json{{"trial", i}}; });

    auto mrng = trial_rng(o.seed, kStreamMultFourier, i);
    ComplexFn g = random_complex_fn(q, mrng);
    g.values[0] = 0;
    const Eigen::VectorXcd M = mult_fourier(ct, g);
    const ComplexFn gback = mult_fourier_inverse(ct, M);
    observe(mround, (gback.values.tail(q - 1) - g.values.tail(q - 1)).cwiseAbs().maxCoeff(), o.tol_abs,
            [&] { return json{{"trial", i}}; });
    const double mlhs = M.squaredNorm() / static_cast<double>(q - 1), mrhs = g.values.squaredNorm();
    observe(mpars, rel_error(mlhs, mrhs), o.tol_rel, [&] { return json{{"trial", i}}; });
  }
  return suite.report();
}

json verify_operators(const OperatorContext& ctx, const CommonOptions& o) {
  const Field& F = ctx.field();
  const std::uint32_t q = ctx.q();
  Suite suite;

  Check& routes = suite.add("averaging_two_routes");
  Check& dev = suite.add("deviation_direct_vs_parseval");
  Check& fg = suite.add("fg_form_equals_squared_deviation");
  Check& h0 = suite.add("fg_form_h0_slice_bound");
  Check& constants = suite.add("deviation_vanishes_on_constants");
  const std::uint32_t pairs = std::min<std::uint32_t>(o.trials, 50);
  for (std::uint32_t i = 0; i < pairs; ++i) {
    auto rng = trial_rng(o.seed, kStreamAveraging, i);
    const ComplexFn f1 = random_complex_fn(q, rng), f2 = random_complex_fn(q, rng);
    const double scale = std::max(1.0, f1.values.cwiseAbs().maxCoeff() * f2.values.cwiseAbs().maxCoeff());
    const double diff =
        (averaging_apply(F, f1, f2).values - averaging_apply_fourier(ctx, f1, f2).values).cwiseAbs().maxCoeff();
    observe(routes, diff / scale, o.tol_abs, [&] { return json{{"trial", i}}; });

    const DeviationNorm dn = deviation_norm(ctx, f1, f2, std::numeric_limits<double>::infinity());
    observe(dev, rel_error(dn.direct, dn.parseval), o.tol_rel * 1e2, [&] { return json{{"trial", i}}; });
    const FGForm form = fg_form(ctx, f1, f2);
    const double sq = dn.parseval * dn.parseval;
    observe(fg, std::abs(form.total - Complex(sq)) / std::max(1.0, sq), o.tol_rel * 1e2,
            [&] { return json{{"trial", i}}; });
    require(h0, std::abs(form.h0_slice) <= form.h0_bound * (1 + o.tol_rel) + o.tol_abs,
            "|h = 0 slice| exceeds q^{-1} ||f1hat||^2 ||f2hat||^2", json{{"trial", i}});
  }
  {
    ComplexFn c1(q), c2(q);
    c1.values.setConstant(Complex(0.5, -1.25));
    c2.values.setConstant(Complex(2.0, 0.75));
    observe(constants, deviation_norm(ctx, c1, c2).direct, o.tol_abs, [] { return json{{"input", "constants"}}; });
  }

  if (q <= 3) {
    suite.skip("T_h_power_iteration_vs_svd", "needs q > 3");
  } else {
    Check& tn = suite.add("T_h_power_iteration_vs_svd");
    Check& tapply = suite.add("T_h_apply_vs_matrix");
    Check& env = suite.add("T_h_norm_times_sqrt_q_envelope");
    double max_norm = 0;
    for (std::uint32_t h = 1; h < q; ++h) {
      const FieldElement fh(h);
      const Eigen::MatrixXcd M = sliced_matrix(ctx, fh);
      const OpNorm pn = spectral_norm(M);
      max_norm = std::max(max_norm, pn.norm);
      if (q <= PowerIterationOptions{}.fallback_max_q)
        observe(tn, rel_error(pn.norm, spectral_norm_exact(M)), kPowerIterationAgreement,
                [&] { return json{{"h", h}}; });
      auto rng = trial_rng(o.seed, kStreamSlices, h);
      const ComplexFn G = random_complex_fn(q, rng);
      observe(tapply, (T_h_apply(ctx, fh, G).values - M * G.values).cwiseAbs().maxCoeff(), o.tol_abs,
              [&] { return json{{"h", h}}; });
    }
    if (tn.cases == 0) {
      tn.skipped = true;
      tn.detail = "full SVD comparison limited to q <= " + std::to_string(PowerIterationOptions{}.fallback_max_q);
    }
    env.max_error = max_norm * std::sqrt(static_cast<double>(q));
    require(env, env.max_error <= kSliceEnvelope, "max_h ||T_h|| sqrt(q) = " + fmt(env.max_error));
  }

  Check& thr = suite.add("threshold_exponent_five_sixths");
  const Threshold t = threshold(0.25, 1.0, q);
  observe(thr, std::abs(t.exponent - 5.0 / 6.0), 1e-12, [] { return json{{"delta", 0.25}}; });
  return suite.report();
}

json verify_weil(const CharacterTable& ct, const CommonOptions& o) {
  const std::uint32_t q = ct.q();
  Suite suite;

  const WeilScanReport r = weil_scan(ct, o.jobs);
  Check& env = suite.add("mixed_sum_envelope");
  env.cases = r.grid_size;
  env.max_error = r.max_ratio;
  env.detail = "term_count " + std::to_string(r.term_count) + ", bound 4 sqrt(q) + 3";
  if (r.max_abs_sum > kWeilEnvelope * ct.sqrt_q() + 3.0) {
    env.pass = false;
    env.failure = json{{"t", r.argmax_t}, {"lambda", r.argmax_lambda}};
  }
  Check& uni = suite.add("summands_unimodular");
  require(uni, r.unimodular_terms, "a summand had modulus other than 1");

  if (q > kOperatorMaxQ) {
    suite.skip("substitution_identity", "full grid limited to q <= " + std::to_string(kOperatorMaxQ));
    suite.skip("lh_char_sum_vs_mixed_sum", "full grid limited to q <= " + std::to_string(kOperatorMaxQ));
    return suite.report();
  }
  Check& sub = suite.add("substitution_identity");
  Check& lh = suite.add("lh_char_sum_vs_mixed_sum");
  for (std::uint32_t t = 0; t + 1 < q; ++t)
    for (std::uint32_t l = 1; l < q; ++l) {
      const FieldElement lambda(l);
      const SubstitutionCheck s = substitution_identity(ct, t, lambda, o.tol_abs);
      observe(sub, std::abs(s.r_side - s.s_side), o.tol_abs, [&] { return json{{"t", t}, {"lambda", l}}; });
      const Complex expect = omega(ct, lambda) * mixed_sum(ct, t, lambda);
      observe(lh, std::abs(lh_char_sum(ct, lambda, t) - expect), o.tol_abs,
              [&] { return json{{"h", l}, {"t", t}}; });
    }
  return suite.report();
}

// Inequality chain for a constructed set; adds one case to c.
void check_chain(Check& c, const Field& F, const ElementSet& A, const std::string& label) {
  const InequalityChain ch = inequality_chain(F, A);
  require(c, ch.holds, "chain fails for " + label, json{{"set", label}, {"lhs", ch.lhs}, {"rhs", ch.rhs}});
}

json verify_constructions(const Field& F, const CommonOptions& o) {
  const std::uint32_t q = F.q();
  Suite suite;

  Check& greedy = suite.add("greedy_certified_and_calibrated");
  Check& chain = suite.add("inequality_chain");
  const ElementSet A = greedy_construct(F);
  const ProgressionCheck pc = is_progression_free(F, A);
  require(greedy, pc.free, "greedy set contains a progression",
          pc.witness ? element_pair(pc.witness->first, pc.witness->second) : json(nullptr));
  require(greedy, A.contains(Field::zero()), "greedy set does not start at 0");
  const double bound = kGreedyCalibration * std::sqrt(static_cast<double>(q));
  require(greedy, A.size() >= bound, "|A| = " + std::to_string(A.size()) + " below " + fmt(bound));
  greedy.detail = "|A| = " + std::to_string(A.size());
  check_chain(chain, F, A, "greedy");

  const std::uint64_t q2 = static_cast<std::uint64_t>(q) * q, q3 = q2 * q;
  if (q2 > Field::kDefaultCap) {
    suite.skip("quadratic_line", "q^2 exceeds the field cap");
  } else {
    Check& line = suite.add("quadratic_line");
    const Field big = Field::build(F.p(), 2 * F.s());
    const SubfieldEmbedding emb = subfield_embed(F, big);
    const QuadraticLine L = quadratic_line(emb);
    const ProgressionCheck lc = is_progression_free(big, L.line);
    require(line, lc.free, "line contains a progression");
    require(line, L.line.size() == q, "|L| != q");
    std::uint32_t shared = 0;
    for (std::uint32_t code : L.line.codes()) shared += emb.contains(FieldElement(code)) ? 1 : 0;
    require(line, shared == 1, "L meets the subfield outside 0");
    check_chain(chain, big, L.line, "quadratic_line");
  }

  if (q3 > Field::kDefaultCap) {
    suite.skip("plane_census", "q^3 exceeds the field cap");
    suite.skip("cubic_relation", "q^3 exceeds the field cap");
    suite.skip("one_y_y2_independent", "q^3 exceeds the field cap");
    return suite.report();
  }
  const Field big = Field::build(F.p(), 3 * F.s());
  const CubicSpace space(subfield_embed(F, big));
  Check& census = suite.add("plane_census");
  const PlaneCensus pcs = plane_census(space, o.jobs);
  require(census, pcs.total_planes == q2 + q + 1, "total planes");
  require(census, pcs.planes_containing_one == q + 1, "planes containing 1");
  require(census, pcs.planes_avoiding_one == q2, "planes avoiding 1");
  require(census, pcs.bad_count <= pcs.bad_bound, "bad planes exceed q(q+1)/2");
  require(census, pcs.bad_count == 0 || pcs.min_bad_witnesses >= 2 * (q - 1), "fewer than 2(q-1) witnesses");
  require(census, pcs.good_example.has_value() && pcs.good_example_certified, "no certified good plane");
  if (pcs.good_example) {
    require(census, pcs.good_example->elements.size() == q2, "good plane size");
    require(census, is_progression_free(big, pcs.good_example->elements).free, "good plane has a progression");
    check_chain(chain, big, pcs.good_example->elements, "good_plane");
  }
  census.detail = "bad " + std::to_string(pcs.bad_count) + " of bound " + std::to_string(pcs.bad_bound) +
                  ", good " + std::to_string(pcs.good_count);

  Check& cubic = suite.add("cubic_relation");
  Check& rank = suite.add("one_y_y2_independent");
  const SubfieldEmbedding& emb = space.embedding();
  const auto pick_outside = [&](std::mt19937_64& rng) {
    for (;;) {
      const FieldElement y(static_cast<std::uint32_t>(rng() % big.q()));
      if (!emb.contains(y)) return y;
    }
  };
  for (std::uint32_t i = 0; i < std::max(kCubicSamples, kRankSamples); ++i) {
    auto rng = trial_rng(o.seed, kStreamCubic, i);
    const FieldElement y = pick_outside(rng);
    if (i < kCubicSamples) {
      const CubicRelation rel = min_poly(emb, y);
      const FieldElement y2 = big.square(y), y3 = big.mul(y2, y);
      const FieldElement lhs = big.sub(big.sub(big.sub(y3, big.mul(emb(rel.a), y2)), big.mul(emb(rel.b), y)),
                                       emb(rel.c));
      require(cubic, lhs.is_zero(), "y^3 - A y^2 - B y - C != 0", json{{"y", y.code}});
    }
    require(rank, space.rank({Field::one(), y, big.square(y)}) == 3, "rank of {1, y, y^2} below 3",
            json{{"y", y.code}});
  }
  return suite.report();
}

// ---------------------------------------------------------------- output

json manifest(const std::string& command, const json& arguments, const json& fields, const CommonOptions& o,
              const json& wall) {
  return json{{"schema_version", kSchemaVersion},
              {"tool_version", kToolVersion},
              {"command", command},
              {"arguments", arguments},
              {"fields", fields},
              {"seed", o.seed},
              {"trials", o.trials},
              {"tolerance", {{"abs", o.tol_abs}, {"rel", o.tol_rel}}},
              {"wall_time_s", wall}};
}

bool wants_json(const CommonOptions& o) { return o.format != Format::kCsv; }
bool wants_csv(const CommonOptions& o) { return o.format != Format::kJson; }

void write_file(CommandResult& res, const CommonOptions& o, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(o.out_dir);
  const std::filesystem::path path = std::filesystem::path(o.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw PreconditionError("cannot write " + path.string());
  out << body;
  res.files_written.push_back(path.string());
}

std::string field_tag(std::uint32_t p, std::uint32_t s) { return std::to_string(p) + "-" + std::to_string(s); }

}  // namespace

std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint32_t q) {
  if (q < 2) throw PreconditionError("q = " + std::to_string(q) + " is not a prime power");
  std::uint32_t p = 0;
  for (std::uint32_t d = 2; d * d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  if (p == 0) p = q;
  std::uint32_t s = 0, r = q;
  while (r % p == 0) {
    r /= p;
    ++s;
  }
  if (r != 1) throw PreconditionError("q = " + std::to_string(q) + " is not a prime power");
  return {p, s};
}

CommandResult cmd_verify(const std::vector<std::string>& targets_in, const CommonOptions& o) {
  static const std::vector<std::string> kAll{"kernels", "fourier", "operators", "weil", "constructions"};
  const std::vector<std::string> targets = targets_in.empty() ? kAll : targets_in;
  for (const auto& t : targets)
    if (std::find(kAll.begin(), kAll.end(), t) == kAll.end()) throw PreconditionError("unknown target '" + t + "'");
  if (o.fields.empty()) throw PreconditionError("verify needs --p/--s or --q-list");

  // Every field is built before any suite runs, so a bad field fails fast.
  std::vector<Field> fields;
  for (const auto& [p, s] : o.fields) fields.push_back(Field::build(p, s));

  CommandResult res;
  for (const Field& F : fields) {
    json wall = json::object();
    json suites = json::object();
    bool pass = true;
    const auto t_field = Clock::now();
    const CharacterTable ct(F);
    std::optional<OperatorContext> ctx;
    wall["characters"] = seconds_since(t_field);
    const auto skipped = [](std::uint32_t limit) {
      return json{{"status", "skipped"},
                  {"detail", "suite limited to q <= " + std::to_string(limit)},
                  {"checks", json::array()},
                  {"first_failure", nullptr}};
    };
    for (const auto& target : targets) {
      const auto t0 = Clock::now();
      json r;
      if ((target == "kernels" || target == "weil") && F.q() > kCubicWorkMaxQ) {
        r = skipped(kCubicWorkMaxQ);
      } else if (target == "fourier" && F.q() > kQuadraticWorkMaxQ) {
        r = skipped(kQuadraticWorkMaxQ);
      } else if (target == "kernels") {
        r = verify_kernels(ct, o);
      } else if (target == "fourier") {
        r = verify_fourier(ct, o);
      } else if (target == "operators") {
        if (F.q() > kOperatorMaxQ) {
          r = skipped(kOperatorMaxQ);
        } else {
          if (!ctx) ctx.emplace(F);
          r = verify_operators(*ctx, o);
        }
      } else if (target == "weil") {
        r = verify_weil(ct, o);
      } else {
        r = verify_constructions(F, o);
      }
      wall[target] = seconds_since(t0);
      pass = pass && r["status"] != "fail";
      suites[target] = std::move(r);
    }
    json report;
    report["manifest"] = manifest("verify", json{{"targets", targets}}, json::array({field_descriptor(F)}), o, wall);
    report["field"] = field_descriptor(F);
    report["status"] = pass ? "pass" : "fail";
    report["targets"] = suites;
    const std::string tag = field_tag(F.p(), F.s());
    if (wants_json(o)) write_file(res, o, "verify-" + tag + ".json", report.dump(2) + "\n");
    if (wants_csv(o)) {
      std::vector<std::vector<std::string>> rows;
      for (const auto& [name, suite] : suites.items())
        for (const auto& c : suite["checks"])
          rows.push_back({name, c["name"].get<std::string>(), c["status"].get<std::string>(),
                          std::to_string(c["cases"].get<std::uint64_t>()), csv_number(c["max_error"].get<double>())});
      write_file(res, o, "verify-" + tag + ".csv",
                 csv_table({"target", "check", "status", "cases", "max_error"}, rows));
    }
    if (!pass) res.exit_code = kExitFail;
    res.report = std::move(report);
  }
  return res;
}

CommandResult cmd_scan(const std::string& kind, const CommonOptions& o, std::uint32_t starts,
                       std::uint32_t rounds) {
  if (kind != "delta" && kind != "slices" && kind != "weil")
    throw PreconditionError("unknown scan kind '" + kind + "'");
  if (o.fields.empty()) throw PreconditionError("scan needs --q-list or --p/--s");
  std::vector<Field> fields;
  for (const auto& [p, s] : o.fields) fields.push_back(Field::build(p, s));

  CommandResult res;
  json per_q = json::array(), descriptors = json::array(), wall = json::object();
  std::vector<double> log_q, value, scaled;
  std::vector<std::vector<std::string>> rows;
  json assertions = json::array();
  bool pass = true;

  for (const Field& F : fields) {
    const auto t0 = Clock::now();
    const std::uint32_t q = F.q();
    const double dq = q;
    descriptors.push_back(field_descriptor(F));
    log_q.push_back(std::log(dq));
    const std::string qs = std::to_string(q);
    if (kind == "delta") {
      const OperatorContext ctx(F);
      const DeviationReport r =
          deviation_scan(ctx, DeviationScanOptions{o.trials, o.seed, starts, rounds, o.jobs});
      per_q.push_back(to_json(r));
      value.push_back(r.ensemble_max_ratio);
      scaled.push_back(r.ensemble_max_ratio * std::pow(dq, 0.25));
      const double qd = std::pow(dq, 0.25);
      rows.push_back({qs, "sign", csv_number(r.sign_max_ratio), csv_number(r.sign_max_ratio * qd)});
      rows.push_back({qs, "indicator", csv_number(r.indicator_max_ratio), csv_number(r.indicator_max_ratio * qd)});
      rows.push_back(
          {qs, "alternating", csv_number(r.alternating_max_ratio), csv_number(r.alternating_max_ratio * qd)});
    } else if (kind == "slices") {
      const OperatorContext ctx(F);
      const SlicedNormReport r = sliced_norm_scan(ctx, o.jobs);
      per_q.push_back(to_json(r));
      value.push_back(r.max_norm);
      scaled.push_back(r.max_norm_times_sqrt_q);
      for (std::size_t h = 0; h < r.norms.size(); ++h)
        rows.push_back({qs, std::to_string(h + 1), csv_number(r.norms[h]), csv_number(r.norms[h] * std::sqrt(dq))});
    } else {
      const CharacterTable ct(F);
      const WeilScanReport r = weil_scan(ct, o.jobs, o.verbose);
      per_q.push_back(to_json(r));
      value.push_back(r.max_abs_sum);
      scaled.push_back(r.max_ratio);
      if (o.verbose) {
        for (const auto& row : r.rows)
          rows.push_back({qs, std::to_string(row.t), std::to_string(row.lambda), csv_number(row.abs_sum),
                          csv_number(row.abs_sum / ct.sqrt_q())});
      } else {
        rows.push_back({qs, csv_number(r.max_abs_sum), csv_number(r.max_ratio)});
      }
    }
    wall["q=" + qs] = seconds_since(t0);
  }

  std::vector<double> log_value;
  for (double v : value) log_value.push_back(std::log(std::max(v, std::numeric_limits<double>::min())));
  json summary{{"q", json::array()}, {"exponent_fit", ls_slope(log_q, log_value)},
               {"scaled_slope_vs_log_q", ls_slope(log_q, scaled)}};
  for (const Field& F : fields) summary["q"].push_back(F.q());
  const auto assert_that = [&](const std::string& name, bool ok, double measured, double limit) {
    assertions.push_back({{"name", name}, {"pass", ok}, {"measured", measured}, {"limit", limit}});
    pass = pass && ok;
  };
  if (kind == "delta") {
    summary["scaled_quantity"] = "ensemble max_ratio * q^(1/4)";
    summary["note"] = "random ensembles and alternating maximization give lower bounds for the supremum";
    assert_that("scaled_trend_not_increasing", ls_slope(log_q, scaled) < 0.05, ls_slope(log_q, scaled), 0.05);
  } else if (kind == "slices") {
    summary["scaled_quantity"] = "max_h ||T_h|| * sqrt(q)";
    const double lo = *std::min_element(scaled.begin(), scaled.end());
    const double hi = *std::max_element(scaled.begin(), scaled.end());
    assert_that("factor_two_band", hi <= 2.0 * lo, hi / lo, 2.0);
    assert_that("envelope", hi <= kSliceEnvelope, hi, kSliceEnvelope);
  } else {
    summary["scaled_quantity"] = "max |mixed sum| / sqrt(q)";
    const double hi = *std::max_element(scaled.begin(), scaled.end());
    assert_that("envelope", hi < kWeilEnvelope, hi, kWeilEnvelope);
  }
  summary["assertions"] = assertions;

  json report;
  report["manifest"] = manifest("scan", json{{"kind", kind}, {"starts", starts}, {"rounds", rounds}}, descriptors, o, wall);
  report["status"] = pass ? "pass" : "fail";
  report["per_q"] = per_q;
  report["summary"] = summary;
  if (wants_json(o)) write_file(res, o, "scan-" + kind + ".json", report.dump(2) + "\n");
  if (wants_csv(o)) {
    std::vector<std::string> header;
    if (kind == "delta") header = {"q", "trial", "value", "value_times_power_of_q"};
    else if (kind == "slices") header = {"q", "h", "value", "value_times_power_of_q"};
    else if (o.verbose) header = {"q", "t", "lambda_code", "abs_sum", "ratio"};
    else header = {"q", "max_abs_sum", "max_ratio"};
    write_file(res, o, "scan-" + kind + ".csv", csv_table(header, rows));
  }
  res.exit_code = pass ? kExitPass : kExitFail;
  res.report = std::move(report);
  return res;
}

CommandResult cmd_construct(const std::string& kind, std::uint32_t p, std::uint32_t s_base,
                            const CommonOptions& o, std::optional<std::uint64_t> shuffle_seed) {
  if (kind != "greedy" && kind != "line" && kind != "plane")
    throw PreconditionError("unknown construction '" + kind + "'");
  const auto t0 = Clock::now();
  const Field small = Field::build(p, s_base);
  std::optional<Field> big;
  if (kind == "line") big = Field::build(p, 2 * s_base);
  if (kind == "plane") big = Field::build(p, 3 * s_base);
  const Field& K = big ? *big : small;

  json body;
  ElementSet set;
  bool pass = true;
  std::vector<std::string> failures;
  if (kind == "greedy") {
    set = greedy_construct(small, shuffle_seed);
    const double bound = kGreedyCalibration * std::sqrt(static_cast<double>(small.q()));
    body["calibration"] = {{"c", kGreedyCalibration}, {"bound", bound}, {"size_over_sqrt_q", set.size() / std::sqrt(static_cast<double>(small.q()))}};
    if (shuffle_seed) body["shuffle_seed"] = *shuffle_seed;
    if (set.size() < bound) failures.push_back("greedy size below calibration bound");
  } else if (kind == "line") {
    const QuadraticLine L = quadratic_line(subfield_embed(small, K));
    set = L.line;
    body["omega"] = L.omega.code;
    if (set.size() != small.q()) failures.push_back("|L| != q");
  } else {
    const CubicSpace space(subfield_embed(small, K));
    const PlaneCensus c = plane_census(space, o.jobs);
    body["census"] = to_json(c);
    if (!c.good_example) throw ConsistencyError("census found no good plane");
    set = c.good_example->elements;
    if (set.size() != small.q() * small.q()) failures.push_back("good plane size != q^2");
  }
  // Re-certify independently of the construction's own certification.
  const ProgressionCheck pc = is_progression_free(K, set);
  if (!pc.free) throw ConsistencyError("constructed set failed certification");
  const InequalityChain chain = inequality_chain(K, set);
  if (!chain.holds) failures.push_back("inequality chain fails");
  pass = failures.empty();

  json wall{{"construct", seconds_since(t0)}};
  json fields = json::array({field_descriptor(small)});
  if (big) fields.push_back(field_descriptor(*big));

  json report;
  report["manifest"] =
      manifest("construct", json{{"kind", kind}, {"p", p}, {"s_base", s_base}}, fields, o, wall);
  report["status"] = pass ? "pass" : "fail";
  report["failures"] = failures;
  report["field"] = field_descriptor(K);
  report["set"] = {{"size", set.size()}, {"certified", pc.free}, {"elements", to_json(set)}};
  report["inequality_chain"] = to_json(chain);
  for (auto& [k, v] : body.items()) report[k] = v;

  CommandResult res;
  const std::string tag = field_tag(p, s_base);
  if (wants_json(o)) write_file(res, o, "construct-" + kind + "-" + tag + ".json", report.dump(2) + "\n");
  if (wants_csv(o)) {
    std::vector<std::vector<std::string>> rows;
    for (std::uint32_t code : set.codes()) rows.push_back({std::to_string(code)});
    write_file(res, o, "construct-" + kind + "-" + tag + ".csv", csv_table({"element_code"}, rows));
  }
  res.exit_code = pass ? kExitPass : kExitFail;
  res.report = std::move(report);
  return res;
}

}  // namespace qprog::cli
