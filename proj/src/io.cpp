#include "qprog/io.hpp"

#include <cstdio>
#include <sstream>

namespace qprog {

json field_descriptor(const Field& F) {
  return json{{"p", F.p()}, {"s", F.s()}, {"modulus", F.modulus()}, {"generator", F.generator().code}};
}

Field field_from_descriptor(const json& j, std::uint32_t cap) {
  Field F = Field::build(j.at("p").get<std::uint32_t>(), j.at("s").get<std::uint32_t>(), cap);
  if (j.contains("modulus") && j.at("modulus").get<std::vector<std::uint32_t>>() != F.modulus())
    throw PreconditionError("descriptor modulus differs from the canonical modulus");
  if (j.contains("generator") && j.at("generator").get<std::uint32_t>() != F.generator().code)
    throw PreconditionError("descriptor generator differs from the canonical generator");
  return F;
}

json to_json(const ComplexFn& f) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < f.size(); ++i) arr.push_back({f.values[i].real(), f.values[i].imag()});
  return arr;
}

ComplexFn complex_fn_from_json(const json& j, Domain domain) {
  ComplexFn f(static_cast<Eigen::Index>(j.size()), domain);
  for (std::size_t i = 0; i < j.size(); ++i)
    f.values[static_cast<Eigen::Index>(i)] = Complex(j[i].at(0).get<double>(), j[i].at(1).get<double>());
  return f;
}

json to_json(const ElementSet& A) { return A.codes(); }

json to_json(const KernelScan& s) {
  json j{{"q", s.q}, {"kernel", s.kernel}, {"cases_checked", s.cases_checked}, {"max_abs_error", s.max_abs_error}};
  if (s.kernel == "B_h") j["max_prefactor_deviation"] = s.max_prefactor_deviation;
  return j;
}

json to_json(const DeviationReport& r) {
  return json{{"q", r.q},
              {"seed", r.seed},
              {"trial_count", r.trial_count},
              {"max_ratio", r.max_ratio},
              {"ratio_times_q_delta", r.ratio_times_q_delta},
              {"witness", r.witness},
              {"sign_max_ratio", r.sign_max_ratio},
              {"indicator_max_ratio", r.indicator_max_ratio},
              {"ensemble_max_ratio", r.ensemble_max_ratio},
              {"alternating_max_ratio", r.alternating_max_ratio},
              {"alternating_starts", r.alternating_starts},
              {"alternating_rounds", r.alternating_rounds},
              {"is_lower_bound", true}};
}

json to_json(const SlicedNormReport& r) {
  return json{{"q", r.q},
              {"norms", r.norms},
              {"max_norm", r.max_norm},
              {"max_norm_times_sqrt_q", r.max_norm_times_sqrt_q}};
}

json to_json(const WeilScanReport& r) {
  return json{{"q", r.q},
              {"grid_size", r.grid_size},
              {"term_count", r.term_count},
              {"max_abs_sum", r.max_abs_sum},
              {"max_ratio", r.max_ratio},
              {"argmax", {{"t", r.argmax_t}, {"lambda", r.argmax_lambda}}},
              {"quadratic_max_abs", r.quadratic_max_abs},
              {"unimodular_terms", r.unimodular_terms}};
}

json to_json(const PlaneCensus& c) {
  json j{{"q", c.q},
         {"total_planes", c.total_planes},
         {"planes_containing_one", c.planes_containing_one},
         {"planes_avoiding_one", c.planes_avoiding_one},
         {"bad_count", c.bad_count},
         {"bad_bound", c.bad_bound},
         {"good_count", c.good_count},
         {"min_bad_witnesses", c.min_bad_witnesses},
         {"spans_of_y_and_y2", c.spans_of_y_and_y2},
         {"good_example_certified", c.good_example_certified}};
  if (c.good_example) {
    j["good_example"] = {{"basis", {c.good_example->b1.code, c.good_example->b2.code}},
                         {"elements", to_json(c.good_example->elements)}};
  } else {
    j["good_example"] = nullptr;
  }
  return j;
}

json to_json(const Threshold& t) {
  return json{{"alpha", t.alpha}, {"size", t.size}, {"exponent", t.exponent}, {"feasible", t.feasible}};
}

json to_json(const InequalityChain& c) {
  return json{{"alpha", c.alpha},         {"lhs", c.lhs},     {"lhs_operator", c.lhs_operator},
              {"deviation", c.deviation}, {"rhs", c.rhs},     {"y0_term", c.y0_term},
              {"holds", c.holds}};
}

double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const std::size_t n = xs.size();
  if (n < 2 || ys.size() != n) return 0.0;
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

std::string csv_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  }
  return out.str();
}

}  // namespace qprog
