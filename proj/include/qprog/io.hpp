#ifndef QPROG_IO_HPP
#define QPROG_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qprog/characters.hpp"
#include "qprog/constructions.hpp"
#include "qprog/kernels.hpp"
#include "qprog/operators.hpp"
#include "qprog/weil.hpp"

namespace qprog {

using json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "0.3.0";

/// {p, s, modulus: [c0..cs], generator}
json field_descriptor(const Field& F);
/// Rebuilds a field from its descriptor and checks modulus and generator
/// match; throws PreconditionError otherwise.
Field field_from_descriptor(const json& j, std::uint32_t cap = Field::kDefaultCap);

/// Array of [re, im] pairs indexed by element code.
json to_json(const ComplexFn& f);
ComplexFn complex_fn_from_json(const json& j, Domain domain = Domain::kFullField);

/// Sorted element codes.
json to_json(const ElementSet& A);

json to_json(const KernelScan& s);
json to_json(const DeviationReport& r);
json to_json(const SlicedNormReport& r);
json to_json(const WeilScanReport& r);
json to_json(const PlaneCensus& c);
json to_json(const Threshold& t);
json to_json(const InequalityChain& c);

/// Least-squares slope of ys against xs.
double ls_slope(const std::vector<double>& xs, const std::vector<double>& ys);

/// %.17g, so CSV values round-trip exactly.
std::string csv_number(double v);

/// Header line then one line per row; cells are written verbatim.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

}  // namespace qprog

#endif  // QPROG_IO_HPP
