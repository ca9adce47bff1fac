#ifndef QPROG_TOOLS_COMMANDS_HPP
#define QPROG_TOOLS_COMMANDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qprog/io.hpp"

namespace qprog::cli {

// Exit-code contract.
inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

enum class Format { kJson, kCsv, kBoth };

struct CommonOptions {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> fields;  // (p, s)
  std::uint64_t seed = 1;
  std::uint32_t trials = 64;
  int jobs = 1;
  std::string out_dir = ".";
  Format format = Format::kJson;
  double tol_abs = 1e-8;
  double tol_rel = 1e-9;
  bool verbose = false;
};

/// Splits an odd prime power into (p, s); throws PreconditionError.
std::pair<std::uint32_t, std::uint32_t> split_prime_power(std::uint32_t q);

struct CommandResult {
  int exit_code = kExitPass;
  std::vector<std::string> files_written;
  json report;  // last report produced, for callers and tests
};

CommandResult cmd_verify(const std::vector<std::string>& targets, const CommonOptions& opts);
CommandResult cmd_scan(const std::string& kind, const CommonOptions& opts, std::uint32_t starts,
                       std::uint32_t rounds);
CommandResult cmd_construct(const std::string& kind, std::uint32_t p, std::uint32_t s_base,
                            const CommonOptions& opts, std::optional<std::uint64_t> shuffle_seed);

/// Greedy sets are asserted to hold at least this many elements per sqrt(q);
/// calibrated on the prime fields up to 127. The minimum 1/sqrt(3) = 0.577 is
/// attained at q = 3, where no two-element set is progression-free.
inline constexpr double kGreedyCalibration = 0.57;

/// Envelope for |mixed sum| / sqrt(q) and T_h norm * sqrt(q).
inline constexpr double kWeilEnvelope = 4.0;
inline constexpr double kSliceEnvelope = 4.0;

}  // namespace qprog::cli

#endif  // QPROG_TOOLS_COMMANDS_HPP
