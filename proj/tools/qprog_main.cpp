#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "qprog/error.hpp"

namespace {

using qprog::cli::CommonOptions;
using qprog::cli::Format;

std::vector<std::uint32_t> parse_q_list(const std::string& text) {
  std::vector<std::uint32_t> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw qprog::PreconditionError("bad --q-list entry '" + item + "'");
    out.push_back(static_cast<std::uint32_t>(v));
  }
  return out;
}

struct RawCommon {
  std::optional<std::uint32_t> p, s;
  std::string q_list;
  std::string format = "json";
};

void add_common(CLI::App* cmd, CommonOptions& o, RawCommon& raw) {
  cmd->add_option("--p", raw.p, "Characteristic");
  cmd->add_option("--s", raw.s, "Extension degree (base degree for construct)");
  cmd->add_option("--q-list", raw.q_list, "Comma-separated field sizes");
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  cmd->add_option("--trials", o.trials, "Random trials per field or ensemble")->capture_default_str();
  cmd->add_option("--jobs", o.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--format", raw.format, "json, csv or both")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv", "both"}));
  cmd->add_option("--tolerance-abs", o.tol_abs, "Absolute tolerance")->capture_default_str();
  cmd->add_option("--tolerance-rel", o.tol_rel, "Relative tolerance")->capture_default_str();
}

void resolve(CommonOptions& o, const RawCommon& raw, bool fields_from_ps) {
  o.format = raw.format == "csv" ? Format::kCsv : raw.format == "both" ? Format::kBoth : Format::kJson;
  if (fields_from_ps && (raw.p || raw.s)) {
    if (!raw.p) throw qprog::PreconditionError("--s given without --p");
    o.fields.emplace_back(*raw.p, raw.s.value_or(1));
  }
  for (std::uint32_t q : parse_q_list(raw.q_list)) o.fields.push_back(qprog::cli::split_prime_power(q));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-field quadratic progression toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qprog::kToolVersion));

  CommonOptions opts;
  RawCommon raw;

  std::vector<std::string> targets;
  auto* verify = app.add_subcommand("verify", "Run invariant suites on one or more fields");
  verify->add_option("targets", targets, "kernels, fourier, operators, weil, constructions (default all)");
  add_common(verify, opts, raw);

  std::string scan_kind;
  std::uint32_t starts = 32, rounds = 20;
  auto* scan = app.add_subcommand("scan", "Scan a quantity across field sizes");
  scan->add_option("kind", scan_kind, "delta, slices or weil")->required();
  scan->add_option("--starts", starts, "Alternating-maximization starts (delta)")->capture_default_str();
  scan->add_option("--rounds", rounds, "Alternating-maximization rounds (delta)")->capture_default_str();
  scan->add_flag("--verbose", opts.verbose, "Per-(t, lambda) CSV rows (weil)");
  add_common(scan, opts, raw);

  std::string construct_kind;
  std::optional<std::uint64_t> shuffle_seed;
  auto* construct = app.add_subcommand("construct", "Build and certify a progression-free set");
  construct->add_option("kind", construct_kind, "greedy, line or plane")->required();
  construct->add_option("--shuffle-seed", shuffle_seed, "Random visiting order (greedy)");
  add_common(construct, opts, raw);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qprog::cli::kExitUsage;
  }

  try {
    qprog::cli::CommandResult res;
    if (verify->parsed()) {
      resolve(opts, raw, true);
      res = qprog::cli::cmd_verify(targets, opts);
    } else if (scan->parsed()) {
      resolve(opts, raw, true);
      res = qprog::cli::cmd_scan(scan_kind, opts, starts, rounds);
    } else {
      if (!raw.p) throw qprog::PreconditionError("construct needs --p");
      resolve(opts, raw, false);
      res = qprog::cli::cmd_construct(construct_kind, *raw.p, raw.s.value_or(1), opts, shuffle_seed);
    }
    for (const auto& f : res.files_written) std::cout << f << "\n";
    std::cout << (res.exit_code == qprog::cli::kExitPass ? "pass" : "FAIL") << "\n";
    return res.exit_code;
  } catch (const qprog::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return qprog::cli::kExitUsage;
  } catch (const qprog::ConsistencyError& e) {
    std::cerr << "assertion failure: " << e.what() << "\n";
    return qprog::cli::kExitFail;
  }
}
