#pragma once

// Batch front end: JSON experiment configs in, report.json + series.csv out.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

namespace envmm::cli {

enum class Kind { envelope_check, minimize, verify_extremal, wss_envelope, wss_filter, elliptic_demo };

std::string to_string(Kind k);
std::optional<Kind> parse_kind(const std::string& name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitDomain = 2;

struct ExperimentConfig {
  Kind kind = Kind::envelope_check;
  nlohmann::json body;                  // the whole parsed document
  std::optional<std::uint64_t> seed;
  double tol = 1e-9;
  std::filesystem::path output_dir;     // empty: current directory
  std::filesystem::path base_dir;       // relative CSV paths resolve against this
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<std::filesystem::path> output_dir;
  std::optional<Kind> kind;             // subcommand; must agree with the file when both are given
};

/// Parses and validates every kind-specific field before any computation.
/// Throws BadConfig naming the offending field.
ExperimentConfig load_config(const std::filesystem::path& path, const Overrides& overrides = {});
ExperimentConfig parse_config(const nlohmann::json& doc, const Overrides& overrides = {},
                              const std::filesystem::path& base_dir = {});

struct RunResult {
  int exit_code = kExitOk;
  nlohmann::json report;
  std::string series_csv;
};

/// Runs the pipeline for `cfg.kind` in memory.
RunResult run_pipeline(const ExperimentConfig& cfg);

/// Fixed-width human-readable table of a report, 6 significant digits.
std::string emit_summary(const nlohmann::json& report);

/// Loads, runs, writes report.json and series.csv under the output directory.
/// Returns the process exit status; diagnostics go to `err`, the summary to `out`.
int run(const std::filesystem::path& config_path, const Overrides& overrides, std::ostream& out,
        std::ostream& err);

}  // namespace envmm::cli
