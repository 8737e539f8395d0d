#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "stagedtree/kernel/kernel.hpp"
#include "stagedtree/minors/minors.hpp"

namespace staged::cli {

inline constexpr const char* kSchema = "stagedtree-report/1";

enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kBudget = 3, kDisagree = 4 };

enum class OracleMode { On, Off, CacheOnly };

struct Limits {
  kernel::KernelConfig kernel;
  minors::VerifyConfig verify;
  int random_trials = 50;
};

/// "small", "default", "large", or comma-separated key=value pairs over
/// leaves, labels, trials, basis, terms, degree, pairs, graded (applied on
/// top of the default profile). Throws std::invalid_argument.
Limits parse_budget(const std::string& spec);

struct Options {
  std::uint64_t seed = 0;
  Limits limits;
  OracleMode oracle = OracleMode::On;
  /// Empty disables the on-disk kernel cache.
  std::string cache_dir;
  std::optional<std::string> forms_path;
  /// Wall-clock milliseconds per stage. Off keeps reports byte-stable.
  bool timings = false;
};

struct Result {
  nlohmann::ordered_json report;
  int exit_code = kOk;
};

Result cmd_validate(const std::string& path);
Result cmd_analyze(const std::string& path, const Options& opt);
/// Analyses every *.tree file of dir, picking up <stem>.forms next to a tree
/// when no forms file is given. Rows sorted by file name.
Result cmd_corpus(const std::string& dir, const Options& opt);

std::string render_text(const nlohmann::ordered_json& report);
/// Aligned table for a corpus report.
std::string render_table(const nlohmann::ordered_json& report);

}  // namespace staged::cli
