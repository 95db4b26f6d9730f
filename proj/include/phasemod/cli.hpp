#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace phasemod::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitFailure = 2;

std::string_view library_version();

struct CatalogEntry {
  std::string id;  // "experiment:case"
  std::string description;
  std::string anchor;  // formula the experiment exercises
};

const std::vector<CatalogEntry>& list_experiments();

// Schema or semantic problem in a configuration document.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::optional<std::string> format;  // overrides output.format
  std::optional<unsigned> threads;
  bool check_only = false;  // validate and resolve, then stop
};

struct RunResult {
  int exit_code = kExitPass;
  std::string message;  // names the violated invariant when exit_code != 0
  std::filesystem::path report;
  std::string resolved_config;  // compact JSON with every default filled in
};

RunResult run_config_text(std::string_view json_text, const RunOptions& options = {});
RunResult run_config_file(const std::filesystem::path& path, const RunOptions& options = {});

// Entry point behind the executable; args exclude the program name.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Scientific notation when 0 < |value| < 1e-3, shortest fixed notation otherwise.
std::string format_number(double value);

}  // namespace phasemod::cli
