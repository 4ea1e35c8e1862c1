#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mwploc/error.hpp"
#include "mwploc/localize_config.hpp"

namespace mwploc::cli {

enum ExitCode : int { exit_ok = 0, exit_partial = 1, exit_usage = 2 };

/// Bad flag values and other operator mistakes.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct ProviderOptions {
  std::string provider = "openai";  // mock, openai or gemini
  std::string model;
  std::string endpoint;
  std::string auth_env;
  std::optional<double> rpm;
  std::filesystem::path mock_fixtures;
};

struct ExtractOptions {
  std::filesystem::path in;
  std::filesystem::path out;
  ProviderOptions provider;
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  int max_llm_retries = 2;
};

struct LocalizeOptions {
  std::filesystem::path in;
  std::filesystem::path db;
  std::filesystem::path out;
  ProviderOptions provider;
  localize::LocalizationConfig cfg;
  std::size_t jobs = 1;
};

struct FilterOptions {
  std::filesystem::path scores;
  std::filesystem::path in;
  std::filesystem::path out;
  double threshold = 0.65;
  std::size_t top_k = 1500;
};

struct EvalOptions {
  std::vector<std::pair<std::string, std::filesystem::path>> preds;  // prompt id, file
  std::filesystem::path golds;
  std::filesystem::path out;
  double rel_tol = 1e-6;
};

struct ReportOptions {
  std::filesystem::path localized;
  std::filesystem::path translated;
  std::filesystem::path out;
};

int cmd_extract(const ExtractOptions& opts, std::ostream& out, std::ostream& err);
int cmd_localize(const LocalizeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_filter(const FilterOptions& opts, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& opts, std::ostream& out, std::ostream& err);
int cmd_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

/// Predictions file: JSONL objects {"id": ..., "prediction": ...}.
std::vector<std::pair<std::string, std::string>> load_predictions(const std::filesystem::path& path);

}  // namespace mwploc::cli
