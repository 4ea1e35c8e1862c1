#include "cli/app.hpp"

#include <CLI11.hpp>

#include <iostream>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "cli/review.hpp"
#include "mwploc/log.hpp"

namespace mwploc::cli {

namespace {

void add_provider_flags(CLI::App* cmd, ProviderOptions& p) {
  cmd->add_option("--provider", p.provider, "LLM provider")
      ->check(CLI::IsMember({"mock", "openai", "gemini"}))
      ->capture_default_str();
  cmd->add_option("--model", p.model, "Model name (provider default when omitted)");
  cmd->add_option("--endpoint", p.endpoint, "Override the provider endpoint URL");
  cmd->add_option("--api-key-env", p.auth_env, "Environment variable holding the API key");
  cmd->add_option("--rpm", p.rpm, "Requests per minute")->check(CLI::PositiveNumber);
  cmd->add_option("--mock-fixtures", p.mock_fixtures, "Fixture file for --provider mock");
}

std::pair<double, double> parse_band(const std::string& s) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw UsageError("--length-band expects LO,HI");
  try {
    std::size_t used = 0;
    const std::string lo_s = s.substr(0, comma);
    const std::string hi_s = s.substr(comma + 1);
    const double lo = std::stod(lo_s, &used);
    if (used != lo_s.size()) throw UsageError("--length-band expects LO,HI");
    const double hi = std::stod(hi_s, &used);
    if (used != hi_s.size()) throw UsageError("--length-band expects LO,HI");
    return {lo, hi};
  } catch (const std::logic_error&) {
    throw UsageError("--length-band expects LO,HI");
  }
}

class SinkGuard {
 public:
  SinkGuard(std::ostream& err, bool verbose) {
    log::set_sink([&err, verbose](log::Level level, std::string_view msg) {
      if (level == log::Level::debug) return;
      if (level == log::Level::info && !verbose) return;
      static constexpr const char* names[] = {"debug", "info", "warning", "error"};
      err << names[static_cast<int>(level)] << ": " << msg << '\n';
    });
  }
  ~SinkGuard() { log::reset_sink(); }
  SinkGuard(const SinkGuard&) = delete;
  SinkGuard& operator=(const SinkGuard&) = delete;
};

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entity localization for translated math word problems"};
  app.name("mwploc");
  app.set_version_flag("--version", std::string(tool_version()));
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Log per-record decisions");

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "Detect culture-bound entities in each record");
  extract->add_option("--in", ex.in, "Input records (JSONL)")->required();
  extract->add_option("--out", ex.out, "Output directory")->required();
  extract->add_option("--seed", ex.seed, "Seed recorded in the manifest")->capture_default_str();
  extract->add_option("--jobs", ex.jobs, "Worker threads")->capture_default_str();
  extract->add_option("--max-retries", ex.max_llm_retries, "Extra attempts after a transport failure")
      ->capture_default_str();
  add_provider_flags(extract, ex.provider);

  LocalizeOptions lo;
  std::string band;
  auto* localize = app.add_subcommand("localize", "Run the full localization pipeline");
  localize->add_option("--in", lo.in, "Input records (JSONL)")->required();
  localize->add_option("--db", lo.db, "Entity database (JSON)")->required();
  localize->add_option("--out", lo.out, "Output directory")->required();
  localize->add_option("--seed", lo.cfg.seed, "Seed for replacement selection")->capture_default_str();
  localize->add_option("--jobs", lo.jobs, "Worker threads")->capture_default_str();
  localize->add_option("--similarity-threshold", lo.cfg.similarity_threshold,
                       "Localized text must be strictly more similar than this")
      ->capture_default_str();
  localize->add_option("--length-band", band, "Accepted length ratio as LO,HI (default 0.70,1.43)");
  localize->add_option("--max-retries", lo.cfg.max_llm_retries, "Extra attempts after a transport failure")
      ->capture_default_str();
  localize->add_option("--prompt-version", lo.cfg.prompt_version, "oneshot_v1 or oneshot_context_v1")
      ->capture_default_str();
  add_provider_flags(localize, lo.provider);

  FilterOptions fi;
  auto* filter = app.add_subcommand("filter", "Select the best-scored translations per language");
  filter->add_option("--scores", fi.scores, "Scores file: record_id, lang, score")->required();
  filter->add_option("--in", fi.in, "Records the scores refer to (JSONL)")->required();
  filter->add_option("--out", fi.out, "Output directory")->required();
  filter->add_option("--threshold", fi.threshold, "Keep scores strictly above this")->capture_default_str();
  filter->add_option("--top-k", fi.top_k, "Maximum selections per language")->capture_default_str();

  EvalOptions ev;
  std::vector<std::string> preds;
  auto* eval = app.add_subcommand("eval", "Score model predictions against gold answers");
  eval->add_option("--pred", preds, "NAME=FILE, one per prompt variant")->required();
  eval->add_option("--golds", ev.golds, "Gold records (JSONL)")->required();
  eval->add_option("--out", ev.out, "Output directory")->required();
  eval->add_option("--rel-tol", ev.rel_tol, "Numeric match tolerance")->capture_default_str();

  ReportOptions re;
  auto* report = app.add_subcommand("report", "Compare localized and translated evaluations");
  report->add_option("--localized", re.localized, "eval.json of the localized benchmark")->required();
  report->add_option("--translated", re.translated, "eval.json of the translated benchmark")->required();
  report->add_option("--out", re.out, "Output directory")->required();

  ReviewOptions rv;
  auto* review = app.add_subcommand("review", "Label localized records interactively");
  review->add_option("--in", rv.in, "Localized records (JSONL)")->required();
  review->add_option("--labels", rv.labels, "Labels file, appended to")->required();
  review->add_option("--sample-rate", rv.sample_rate, "Fraction of train records to present")
      ->capture_default_str();
  review->add_option("--seed", rv.seed, "Sampling seed")->capture_default_str();

  std::vector<std::string> argv_storage{"mwploc"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  SinkGuard sink(err, verbose);
  try {
    if (*extract) return cmd_extract(ex, out, err);
    if (*localize) {
      if (!band.empty()) std::tie(lo.cfg.length_lower, lo.cfg.length_upper) = parse_band(band);
      return cmd_localize(lo, out, err);
    }
    if (*filter) return cmd_filter(fi, out, err);
    if (*eval) {
      for (const auto& p : preds) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == p.size())
          throw UsageError("--pred expects NAME=FILE, got '" + p + "'");
        ev.preds.emplace_back(p.substr(0, eq), p.substr(eq + 1));
      }
      return cmd_eval(ev, out, err);
    }
    if (*report) return cmd_report(re, out, err);
    if (*review) return run_review(rv, in, out, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

}  // namespace mwploc::cli
