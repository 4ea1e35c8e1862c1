#include "cli/review.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "mwploc/error.hpp"
#include "mwploc/hashing.hpp"
#include "mwploc/text.hpp"

namespace mwploc::cli {

std::vector<std::size_t> review_queue(std::span<const corpus::LocalizedRecord> records, double sample_rate,
                                      std::uint64_t seed) {
  std::vector<std::pair<std::uint64_t, std::size_t>> train;
  std::vector<bool> chosen(records.size(), false);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].base.split == corpus::Split::test) {
      chosen[i] = true;
    } else {
      train.emplace_back(hashing::stable_hash_fields(std::to_string(seed), std::string("review"), records[i].base.id), i);
    }
  }
  const auto k = static_cast<std::size_t>(std::llround(sample_rate * static_cast<double>(train.size())));
  std::sort(train.begin(), train.end());
  for (std::size_t j = 0; j < std::min(k, train.size()); ++j) chosen[train[j].second] = true;

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < records.size(); ++i)
    if (chosen[i]) out.push_back(i);
  return out;
}

std::set<std::string> read_labeled_ids(const std::filesystem::path& labels) {
  std::set<std::string> ids;
  std::ifstream in(labels, std::ios::binary);
  if (!in) return ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (text::trim(line).empty()) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      const auto& label = obj.at("label");
      if (label != "valid" && label != "invalid") throw ParseError(labels.string(), lineno, "label must be valid or invalid");
      ids.insert(obj.at("id").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(labels.string(), lineno, e.what());
    }
  }
  return ids;
}

namespace {

void show(const corpus::LocalizedRecord& r, std::size_t pos, std::size_t total, std::ostream& out) {
  out << "\n[" << pos << "/" << total << "] " << r.base.id << " (" << r.base.lang << ", "
      << corpus::to_string(r.base.split) << ", " << corpus::to_string(r.status) << ")\n";
  out << "  en:    " << r.base.x_en << "\n";
  if (r.base.x_trans) out << "  trans: " << *r.base.x_trans << "\n";
  out << "  loc:   " << r.x_loc << "\n";
  if (r.failure_reason) out << "  reason: " << *r.failure_reason << "\n";
}

}  // namespace

int run_review(const ReviewOptions& opts, std::istream& in, std::ostream& out, std::ostream& err) {
  if (!(opts.sample_rate >= 0.0 && opts.sample_rate <= 1.0)) {
    err << "error: --sample-rate must be within [0,1]\n";
    return 2;
  }
  const auto records = corpus::load_localized(opts.in);
  const auto labeled = read_labeled_ids(opts.labels);

  std::vector<std::size_t> pending;
  for (auto i : review_queue(records, opts.sample_rate, opts.seed))
    if (!labeled.count(records[i].base.id)) pending.push_back(i);

  std::ofstream labels(opts.labels, std::ios::binary | std::ios::app);
  if (!labels) {
    err << "error: cannot open " << opts.labels.string() << " for appending\n";
    return 2;
  }

  std::size_t done = 0;
  std::size_t skipped = 0;
  std::size_t pos = 0;
  bool quit = false;
  for (auto i : pending) {
    const auto& rec = records[i];
    show(rec, ++pos, pending.size(), out);
    for (;;) {
      out << "[a]ccept [r]eject [s]kip [q]uit> " << std::flush;
      std::string answer;
      if (!std::getline(in, answer)) {
        quit = true;
        break;
      }
      const auto key = text::trim(answer);
      if (key == "a" || key == "r") {
        nlohmann::ordered_json o = nlohmann::ordered_json::object();
        o["id"] = rec.base.id;
        o["lang"] = rec.base.lang;
        o["label"] = key == "a" ? "valid" : "invalid";
        labels << o.dump() << '\n' << std::flush;
        ++done;
        break;
      }
      if (key == "s") {
        ++skipped;
        break;
      }
      if (key == "q") {
        quit = true;
        break;
      }
    }
    if (quit) break;
  }
  out << "\nlabeled " << done << ", skipped " << skipped << ", remaining " << (pending.size() - done - skipped)
      << "\n";
  return 0;
}

}  // namespace mwploc::cli
