#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mwploc/corpus.hpp"

namespace mwploc::cli {

struct ReviewOptions {
  std::filesystem::path in;
  std::filesystem::path labels;
  double sample_rate = 0.1;
  std::uint64_t seed = 42;
};

/// Records to present, in input order: every test-split record plus
/// round(sample_rate * n_train) train records chosen by seeded hash rank.
std::vector<std::size_t> review_queue(std::span<const corpus::LocalizedRecord> records, double sample_rate,
                                      std::uint64_t seed);

/// Ids already present in a labels file. A missing file has none.
std::set<std::string> read_labeled_ids(const std::filesystem::path& labels);

/// Interactive loop: a accepts, r rejects, s skips, q (or end of input)
/// stops. Every decision is appended to the labels file at once.
int run_review(const ReviewOptions& opts, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace mwploc::cli
