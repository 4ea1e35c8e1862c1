#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mwploc::entitydb {
class EntityDatabase;
}
namespace mwploc::extract {
struct EntitySet;
}

namespace mwploc::replace {

enum class EntryKind { person, org, currency_symbol, currency_word };

std::string_view to_string(EntryKind kind);
/// Throws ValidationError on unknown names.
EntryKind parse_entry_kind(std::string_view name);

struct Replacement {
  std::string source;
  std::string target;
  EntryKind kind;

  bool operator==(const Replacement&) const = default;
};

/// Entries are ordered longest source first; ties keep insertion order.
struct ReplacementDict {
  std::vector<Replacement> entries;

  bool empty() const { return entries.empty(); }
  bool operator==(const ReplacementDict&) const = default;
};

/// Throws ValidationError when sources repeat (case-insensitively), the order
/// is not longest-first, person/org targets collide, or currency entries
/// disagree on their target.
void validate(const ReplacementDict& dict);

/// Person and org sources map through entitydb::RecordPicker. Every detected
/// currency form plus the language's currency word forms map to the
/// language's target word.
///
/// Throws MultiCurrencyError, UnsupportedCurrencyError or
/// CandidateExhaustedError; the caller turns these into a fallback.
ReplacementDict build_replacement_dict(const extract::EntitySet& ents,
                                       const entitydb::EntityDatabase& db, std::string_view lang,
                                       std::string_view record_id, std::uint64_t seed);

struct Match {
  std::size_t entry;            // index into dict.entries
  std::size_t input_offset;     // code points
  std::size_t source_length;    // code points consumed from the input
  std::size_t emitted_length;   // code points written to the output
};

struct ReplaceOutcome {
  std::string text;
  std::vector<Match> matches;

  /// Output length minus input length, in code points.
  std::ptrdiff_t length_delta() const;
};

/// Left-to-right, longest-source-first, non-overlapping substitution of every
/// source occurring case-insensitively between word boundaries. Targets are
/// written verbatim. A currency symbol written directly against a number
/// ("$100") is emitted as "<target> " so that it reads "<target> 100".
ReplaceOutcome apply_replacements_detailed(std::string_view text, const ReplacementDict& dict);

std::string apply_replacements(std::string_view text, const ReplacementDict& dict);

/// Distinct targets in dictionary order.
std::vector<std::string> distinct_targets(const ReplacementDict& dict);

}  // namespace mwploc::replace
