#include "mwploc/replace.hpp"

#include <algorithm>
#include <set>

#include "mwploc/entitydb.hpp"
#include "mwploc/error.hpp"
#include "mwploc/extract.hpp"
#include "mwploc/text.hpp"

namespace mwploc::replace {

namespace {

std::u32string folded(std::string_view s) { return text::fold(text::decode(s)); }

bool contains_folded(const std::vector<std::string>& items, std::string_view s) {
  const auto f = folded(s);
  return std::any_of(items.begin(), items.end(), [&](const std::string& i) { return folded(i) == f; });
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& i : items) {
    if (!out.empty()) out += ", ";
    out += i;
  }
  return out;
}

}  // namespace

std::string_view to_string(EntryKind kind) {
  switch (kind) {
    case EntryKind::person: return "person";
    case EntryKind::org: return "org";
    case EntryKind::currency_symbol: return "currency_symbol";
    case EntryKind::currency_word: return "currency_word";
  }
  return "person";
}

EntryKind parse_entry_kind(std::string_view name) {
  for (auto k : {EntryKind::person, EntryKind::org, EntryKind::currency_symbol, EntryKind::currency_word})
    if (to_string(k) == name) return k;
  throw ValidationError("unknown replacement kind '" + std::string(name) + "'");
}

void validate(const ReplacementDict& dict) {
  std::set<std::u32string> sources;
  std::set<std::u32string> name_targets;
  std::optional<std::string> currency_target;
  std::size_t previous_length = std::string::npos;
  for (const auto& e : dict.entries) {
    if (e.source.empty() || e.target.empty())
      throw ValidationError("replacement entries need a source and a target");
    const auto src = folded(e.source);
    if (!sources.insert(src).second) throw ValidationError("duplicate replacement source '" + e.source + "'");
    if (src.size() > previous_length)
      throw ValidationError("replacement entries must be ordered longest source first");
    previous_length = src.size();
    if (e.kind == EntryKind::person || e.kind == EntryKind::org) {
      if (!name_targets.insert(folded(e.target)).second)
        throw ValidationError("replacement target '" + e.target + "' used for two sources");
    } else {
      if (currency_target && *currency_target != e.target)
        throw ValidationError("currency entries must share one target");
      currency_target = e.target;
    }
  }
}

ReplacementDict build_replacement_dict(const extract::EntitySet& ents, const entitydb::EntityDatabase& db,
                                       std::string_view lang, std::string_view record_id,
                                       std::uint64_t seed) {
  const auto& table = db.language(lang);
  const auto& currency = table.currency;
  ReplacementDict dict;
  std::set<std::u32string> used;

  auto add = [&](std::string source, std::string target, EntryKind kind) {
    if (!used.insert(folded(source)).second) return;
    dict.entries.push_back({std::move(source), std::move(target), kind});
  };

  // Currencies: every detected form must belong to the language's entry, and
  // forms outside it count as further currency kinds.
  if (!ents.currencies.empty()) {
    std::vector<std::string> known;
    std::vector<std::string> foreign;
    std::set<std::u32string> foreign_kinds;
    for (const auto& c : ents.currencies) {
      if (contains_folded(currency.symbol_forms, c) || contains_folded(currency.word_forms, c)) {
        known.push_back(c);
      } else {
        foreign.push_back(c);
        foreign_kinds.insert(folded(c));
      }
    }
    const std::size_t kinds = foreign_kinds.size() + (known.empty() ? 0 : 1);
    if (kinds > 1) throw MultiCurrencyError("multiple currencies: " + join(ents.currencies));
    if (!foreign.empty()) throw UnsupportedCurrencyError("unsupported currency: " + join(foreign));
    for (const auto& c : known)
      add(c, currency.target_word,
          contains_folded(currency.symbol_forms, c) ? EntryKind::currency_symbol : EntryKind::currency_word);
    for (const auto& w : currency.word_forms) add(w, currency.target_word, EntryKind::currency_word);
  }

  std::vector<std::string> reserved = ents.personal_names;
  reserved.insert(reserved.end(), ents.organization_names.begin(), ents.organization_names.end());
  entitydb::RecordPicker picker(db, std::string(lang), std::string(record_id), seed, reserved);
  for (const auto& p : ents.personal_names)
    if (!used.count(folded(p))) add(p, picker.pick(entitydb::EntityKind::person, p), EntryKind::person);
  for (const auto& o : ents.organization_names)
    if (!used.count(folded(o))) add(o, picker.pick(entitydb::EntityKind::org, o), EntryKind::org);

  std::stable_sort(dict.entries.begin(), dict.entries.end(), [](const Replacement& a, const Replacement& b) {
    return text::length(a.source) > text::length(b.source);
  });
  validate(dict);
  return dict;
}

std::ptrdiff_t ReplaceOutcome::length_delta() const {
  std::ptrdiff_t delta = 0;
  for (const auto& m : matches)
    delta += static_cast<std::ptrdiff_t>(m.emitted_length) - static_cast<std::ptrdiff_t>(m.source_length);
  return delta;
}

ReplaceOutcome apply_replacements_detailed(std::string_view input, const ReplacementDict& dict) {
  ReplaceOutcome outcome;
  if (dict.empty()) {
    outcome.text = std::string(input);
    return outcome;
  }
  const auto cps = text::index(input);
  std::vector<std::u32string> sources;
  std::vector<std::size_t> target_lengths;
  for (const auto& e : dict.entries) {
    sources.push_back(folded(e.source));
    target_lengths.push_back(text::length(e.target));
  }

  auto matches_at = [&](std::size_t pos, const std::u32string& src) {
    if (src.empty() || pos + src.size() > cps.size()) return false;
    for (std::size_t k = 0; k < src.size(); ++k)
      if (cps[pos + k].folded != src[k]) return false;
    return text::is_boundary(cps, pos + src.size());
  };

  std::string& out = outcome.text;
  out.reserve(input.size() + input.size() / 4);
  std::size_t pos = 0;
  while (pos < cps.size()) {
    bool replaced = false;
    if (text::is_boundary(cps, pos)) {
      for (std::size_t i = 0; i < dict.entries.size(); ++i) {
        if (!matches_at(pos, sources[i])) continue;
        const auto& e = dict.entries[i];
        const std::size_t len = sources[i].size();
        std::size_t emitted = target_lengths[i];
        out += e.target;
        if (e.kind == EntryKind::currency_symbol && pos + len < cps.size() &&
            text::is_digit(cps[pos + len].value)) {
          out += ' ';
          ++emitted;
        }
        outcome.matches.push_back({i, pos, len, emitted});
        pos += len;
        replaced = true;
        break;
      }
    }
    if (!replaced) {
      out.append(input.substr(cps[pos].byte_begin, cps[pos].byte_end - cps[pos].byte_begin));
      ++pos;
    }
  }
  return outcome;
}

std::string apply_replacements(std::string_view text, const ReplacementDict& dict) {
  return apply_replacements_detailed(text, dict).text;
}

std::vector<std::string> distinct_targets(const ReplacementDict& dict) {
  std::vector<std::string> out;
  for (const auto& e : dict.entries)
    if (std::find(out.begin(), out.end(), e.target) == out.end()) out.push_back(e.target);
  return out;
}

}  // namespace mwploc::replace
