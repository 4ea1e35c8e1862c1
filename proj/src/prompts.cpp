#include "mwploc/prompts.hpp"

#include <utility>

#include "mwploc/error.hpp"

namespace mwploc::prompts {

namespace detail {
std::size_t asset_count();
const std::pair<std::string_view, std::string_view>* asset_table();
}  // namespace detail

std::string_view asset(std::string_view name) {
  const auto* table = detail::asset_table();
  for (std::size_t i = 0; i < detail::asset_count(); ++i)
    if (table[i].first == name) return table[i].second;
  throw Error("unknown prompt template '" + std::string(name) + "'");
}

std::vector<std::string> asset_names() {
  std::vector<std::string> names;
  const auto* table = detail::asset_table();
  for (std::size_t i = 0; i < detail::asset_count(); ++i) names.emplace_back(table[i].first);
  return names;
}

std::string render(std::string_view tmpl, const Values& values) {
  std::string out;
  out.reserve(tmpl.size() * 2);
  std::size_t pos = 0;
  while (pos < tmpl.size()) {
    const auto open = tmpl.find('{', pos);
    if (open == std::string_view::npos) {
      out.append(tmpl.substr(pos));
      break;
    }
    out.append(tmpl.substr(pos, open - pos));
    std::size_t end = open + 1;
    while (end < tmpl.size() && ((tmpl[end] >= 'a' && tmpl[end] <= 'z') || tmpl[end] == '_')) ++end;
    if (end == open + 1 || end >= tmpl.size() || tmpl[end] != '}') {
      out.push_back('{');
      pos = open + 1;
      continue;
    }
    const auto name = tmpl.substr(open + 1, end - open - 1);
    const auto it = values.find(name);
    if (it == values.end()) throw Error("prompt placeholder {" + std::string(name) + "} has no value");
    out.append(it->second);
    pos = end + 1;
  }
  return out;
}

}  // namespace mwploc::prompts
