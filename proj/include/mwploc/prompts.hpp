#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace mwploc::prompts {

/// Built-in template by name (file stem under assets/prompts). Throws
/// mwploc::Error for unknown names.
std::string_view asset(std::string_view name);
std::vector<std::string> asset_names();

using Values = std::map<std::string, std::string, std::less<>>;

/// Substitutes every `{name}` placeholder, where name is [a-z_]+. Values are
/// inserted verbatim and never rescanned. Braces that do not form a
/// placeholder are copied through. Throws mwploc::Error on a placeholder
/// with no value.
std::string render(std::string_view tmpl, const Values& values);

}  // namespace mwploc::prompts
