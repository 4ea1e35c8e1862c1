#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace mwploc::hashing {

/// FNV-1a over bytes, finished with a splitmix64 mixer. Stable across
/// platforms and runs.
std::uint64_t stable_hash(std::string_view bytes);

/// Hash of a tuple of fields joined with the unit separator (0x1f).
template <typename... Parts>
std::uint64_t stable_hash_fields(const Parts&... parts) {
  std::string joined;
  ((joined.append(std::string_view(parts)), joined.push_back('\x1f')), ...);
  return stable_hash(joined);
}

std::string to_hex(std::uint64_t value);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file_hex(const std::filesystem::path& path);

}  // namespace mwploc::hashing
