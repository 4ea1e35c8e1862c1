#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace mwploc::cli {

struct InputDigest {
  std::string role;
  std::string file;  // base name only, so manifests do not depend on where inputs live
  std::string sha256;
};

/// Written as manifest.json next to every command's outputs. Holds no
/// timestamps or output paths, so identical runs give identical bytes.
struct RunManifest {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<InputDigest> inputs;
  std::string tool_version;
  std::map<std::string, std::size_t> counts;

  void add_input(std::string role, const std::filesystem::path& path);
};

nlohmann::ordered_json to_json(const RunManifest& m);
void write_manifest(const std::filesystem::path& out_dir, const RunManifest& m);

const char* tool_version();

}  // namespace mwploc::cli
