#include "cli/manifest.hpp"

#include "mwploc/corpus.hpp"
#include "mwploc/hashing.hpp"

namespace mwploc::cli {

void RunManifest::add_input(std::string role, const std::filesystem::path& path) {
  inputs.push_back({std::move(role), path.filename().string(), hashing::sha256_file_hex(path)});
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json o = nlohmann::ordered_json::object();
  o["command"] = m.command;
  o["tool_version"] = m.tool_version;
  o["seed"] = m.seed;
  o["config"] = m.config;
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& in : m.inputs) inputs.push_back({{"role", in.role}, {"file", in.file}, {"sha256", in.sha256}});
  o["inputs"] = std::move(inputs);
  auto counts = nlohmann::ordered_json::object();
  for (const auto& [k, v] : m.counts) counts[k] = v;
  o["counts"] = std::move(counts);
  return o;
}

void write_manifest(const std::filesystem::path& out_dir, const RunManifest& m) {
  corpus::write_file_atomic(out_dir / "manifest.json", to_json(m).dump(2) + "\n");
}

const char* tool_version() { return MWPLOC_VERSION; }

}  // namespace mwploc::cli
