#pragma once

#include <filesystem>
#include <map>
#include <string>

#include <json.hpp>

namespace taxokit {

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::filesystem::path& path);

// Records what a pipeline run saw and produced: the config snapshot, input
// digests, and per-stage output digests. One manifest file per output
// directory, updated in place as stages complete.
class RunManifest {
 public:
  // Loads path when it exists, otherwise starts fresh. Either way the
  // config snapshot and tool version are (re)stamped.
  static RunManifest open(const std::filesystem::path& path,
                          const nlohmann::json& config_snapshot);

  void record_input(const std::string& name, const std::filesystem::path& file);
  void record_stage(const std::string& stage,
                    const std::map<std::string, std::filesystem::path>& outputs);

  const nlohmann::json& document() const { return doc_; }
  void save() const;

 private:
  std::filesystem::path path_;
  nlohmann::json doc_;
};

}  // namespace taxokit
