#pragma once

#include <string>
#include <vector>

#include "qdm/checkpoint.hpp"

namespace qdm {

void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// SHA-256 of a file's bytes, lowercase hex.
std::string file_sha256(const std::string& path);

// Per-command reproducibility record written next to the primary outputs.
struct RunManifest {
  std::string command_line;
  std::string config_json;  // serialized config snapshot
  std::vector<std::pair<std::string, std::string>> artifacts;  // path, sha256
  double wall_seconds = 0.0;
  std::string version = "1";
};

// JSON manifest; wall-clock is recorded but everything else is
// deterministic for fixed inputs.
void write_manifest(const RunManifest& manifest, const std::string& path);

}  // namespace qdm
