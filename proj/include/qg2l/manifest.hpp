#pragma once

#include <string>
#include <vector>

namespace qg2l {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Every output directory gets exactly one manifest.json naming each emitted file with its
// content hash, plus the config hash, seed, code version, thread count, optional constants
// ledger, and wall time of the run.
struct ManifestEntry {
  std::string name;
  std::uint64_t bytes = 0;
  std::string sha256;
};

struct Manifest {
  std::string code_version;
  std::string config_sha256;
  std::uint64_t seed = 0;
  int thread_count = 1;
  std::string constants_ledger_json;  // empty => null in the manifest
  double wall_time_seconds = 0.0;
  std::vector<ManifestEntry> files;
};

// Hashes every file and writes <dir>/manifest.json; `names` are paths relative to dir.
void write_manifest(const std::string& dir, const Manifest& m, const std::vector<std::string>& names);

std::string manifest_json(const Manifest& m);

}  // namespace qg2l
