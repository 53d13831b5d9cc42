#include "qg2l/manifest.hpp"

#include <cstdio>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <openssl/evp.h>

#include <json.hpp>

#include "qg2l/version.hpp"

namespace qg2l {

namespace {

struct DigestCtx {
  EVP_MD_CTX* ctx;
  DigestCtx() : ctx(EVP_MD_CTX_new()) {
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1)
      throw std::runtime_error("sha256: init failed");
  }
  ~DigestCtx() { EVP_MD_CTX_free(ctx); }
  void update(const void* p, std::size_t n) {
    if (EVP_DigestUpdate(ctx, p, n) != 1) throw std::runtime_error("sha256: update failed");
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_DigestFinal_ex(ctx, md, &len) != 1) throw std::runtime_error("sha256: final failed");
    std::string out(2 * len, '0');
    static const char* digits = "0123456789abcdef";
    for (unsigned int i = 0; i < len; ++i) {
      out[2 * i] = digits[md[i] >> 4];
      out[2 * i + 1] = digits[md[i] & 0xf];
    }
    return out;
  }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
  DigestCtx d;
  d.update(bytes.data(), bytes.size());
  return d.hex();
}

std::string sha256_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("sha256: cannot open " + path);
  DigestCtx d;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) d.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return d.hex();
}

std::string manifest_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["code_version"] = m.code_version.empty() ? version : m.code_version;
  j["config_sha256"] = m.config_sha256;
  j["seed"] = m.seed;
  j["thread_count"] = m.thread_count;
  if (m.constants_ledger_json.empty())
    j["constants_ledger"] = nullptr;
  else
    j["constants_ledger"] = nlohmann::ordered_json::parse(m.constants_ledger_json);
  j["wall_time_seconds"] = m.wall_time_seconds;
  j["files"] = nlohmann::ordered_json::array();
  for (const auto& f : m.files)
    j["files"].push_back({{"name", f.name}, {"bytes", f.bytes}, {"sha256", f.sha256}});
  return j.dump(2);
}

void write_manifest(const std::string& dir, const Manifest& m,
                    const std::vector<std::string>& names) {
  Manifest full = m;
  full.files.clear();
  for (const auto& name : names) {
    const std::string path = dir + "/" + name;
    ManifestEntry e;
    e.name = name;
    e.sha256 = sha256_file(path);
    std::ifstream in(path, std::ios::binary | std::ios::ate);
    e.bytes = in ? static_cast<std::uint64_t>(in.tellg()) : 0;
    full.files.push_back(e);
  }
  std::ofstream out(dir + "/manifest.json", std::ios::trunc);
  if (!out) throw std::runtime_error("manifest: cannot open " + dir + "/manifest.json");
  out << manifest_json(full) << "\n";
  if (!out) throw std::runtime_error("manifest: write failed in " + dir);
}

}  // namespace qg2l
