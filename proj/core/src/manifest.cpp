#include "taxokit/manifest.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "taxokit/errors.hpp"
#include "taxokit/version.hpp"

namespace taxokit {

namespace {

struct DigestContext {
  EVP_MD_CTX* ctx;

  DigestContext() : ctx(EVP_MD_CTX_new()) {
    if (ctx == nullptr || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
      throw Error("cannot initialize SHA-256 digest");
    }
  }
  ~DigestContext() { EVP_MD_CTX_free(ctx); }

  void update(const char* data, std::size_t size) {
    if (EVP_DigestUpdate(ctx, data, size) != 1) throw Error("SHA-256 update failed");
  }

  std::string finish() {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int size = 0;
    if (EVP_DigestFinal_ex(ctx, digest, &size) != 1) throw Error("SHA-256 final failed");
    std::string hex;
    hex.reserve(2 * size);
    for (unsigned int i = 0; i < size; ++i) {
      char buf[3];
      std::snprintf(buf, sizeof(buf), "%02x", digest[i]);
      hex += buf;
    }
    return hex;
  }
};

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t seconds = std::chrono::system_clock::to_time_t(now);
  std::tm utc{};
  gmtime_r(&seconds, &utc);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", utc.tm_year + 1900,
                utc.tm_mon + 1, utc.tm_mday, utc.tm_hour, utc.tm_min, utc.tm_sec);
  return buf;
}

}  // namespace

std::string sha256_hex(std::string_view bytes) {
  DigestContext digest;
  digest.update(bytes.data(), bytes.size());
  return digest.finish();
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file for digest: " + path.string());
  DigestContext digest;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    digest.update(buf, static_cast<std::size_t>(in.gcount()));
  }
  return digest.finish();
}

RunManifest RunManifest::open(const std::filesystem::path& path,
                              const nlohmann::json& config_snapshot) {
  RunManifest manifest;
  manifest.path_ = path;

  std::ifstream in(path);
  if (in) {
    try {
      in >> manifest.doc_;
    } catch (const nlohmann::json::exception&) {
      manifest.doc_ = nlohmann::json::object();
    }
  }
  if (!manifest.doc_.is_object()) manifest.doc_ = nlohmann::json::object();
  if (!manifest.doc_.contains("created_at")) manifest.doc_["created_at"] = iso_timestamp();
  manifest.doc_["tool_version"] = kVersion;
  manifest.doc_["config"] = config_snapshot;
  if (!manifest.doc_.contains("inputs")) manifest.doc_["inputs"] = nlohmann::json::object();
  if (!manifest.doc_.contains("stages")) manifest.doc_["stages"] = nlohmann::json::object();
  return manifest;
}

void RunManifest::record_input(const std::string& name,
                               const std::filesystem::path& file) {
  doc_["inputs"][name] = {{"path", file.string()}, {"sha256", sha256_file(file)}};
}

void RunManifest::record_stage(const std::string& stage,
                               const std::map<std::string, std::filesystem::path>& outputs) {
  nlohmann::json entry;
  entry["completed_at"] = iso_timestamp();
  auto& digests = entry["outputs"] = nlohmann::json::object();
  for (const auto& [name, file] : outputs) {
    digests[name] = {{"path", file.string()}, {"sha256", sha256_file(file)}};
  }
  doc_["stages"][stage] = std::move(entry);
  doc_["updated_at"] = iso_timestamp();
}

void RunManifest::save() const {
  std::ofstream out(path_);
  if (!out) throw DataError("cannot write manifest: " + path_.string());
  out << doc_.dump(2) << '\n';
  if (!out) throw DataError("failed while writing manifest: " + path_.string());
}

}  // namespace taxokit
