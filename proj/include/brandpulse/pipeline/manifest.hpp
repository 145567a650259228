#pragma once

// Run manifests: SHA-256 of the effective config, of every input and of
// every output written. No timestamps, so reruns produce identical files.

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>
#include <openssl/evp.h>

#include "brandpulse/error.hpp"
#include "brandpulse/pipeline/config.hpp"

namespace brandpulse::pipeline {

inline constexpr std::string_view kToolVersion = "1.0.0";

namespace detail {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new(), &EVP_MD_CTX_free) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_.get(), EVP_sha256(), nullptr) != 1) {
      throw std::runtime_error("SHA-256 initialisation failed");
    }
  }

  void update(const void* data, std::size_t len) { EVP_DigestUpdate(ctx_.get(), data, len); }

  std::string hex() {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_.get(), md.data(), &len);
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (unsigned i = 0; i < len; ++i) {
      out.push_back(digits[md[i] >> 4]);
      out.push_back(digits[md[i] & 0xF]);
    }
    return out;
  }

 private:
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx_;
};

}  // namespace detail

inline std::string sha256_hex(std::string_view data) {
  detail::Sha256 h;
  h.update(data.data(), data.size());
  return h.hex();
}

inline std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file for checksum: " + path.string());
  detail::Sha256 h;
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    h.update(buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  return h.hex();
}

struct Manifest {
  std::string stage;
  std::string config_sha256;
  std::vector<std::pair<std::string, std::string>> inputs;   // role -> path
  std::vector<std::string> outputs;                          // relative to the output dir
  std::string error;                                         // set in error manifests
  std::string error_kind;
};

inline std::vector<std::pair<std::string, std::string>> input_roles(const PipelineConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto add = [&](const char* role, const std::string& p) {
    if (!p.empty()) out.emplace_back(role, p);
  };
  add("messages", c.messages);
  add("price", c.price);
  add("control", c.control);
  add("lexicon", c.lexicon);
  add("stopwords", c.stopwords);
  add("dictionary", c.dictionary);
  add("precomputed_sentiment", c.precomputed_sentiment);
  return out;
}

/// Inputs are hashed at write time; a missing input is recorded with an
/// empty checksum rather than failing the manifest.
inline nlohmann::ordered_json manifest_json(const Manifest& m, const std::filesystem::path& out_dir) {
  nlohmann::ordered_json j;
  j["tool"] = "brandpulse";
  j["version"] = kToolVersion;
  j["stage"] = m.stage;
  j["config_sha256"] = m.config_sha256;
  auto inputs = nlohmann::ordered_json::array();
  for (const auto& [role, path] : m.inputs) {
    std::string sum;
    if (std::filesystem::exists(path)) sum = sha256_file(path);
    inputs.push_back({{"role", role}, {"path", path}, {"sha256", sum}});
  }
  j["inputs"] = inputs;
  auto outputs = nlohmann::ordered_json::array();
  for (const auto& rel : m.outputs) {
    const auto p = out_dir / rel;
    outputs.push_back({{"path", rel}, {"sha256", std::filesystem::exists(p) ? sha256_file(p) : std::string()}});
  }
  j["outputs"] = outputs;
  if (!m.error.empty()) {
    j["error"] = {{"kind", m.error_kind}, {"message", m.error}};
  }
  return j;
}

inline void write_text_file(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

inline void write_manifest(const Manifest& m, const std::filesystem::path& out_dir, const std::string& file_name) {
  write_text_file(out_dir / file_name, manifest_json(m, out_dir).dump(2) + "\n");
}

}  // namespace brandpulse::pipeline
