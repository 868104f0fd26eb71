// Copyright 2026 The xtalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <array>
#include <cstdio>
#include <fstream>

#include <openssl/evp.h>

#include "output.hpp"
#include "xtalk/errors.hpp"

namespace xtalk {

std::string git_blob_sha1(std::string_view text) {
  const std::string header = "blob " + std::to_string(text.size()) + std::string(1, '\0');
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  const bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, text.data(), text.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest.data(), &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw SimulationError("SHA-1 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < length; ++i) {
    const unsigned char byte = digest[i];
    out += kHex[byte >> 4];
    out += kHex[byte & 15];
  }
  return out;
}

std::string canonical_config_text(const ScenarioConfig& config) {
  // Output location and thread count do not change any table.
  nlohmann::json doc = config.to_json();
  doc.erase("output");
  doc["optimizer"].erase("threads");
  return doc.dump(2) + "\n";
}

std::string format_value(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", value);
  return buf;
}

namespace detail {

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << content;
  out.flush();
  if (!out) throw SimulationError("cannot write " + path.string());
}

}  // namespace

TableWriter::TableWriter(std::filesystem::path path, std::vector<std::string> header, char sep,
                         bool enabled)
    : path_(std::move(path)), sep_(sep), enabled_(enabled) {
  add(std::move(header));
}

void TableWriter::add(std::vector<std::string> cells) {
  stage(std::move(cells));
  flush("");
}

void TableWriter::stage(std::vector<std::string> cells) {
  std::string line;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) line += sep_;
    line += cells[i];
  }
  lines_.push_back(std::move(line));
}

void TableWriter::fail(const std::string& message) {
  std::string flat = message;
  for (char& ch : flat) {
    if (ch == '\n') ch = ' ';
  }
  flush("# FAILED: " + flat + "\n");
}

void TableWriter::flush(const std::string& trailer) const {
  if (!enabled_) return;
  std::string content;
  for (const auto& line : lines_) content += line + "\n";
  write_file(path_, content + trailer);
}

ManifestWriter::ManifestWriter(const ScenarioConfig& config, std::string command)
    : path_(std::filesystem::path(config.output.dir) / "manifest.json"),
      enabled_(config.writes("manifest")) {
  const std::string text = canonical_config_text(config);
  record_ = {{"manifest_version", kManifestVersion},
             {"library_version", kLibraryVersion},
             {"command", std::move(command)},
             {"config_hash", git_blob_sha1(text)},
             {"config", config.to_json()},
             {"status", "running"},
             {"rows", nlohmann::json::array()},
             {"traces", nlohmann::json::array()},
             {"details", nlohmann::json::object()}};
}

void ManifestWriter::checkpoint() const { write(record_); }

nlohmann::json ManifestWriter::finish(const std::string& error, double wall_time) {
  record_["status"] = error.empty() ? "ok" : "FAILED";
  if (!error.empty()) record_["error"] = error;
  record_["wall_time_s"] = wall_time;
  write(record_);
  return record_;
}

void ManifestWriter::write(const nlohmann::json& record) const {
  if (enabled_) write_file(path_, record.dump(2) + "\n");
}

nlohmann::json trace_json(const std::vector<std::pair<int, double>>& trace) {
  nlohmann::json out = nlohmann::json::array();
  for (auto [iter, value] : trace) out.push_back({iter, value});
  return out;
}

}  // namespace detail
}  // namespace xtalk
