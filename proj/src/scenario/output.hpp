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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "xtalk/scenario.hpp"

namespace xtalk::detail {

/// Delimited table that is rewritten in full after every row, so a crash
/// leaves every finished row on disk.
class TableWriter {
 public:
  TableWriter(std::filesystem::path path, std::vector<std::string> header, char sep, bool enabled);

  /// Buffers a row; commit() writes the file. add() does both.
  void add(std::vector<std::string> cells);
  void stage(std::vector<std::string> cells);
  void commit() const { flush(""); }
  /// Appends "# FAILED: message" after the rows written so far.
  void fail(const std::string& message);

 private:
  void flush(const std::string& trailer) const;

  std::filesystem::path path_;
  char sep_;
  bool enabled_;
  std::vector<std::string> lines_;
};

/// Run record written next to the tables.
class ManifestWriter {
 public:
  ManifestWriter(const ScenarioConfig& config, std::string command);

  nlohmann::json& rows() { return record_["rows"]; }
  nlohmann::json& traces() { return record_["traces"]; }
  nlohmann::json& extra() { return record_["details"]; }
  /// Writes manifest.json (when enabled) and returns the record.
  nlohmann::json finish(const std::string& error, double wall_time);
  void checkpoint() const;

 private:
  void write(const nlohmann::json& record) const;

  std::filesystem::path path_;
  bool enabled_;
  nlohmann::json record_;
};

nlohmann::json trace_json(const std::vector<std::pair<int, double>>& trace);

}  // namespace xtalk::detail
