// Copyright 2026 The asdpool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "asdpool/manifest.h"

#include <array>
#include <fstream>
#include <string>

#include "asdpool/error.h"
#include "json.hpp"

namespace asdpool {

namespace {

template <typename Enum, std::size_t N>
Enum ParseEnum(std::string_view s, const std::array<std::string_view, N>& names,
               std::string_view what) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == s) return static_cast<Enum>(i);
  std::string allowed;
  for (auto n : names) allowed += (allowed.empty() ? "" : ", ") + std::string(n);
  throw ValidationError("unknown " + std::string(what) + " '" + std::string(s) +
                        "' (expected one of: " + allowed + ")");
}

constexpr std::array<std::string_view, 2> kSubsetNames = {"dev", "eval"};
constexpr std::array<std::string_view, 3> kDomainNames = {"source", "target",
                                                          "unknown"};
constexpr std::array<std::string_view, 2> kSplitNames = {"train", "test"};
constexpr std::array<std::string_view, 3> kLabelNames = {"normal", "anomaly",
                                                         "unknown"};

constexpr std::array<std::string_view, 8> kFieldNames = {
    "path",   "dataset", "subset", "machine_type",
    "section", "domain", "split",  "label"};

std::string RequireString(const nlohmann::json& obj, std::string_view key) {
  const auto it = obj.find(key);
  if (it == obj.end())
    throw ValidationError("missing key '" + std::string(key) + "'");
  if (!it->is_string())
    throw ValidationError("key '" + std::string(key) + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

std::string_view ToString(Subset v) { return kSubsetNames[static_cast<int>(v)]; }
std::string_view ToString(Domain v) { return kDomainNames[static_cast<int>(v)]; }
std::string_view ToString(Split v) { return kSplitNames[static_cast<int>(v)]; }
std::string_view ToString(Label v) { return kLabelNames[static_cast<int>(v)]; }

Subset ParseSubset(std::string_view s) {
  return ParseEnum<Subset>(s, kSubsetNames, "subset");
}
Domain ParseDomain(std::string_view s) {
  return ParseEnum<Domain>(s, kDomainNames, "domain");
}
Split ParseSplit(std::string_view s) {
  return ParseEnum<Split>(s, kSplitNames, "split");
}
Label ParseLabel(std::string_view s) {
  return ParseEnum<Label>(s, kLabelNames, "label");
}

void ValidateRecord(const ClipRecord& record) {
  if (record.path.empty()) throw ValidationError("empty path");
  if (record.split == Split::kTrain && record.label != Label::kNormal)
    throw ValidationError("train clips must be normal");
  if (record.split == Split::kTrain && record.domain == Domain::kUnknown)
    throw ValidationError("domain=unknown is only allowed for test clips");
}

Manifest LoadManifest(const std::filesystem::path& source) {
  std::ifstream in(source);
  if (!in) throw IoError("cannot open manifest: " + source.string());

  Manifest manifest;
  manifest.directory = source.parent_path();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const std::string where =
        source.string() + ":" + std::to_string(line_no) + ": ";
    ClipRecord record;
    try {
      const auto obj = nlohmann::json::parse(line);
      if (!obj.is_object()) throw ValidationError("line is not a JSON object");
      for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (auto name : kFieldNames) known = known || name == key;
        if (!known) throw ValidationError("unexpected key '" + key + "'");
      }
      record.path = RequireString(obj, "path");
      record.dataset = RequireString(obj, "dataset");
      record.subset = ParseSubset(RequireString(obj, "subset"));
      record.machine_type = RequireString(obj, "machine_type");
      record.section = RequireString(obj, "section");
      record.domain = ParseDomain(RequireString(obj, "domain"));
      record.split = ParseSplit(RequireString(obj, "split"));
      record.label = ParseLabel(RequireString(obj, "label"));
      ValidateRecord(record);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(where + "malformed line: " + e.what());
    } catch (const ValidationError& e) {
      throw ValidationError(where + e.what());
    }
    if (!std::filesystem::is_regular_file(manifest.Resolve(record)))
      throw IoError(where + "referenced file does not exist: " +
                    manifest.Resolve(record).string());
    manifest.records.push_back(std::move(record));
  }
  if (in.bad()) throw IoError("read failed: " + source.string());
  return manifest;
}

std::string RecordToJsonLine(const ClipRecord& record) {
  nlohmann::json obj = {
      {"path", record.path},
      {"dataset", record.dataset},
      {"subset", ToString(record.subset)},
      {"machine_type", record.machine_type},
      {"section", record.section},
      {"domain", ToString(record.domain)},
      {"split", ToString(record.split)},
      {"label", ToString(record.label)},
  };
  return obj.dump();
}

void WriteManifest(const std::vector<ClipRecord>& records,
                   const std::filesystem::path& destination) {
  std::ofstream out(destination, std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + destination.string());
  for (const auto& r : records) out << RecordToJsonLine(r) << '\n';
  if (!out) throw IoError("write failed: " + destination.string());
}

}  // namespace asdpool
