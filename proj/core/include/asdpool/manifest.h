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

#ifndef ASDPOOL_MANIFEST_H_
#define ASDPOOL_MANIFEST_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace asdpool {

enum class Subset { kDev, kEval };
enum class Domain { kSource, kTarget, kUnknown };
enum class Split { kTrain, kTest };
enum class Label { kNormal, kAnomaly, kUnknown };

std::string_view ToString(Subset v);
std::string_view ToString(Domain v);
std::string_view ToString(Split v);
std::string_view ToString(Label v);

// Parsers throw ValidationError on unknown names.
Subset ParseSubset(std::string_view s);
Domain ParseDomain(std::string_view s);
Split ParseSplit(std::string_view s);
Label ParseLabel(std::string_view s);

// One manifest line. `path` is relative to the manifest's directory.
struct ClipRecord {
  std::string path;
  std::string dataset;
  Subset subset = Subset::kDev;
  std::string machine_type;
  std::string section;
  Domain domain = Domain::kSource;
  Split split = Split::kTrain;
  Label label = Label::kNormal;

  bool operator==(const ClipRecord&) const = default;
};

// Throws ValidationError if train clips are not normal or carry an unknown
// domain.
void ValidateRecord(const ClipRecord& record);

struct Manifest {
  std::filesystem::path directory;  // base for relative record paths
  std::vector<ClipRecord> records;  // file order

  std::filesystem::path Resolve(const ClipRecord& record) const {
    return directory / record.path;
  }
};

// JSON-lines manifest with exactly the ClipRecord field names as keys. Blank
// lines are skipped. Errors name the offending line number; a record whose
// file is missing raises IoError naming the path.
Manifest LoadManifest(const std::filesystem::path& source);

// Serializes one record as a single JSON line (no trailing newline). Keys are
// emitted in sorted order so output is stable.
std::string RecordToJsonLine(const ClipRecord& record);

void WriteManifest(const std::vector<ClipRecord>& records,
                   const std::filesystem::path& destination);

}  // namespace asdpool

#endif  // ASDPOOL_MANIFEST_H_
