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

#include "flat_config.h"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "asdpool/error.h"

namespace asdpool::cli {

namespace {

std::string_view Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool ValidKey(std::string_view key) {
  if (key.empty()) return false;
  for (char c : key)
    if (!(std::islower(static_cast<unsigned char>(c)) ||
          std::isdigit(static_cast<unsigned char>(c)) || c == '_'))
      return false;
  return true;
}

}  // namespace

FlatConfig ParseFlatConfig(std::string_view text, std::string_view origin) {
  FlatConfig out;
  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where =
        std::string(origin) + ":" + std::to_string(line_no) + ": ";
    std::string_view body = line;
    if (const auto hash = body.find('#'); hash != std::string_view::npos)
      body = body.substr(0, hash);
    body = Trim(body);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos)
      throw ValidationError(where + "expected 'key = value'");
    const auto key = std::string(Trim(body.substr(0, eq)));
    auto value = Trim(body.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"')
      value = value.substr(1, value.size() - 2);
    if (!ValidKey(key)) throw ValidationError(where + "invalid key '" + key + "'");
    if (!seen.insert(key).second)
      throw ValidationError(where + "duplicate key '" + key + "'");
    out.emplace_back(key, std::string(value));
  }
  return out;
}

FlatConfig ReadFlatConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config: " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseFlatConfig(buf.str(), path.string());
}

}  // namespace asdpool::cli
