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

#ifndef ASDPOOL_TOOLS_FLAT_CONFIG_H_
#define ASDPOOL_TOOLS_FLAT_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace asdpool::cli {

// Flat key-value config: one `key = value` per line with `#` comments.
// Values may be double-quoted. Keys must be unique.
using FlatConfig = std::vector<std::pair<std::string, std::string>>;

FlatConfig ParseFlatConfig(std::string_view text, std::string_view origin);
FlatConfig ReadFlatConfig(const std::filesystem::path& path);

}  // namespace asdpool::cli

#endif  // ASDPOOL_TOOLS_FLAT_CONFIG_H_
