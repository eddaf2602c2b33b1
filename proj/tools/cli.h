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

#ifndef ASDPOOL_TOOLS_CLI_H_
#define ASDPOOL_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace asdpool::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitIo = 2;

// Runs the command line `args` (args[0] is the program name). Subcommands:
// synth, eval, sweep, compare, preset. Any subcommand accepts
// `--config FILE`; its keys are applied first, so flags given on the command
// line win.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace asdpool::cli

#endif  // ASDPOOL_TOOLS_CLI_H_
