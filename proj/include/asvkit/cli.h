// Copyright (c) 2026 The asvkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ASVKIT_CLI_H_
#define ASVKIT_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace asvkit {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

// Runs one `asvkit <subcommand> ...` invocation. `args` excludes the program
// name. Reports go to `out`, diagnostics to `err`.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace asvkit

#endif  // ASVKIT_CLI_H_
