/*
 * Copyright 2026 The lqdec Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef LQDEC_TOOLS_CLI_HPP
#define LQDEC_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lqdec::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kFormat = 2,
  kInfeasible = 3,
  kNumerical = 4,
};

/// Runs one command line (without the program name). Results go to `out`,
/// diagnostics to `err`; the return value is the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

}  // namespace lqdec::cli

#endif  // LQDEC_TOOLS_CLI_HPP
