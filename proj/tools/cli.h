// Copyright 2026 The Hypernym Authors.
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

#ifndef HYPERNYM_TOOLS_CLI_H_
#define HYPERNYM_TOOLS_CLI_H_

#include <iosfwd>
#include <string>
#include <vector>

namespace hypernym::cli {

enum ExitCode {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNetwork = 3,
  kExitIo = 4,
};

// Runs one command line (args[0] is the program name). Input paths given as
// "-" read from `in`; output paths given as "-" write to `out`; diagnostics
// and the resolved-config echo go to `err`.
int RunCli(const std::vector<std::string>& args, std::istream& in,
           std::ostream& out, std::ostream& err);

}  // namespace hypernym::cli

#endif  // HYPERNYM_TOOLS_CLI_H_
