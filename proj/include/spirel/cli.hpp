// Copyright 2026 The Spirel Authors
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

#ifndef SPIREL_CLI_HPP_
#define SPIREL_CLI_HPP_

#include <string>
#include <vector>

// Command-line entry point. Subcommands: generate, train, evaluate, sweep,
// inspect. Progress goes to stderr; machine-readable output goes to files.

namespace spirel::cli {

// Runs the tool on `args` (without the program name); returns the exit
// status.
int run(const std::vector<std::string>& args);

}  // namespace spirel::cli

#endif  // SPIREL_CLI_HPP_
