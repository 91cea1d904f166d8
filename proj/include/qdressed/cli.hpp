// Copyright 2026 The qdressed Authors
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

/**
 * @file
 * Command-line front end: `train` and `eval` subcommands.
 *
 * Exit codes: 0 success, 1 data or runtime error, 2 usage error, 3 divergence.
 */

#pragma once

#include <iosfwd>
#include <span>
#include <string>

namespace qdressed::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDivergence = 3;

/// Runs the CLI with `args[0]` as the program name.
int run(std::span<const std::string> args, std::ostream &out, std::ostream &err);

/// `train` with its own arguments (no program or subcommand name).
/// `args` holds the options that follow the subcommand name.
int cmd_train(std::span<const std::string> args, std::ostream &out, std::ostream &err);

/// `eval` with its own arguments.
int cmd_eval(std::span<const std::string> args, std::ostream &out, std::ostream &err);

} // namespace qdressed::cli
