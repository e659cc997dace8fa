// Copyright 2026 The cfloquet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/**
 * @file
 * Command-line front end. Every subcommand reads one JSON config, writes its
 * artifacts under an output directory, and finishes with manifest.json.
 *
 * Exit status: 0 on success, 1 for usage and configuration errors, 2 for
 * numerical or phase errors.
 */
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace cfloquet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Runs the tool with argv-style arguments (args[0] is the program name).
int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(const std::string &bytes);

} // namespace cfloquet::cli
