// Copyright 2026 The bangbang Authors
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

#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

#include "bangbang/spinsys.hpp"

namespace bb {

// Plain-text complex matrices: optional '#' comment lines, then one row per
// line with whitespace-separated "re,im" tokens. Values are written with 17
// significant digits so a write/read cycle is exact.

void write_matrix(std::ostream& out, const CMatrix& m, std::string_view comment = {});
std::string format_matrix(const CMatrix& m, std::string_view comment = {});

/// Throws std::invalid_argument naming the offending line on malformed input.
CMatrix parse_matrix(std::string_view text);
CMatrix load_matrix(const std::string& path);

/// First comment line of a matrix file with its leading "# " removed, or "".
std::string matrix_comment(std::string_view text);

}  // namespace bb
