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

#include <string>
#include <string_view>

#include "bangbang/propagator.hpp"

namespace bb {

// Text format:
//
//   # bangbang sequence
//   dt 5.0000000000000004e-06
//   segments 3
//   species 1H 13C
//   D D
//   P:90 D
//   D P:180.5
//   twirls 1 3
//
// Phases are in degrees. parse_sequence(format_sequence(s)) == s exactly.

std::string format_sequence(const BBSequence& seq);
BBSequence parse_sequence(std::string_view text);

BBSequence load_sequence(const std::string& path);
void save_sequence(const std::string& path, const BBSequence& seq);

}  // namespace bb
