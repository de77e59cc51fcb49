// Copyright 2026 The repgraph Authors
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

#ifndef REPGRAPH_TIME_HPP_
#define REPGRAPH_TIME_HPP_

#include <optional>
#include <string>
#include <string_view>

#include "repgraph/kinds.hpp"

namespace repgraph {

// Parses "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]" into hours since the
// Unix epoch. A missing offset is read as UTC. Returns nullopt on any
// syntax or range error.
std::optional<Hours> parse_rfc3339(std::string_view text);

// Formats with millisecond resolution, always in UTC with a "Z" suffix.
// A zero fraction is left out.
std::string format_rfc3339(Hours hours);

}  // namespace repgraph

#endif  // REPGRAPH_TIME_HPP_
