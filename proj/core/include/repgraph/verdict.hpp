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

#ifndef REPGRAPH_VERDICT_HPP_
#define REPGRAPH_VERDICT_HPP_

#include <string_view>

namespace repgraph {

// Reputation scores are P(malicious). 0.5 is "no information".
inline constexpr double kUnknownScore = 0.5;
inline constexpr double kMaliciousThreshold = 0.9;
inline constexpr double kBenignThreshold = 0.1;

enum class Verdict { kBenign, kUnknown, kMalicious };

// Boundary-inclusive: 0.9 is malicious, 0.1 is benign. Throws DataError
// for scores outside [0, 1] (including NaN).
Verdict classify(double score);

std::string_view to_string(Verdict v) noexcept;

}  // namespace repgraph

#endif  // REPGRAPH_VERDICT_HPP_
