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

#ifndef REPGRAPH_KINDS_HPP_
#define REPGRAPH_KINDS_HPP_

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace repgraph {

// Simulated time in hours. Absolute values are hours since the Unix epoch.
using Hours = double;

enum class NodeLayer : std::uint8_t {
  kOrganization = 1,
  kIncident = 2,
  kAlert = 3,
  kEntity = 4,
  kParentEntity = 5,
};

// Node kinds. The enumerator order is the primary sort key of the sparse
// export, so it must stay stable.
enum class EntityKind : std::uint8_t {
  kOrgId,
  kIncidentId,
  kAlertId,
  // Layer 4.
  kSha1,
  kCampaignId,
  kSessionId,
  kEmailId,
  kAppId,
  kUrl,
  kIpAddress,
  kDeviceName,
  kResourceId,
  kRegistryKey,
  kRegistryVal,
  // Layer 5.
  kFileDir,
  kEmailAddress,
  kEmailCluster,
  kUrlDomain,
  kIpRange,
};

inline constexpr std::size_t kNumEntityKinds = 19;

inline constexpr std::array<EntityKind, kNumEntityKinds> kAllEntityKinds = {
    EntityKind::kOrgId,       EntityKind::kIncidentId,  EntityKind::kAlertId,
    EntityKind::kSha1,        EntityKind::kCampaignId,  EntityKind::kSessionId,
    EntityKind::kEmailId,     EntityKind::kAppId,       EntityKind::kUrl,
    EntityKind::kIpAddress,   EntityKind::kDeviceName,  EntityKind::kResourceId,
    EntityKind::kRegistryKey, EntityKind::kRegistryVal, EntityKind::kFileDir,
    EntityKind::kEmailAddress, EntityKind::kEmailCluster, EntityKind::kUrlDomain,
    EntityKind::kIpRange,
};

constexpr std::size_t index_of(EntityKind kind) noexcept {
  return static_cast<std::size_t>(kind);
}

NodeLayer layer_of(EntityKind kind) noexcept;

// True for layer 4 and 5 kinds, the ones that carry reputation intel.
bool is_entity_layer(EntityKind kind) noexcept;

std::string_view to_string(EntityKind kind) noexcept;
std::string_view to_string(NodeLayer layer) noexcept;

// Accepts the canonical names ("SHA1", "URLDomain", ...). Case-sensitive.
std::optional<EntityKind> parse_entity_kind(std::string_view name) noexcept;

// Keys are trimmed and lower-cased so that "ABC " and "abc" name the same
// entity.
std::string canonical_key(std::string_view raw);

// (kind, canonical key) pair used to address entities outside a graph
// instance (intel files, ground truth, scores).
struct EntityRef {
  EntityKind kind{};
  std::string key;

  auto operator<=>(const EntityRef&) const = default;
  bool operator==(const EntityRef&) const = default;
};

}  // namespace repgraph

#endif  // REPGRAPH_KINDS_HPP_
