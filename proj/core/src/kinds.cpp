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

#include "repgraph/kinds.hpp"

#include <algorithm>
#include <cctype>

namespace repgraph {
namespace {

constexpr std::array<std::string_view, kNumEntityKinds> kKindNames = {
    "OrgId",       "IncidentId",  "AlertId",      "SHA1",         "CampaignId",
    "SessionId",   "EmailId",     "AppId",        "URL",          "IpAddress",
    "DeviceName",  "ResourceId",  "RegistryKey",  "RegistryVal",  "FileDir",
    "EmailAddress", "EmailCluster", "URLDomain",  "IpRange",
};

}  // namespace

NodeLayer layer_of(EntityKind kind) noexcept {
  switch (kind) {
    case EntityKind::kOrgId:
      return NodeLayer::kOrganization;
    case EntityKind::kIncidentId:
      return NodeLayer::kIncident;
    case EntityKind::kAlertId:
      return NodeLayer::kAlert;
    case EntityKind::kFileDir:
    case EntityKind::kEmailAddress:
    case EntityKind::kEmailCluster:
    case EntityKind::kUrlDomain:
    case EntityKind::kIpRange:
      return NodeLayer::kParentEntity;
    default:
      return NodeLayer::kEntity;
  }
}

bool is_entity_layer(EntityKind kind) noexcept {
  const NodeLayer layer = layer_of(kind);
  return layer == NodeLayer::kEntity || layer == NodeLayer::kParentEntity;
}

std::string_view to_string(EntityKind kind) noexcept {
  return kKindNames[index_of(kind)];
}

std::string_view to_string(NodeLayer layer) noexcept {
  switch (layer) {
    case NodeLayer::kOrganization:
      return "Organization";
    case NodeLayer::kIncident:
      return "Incident";
    case NodeLayer::kAlert:
      return "Alert";
    case NodeLayer::kEntity:
      return "Entity";
    case NodeLayer::kParentEntity:
      return "ParentEntity";
  }
  return "Unknown";
}

std::optional<EntityKind> parse_entity_kind(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kKindNames.size(); ++i) {
    if (kKindNames[i] == name) return kAllEntityKinds[i];
  }
  return std::nullopt;
}

std::string canonical_key(std::string_view raw) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!raw.empty() && is_space(static_cast<unsigned char>(raw.front()))) {
    raw.remove_prefix(1);
  }
  while (!raw.empty() && is_space(static_cast<unsigned char>(raw.back()))) {
    raw.remove_suffix(1);
  }
  std::string out(raw);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  return out;
}

}  // namespace repgraph
