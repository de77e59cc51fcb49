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

#ifndef REPGRAPH_TELEMETRY_HPP_
#define REPGRAPH_TELEMETRY_HPP_

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repgraph/graph.hpp"
#include "repgraph/kinds.hpp"
#include "repgraph/reputation.hpp"

namespace repgraph {

// One piece of evidence on an alert. Only layer-4 kinds appear here; the
// context fields feed the derived layer-5 nodes.
struct Evidence {
  EntityKind kind{};
  std::string key;
  std::string file_dir;               // SHA1: containing directory
  std::string sender;                 // EmailId: sender address
  std::vector<std::string> clusters;  // EmailId: cluster ids

  bool operator==(const Evidence&) const = default;
};

struct TelemetryRecord {
  Hours timestamp = 0.0;
  std::string org_key;
  std::string incident_key;
  std::string alert_key;
  bool alert_disrupted = false;
  AlertGrade alert_grade = AlertGrade::kUngraded;
  std::string detector;
  std::string product;
  std::vector<Evidence> evidence;

  bool operator==(const TelemetryRecord&) const = default;
};

struct TelemetryBatch {
  Hours batch_start = 0.0;
  Hours batch_end = 0.0;  // exclusive
  std::vector<TelemetryRecord> records;  // ordered by timestamp
  std::size_t malformed = 0;  // rows skipped as unparseable
  std::size_t ignored = 0;    // rows outside the mapping (GUIDE only)

  // Replaces the window. Throws DataError if a record falls outside
  // [start, end).
  void set_window(Hours start, Hours end);
};

enum class TelemetryFormat { kJsonl, kGuideCsv };

// Column mapping for GUIDE-style CSV exports, where each row carries one
// evidence entity of one alert.
struct GuideMapping {
  struct EntityColumns {
    EntityKind kind{};
    std::string key;
    std::string file_dir;
    std::string sender;
    std::string cluster;
  };

  std::string timestamp = "Timestamp";
  std::string org_key = "OrgId";
  std::string incident_key = "IncidentId";
  std::string alert_key = "AlertId";
  std::string alert_grade = "IncidentGrade";
  std::string detector = "DetectorId";
  std::string product = "Category";
  std::string disrupted;  // optional column
  std::vector<std::string> disrupted_values;
  std::map<std::string, AlertGrade> grades;  // column value -> grade
  std::string entity_type = "EntityType";
  std::map<std::string, EntityColumns> entity_types;

  static GuideMapping from_json(std::string_view text);
  static GuideMapping load(const std::filesystem::path& path);
};

// Minimal RFC 4180 reader: quoted fields, doubled quotes, CRLF or LF.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Fraction of malformed rows above which a batch is rejected.
inline constexpr double kMaxMalformedFraction = 0.5;

// The window defaults to [first timestamp, just after the last one).
TelemetryBatch parse_jsonl(std::string_view text);
TelemetryBatch parse_guide_csv(std::string_view text,
                               const GuideMapping& mapping);
TelemetryBatch parse_batch(const std::filesystem::path& path,
                           TelemetryFormat format,
                           const GuideMapping* mapping = nullptr);

std::string to_jsonl(const TelemetryRecord& record);

// "a.b.c.d" -> "a.b.c.0/24"; nullopt unless a dotted IPv4 address.
std::optional<std::string> ip_range_of(std::string_view ip);
// Host part of a URL, lower-cased, without scheme, credentials or port.
std::optional<std::string> url_domain_of(std::string_view url);

struct UpdateReport {
  std::size_t records = 0;
  std::size_t nodes_added = 0;
  std::size_t nodes_refreshed = 0;
  std::size_t edges_added = 0;
  std::size_t edges_refreshed = 0;
  PruneReport pruned;
};

// Merges the batch into the graph, then prunes at batch_end. When a ledger
// is given, every entity observation is recorded for bootstrapping.
// Throws DataError if batch_end precedes the graph's last update.
UpdateReport apply_batch(ThreatGraph& graph, const TelemetryBatch& batch,
                         SignalLedger* ledger = nullptr);

}  // namespace repgraph

#endif  // REPGRAPH_TELEMETRY_HPP_
