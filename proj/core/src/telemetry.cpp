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

#include "repgraph/telemetry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <unordered_map>

#include "io_util.hpp"
#include "json.hpp"
#include "repgraph/error.hpp"
#include "repgraph/time.hpp"

namespace repgraph {

using nlohmann::json;

namespace {

// Thrown inside row parsers to mark a row as malformed.
struct MalformedRow {};

std::string required_string(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || !it->is_string()) throw MalformedRow{};
  std::string s = it->get<std::string>();
  if (canonical_key(s).empty()) throw MalformedRow{};
  return s;
}

std::string optional_string(const json& obj, const char* field) {
  auto it = obj.find(field);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) throw MalformedRow{};
  return it->get<std::string>();
}

EntityKind evidence_kind(std::string_view name) {
  const auto kind = parse_entity_kind(name);
  if (!kind || layer_of(*kind) != NodeLayer::kEntity) throw MalformedRow{};
  return *kind;
}

Evidence parse_evidence(const json& e) {
  if (!e.is_object()) throw MalformedRow{};
  Evidence ev;
  ev.kind = evidence_kind(required_string(e, "kind"));
  ev.key = required_string(e, "key");
  ev.file_dir = optional_string(e, "file_dir");
  ev.sender = optional_string(e, "sender");
  if (auto it = e.find("clusters"); it != e.end() && !it->is_null()) {
    if (!it->is_array()) throw MalformedRow{};
    for (const json& c : *it) {
      if (!c.is_string()) throw MalformedRow{};
      ev.clusters.push_back(c.get<std::string>());
    }
  }
  return ev;
}

TelemetryRecord parse_record(const json& obj) {
  if (!obj.is_object()) throw MalformedRow{};
  TelemetryRecord r;
  const auto ts = parse_rfc3339(required_string(obj, "timestamp"));
  if (!ts) throw MalformedRow{};
  r.timestamp = *ts;
  r.org_key = required_string(obj, "org_key");
  r.incident_key = required_string(obj, "incident_key");
  r.alert_key = required_string(obj, "alert_key");
  if (auto it = obj.find("alert_disrupted"); it != obj.end() && !it->is_null()) {
    if (!it->is_boolean()) throw MalformedRow{};
    r.alert_disrupted = it->get<bool>();
  }
  const auto grade = parse_alert_grade(optional_string(obj, "alert_grade"));
  if (!grade) throw MalformedRow{};
  r.alert_grade = *grade;
  r.detector = optional_string(obj, "detector");
  r.product = optional_string(obj, "product");
  if (auto it = obj.find("evidence"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw MalformedRow{};
    for (const json& e : *it) r.evidence.push_back(parse_evidence(e));
  }
  return r;
}

void finish_batch(TelemetryBatch& batch, std::size_t rows, std::string_view what) {
  if (rows > 0 && static_cast<double>(batch.malformed) >
                      kMaxMalformedFraction * static_cast<double>(rows)) {
    throw DataError(std::string(what) + ": batch rejected, " +
                    std::to_string(batch.malformed) + " of " +
                    std::to_string(rows) + " rows malformed");
  }
  std::stable_sort(batch.records.begin(), batch.records.end(),
                   [](const TelemetryRecord& a, const TelemetryRecord& b) {
                     return a.timestamp < b.timestamp;
                   });
  if (!batch.records.empty()) {
    batch.batch_start = batch.records.front().timestamp;
    batch.batch_end = std::nextafter(batch.records.back().timestamp,
                                     std::numeric_limits<double>::infinity());
  }
}

}  // namespace

void TelemetryBatch::set_window(Hours start, Hours end) {
  if (!(end >= start)) throw DataError("telemetry: batch ends before it starts");
  for (const TelemetryRecord& r : records) {
    if (r.timestamp < start || r.timestamp >= end) {
      throw DataError("telemetry: record at " + format_rfc3339(r.timestamp) +
                      " outside batch window [" + format_rfc3339(start) +
                      ", " + format_rfc3339(end) + ")");
    }
  }
  batch_start = start;
  batch_end = end;
}

TelemetryBatch parse_jsonl(std::string_view text) {
  TelemetryBatch batch;
  std::size_t rows = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    ++rows;
    try {
      batch.records.push_back(parse_record(json::parse(line)));
    } catch (const MalformedRow&) {
      ++batch.malformed;
    } catch (const json::exception&) {
      ++batch.malformed;
    }
  }
  finish_batch(batch, rows, "jsonl");
  return batch;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_open = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        quoted = true;
        row_open = true;
        break;
      case ',':
        row.push_back(std::move(field));
        field.clear();
        row_open = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_open || !field.empty()) {
          row.push_back(std::move(field));
          rows.push_back(std::move(row));
        }
        field.clear();
        row.clear();
        row_open = false;
        break;
      default:
        field.push_back(c);
        row_open = true;
    }
  }
  if (quoted) throw DataError("csv: unterminated quoted field");
  if (row_open || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

GuideMapping GuideMapping::from_json(std::string_view text) {
  GuideMapping m;
  try {
    const json doc = json::parse(text);
    if (auto it = doc.find("columns"); it != doc.end()) {
      const json& c = *it;
      auto take = [&](const char* field, std::string& dst) {
        if (c.contains(field)) dst = c.at(field).get<std::string>();
      };
      take("timestamp", m.timestamp);
      take("org_key", m.org_key);
      take("incident_key", m.incident_key);
      take("alert_key", m.alert_key);
      take("alert_grade", m.alert_grade);
      take("detector", m.detector);
      take("product", m.product);
      take("alert_disrupted", m.disrupted);
      take("entity_type", m.entity_type);
    }
    if (doc.contains("disrupted_values")) {
      m.disrupted_values = doc.at("disrupted_values").get<std::vector<std::string>>();
    }
    if (doc.contains("grades")) {
      for (const auto& [value, name] : doc.at("grades").items()) {
        const auto g = parse_alert_grade(name.get<std::string>());
        if (!g) throw ConfigError("guide mapping: unknown grade '" + name.get<std::string>() + "'");
        m.grades[value] = *g;
      }
    }
    for (const auto& [type, entry] : doc.at("entity_types").items()) {
      EntityColumns cols;
      const auto kind = parse_entity_kind(entry.at("kind").get<std::string>());
      if (!kind || layer_of(*kind) != NodeLayer::kEntity) {
        throw ConfigError("guide mapping: entity type '" + type +
                          "' must map to an evidence kind");
      }
      cols.kind = *kind;
      cols.key = entry.at("key").get<std::string>();
      cols.file_dir = entry.value("file_dir", "");
      cols.sender = entry.value("sender", "");
      cols.cluster = entry.value("cluster", "");
      m.entity_types.emplace(type, std::move(cols));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("guide mapping: ") + e.what());
  }
  return m;
}

GuideMapping GuideMapping::load(const std::filesystem::path& path) {
  return from_json(detail::read_text_file<ConfigError>(path, "guide mapping"));
}

TelemetryBatch parse_guide_csv(std::string_view text,
                               const GuideMapping& mapping) {
  auto rows = parse_csv(text);
  TelemetryBatch batch;
  if (rows.empty()) return batch;

  std::unordered_map<std::string, std::size_t> header;
  for (std::size_t i = 0; i < rows[0].size(); ++i) {
    header.emplace(canonical_key(rows[0][i]), i);
  }
  // Missing optional columns resolve to npos and read as empty.
  auto column = [&](const std::string& name, bool required) {
    if (name.empty()) return std::string::npos;
    auto it = header.find(canonical_key(name));
    if (it == header.end()) {
      if (required) throw ConfigError("guide csv: missing column '" + name + "'");
      return std::string::npos;
    }
    return it->second;
  };
  const std::size_t c_ts = column(mapping.timestamp, true);
  const std::size_t c_org = column(mapping.org_key, true);
  const std::size_t c_inc = column(mapping.incident_key, true);
  const std::size_t c_alert = column(mapping.alert_key, true);
  const std::size_t c_type = column(mapping.entity_type, true);
  const std::size_t c_grade = column(mapping.alert_grade, false);
  const std::size_t c_det = column(mapping.detector, false);
  const std::size_t c_prod = column(mapping.product, false);
  const std::size_t c_disr = column(mapping.disrupted, false);

  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    auto cell = [&](std::size_t c) -> std::string {
      return c < row.size() ? row[c] : std::string{};
    };
    auto cell_by_name = [&](const std::string& name) {
      return cell(column(name, false));
    };
    try {
      auto type = mapping.entity_types.find(cell(c_type));
      if (type == mapping.entity_types.end()) {
        ++batch.ignored;
        continue;
      }
      TelemetryRecord rec;
      const auto ts = parse_rfc3339(cell(c_ts));
      if (!ts) throw MalformedRow{};
      rec.timestamp = *ts;
      rec.org_key = cell(c_org);
      rec.incident_key = cell(c_inc);
      rec.alert_key = cell(c_alert);
      if (canonical_key(rec.org_key).empty() ||
          canonical_key(rec.incident_key).empty() ||
          canonical_key(rec.alert_key).empty()) {
        throw MalformedRow{};
      }
      if (auto g = mapping.grades.find(cell(c_grade)); g != mapping.grades.end()) {
        rec.alert_grade = g->second;
      }
      rec.detector = cell(c_det);
      rec.product = cell(c_prod);
      const std::string disrupted = cell(c_disr);
      rec.alert_disrupted =
          !disrupted.empty() &&
          std::find(mapping.disrupted_values.begin(),
                    mapping.disrupted_values.end(),
                    disrupted) != mapping.disrupted_values.end();
      const GuideMapping::EntityColumns& cols = type->second;
      Evidence ev;
      ev.kind = cols.kind;
      ev.key = cell_by_name(cols.key);
      if (canonical_key(ev.key).empty()) throw MalformedRow{};
      ev.file_dir = cell_by_name(cols.file_dir);
      ev.sender = cell_by_name(cols.sender);
      if (std::string cl = cell_by_name(cols.cluster); !canonical_key(cl).empty()) {
        ev.clusters.push_back(std::move(cl));
      }
      rec.evidence.push_back(std::move(ev));
      batch.records.push_back(std::move(rec));
    } catch (const MalformedRow&) {
      ++batch.malformed;
    }
  }
  finish_batch(batch, rows.size() - 1, "guide csv");
  return batch;
}

TelemetryBatch parse_batch(const std::filesystem::path& path,
                           TelemetryFormat format, const GuideMapping* mapping) {
  const std::string text = detail::read_text_file<DataError>(path, "telemetry");
  switch (format) {
    case TelemetryFormat::kJsonl:
      return parse_jsonl(text);
    case TelemetryFormat::kGuideCsv:
      if (mapping == nullptr) {
        throw ConfigError("guide csv: a column mapping is required");
      }
      return parse_guide_csv(text, *mapping);
  }
  return {};
}

std::string to_jsonl(const TelemetryRecord& r) {
  json obj;
  obj["timestamp"] = format_rfc3339(r.timestamp);
  obj["org_key"] = r.org_key;
  obj["incident_key"] = r.incident_key;
  obj["alert_key"] = r.alert_key;
  obj["alert_disrupted"] = r.alert_disrupted;
  obj["alert_grade"] = to_string(r.alert_grade);
  if (!r.detector.empty()) obj["detector"] = r.detector;
  if (!r.product.empty()) obj["product"] = r.product;
  json ev = json::array();
  for (const Evidence& e : r.evidence) {
    json item{{"kind", to_string(e.kind)}, {"key", e.key}};
    if (!e.file_dir.empty()) item["file_dir"] = e.file_dir;
    if (!e.sender.empty()) item["sender"] = e.sender;
    if (!e.clusters.empty()) item["clusters"] = e.clusters;
    ev.push_back(std::move(item));
  }
  obj["evidence"] = std::move(ev);
  return obj.dump();
}

std::optional<std::string> ip_range_of(std::string_view ip) {
  const std::string canon = canonical_key(ip);
  std::array<int, 4> octets{};
  std::string_view rest = canon;
  for (int i = 0; i < 4; ++i) {
    const auto dot = rest.find('.');
    if ((i < 3) == (dot == std::string_view::npos)) return std::nullopt;
    const std::string_view part = rest.substr(0, dot);
    if (part.empty() || part.size() > 3) return std::nullopt;
    int value = 0;
    const auto [end, ec] =
        std::from_chars(part.data(), part.data() + part.size(), value);
    if (ec != std::errc{} || end != part.data() + part.size() || value > 255) {
      return std::nullopt;
    }
    octets[static_cast<std::size_t>(i)] = value;
    rest = i < 3 ? rest.substr(dot + 1) : std::string_view{};
  }
  return std::to_string(octets[0]) + "." + std::to_string(octets[1]) + "." +
         std::to_string(octets[2]) + ".0/24";
}

std::optional<std::string> url_domain_of(std::string_view url) {
  std::string s = canonical_key(url);
  std::string_view v = s;
  if (const auto scheme = v.find("://"); scheme != std::string_view::npos) {
    v.remove_prefix(scheme + 3);
  }
  v = v.substr(0, v.find_first_of("/?#"));
  if (const auto at = v.rfind('@'); at != std::string_view::npos) {
    v.remove_prefix(at + 1);
  }
  if (!v.empty() && v.front() == '[') {
    const auto close = v.find(']');
    if (close == std::string_view::npos) return std::nullopt;
    v = v.substr(0, close + 1);
  } else {
    v = v.substr(0, v.find(':'));
  }
  while (!v.empty() && v.back() == '.') v.remove_suffix(1);
  if (v.empty()) return std::nullopt;
  return std::string(v);
}

UpdateReport apply_batch(ThreatGraph& graph, const TelemetryBatch& batch,
                         SignalLedger* ledger) {
  if (batch.batch_end < graph.last_update()) {
    throw DataError("ingest: batch ending " + format_rfc3339(batch.batch_end) +
                    " precedes the last update " +
                    format_rfc3339(graph.last_update()));
  }
  UpdateReport report;
  auto upsert = [&](EntityKind kind, std::string_view key, Hours t) {
    const UpsertResult r = graph.upsert_node(kind, key, t);
    ++(r.created ? report.nodes_added : report.nodes_refreshed);
    return r.id;
  };
  auto link = [&](NodeId a, NodeId b, Hours t) {
    const AddEdgeResult r = graph.add_edge(a, b, t);
    ++(r.created ? report.edges_added : report.edges_refreshed);
  };
  auto derive = [&](NodeId child, EntityKind kind, std::string_view key,
                    Hours t, const SignalLedger::Observation& obs) {
    if (canonical_key(key).empty()) return;
    if (!graph.policies().find(graph.node(child).kind, kind)) return;
    link(child, upsert(kind, key, t), t);
    if (ledger) ledger->record(EntityRef{kind, canonical_key(key)}, obs);
  };

  for (const TelemetryRecord& rec : batch.records) {
    const Hours t = rec.timestamp;
    const NodeId org = upsert(EntityKind::kOrgId, rec.org_key, t);
    const NodeId incident = upsert(EntityKind::kIncidentId, rec.incident_key, t);
    const NodeId alert = upsert(EntityKind::kAlertId, rec.alert_key, t);
    link(org, incident, t);
    link(incident, alert, t);
    if (rec.alert_disrupted) graph.set_reputation(alert, 1.0);

    const std::string org_key = canonical_key(rec.org_key);
    const std::string alert_key = canonical_key(rec.alert_key);
    const SignalLedger::Observation obs{org_key, alert_key, rec.detector,
                                        rec.product, rec.alert_grade};
    for (const Evidence& ev : rec.evidence) {
      if (layer_of(ev.kind) != NodeLayer::kEntity) {
        throw DataError("ingest: evidence kind " +
                        std::string(to_string(ev.kind)) +
                        " is not an entity kind");
      }
      const NodeId entity = upsert(ev.kind, ev.key, t);
      link(alert, entity, t);
      if (ledger) ledger->record(EntityRef{ev.kind, canonical_key(ev.key)}, obs);

      switch (ev.kind) {
        case EntityKind::kSha1:
          derive(entity, EntityKind::kFileDir, ev.file_dir, t, obs);
          break;
        case EntityKind::kEmailId:
          derive(entity, EntityKind::kEmailAddress, ev.sender, t, obs);
          for (const std::string& c : ev.clusters) {
            derive(entity, EntityKind::kEmailCluster, c, t, obs);
          }
          break;
        case EntityKind::kUrl:
          if (auto d = url_domain_of(ev.key)) {
            derive(entity, EntityKind::kUrlDomain, *d, t, obs);
          }
          break;
        case EntityKind::kIpAddress:
          if (auto r = ip_range_of(ev.key)) {
            derive(entity, EntityKind::kIpRange, *r, t, obs);
          }
          break;
        default:
          break;
      }
    }
    ++report.records;
  }
  report.pruned = graph.prune(batch.batch_end);
  return report;
}

}  // namespace repgraph
