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

#include "repgraph/synth.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "io_util.hpp"
#include "json.hpp"
#include "repgraph/error.hpp"
#include "repgraph/rng.hpp"
#include "repgraph/time.hpp"

namespace repgraph {

using nlohmann::json;

namespace {

constexpr std::size_t kNone = static_cast<std::size_t>(-1);

std::string pad(std::uint64_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*llu", width, static_cast<unsigned long long>(v));
  return buf;
}

std::string hex_digest(SplitMix64& rng, std::size_t chars) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(chars);
  while (out.size() < chars) {
    std::uint64_t v = rng.next();
    for (int i = 0; i < 16 && out.size() < chars; ++i, v >>= 4) {
      out.push_back(kHex[v & 0xF]);
    }
  }
  return out;
}

// Pool size P whose expected number of distinct members after `draws`
// uniform draws, P * (1 - exp(-draws / P)), equals `distinct`.
double pool_for_distinct(double distinct, double draws) {
  if (distinct <= 0.0 || draws <= 0.0) return 1.0;
  if (distinct >= draws) return 1e12;  // every draw must be new
  double lo = distinct;
  double hi = distinct * 2.0;
  auto seen = [&](double p) { return p * (1.0 - std::exp(-draws / p)); };
  while (seen(hi) < distinct) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (seen(mid) < distinct ? lo : hi) = mid;
  }
  return hi;
}

struct PoolEntity {
  std::string key;
  bool malicious = false;
  std::size_t parent = kNone;  // index into the parent pool
};

// Entities of one kind available to one campaign (or to the background).
struct KindPool {
  std::vector<PoolEntity> items;
  std::vector<PoolEntity> parents;
};

// Kinds drawn from pools, with the parent kind their context derives.
struct PooledKind {
  EntityKind kind;
  EntityKind parent;  // kOrgId when the kind has no parent row
};

constexpr std::array<PooledKind, 9> kPooledKinds = {{
    {EntityKind::kSha1, EntityKind::kFileDir},
    {EntityKind::kSessionId, EntityKind::kOrgId},
    {EntityKind::kAppId, EntityKind::kOrgId},
    {EntityKind::kUrl, EntityKind::kUrlDomain},
    {EntityKind::kIpAddress, EntityKind::kIpRange},
    {EntityKind::kDeviceName, EntityKind::kOrgId},
    {EntityKind::kResourceId, EntityKind::kOrgId},
    {EntityKind::kRegistryKey, EntityKind::kOrgId},
    {EntityKind::kRegistryVal, EntityKind::kOrgId},
}};

struct Actor {
  std::string name;  // campaign id, "" for background
  bool campaign = false;
  std::array<KindPool, kNumEntityKinds> pools;  // indexed by child kind
  std::vector<PoolEntity> clusters;
  std::vector<PoolEntity> senders;
};

// Rates derived from the mixture.
struct Plan {
  double campaign_share = 0.0;  // of incidents
  std::array<double, kNumEntityKinds> per_alert{};  // evidence items per alert
  double clusters_per_email = 0.0;
  double sender_probability = 0.0;
  std::array<std::size_t, kNumEntityKinds> background_pool{};
  std::array<std::size_t, kNumEntityKinds> campaign_pool{};
  std::array<std::size_t, kNumEntityKinds> children_per_parent{};
  std::size_t background_clusters = 600;
  std::size_t campaign_clusters = 12;
  std::size_t background_senders = 4000;
  std::size_t campaign_senders = 4;
};

Plan make_plan(const GeneratorConfig& cfg) {
  const EdgePolicyTable table = EdgePolicyTable::defaults();
  const double horizon = static_cast<double>(cfg.num_batches) * cfg.batch_hours;
  std::map<std::string, double> mix;
  double total = 0.0;
  for (const auto& [label, share] : cfg.edge_kind_mixture) total += share;
  for (const auto& [label, share] : cfg.edge_kind_mixture) mix[label] = share / total;

  auto row_of = [&](EntityKind a, EntityKind b) { return *table.find(a, b); };
  auto share = [&](EntityKind a, EntityKind b) {
    auto it = mix.find(table.pair_label(row_of(a, b)));
    return it == mix.end() ? 0.0 : it->second;
  };
  // Hours an edge of the row stays above the prune threshold, seen from
  // the end of the run.
  auto window = [&](EntityKind a, EntityKind b) {
    return std::min(survival_hours(table.at(row_of(a, b)).decay, kPruneThreshold),
                    horizon);
  };

  Plan plan;
  plan.campaign_share =
      cfg.campaigns == 0 ? 0.0
                         : std::min(1.0, cfg.label_priors.malicious / cfg.homophily);

  const EntityKind alert = EntityKind::kAlertId;
  const double ia_share = share(EntityKind::kIncidentId, alert);
  const double ia_window = window(EntityKind::kIncidentId, alert);
  if (ia_share <= 0.0) {
    throw ConfigError("generator: mixture needs a positive IncidentId-AlertId share");
  }
  double evidence_total = 0.0;
  for (EntityKind k : kAllEntityKinds) {
    if (layer_of(k) != NodeLayer::kEntity || !table.find(alert, k)) continue;
    plan.per_alert[index_of(k)] = share(alert, k) / ia_share * ia_window / window(alert, k);
    evidence_total += plan.per_alert[index_of(k)];
  }
  if (cfg.entities_per_alert && evidence_total > 0.0) {
    for (double& r : plan.per_alert) r *= *cfg.entities_per_alert / evidence_total;
  }

  const double email_rate = plan.per_alert[index_of(EntityKind::kEmailId)];
  const double email_share = share(alert, EntityKind::kEmailId);
  if (email_share > 0.0) {
    const double ae_window = window(alert, EntityKind::kEmailId);
    plan.clusters_per_email = share(EntityKind::kEmailId, EntityKind::kEmailCluster) /
                              email_share * ae_window /
                              window(EntityKind::kEmailId, EntityKind::kEmailCluster);
    plan.sender_probability =
        std::min(1.0, share(EntityKind::kEmailId, EntityKind::kEmailAddress) /
                          email_share * ae_window /
                          window(EntityKind::kEmailId, EntityKind::kEmailAddress));
  }
  (void)email_rate;

  const double alerts_per_hour = static_cast<double>(cfg.num_orgs) *
                                 cfg.incidents_per_org_per_batch *
                                 cfg.alerts_per_incident / cfg.batch_hours;
  const double ia_live = alerts_per_hour * ia_window;
  auto campaign_size = [&](double pool) {
    if (cfg.campaigns == 0) return std::size_t{0};
    return std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(pool * plan.campaign_share /
                                                 static_cast<double>(cfg.campaigns))));
  };
  plan.children_per_parent.fill(1);
  for (const PooledKind& pk : kPooledKinds) {
    const std::size_t i = index_of(pk.kind);
    double pool = 50.0;
    if (pk.kind == EntityKind::kDeviceName) pool = 800.0;
    if (pk.kind == EntityKind::kRegistryKey || pk.kind == EntityKind::kRegistryVal) {
      pool = 200.0;
    }
    if (pk.parent != EntityKind::kOrgId && table.find(pk.kind, pk.parent)) {
      // One parent edge per live child node: size the pool so the number of
      // distinct children seen within the parent row's window matches its
      // share.
      const double w = window(pk.kind, pk.parent);
      const double distinct = share(pk.kind, pk.parent) / ia_share * ia_live;
      const double draws = alerts_per_hour * plan.per_alert[i] * w;
      pool = std::min(pool_for_distinct(distinct, draws), std::max(draws * 4.0, 10.0));
    }
    plan.background_pool[i] = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::llround(pool)));
    plan.campaign_pool[i] = campaign_size(pool);
  }
  plan.children_per_parent[index_of(EntityKind::kSha1)] = 3;
  plan.children_per_parent[index_of(EntityKind::kUrl)] = 2;
  plan.children_per_parent[index_of(EntityKind::kIpAddress)] = 4;
  const auto min_clusters =
      static_cast<std::size_t>(std::ceil(plan.clusters_per_email)) + 4;
  plan.campaign_clusters = std::max(plan.campaign_clusters, min_clusters);
  plan.background_clusters = std::max(plan.background_clusters, min_clusters);
  return plan;
}

std::string child_key(EntityKind kind, const std::string& prefix, std::size_t i,
                      std::size_t parent, SplitMix64& rng) {
  switch (kind) {
    case EntityKind::kSha1:
      return hex_digest(rng, 40);
    case EntityKind::kUrl:
      return "https://" + prefix + "site" + pad(parent, 5) + ".example/p" + pad(i, 6);
    case EntityKind::kSessionId:
      return prefix + "session-" + hex_digest(rng, 12);
    case EntityKind::kAppId:
      return prefix + "app-" + pad(i, 5);
    case EntityKind::kDeviceName:
      return prefix + "host-" + pad(i, 5);
    case EntityKind::kResourceId:
      return "/subscriptions/" + prefix + "sub/resource-" + pad(i, 5);
    case EntityKind::kRegistryKey:
      return "hklm\\software\\" + prefix + "key" + pad(i, 5);
    case EntityKind::kRegistryVal:
      return prefix + "value" + pad(i, 5);
    default:
      return prefix + pad(i, 6);
  }
}

std::string parent_key(EntityKind parent, const std::string& prefix, std::size_t j,
                       std::size_t campaign_index, bool campaign) {
  switch (parent) {
    case EntityKind::kFileDir:
      return "c:\\" + (campaign ? "users\\public\\" + prefix : std::string("program files\\")) +
             "dir" + pad(j, 5);
    case EntityKind::kUrlDomain:
      return prefix + "site" + pad(j, 5) + ".example";
    case EntityKind::kIpRange:
      if (campaign) {
        return "185." + std::to_string(campaign_index % 250) + "." +
               std::to_string(j % 256) + ".0/24";
      }
      return std::to_string(20 + j / 65536) + "." + std::to_string((j / 256) % 256) +
             "." + std::to_string(j % 256) + ".0/24";
    default:
      return prefix + pad(j, 5);
  }
}

Actor make_actor(const Plan& plan, const GeneratorConfig& cfg, std::size_t index,
                 bool campaign, SplitMix64& rng) {
  Actor a;
  a.campaign = campaign;
  a.name = campaign ? "c" + pad(index, 3) : "";
  const std::string prefix = campaign ? a.name + "-" : "";
  auto label = [&]() { return campaign && rng.bernoulli(cfg.homophily); };

  for (const PooledKind& pk : kPooledKinds) {
    const std::size_t i = index_of(pk.kind);
    const std::size_t size = campaign ? plan.campaign_pool[i] : plan.background_pool[i];
    KindPool& pool = a.pools[i];
    const bool has_parent = pk.parent != EntityKind::kOrgId;
    const std::size_t per_parent = plan.children_per_parent[i];
    if (has_parent) {
      const std::size_t parents =
          pk.kind == EntityKind::kIpAddress && campaign
              ? (size + 253) / 254
              : (size + per_parent - 1) / per_parent;
      for (std::size_t j = 0; j < parents; ++j) {
        pool.parents.push_back({parent_key(pk.parent, prefix, j, index, campaign),
                                label(), kNone});
      }
    }
    for (std::size_t c = 0; c < size; ++c) {
      PoolEntity e;
      e.parent = has_parent
                     ? (pk.kind == EntityKind::kIpAddress && campaign ? c / 254
                                                                      : c / per_parent)
                     : kNone;
      if (pk.kind == EntityKind::kIpAddress) {
        const std::string& range = pool.parents[e.parent].key;
        const std::string net = range.substr(0, range.rfind('.'));
        const std::size_t host = campaign ? c % 254 + 1 : c % per_parent + 1;
        e.key = net + "." + std::to_string(host);
      } else {
        e.key = child_key(pk.kind, prefix, c, e.parent, rng);
      }
      e.malicious = label();
      pool.items.push_back(std::move(e));
    }
  }
  const std::size_t clusters = campaign ? plan.campaign_clusters : plan.background_clusters;
  for (std::size_t c = 0; c < clusters; ++c) {
    a.clusters.push_back({prefix + "cluster-" + pad(c, 5), label(), kNone});
  }
  const std::size_t senders = campaign ? plan.campaign_senders : plan.background_senders;
  for (std::size_t s = 0; s < senders; ++s) {
    a.senders.push_back({campaign ? "notice" + pad(s, 3) + "@" + prefix + "mail.example"
                                  : "user" + pad(s, 5) + "@mail.example",
                         label(), kNone});
  }
  return a;
}

// Draws up to `count` distinct indices below n.
std::vector<std::size_t> draw_distinct(SplitMix64& rng, std::size_t n,
                                       std::uint64_t count) {
  std::vector<std::size_t> out;
  if (n == 0) return out;
  count = std::min<std::uint64_t>(count, n);
  while (out.size() < count) {
    const auto v = static_cast<std::size_t>(rng.below(n));
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  return out;
}

class Generator {
 public:
  explicit Generator(const GeneratorConfig& cfg)
      : cfg_(cfg), plan_(make_plan(cfg)), rng_(cfg.seed) {
    background_ = make_actor(plan_, cfg_, 0, false, rng_);
    for (std::size_t c = 0; c < cfg_.campaigns; ++c) {
      campaigns_.push_back(make_actor(plan_, cfg_, c, true, rng_));
    }
  }

  SimulatedRegion run() {
    SimulatedRegion out;
    const Hours t0 = *parse_rfc3339(cfg_.start_time);
    for (std::size_t b = 0; b < cfg_.num_batches; ++b) {
      TelemetryBatch batch;
      batch.batch_start = t0 + static_cast<double>(b) * cfg_.batch_hours;
      batch.batch_end = batch.batch_start + cfg_.batch_hours;
      for (std::size_t org = 0; org < cfg_.num_orgs; ++org) {
        const auto incidents = rng_.poisson(cfg_.incidents_per_org_per_batch);
        for (std::uint64_t i = 0; i < incidents; ++i) {
          emit_incident(batch, org);
        }
      }
      std::stable_sort(batch.records.begin(), batch.records.end(),
                       [](const TelemetryRecord& x, const TelemetryRecord& y) {
                         return x.timestamp < y.timestamp;
                       });
      out.batches.push_back(std::move(batch));
    }
    out.truth = std::move(truth_);
    return out;
  }

 private:
  void note(EntityKind kind, const PoolEntity& e, const Actor& actor) {
    truth_.try_emplace(EntityRef{kind, canonical_key(e.key)},
                       TruthEntry{e.malicious, actor.name});
  }

  void emit_incident(TelemetryBatch& batch, std::size_t org) {
    Actor* actor = &background_;
    if (!campaigns_.empty() && rng_.bernoulli(plan_.campaign_share)) {
      actor = &campaigns_[rng_.below(campaigns_.size())];
    }
    const std::string incident = "inc-" + pad(++incident_counter_, 7);
    const std::string org_key = "org-" + pad(org, 4);
    const Hours start = batch.batch_start + rng_.uniform() * cfg_.batch_hours;
    const auto alerts = rng_.geometric_at_least_one(cfg_.alerts_per_incident);
    for (std::uint64_t a = 0; a < alerts; ++a) {
      TelemetryRecord rec;
      rec.timestamp = std::min(start + rng_.uniform() * (batch.batch_end - start),
                               std::nextafter(batch.batch_end, batch.batch_start));
      rec.org_key = org_key;
      rec.incident_key = incident;
      rec.alert_key = "alert-" + pad(++alert_counter_, 8);
      rec.detector = "det-" + pad(rng_.below(std::max<std::size_t>(cfg_.detectors, 1)), 4);
      rec.product = "product-" + pad(rng_.below(std::max<std::size_t>(cfg_.products, 1)), 2);
      if (actor->campaign) {
        rec.alert_disrupted = rng_.bernoulli(cfg_.disrupted_fraction);
        if (rng_.bernoulli(cfg_.tp_grade_fraction)) rec.alert_grade = AlertGrade::kTruePositive;
      } else if (rng_.bernoulli(cfg_.fp_grade_fraction)) {
        rec.alert_grade = rng_.bernoulli(0.5) ? AlertGrade::kFalsePositive
                                              : AlertGrade::kBenignPositive;
      }
      add_evidence(rec, *actor);
      batch.records.push_back(std::move(rec));
    }
  }

  void add_evidence(TelemetryRecord& rec, const Actor& actor) {
    for (EntityKind kind : kAllEntityKinds) {
      const double rate = plan_.per_alert[index_of(kind)];
      if (rate <= 0.0) continue;
      switch (kind) {
        case EntityKind::kEmailId: {
          const auto n = rng_.poisson(rate);
          for (std::uint64_t i = 0; i < n; ++i) rec.evidence.push_back(make_email(actor));
          break;
        }
        case EntityKind::kCampaignId: {
          // Only campaign alerts name a campaign.
          if (!actor.campaign) break;
          const double p = std::min(1.0, rate / std::max(plan_.campaign_share, 1e-12));
          if (rng_.bernoulli(p)) {
            const PoolEntity e{actor.name, true, kNone};
            note(kind, e, actor);
            rec.evidence.push_back(Evidence{kind, e.key, {}, {}, {}});
          }
          break;
        }
        default: {
          const KindPool& pool = actor.pools[index_of(kind)];
          const auto n = rng_.poisson(rate);
          for (std::size_t idx : draw_distinct(rng_, pool.items.size(), n)) {
            const PoolEntity& e = pool.items[idx];
            note(kind, e, actor);
            Evidence ev{kind, e.key, {}, {}, {}};
            if (e.parent != kNone) {
              const PoolEntity& parent = pool.parents[e.parent];
              const EntityKind pk = kind == EntityKind::kSha1  ? EntityKind::kFileDir
                                    : kind == EntityKind::kUrl ? EntityKind::kUrlDomain
                                                               : EntityKind::kIpRange;
              note(pk, parent, actor);
              if (kind == EntityKind::kSha1) ev.file_dir = parent.key;
            }
            rec.evidence.push_back(std::move(ev));
          }
        }
      }
    }
  }

  Evidence make_email(const Actor& actor) {
    const PoolEntity email{"msg-" + pad(++email_counter_, 8),
                           actor.campaign && rng_.bernoulli(cfg_.homophily), kNone};
    note(EntityKind::kEmailId, email, actor);
    Evidence ev{EntityKind::kEmailId, email.key, {}, {}, {}};
    if (rng_.bernoulli(plan_.sender_probability) && !actor.senders.empty()) {
      const PoolEntity& s = actor.senders[rng_.below(actor.senders.size())];
      note(EntityKind::kEmailAddress, s, actor);
      ev.sender = s.key;
    }
    const auto n = rng_.poisson(plan_.clusters_per_email);
    for (std::size_t idx : draw_distinct(rng_, actor.clusters.size(), n)) {
      note(EntityKind::kEmailCluster, actor.clusters[idx], actor);
      ev.clusters.push_back(actor.clusters[idx].key);
    }
    return ev;
  }

  const GeneratorConfig& cfg_;
  Plan plan_;
  SplitMix64 rng_;
  Actor background_;
  std::vector<Actor> campaigns_;
  PlantedTruth truth_;
  std::uint64_t incident_counter_ = 0;
  std::uint64_t alert_counter_ = 0;
  std::uint64_t email_counter_ = 0;
};

json priors_json(const LabelPriors& p) {
  return json{{"unknown", p.unknown}, {"benign", p.benign}, {"malicious", p.malicious}};
}

}  // namespace

std::map<std::string, double> GeneratorConfig::default_mixture() {
  return {
      {"OrgId-IncidentId", 2.5},     {"IncidentId-AlertId", 6.6},
      {"AlertId-SHA1", 0.47},        {"AlertId-CampaignId", 0.05},
      {"AlertId-SessionId", 0.02},   {"AlertId-EmailId", 12.0},
      {"AlertId-AppId", 0.001},      {"AlertId-URL", 0.32},
      {"AlertId-IpAddress", 5.3},    {"AlertId-DeviceName", 0.31},
      {"AlertId-ResourceId", 0.0001}, {"AlertId-RegistryKey", 0.02},
      {"AlertId-RegistryVal", 0.02}, {"SHA1-FileDir", 0.25},
      {"EmailId-EmailAddress", 1.0}, {"EmailId-EmailCluster", 19.0},
      {"URL-URLDomain", 0.05},       {"IpAddress-IpRange", 0.32},
  };
}

void GeneratorConfig::validate() const {
  if (num_orgs == 0) throw ConfigError("generator: num_orgs must be positive");
  if (num_batches == 0) throw ConfigError("generator: num_batches must be positive");
  if (!(batch_hours > 0.0)) throw ConfigError("generator: batch_hours must be positive");
  if (!(incidents_per_org_per_batch > 0.0)) {
    throw ConfigError("generator: incidents_per_org_per_batch must be positive");
  }
  if (!(alerts_per_incident >= 1.0)) {
    throw ConfigError("generator: alerts_per_incident must be >= 1");
  }
  if (entities_per_alert && !(*entities_per_alert >= 0.0)) {
    throw ConfigError("generator: entities_per_alert must be >= 0");
  }
  if (!(homophily >= 0.5 && homophily <= 1.0)) {
    throw ConfigError("generator: homophily must lie in [0.5, 1]");
  }
  const double prior_sum = label_priors.unknown + label_priors.benign + label_priors.malicious;
  if (label_priors.unknown < 0.0 || label_priors.benign < 0.0 ||
      label_priors.malicious < 0.0 || std::abs(prior_sum - 1.0) > 1e-9) {
    throw ConfigError("generator: label priors must be nonnegative and sum to 1");
  }
  if (label_priors.unknown >= 1.0) {
    throw ConfigError("generator: label priors leave nothing to reveal");
  }
  for (double p : {disrupted_fraction, tp_grade_fraction, fp_grade_fraction}) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("generator: fractions must lie in [0, 1]");
  }
  if (!parse_rfc3339(start_time)) throw ConfigError("generator: bad start_time");
  const EdgePolicyTable table = EdgePolicyTable::defaults();
  double total = 0.0;
  for (const auto& [label, share] : edge_kind_mixture) {
    bool known = false;
    for (std::size_t i = 0; i < table.size(); ++i) known |= table.pair_label(i) == label;
    if (!known) throw ConfigError("generator: unknown mixture row '" + label + "'");
    if (!(share >= 0.0)) throw ConfigError("generator: negative mixture share");
    total += share;
  }
  if (!(total > 0.0)) throw ConfigError("generator: empty edge mixture");
}

GeneratorConfig GeneratorConfig::from_json(std::string_view text) {
  GeneratorConfig c;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw ConfigError("generator: expected a JSON object");
    for (const auto& [name, v] : doc.items()) {
      if (name == "seed") c.seed = v.get<std::uint64_t>();
      else if (name == "num_orgs") c.num_orgs = v.get<std::size_t>();
      else if (name == "incidents_per_org_per_batch") c.incidents_per_org_per_batch = v.get<double>();
      else if (name == "alerts_per_incident") c.alerts_per_incident = v.get<double>();
      else if (name == "entities_per_alert") {
        if (v.is_null()) c.entities_per_alert.reset();
        else c.entities_per_alert = v.get<double>();
      } else if (name == "edge_kind_mixture") {
        c.edge_kind_mixture = v.get<std::map<std::string, double>>();
      } else if (name == "label_priors") {
        c.label_priors.unknown = v.value("unknown", c.label_priors.unknown);
        c.label_priors.benign = v.value("benign", c.label_priors.benign);
        c.label_priors.malicious = v.value("malicious", c.label_priors.malicious);
      } else if (name == "homophily") c.homophily = v.get<double>();
      else if (name == "num_batches") c.num_batches = v.get<std::size_t>();
      else if (name == "batch_hours") c.batch_hours = v.get<double>();
      else if (name == "start_time") c.start_time = v.get<std::string>();
      else if (name == "disrupted_fraction") c.disrupted_fraction = v.get<double>();
      else if (name == "tp_grade_fraction") c.tp_grade_fraction = v.get<double>();
      else if (name == "fp_grade_fraction") c.fp_grade_fraction = v.get<double>();
      else if (name == "campaigns") c.campaigns = v.get<std::size_t>();
      else if (name == "detectors") c.detectors = v.get<std::size_t>();
      else if (name == "products") c.products = v.get<std::size_t>();
      else throw ConfigError("generator: unknown field '" + name + "'");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("generator: ") + e.what());
  }
  c.validate();
  return c;
}

GeneratorConfig GeneratorConfig::load(const std::filesystem::path& path) {
  return from_json(detail::read_text_file<ConfigError>(path, "generator config"));
}

std::string GeneratorConfig::to_json() const {
  json doc{
      {"seed", seed},
      {"num_orgs", num_orgs},
      {"incidents_per_org_per_batch", incidents_per_org_per_batch},
      {"alerts_per_incident", alerts_per_incident},
      {"edge_kind_mixture", edge_kind_mixture},
      {"label_priors", priors_json(label_priors)},
      {"homophily", homophily},
      {"num_batches", num_batches},
      {"batch_hours", batch_hours},
      {"start_time", start_time},
      {"disrupted_fraction", disrupted_fraction},
      {"tp_grade_fraction", tp_grade_fraction},
      {"fp_grade_fraction", fp_grade_fraction},
      {"campaigns", campaigns},
      {"detectors", detectors},
      {"products", products},
  };
  doc["entities_per_alert"] =
      entities_per_alert ? json(*entities_per_alert) : json(nullptr);
  return doc.dump(2);
}

SimulatedRegion generate(const GeneratorConfig& config) {
  GeneratorConfig cfg = config;
  cfg.validate();
  return Generator(cfg).run();
}

double default_reveal_fraction(const LabelPriors& priors) {
  return 1.0 - priors.unknown;
}

std::map<EntityRef, double> reveal_fraction(const PlantedTruth& truth,
                                            double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw ConfigError("reveal_fraction: fraction must lie in (0, 1]");
  }
  std::map<std::pair<EntityKind, bool>,
           std::vector<std::pair<std::uint64_t, const EntityRef*>>> strata;
  for (const auto& [ref, entry] : truth) {
    std::string salted(to_string(ref.kind));
    salted.push_back('\x1e');
    salted += ref.key;
    strata[{ref.kind, entry.malicious}].emplace_back(stable_hash(salted, seed), &ref);
  }
  std::map<EntityRef, double> intel;
  for (auto& [key, members] : strata) {
    std::sort(members.begin(), members.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first < b.first : a.second->key < b.second->key;
    });
    const auto take = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(members.size())));
    for (std::size_t i = 0; i < take; ++i) {
      intel.emplace(*members[i].second,
                    key.second ? kRevealedMaliciousScore : kRevealedBenignScore);
    }
  }
  return intel;
}

Manifest Manifest::load(const std::filesystem::path& path) {
  Manifest m;
  const std::string text = detail::read_text_file<ConfigError>(path, "manifest");
  try {
    const json doc = json::parse(text);
    m.batch_hours = doc.value("batch_hours", 1.0);
    const auto dir = path.parent_path();
    for (const json& b : doc.at("batches")) {
      ManifestEntry e;
      e.file = dir / b.at("file").get<std::string>();
      const auto start = parse_rfc3339(b.at("start").get<std::string>());
      const auto end = parse_rfc3339(b.at("end").get<std::string>());
      if (!start || !end) throw ConfigError("manifest: bad batch timestamps");
      e.start = *start;
      e.end = *end;
      m.batches.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("manifest: ") + e.what());
  }
  return m;
}

void write_simulation(const std::filesystem::path& dir, const SimulatedRegion& region,
                      const GeneratorConfig& config) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("simulate: cannot create " + dir.string() + ": " + ec.message());
  json manifest{{"format", "jsonl"}, {"batch_hours", config.batch_hours}};
  json batches = json::array();
  for (std::size_t b = 0; b < region.batches.size(); ++b) {
    const TelemetryBatch& batch = region.batches[b];
    const std::string name = "batch_" + pad(b, 4) + ".jsonl";
    std::string text;
    for (const TelemetryRecord& r : batch.records) {
      text += to_jsonl(r);
      text.push_back('\n');
    }
    detail::write_text_file(dir / name, text);
    batches.push_back({{"file", name},
                       {"start", format_rfc3339(batch.batch_start)},
                       {"end", format_rfc3339(batch.batch_end)},
                       {"records", batch.records.size()}});
  }
  manifest["batches"] = std::move(batches);
  detail::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
  detail::write_text_file(dir / "truth.json", truth_to_json(region.truth) + "\n");
  detail::write_text_file(dir / "generator.json", config.to_json() + "\n");
}

std::string truth_to_json(const PlantedTruth& truth) {
  json doc = json::object();
  for (const auto& [ref, entry] : truth) {
    json e{{"label", entry.malicious ? "Malicious" : "Benign"}};
    if (!entry.campaign.empty()) e["campaign"] = entry.campaign;
    doc[std::string(to_string(ref.kind))][ref.key] = std::move(e);
  }
  return doc.dump(1);
}

PlantedTruth parse_truth(std::string_view text) {
  PlantedTruth truth;
  try {
    const json doc = json::parse(text);
    if (!doc.is_object()) throw DataError("truth: expected an object of kinds");
    for (const auto& [kind_name, entries] : doc.items()) {
      const auto kind = parse_entity_kind(kind_name);
      if (!kind) throw DataError("truth: unknown kind '" + kind_name + "'");
      for (const auto& [key, v] : entries.items()) {
        TruthEntry e;
        // {"label": ...}, a bare label string, or a score.
        if (v.is_number()) {
          const double s = v.get<double>();
          if (s > 0.1 && s < 0.9) continue;  // no verdict
          e.malicious = s >= 0.9;
        } else {
          const std::string label = v.is_string() ? v.get<std::string>()
                                                  : v.at("label").get<std::string>();
          if (label == "Malicious") e.malicious = true;
          else if (label != "Benign") throw DataError("truth: bad label '" + label + "'");
          if (v.is_object()) e.campaign = v.value("campaign", "");
        }
        truth[EntityRef{*kind, canonical_key(key)}] = std::move(e);
      }
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("truth: ") + e.what());
  }
  return truth;
}

PlantedTruth load_truth(const std::filesystem::path& path) {
  return parse_truth(detail::read_text_file<DataError>(path, "truth"));
}

}  // namespace repgraph
