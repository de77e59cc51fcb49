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

#include "repgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <unordered_set>

#include "repgraph/error.hpp"

namespace repgraph {
namespace {

std::string describe(NodeId id) {
  return "node #" + std::to_string(static_cast<std::uint64_t>(id));
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::size_t largest() const {
    std::size_t best = 0;
    for (std::size_t i = 0; i < parent_.size(); ++i) {
      if (parent_[i] == i) best = std::max(best, size_[i]);
    }
    return best;
  }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

}  // namespace

std::unordered_map<NodeId, std::uint32_t> SparseExport::positions() const {
  std::unordered_map<NodeId, std::uint32_t> pos;
  pos.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    pos.emplace(order[i], static_cast<std::uint32_t>(i));
  }
  return pos;
}

ThreatGraph::ThreatGraph(EdgePolicyTable policies, Hours clock_slack)
    : policies_(std::move(policies)), slack_(clock_slack) {
  if (!(clock_slack >= 0.0)) {
    throw ConfigError("graph: clock slack must be >= 0");
  }
}

void ThreatGraph::observe_time(Hours now) {
  if (!std::isfinite(now)) {
    throw DataError("graph: non-finite timestamp");
  }
  if (now < clock_ - slack_) {
    throw DataError("graph: timestamp " + std::to_string(now) +
                    "h moves backwards past the clock (" +
                    std::to_string(clock_) + "h)");
  }
  clock_ = std::max(clock_, now);
}

ThreatGraph::NodeEntry& ThreatGraph::entry(NodeId id) {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw DataError("graph: unknown " + describe(id));
  return it->second;
}

const ThreatGraph::NodeEntry& ThreatGraph::entry(NodeId id) const {
  auto it = nodes_.find(id);
  if (it == nodes_.end()) throw DataError("graph: unknown " + describe(id));
  return it->second;
}

UpsertResult ThreatGraph::upsert_node(EntityKind kind, std::string_view key,
                                      Hours now) {
  std::string canon = canonical_key(key);
  if (canon.empty()) {
    throw DataError("graph: empty key for " + std::string(to_string(kind)));
  }
  observe_time(now);
  auto& index = index_[index_of(kind)];
  if (auto it = index.find(canon); it != index.end()) {
    NodeRecord& rec = entry(it->second).record;
    rec.last_seen = std::max(rec.last_seen, now);
    return {it->second, false};
  }
  const NodeId id{next_id_++};
  NodeEntry e;
  e.record.id = id;
  e.record.layer = layer_of(kind);
  e.record.kind = kind;
  e.record.key = canon;
  e.record.created_at = now;
  e.record.last_seen = now;
  index.emplace(std::move(canon), id);
  nodes_.emplace(id, std::move(e));
  return {id, true};
}

AddEdgeResult ThreatGraph::add_edge(NodeId a, NodeId b, Hours now) {
  if (a == b) throw DataError("graph: self-loop on " + describe(a));
  NodeEntry& ea = entry(a);
  NodeEntry& eb = entry(b);
  const auto policy = policies_.find(ea.record.kind, eb.record.kind);
  if (!policy) {
    throw PolicyError("graph: no edge policy for " +
                      std::string(to_string(ea.record.kind)) + "-" +
                      std::string(to_string(eb.record.kind)));
  }
  observe_time(now);
  const EdgeKey key = EdgeKey::of(a, b);
  if (auto it = edges_.find(key); it != edges_.end()) {
    it->second.created_at = std::max(it->second.created_at, now);
    return {key, false};
  }
  const EdgePolicy& p = policies_.at(*policy);
  const bool forward = p.source == ea.record.kind;
  edges_.emplace(key, EdgeRecord{forward ? a : b, forward ? b : a, *policy, now});
  ea.neighbors.push_back(b);
  eb.neighbors.push_back(a);
  return {key, true};
}

void ThreatGraph::set_reputation(NodeId id, double score) {
  if (!(score >= 0.0 && score <= 1.0)) {
    throw DataError("graph: reputation outside [0, 1] for " + describe(id));
  }
  entry(id).record.reputation = score;
}

double ThreatGraph::edge_weight_at(const EdgeRecord& edge,
                                   Hours now) const noexcept {
  return weight_at(policies_.at(edge.policy).decay, now - edge.created_at);
}

void ThreatGraph::erase_edges(const std::vector<EdgeKey>& doomed) {
  std::unordered_map<NodeId, std::vector<NodeId>> drop;
  for (const EdgeKey& k : doomed) {
    if (edges_.erase(k) == 0) continue;
    drop[k.lo].push_back(k.hi);
    drop[k.hi].push_back(k.lo);
  }
  for (auto& [id, gone] : drop) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) continue;
    std::sort(gone.begin(), gone.end());
    auto& nb = it->second.neighbors;
    nb.erase(std::remove_if(nb.begin(), nb.end(),
                            [&](NodeId n) {
                              return std::binary_search(gone.begin(),
                                                        gone.end(), n);
                            }),
             nb.end());
  }
}

PruneReport ThreatGraph::prune(Hours now, double threshold) {
  observe_time(now);
  PruneReport report;

  std::vector<EdgeKey> doomed;
  for (const auto& [key, e] : edges_) {
    if (edge_weight_at(e, now) < threshold) doomed.push_back(key);
  }
  report.edges_decayed = doomed.size();
  erase_edges(doomed);

  std::vector<NodeId> expired;
  for (const auto& [id, e] : nodes_) {
    if (now - e.record.last_seen > policies_.node_lifespan(e.record.kind)) {
      expired.push_back(id);
    }
  }
  doomed.clear();
  for (NodeId id : expired) {
    for (NodeId nb : nodes_.at(id).neighbors) {
      doomed.push_back(EdgeKey::of(id, nb));
    }
  }
  // An edge between two expired nodes shows up twice.
  std::sort(doomed.begin(), doomed.end(), [](const EdgeKey& x, const EdgeKey& y) {
    return x.lo != y.lo ? x.lo < y.lo : x.hi < y.hi;
  });
  doomed.erase(std::unique(doomed.begin(), doomed.end()), doomed.end());
  report.edges_expired = doomed.size();
  erase_edges(doomed);
  for (NodeId id : expired) {
    const NodeRecord& rec = nodes_.at(id).record;
    index_[index_of(rec.kind)].erase(rec.key);
    nodes_.erase(id);
  }
  report.nodes_expired = expired.size();

  std::vector<NodeId> isolated;
  for (const auto& [id, e] : nodes_) {
    if (e.neighbors.empty()) isolated.push_back(id);
  }
  for (NodeId id : isolated) {
    const NodeRecord& rec = nodes_.at(id).record;
    index_[index_of(rec.kind)].erase(rec.key);
    nodes_.erase(id);
  }
  report.nodes_isolated = isolated.size();

  last_update_ = std::max(last_update_, now);
  return report;
}

std::size_t ThreatGraph::largest_connected_component() const {
  if (nodes_.empty()) return 0;
  std::unordered_map<NodeId, std::size_t> dense;
  dense.reserve(nodes_.size());
  for (const auto& [id, e] : nodes_) dense.emplace(id, dense.size());
  UnionFind uf(dense.size());
  for (const auto& [key, e] : edges_) uf.unite(dense.at(key.lo), dense.at(key.hi));
  return uf.largest();
}

std::vector<NodeId> ThreatGraph::sorted_nodes() const {
  std::vector<const NodeRecord*> recs;
  recs.reserve(nodes_.size());
  for (const auto& [id, e] : nodes_) recs.push_back(&e.record);
  std::sort(recs.begin(), recs.end(),
            [](const NodeRecord* a, const NodeRecord* b) {
              if (a->kind != b->kind) return a->kind < b->kind;
              return a->key < b->key;
            });
  std::vector<NodeId> out;
  out.reserve(recs.size());
  for (const NodeRecord* r : recs) out.push_back(r->id);
  return out;
}

SparseExport ThreatGraph::to_sparse(Hours now) const {
  SparseExport out;
  out.order = sorted_nodes();
  const auto pos = out.positions();
  std::vector<Triplet> triplets;
  triplets.reserve(edges_.size());
  for (const auto& [key, e] : edges_) {
    const double w = edge_weight_at(e, now);
    if (w <= 0.0) continue;
    triplets.push_back(Triplet{pos.at(key.lo), pos.at(key.hi), w});
  }
  out.adjacency = CsrMatrix::symmetric_from_edges(out.order.size(), triplets);
  return out;
}

GraphStats ThreatGraph::stats() const {
  GraphStats s;
  s.num_nodes = nodes_.size();
  s.num_edges = edges_.size();
  std::size_t unknown = 0, benign = 0, malicious = 0;
  for (const auto& [id, e] : nodes_) {
    switch (e.record.layer) {
      case NodeLayer::kOrganization:
        ++s.num_orgs;
        break;
      case NodeLayer::kIncident:
        ++s.num_incidents;
        break;
      case NodeLayer::kAlert:
        ++s.num_alerts;
        break;
      case NodeLayer::kEntity:
      case NodeLayer::kParentEntity:
        ++s.num_entities;
        switch (classify(e.record.reputation)) {
          case Verdict::kUnknown:
            ++unknown;
            break;
          case Verdict::kBenign:
            ++benign;
            break;
          case Verdict::kMalicious:
            ++malicious;
            break;
        }
        break;
    }
  }
  if (s.num_entities > 0) {
    const auto n = static_cast<double>(s.num_entities);
    s.label_fractions = {static_cast<double>(unknown) / n,
                         static_cast<double>(benign) / n,
                         static_cast<double>(malicious) / n};
  } else if (s.num_nodes > 0) {
    s.label_fractions = {1.0, 0.0, 0.0};
  }

  if (!edges_.empty()) {
    std::vector<std::size_t> counts(policies_.size(), 0);
    for (const auto& [key, e] : edges_) ++counts[e.policy];
    for (std::size_t i = 0; i < counts.size(); ++i) {
      if (counts[i] == 0) continue;
      s.edge_distribution[policies_.pair_label(i)] =
          static_cast<double>(counts[i]) / static_cast<double>(edges_.size());
    }
  }
  s.lcc_size = largest_connected_component();
  return s;
}

std::optional<NodeId> ThreatGraph::find(EntityKind kind,
                                        std::string_view key) const {
  const auto& index = index_[index_of(kind)];
  auto it = index.find(canonical_key(key));
  if (it == index.end()) return std::nullopt;
  return it->second;
}

const NodeRecord& ThreatGraph::node(NodeId id) const {
  return entry(id).record;
}

std::span<const NodeId> ThreatGraph::neighbors(NodeId id) const {
  return entry(id).neighbors;
}

const EdgeRecord* ThreatGraph::edge(NodeId a, NodeId b) const {
  auto it = edges_.find(EdgeKey::of(a, b));
  return it == edges_.end() ? nullptr : &it->second;
}

}  // namespace repgraph
