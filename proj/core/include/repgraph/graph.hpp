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

#ifndef REPGRAPH_GRAPH_HPP_
#define REPGRAPH_GRAPH_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "repgraph/decay.hpp"
#include "repgraph/kinds.hpp"
#include "repgraph/sparse.hpp"
#include "repgraph/verdict.hpp"

namespace repgraph {

enum class NodeId : std::uint64_t {};

struct NodeRecord {
  NodeId id{};
  NodeLayer layer{};
  EntityKind kind{};
  std::string key;
  Hours created_at = 0.0;
  Hours last_seen = 0.0;
  double reputation = kUnknownScore;
};

// Unordered endpoint pair, stored with lo < hi.
struct EdgeKey {
  NodeId lo{};
  NodeId hi{};

  static EdgeKey of(NodeId a, NodeId b) noexcept {
    return a < b ? EdgeKey{a, b} : EdgeKey{b, a};
  }
  bool operator==(const EdgeKey&) const = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    const auto a = static_cast<std::uint64_t>(k.lo);
    const auto b = static_cast<std::uint64_t>(k.hi);
    std::uint64_t h = a * 0x9E3779B97F4A7C15ULL ^ (b + 0x632BE59BD9B4E019ULL);
    h ^= h >> 31;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

struct EdgeRecord {
  NodeId src{};
  NodeId dst{};
  std::size_t policy = 0;  // row in the graph's EdgePolicyTable
  Hours created_at = 0.0;
};

struct UpsertResult {
  NodeId id{};
  bool created = false;
};

struct AddEdgeResult {
  EdgeKey key;
  bool created = false;
};

struct PruneReport {
  std::size_t edges_decayed = 0;   // weight fell below the threshold
  std::size_t nodes_expired = 0;   // exceeded their lifespan
  std::size_t edges_expired = 0;   // removed along with an expired node
  std::size_t nodes_isolated = 0;  // left with no edges

  std::size_t edges_removed() const { return edges_decayed + edges_expired; }
  std::size_t nodes_removed() const { return nodes_expired + nodes_isolated; }
  bool operator==(const PruneReport&) const = default;
};

struct LabelFractions {
  double unknown = 0.0;
  double benign = 0.0;
  double malicious = 0.0;
};

struct GraphStats {
  std::size_t num_nodes = 0;
  std::size_t num_edges = 0;
  std::size_t num_orgs = 0;
  std::size_t num_incidents = 0;
  std::size_t num_alerts = 0;
  std::size_t num_entities = 0;  // layers 4 and 5
  std::size_t lcc_size = 0;
  std::map<std::string, double> edge_distribution;  // pair label -> fraction
  LabelFractions label_fractions;  // over entity nodes
};

struct SparseExport {
  CsrMatrix adjacency;
  std::vector<NodeId> order;  // row i <-> order[i]

  std::unordered_map<NodeId, std::uint32_t> positions() const;
};

// The dynamic, undirected, weighted five-layer graph.
//
// Single writer: mutation (upsert/add/prune/set) must not overlap with any
// other call. Const members may run concurrently with each other.
class ThreatGraph {
 public:
  // `clock_slack` bounds how far a timestamp may trail the latest one seen
  // before it is rejected.
  explicit ThreatGraph(EdgePolicyTable policies = EdgePolicyTable::defaults(),
                       Hours clock_slack = 1.0);

  // Creates (kind, key) with reputation 0.5, or refreshes last_seen of the
  // existing node. Keys are canonicalized first. Throws DataError for an
  // empty key or a clock regression beyond the slack.
  UpsertResult upsert_node(EntityKind kind, std::string_view key, Hours now);

  // Creates the edge with the policy of its kind pair, or resets the
  // creation time of an existing one. Throws DataError for unknown nodes and
  // self-loops, PolicyError for kind pairs without a policy row.
  AddEdgeResult add_edge(NodeId a, NodeId b, Hours now);

  void set_reputation(NodeId id, double score);

  // Removes, in order: edges lighter than `threshold`, nodes older than
  // their lifespan (with their edges), then nodes left without edges.
  PruneReport prune(Hours now, double threshold = kPruneThreshold);

  double edge_weight_at(const EdgeRecord& edge, Hours now) const noexcept;

  std::size_t largest_connected_component() const;

  // Symmetric weighted adjacency with rows ordered by (kind, key). Edges
  // whose weight at `now` is 0 are omitted.
  SparseExport to_sparse(Hours now) const;

  GraphStats stats() const;

  std::optional<NodeId> find(EntityKind kind, std::string_view key) const;
  bool contains(NodeId id) const { return nodes_.contains(id); }
  const NodeRecord& node(NodeId id) const;
  std::span<const NodeId> neighbors(NodeId id) const;
  const EdgeRecord* edge(NodeId a, NodeId b) const;

  // All live nodes sorted by (kind, key).
  std::vector<NodeId> sorted_nodes() const;

  template <typename Fn>
  void for_each_node(Fn&& fn) const {
    for (const auto& [id, entry] : nodes_) fn(entry.record);
  }
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (const auto& [key, e] : edges_) fn(e);
  }

  std::size_t num_nodes() const noexcept { return nodes_.size(); }
  std::size_t num_edges() const noexcept { return edges_.size(); }

  // Latest timestamp observed by any mutation.
  Hours clock() const noexcept { return clock_; }
  // Time of the most recent prune; batches may not end before it.
  Hours last_update() const noexcept { return last_update_; }

  const EdgePolicyTable& policies() const noexcept { return policies_; }
  Hours clock_slack() const noexcept { return slack_; }

 private:
  struct NodeEntry {
    NodeRecord record;
    std::vector<NodeId> neighbors;
  };

  void observe_time(Hours now);
  NodeEntry& entry(NodeId id);
  const NodeEntry& entry(NodeId id) const;
  void erase_edges(const std::vector<EdgeKey>& doomed);

  EdgePolicyTable policies_;
  Hours slack_;
  Hours clock_ = -std::numeric_limits<double>::infinity();
  Hours last_update_ = -std::numeric_limits<double>::infinity();
  std::uint64_t next_id_ = 0;
  std::unordered_map<NodeId, NodeEntry> nodes_;
  std::array<std::unordered_map<std::string, NodeId>, kNumEntityKinds> index_;
  std::unordered_map<EdgeKey, EdgeRecord, EdgeKeyHash> edges_;
};

}  // namespace repgraph

#endif  // REPGRAPH_GRAPH_HPP_
