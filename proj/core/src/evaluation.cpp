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

#include "repgraph/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "repgraph/error.hpp"
#include "repgraph/rng.hpp"

namespace repgraph {
namespace {

constexpr std::size_t kRoles = 3;

// Largest-remainder rounding of `total * fractions` to integers summing to
// `total`. Ties go to the earlier role.
std::array<std::size_t, kRoles> apportion(std::size_t total,
                                          const std::array<double, kRoles>& f) {
  std::array<std::size_t, kRoles> out{};
  std::array<double, kRoles> rem{};
  std::size_t assigned = 0;
  for (std::size_t r = 0; r < kRoles; ++r) {
    const double exact = f[r] * static_cast<double>(total);
    out[r] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    rem[r] = exact - static_cast<double>(out[r]);
    assigned += out[r];
  }
  while (assigned < total) {
    std::size_t best = 0;
    for (std::size_t r = 1; r < kRoles; ++r) {
      if (rem[r] > rem[best]) best = r;
    }
    ++out[best];
    rem[best] = -1.0;
    ++assigned;
  }
  return out;
}

Confusion confusion_at(std::span<const double> scores,
                       std::span<const std::uint8_t> labels, double threshold) {
  Confusion c;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool predicted = scores[i] >= threshold;
    if (labels[i]) {
      ++(predicted ? c.tp : c.fn);
    } else {
      ++(predicted ? c.fp : c.tn);
    }
  }
  return c;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

double f1_of(double p, double r) { return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0; }

}  // namespace

std::string_view to_string(SplitRole role) noexcept {
  switch (role) {
    case SplitRole::kTrain:
      return "train";
    case SplitRole::kValidation:
      return "validation";
    case SplitRole::kTest:
      return "test";
  }
  return "train";
}

void SplitFractions::validate() const {
  const double sum = train + validation + test;
  if (!(train >= 0.0 && validation >= 0.0 && test >= 0.0) ||
      std::abs(sum - 1.0) > 1e-9) {
    throw ConfigError("split: fractions must be nonnegative and sum to 1");
  }
}

std::array<std::size_t, 3> SplitAssignment::counts() const {
  std::array<std::size_t, 3> c{};
  for (const auto& [ref, role] : roles) ++c[static_cast<std::size_t>(role)];
  return c;
}

std::optional<SplitRole> SplitAssignment::role_of(const EntityRef& ref) const {
  auto it = roles.find(ref);
  if (it == roles.end()) return std::nullopt;
  return it->second;
}

SplitAssignment split(std::span<const LabeledEntity> truth, std::uint64_t seed,
                      const SplitFractions& fractions) {
  fractions.validate();
  if (truth.size() < kMinSplitSize) {
    throw DataError("split: need at least " + std::to_string(kMinSplitSize) +
                    " ground-truth entities, got " + std::to_string(truth.size()));
  }
  const std::array<double, kRoles> f = {fractions.train, fractions.validation,
                                        fractions.test};

  // Stratum -> members, ordered by seeded hash (key breaks hash ties).
  struct Member {
    std::uint64_t hash;
    const EntityRef* ref;
  };
  std::map<std::pair<EntityKind, bool>, std::vector<Member>> strata;
  for (const LabeledEntity& e : truth) {
    std::string salted(to_string(e.ref.kind));
    salted.push_back('\x1f');
    salted += e.ref.key;
    strata[{e.ref.kind, e.malicious}].push_back({stable_hash(salted, seed), &e.ref});
  }

  struct Quota {
    std::array<std::size_t, kRoles> count{};
    std::array<double, kRoles> frac{};
    std::size_t extra = 0;
  };
  std::vector<Quota> quotas;
  std::array<std::size_t, kRoles> floors{};
  for (auto& [key, members] : strata) {
    Quota q;
    std::size_t used = 0;
    for (std::size_t r = 0; r < kRoles; ++r) {
      const double exact = f[r] * static_cast<double>(members.size());
      q.count[r] = static_cast<std::size_t>(std::floor(exact + 1e-9));
      q.frac[r] = std::max(0.0, exact - static_cast<double>(q.count[r]));
      used += q.count[r];
      floors[r] += q.count[r];
    }
    q.extra = members.size() - used;
    quotas.push_back(q);
  }

  // Hand out the leftover units: each stratum gives at most one extra per
  // role, and the role with the most outstanding demand is served first.
  const auto target = apportion(truth.size(), f);
  std::array<std::ptrdiff_t, kRoles> need{};
  for (std::size_t r = 0; r < kRoles; ++r) {
    need[r] = static_cast<std::ptrdiff_t>(target[r]) -
              static_cast<std::ptrdiff_t>(floors[r]);
  }
  std::vector<std::size_t> order(quotas.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return quotas[a].extra > quotas[b].extra;
  });
  for (std::size_t s : order) {
    Quota& q = quotas[s];
    std::array<std::size_t, kRoles> roles = {0, 1, 2};
    std::stable_sort(roles.begin(), roles.end(), [&](std::size_t a, std::size_t b) {
      if (need[a] != need[b]) return need[a] > need[b];
      return q.frac[a] > q.frac[b];
    });
    for (std::size_t k = 0; k < q.extra; ++k) {
      ++q.count[roles[k]];
      --need[roles[k]];
    }
  }

  SplitAssignment out;
  out.seed = seed;
  std::size_t s = 0;
  for (auto& [key, members] : strata) {
    std::sort(members.begin(), members.end(), [](const Member& a, const Member& b) {
      return a.hash != b.hash ? a.hash < b.hash : a.ref->key < b.ref->key;
    });
    const Quota& q = quotas[s++];
    std::size_t i = 0;
    for (std::size_t r = 0; r < kRoles; ++r) {
      for (std::size_t k = 0; k < q.count[r]; ++k, ++i) {
        if (!out.roles.emplace(*members[i].ref, static_cast<SplitRole>(r)).second) {
          throw DataError("split: duplicate entity " +
                          std::string(to_string(members[i].ref->kind)) + "/" +
                          members[i].ref->key);
        }
      }
    }
  }
  return out;
}

double MetricsReport::require_pr_auc() const {
  if (!pr_auc) {
    throw NumericError("metrics: PR-AUC undefined for a single-class test set");
  }
  return *pr_auc;
}

double average_precision(std::span<const double> scores,
                         std::span<const std::uint8_t> labels) {
  if (scores.size() != labels.size()) {
    throw DataError("metrics: scores and labels differ in length");
  }
  const auto positives =
      static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (positives == 0) throw NumericError("metrics: no positive labels");

  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  double ap = 0.0;
  std::size_t tp = 0;
  std::size_t seen = 0;
  std::size_t prev_tp = 0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    for (; i < idx.size() && scores[idx[i]] == s; ++i) {
      tp += labels[idx[i]];
      ++seen;
    }
    if (tp != prev_tp) {
      ap += ratio(tp - prev_tp, positives) * ratio(tp, seen);
      prev_tp = tp;
    }
  }
  return ap;
}

MetricsReport compute_metrics(std::span<const double> scores,
                              std::span<const std::uint8_t> labels,
                              double threshold) {
  if (scores.size() != labels.size()) {
    throw DataError("metrics: scores and labels differ in length");
  }
  if (scores.empty()) throw NumericError("metrics: empty evaluation set");
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (labels[i] > 1) throw DataError("metrics: labels must be 0 or 1");
    if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
      throw DataError("metrics: score outside [0, 1]");
    }
  }

  MetricsReport m;
  m.support = scores.size();
  m.positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  m.threshold = threshold;
  m.at_threshold = confusion_at(scores, labels, threshold);
  const Confusion& c = m.at_threshold;
  const double p_mal = ratio(c.tp, c.tp + c.fp);
  const double r_mal = ratio(c.tp, c.tp + c.fn);
  const double p_ben = ratio(c.tn, c.tn + c.fn);
  const double r_ben = ratio(c.tn, c.tn + c.fp);
  m.class_f1 = {f1_of(p_ben, r_ben), f1_of(p_mal, r_mal)};
  m.precision = (p_ben + p_mal) / 2.0;
  m.recall = (r_ben + r_mal) / 2.0;
  m.f1 = (m.class_f1[0] + m.class_f1[1]) / 2.0;
  m.malicious_recall = r_mal;

  if (m.positives > 0 && m.positives < m.support) {
    std::vector<double> pooled_scores;
    std::vector<std::uint8_t> pooled_labels;
    pooled_scores.reserve(2 * scores.size());
    pooled_labels.reserve(2 * scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
      pooled_scores.push_back(scores[i]);
      pooled_labels.push_back(labels[i]);
      pooled_scores.push_back(1.0 - scores[i]);
      pooled_labels.push_back(static_cast<std::uint8_t>(1 - labels[i]));
    }
    m.pr_auc = average_precision(pooled_scores, pooled_labels);
    m.malicious_ap = average_precision(scores, labels);
  }

  // Best-F1 operating point: each distinct score is a candidate threshold.
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  m.best_threshold = std::nextafter(1.0, 2.0);
  m.at_best = confusion_at(scores, labels, m.best_threshold);
  std::size_t tp = 0;
  std::size_t seen = 0;
  for (std::size_t i = 0; i < idx.size();) {
    const double s = scores[idx[i]];
    for (; i < idx.size() && scores[idx[i]] == s; ++i) {
      tp += labels[idx[i]];
      ++seen;
    }
    const double f1 = f1_of(ratio(tp, seen), ratio(tp, m.positives));
    if (f1 > m.best_f1) {
      m.best_f1 = f1;
      m.best_threshold = s;
      m.at_best = Confusion{tp, seen - tp, scores.size() - seen - (m.positives - tp),
                            m.positives - tp};
    }
  }
  return m;
}

KindBreakdown per_kind_breakdown(std::span<const double> scores,
                                 std::span<const std::uint8_t> labels,
                                 std::span<const EntityKind> kinds,
                                 std::size_t min_support, double threshold) {
  if (scores.size() != labels.size() || scores.size() != kinds.size()) {
    throw DataError("metrics: scores, labels and kinds differ in length");
  }
  std::map<EntityKind, std::pair<std::vector<double>, std::vector<std::uint8_t>>> groups;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    auto& g = groups[kinds[i]];
    g.first.push_back(scores[i]);
    g.second.push_back(labels[i]);
  }
  KindBreakdown out;
  for (const auto& [kind, g] : groups) {
    if (g.first.size() < min_support) {
      out.skipped.emplace_back(kind, g.first.size());
      continue;
    }
    out.reports.emplace(kind, compute_metrics(g.first, g.second, threshold));
  }
  return out;
}

std::vector<std::size_t> histogram(std::span<const double> scores,
                                   std::size_t bins) {
  if (bins == 0) throw ConfigError("histogram: need at least one bin");
  std::vector<std::size_t> counts(bins, 0);
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) throw DataError("histogram: score outside [0, 1]");
    auto b = static_cast<std::size_t>(s * static_cast<double>(bins));
    ++counts[std::min(b, bins - 1)];
  }
  return counts;
}

}  // namespace repgraph
