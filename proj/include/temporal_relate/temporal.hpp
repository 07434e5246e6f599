#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "temporal_relate/ego.hpp"

namespace trel {

enum class AggModel { Intersection, UnionUniform, UnionLinear, UnionExponential };

inline const char* to_string(AggModel m) {
  switch (m) {
    case AggModel::Intersection: return "intersection";
    case AggModel::UnionUniform: return "union-uniform";
    case AggModel::UnionLinear: return "union-linear";
    case AggModel::UnionExponential: return "union-exp";
  }
  return "?";
}

// Ordered series of ego networks around one seed, ordinal-ascending.
struct EgoSeries {
  EntityId seed = 0;
  std::vector<EgoNetwork> snapshots;
};

// Weighted union/intersection of an ego series. `nodes`/`out_adj`/`in_adj`
// describe the unweighted structure of surviving edges; `out_weights` is
// parallel to `out_adj`.
struct AggregateGraph {
  EntityId seed = 0;
  AggModel model = AggModel::UnionUniform;
  std::size_t n = 0;  // number of snapshots aggregated
  double decay_r = 0.1;
  std::vector<EntityId> nodes;  // sorted
  std::vector<std::vector<EntityId>> out_adj;
  std::vector<std::vector<double>> out_weights;
  std::vector<std::vector<EntityId>> in_adj;

  std::size_t local_index(EntityId v) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it == nodes.end() || *it != v)
      throw std::out_of_range("AggregateGraph: node not in graph");
    return static_cast<std::size_t>(it - nodes.begin());
  }

  bool contains(EntityId v) const {
    return std::binary_search(nodes.begin(), nodes.end(), v);
  }
};

// Decay weight of a snapshot `dt` ordinal steps behind the newest one.
// The newest snapshot (dt = 0) always has factor 1.
inline double temporal_factor(AggModel model, int dt, double r = 0.1) {
  if (dt < 0) throw std::invalid_argument("temporal_factor: dt must be >= 0");
  switch (model) {
    case AggModel::Intersection:
    case AggModel::UnionUniform:
      return 1.0;
    case AggModel::UnionLinear:
      if (r <= 0.0 || r > 1.0)
        throw std::invalid_argument("temporal_factor: linear decay r must be in (0,1]");
      return std::max(0.0, 1.0 - r * dt);
    case AggModel::UnionExponential:
      return std::exp(-static_cast<double>(dt));
  }
  throw std::invalid_argument("temporal_factor: bad model");
}

inline AggregateGraph aggregate(const EgoSeries& series, AggModel model, double r = 0.1) {
  if (series.snapshots.empty())
    throw std::invalid_argument("aggregate: empty series");
  AggregateGraph agg;
  agg.seed = series.seed;
  agg.model = model;
  agg.n = series.snapshots.size();
  agg.decay_r = r;
  const int n = static_cast<int>(agg.n);

  // (edge -> accumulated weight, presence count); std::map keeps output
  // deterministic
  std::map<std::pair<EntityId, EntityId>, std::pair<double, int>> acc;
  for (int t = 1; t <= n; ++t) {
    const EgoNetwork& ego = series.snapshots[static_cast<std::size_t>(t - 1)];
    const double alpha = temporal_factor(model, n - t, r);
    for (std::size_t li = 0; li < ego.nodes.size(); ++li)
      for (EntityId tgt : ego.out_adj[li]) {
        auto& slot = acc[{ego.nodes[li], tgt}];
        slot.first += alpha;
        slot.second += 1;
      }
  }

  std::vector<EntityId> node_set{agg.seed};
  std::vector<std::pair<std::pair<EntityId, EntityId>, double>> surviving;
  for (auto& [edge, sw] : acc) {
    double w;
    if (model == AggModel::Intersection) {
      if (sw.second != n) continue;
      w = 1.0;
    } else {
      w = sw.first;
      if (w <= 0.0) continue;  // fully decayed linear edge
    }
    surviving.push_back({edge, w});
    node_set.push_back(edge.first);
    node_set.push_back(edge.second);
  }
  std::sort(node_set.begin(), node_set.end());
  node_set.erase(std::unique(node_set.begin(), node_set.end()), node_set.end());
  agg.nodes = std::move(node_set);
  agg.out_adj.resize(agg.nodes.size());
  agg.out_weights.resize(agg.nodes.size());
  agg.in_adj.resize(agg.nodes.size());
  for (auto& [edge, w] : surviving) {
    auto li = agg.local_index(edge.first);
    agg.out_adj[li].push_back(edge.second);
    agg.out_weights[li].push_back(w);
    agg.in_adj[agg.local_index(edge.second)].push_back(edge.first);
  }
  for (auto& row : agg.in_adj) std::sort(row.begin(), row.end());
  return agg;
}

// Stored weight of edge (i, j), or 0 if absent.
inline double edge_temporal_weight(const AggregateGraph& agg, EntityId i, EntityId j) {
  if (!agg.contains(i)) return 0.0;
  auto li = agg.local_index(i);
  const auto& row = agg.out_adj[li];
  auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return 0.0;
  return agg.out_weights[li][static_cast<std::size_t>(it - row.begin())];
}

}  // namespace trel
