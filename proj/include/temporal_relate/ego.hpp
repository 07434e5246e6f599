#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "temporal_relate/entity_table.hpp"
#include "temporal_relate/snapshot.hpp"

namespace trel {

enum class LinkMode { In, Out, InOut };

inline const char* to_string(LinkMode m) {
  switch (m) {
    case LinkMode::In: return "in";
    case LinkMode::Out: return "out";
    case LinkMode::InOut: return "inout";
  }
  return "?";
}

// 2-hop ego network around a seed: nodes within `hops` of the seed over
// undirected incidence, with all induced directed edges. Adjacency rows are
// parallel to `nodes` (which is sorted) and hold global EntityIds.
struct EgoNetwork {
  EntityId seed = 0;
  std::string snapshot_label;
  bool redirected = false;
  std::vector<EntityId> nodes;               // sorted
  std::vector<std::vector<EntityId>> out_adj;  // per local index, sorted
  std::vector<std::vector<EntityId>> in_adj;

  std::size_t local_index(EntityId v) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it == nodes.end() || *it != v)
      throw std::out_of_range("EgoNetwork: node not in network");
    return static_cast<std::size_t>(it - nodes.begin());
  }

  bool contains(EntityId v) const {
    return std::binary_search(nodes.begin(), nodes.end(), v);
  }

  std::uint64_t edge_count() const {
    std::uint64_t n = 0;
    for (const auto& row : out_adj) n += row.size();
    return n;
  }
};

inline EgoNetwork extract_ego(const SnapshotGraph& g, EntityId seed, int hops = 2) {
  if (hops < 0) throw std::invalid_argument("extract_ego: hops must be >= 0");
  EgoNetwork ego;
  ego.seed = seed;
  ego.snapshot_label = g.label;
  ego.redirected = g.redirected;

  // BFS over undirected incidence
  std::vector<EntityId> frontier{seed};
  std::vector<EntityId> members{seed};
  for (int h = 0; h < hops && !frontier.empty(); ++h) {
    std::vector<EntityId> next;
    for (EntityId v : frontier) {
      for (EntityId u : g.out(v)) next.push_back(u);
      for (EntityId u : g.in(v)) next.push_back(u);
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    std::vector<EntityId> fresh;
    std::sort(members.begin(), members.end());
    std::set_difference(next.begin(), next.end(), members.begin(), members.end(),
                        std::back_inserter(fresh));
    members.insert(members.end(), fresh.begin(), fresh.end());
    frontier = std::move(fresh);
  }
  std::sort(members.begin(), members.end());
  ego.nodes = std::move(members);

  // induced edges
  ego.out_adj.resize(ego.nodes.size());
  ego.in_adj.resize(ego.nodes.size());
  for (std::size_t li = 0; li < ego.nodes.size(); ++li) {
    EntityId v = ego.nodes[li];
    for (EntityId u : g.out(v)) {
      if (ego.contains(u)) {
        ego.out_adj[li].push_back(u);
        ego.in_adj[ego.local_index(u)].push_back(v);
      }
    }
  }
  for (auto& row : ego.in_adj) std::sort(row.begin(), row.end());
  return ego;
}

// Direct neighbors of the seed under the given link direction, seed excluded.
inline std::vector<EntityId> direct_neighbors(const EgoNetwork& ego, LinkMode mode) {
  auto li = ego.local_index(ego.seed);
  std::vector<EntityId> out;
  switch (mode) {
    case LinkMode::In:
      out = ego.in_adj[li];
      break;
    case LinkMode::Out:
      out = ego.out_adj[li];
      break;
    case LinkMode::InOut:
      std::set_union(ego.in_adj[li].begin(), ego.in_adj[li].end(),
                     ego.out_adj[li].begin(), ego.out_adj[li].end(),
                     std::back_inserter(out));
      break;
  }
  out.erase(std::remove(out.begin(), out.end(), ego.seed), out.end());
  return out;
}

}  // namespace trel
