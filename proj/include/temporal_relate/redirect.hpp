#pragma once

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <utility>
#include <vector>

#include "temporal_relate/entity_table.hpp"
#include "temporal_relate/snapshot.hpp"

namespace trel {

// Fully resolved redirect mapping. Entities not present map to themselves.
struct RedirectTable {
  std::unordered_map<EntityId, EntityId> mapping;
  std::uint64_t duplicate_sources = 0;

  EntityId resolve(EntityId id) const {
    auto it = mapping.find(id);
    return it == mapping.end() ? id : it->second;
  }

  bool empty() const { return mapping.empty(); }
};

// Follows redirect chains to their final targets. Duplicate sources keep the
// last-read target. Cycles map every member to the smallest EntityId in the
// cycle, so the result is deterministic and input-order independent.
inline RedirectTable resolve_redirects(
    const std::vector<std::pair<EntityId, EntityId>>& raw) {
  RedirectTable tbl;
  std::unordered_map<EntityId, EntityId> next;
  for (auto& [src, dst] : raw) {
    auto [it, inserted] = next.insert_or_assign(src, dst);
    (void)it;
    if (!inserted) ++tbl.duplicate_sources;
  }

  // 0 = unvisited, 1 = on current path, 2 = done
  std::unordered_map<EntityId, int> state;
  std::unordered_map<EntityId, EntityId> final_target;
  std::vector<EntityId> path;
  for (auto& [src, _] : next) {
    if (state[src] == 2) continue;
    path.clear();
    EntityId cur = src;
    while (true) {
      auto it = next.find(cur);
      if (it == next.end() || state[cur] == 2) {
        // cur is terminal (non-redirecting) or already resolved
        EntityId target = (state[cur] == 2) ? final_target[cur] : cur;
        for (auto n : path) {
          final_target[n] = target;
          state[n] = 2;
        }
        break;
      }
      if (state[cur] == 1) {
        // hit a cycle: everything from cur onward in path is the cycle
        auto cyc_begin = std::find(path.begin(), path.end(), cur);
        EntityId rep = *std::min_element(cyc_begin, path.end());
        for (auto n : path) {
          final_target[n] = rep;
          state[n] = 2;
        }
        break;
      }
      state[cur] = 1;
      path.push_back(cur);
      cur = it->second;
    }
  }

  for (auto& [src, _] : next) tbl.mapping[src] = final_target[src];
  return tbl;
}

// Rewrites every edge (i,j) to (resolve(i), resolve(j)), dropping self-loops
// that result and merging duplicates. Label and ordinal are preserved.
inline SnapshotGraph apply_redirects(const SnapshotGraph& g, const RedirectTable& r) {
  if (r.empty() && !g.redirected) {
    SnapshotGraph copy = g;
    copy.redirected = true;
    return copy;
  }
  std::vector<std::pair<EntityId, EntityId>> pairs;
  pairs.reserve(g.edge_count);
  for (EntityId s = 0; s < g.out_adj.size(); ++s)
    for (EntityId t : g.out_adj[s]) pairs.emplace_back(r.resolve(s), r.resolve(t));
  SnapshotGraph out = build_snapshot(std::move(pairs), g.label, g.ordinal);
  out.redirected = true;
  return out;
}

}  // namespace trel
