#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "temporal_relate/entity_table.hpp"

namespace trel {

enum class CentralityKind { Degree, PageRank };
enum class DegreeMode { Total, In, Out };

inline const char* to_string(CentralityKind k) {
  return k == CentralityKind::Degree ? "rd" : "rp";
}

// Per-node scores over a graph's node set; `values` is parallel to the
// sorted `nodes` vector.
struct CentralityScores {
  CentralityKind kind = CentralityKind::Degree;
  bool reciprocal = false;
  bool converged = true;  // PageRank only
  std::vector<EntityId> nodes;
  std::vector<double> values;

  double at(EntityId v) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), v);
    if (it == nodes.end() || *it != v)
      throw std::out_of_range("CentralityScores: node not scored");
    return values[static_cast<std::size_t>(it - nodes.begin())];
  }
};

// Total (in+out) degree on the unweighted structure. Aggregate-graph weights
// are ignored. Isolated nodes score 1 so the reciprocal stays defined.
template <typename GraphT>
CentralityScores degree_centrality(const GraphT& g, DegreeMode mode = DegreeMode::Total) {
  CentralityScores s;
  s.kind = CentralityKind::Degree;
  s.nodes = g.nodes;
  s.values.resize(g.nodes.size());
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    std::size_t d = 0;
    if (mode != DegreeMode::In) d += g.out_adj[i].size();
    if (mode != DegreeMode::Out) d += g.in_adj[i].size();
    s.values[i] = d == 0 ? 1.0 : static_cast<double>(d);
  }
  return s;
}

// Power iteration with uniform teleport; dangling mass is redistributed
// uniformly over all nodes. Non-convergence within max_iter is flagged.
template <typename GraphT>
CentralityScores pagerank(const GraphT& g, double damping = 0.85, double tol = 1e-9,
                          int max_iter = 100) {
  const std::size_t n = g.nodes.size();
  if (n == 0) throw std::invalid_argument("pagerank: empty graph");
  CentralityScores s;
  s.kind = CentralityKind::PageRank;
  s.nodes = g.nodes;

  // local-index adjacency for the iteration
  std::vector<std::vector<std::uint32_t>> out_local(n);
  for (std::size_t i = 0; i < n; ++i) {
    out_local[i].reserve(g.out_adj[i].size());
    for (EntityId t : g.out_adj[i]) {
      auto it = std::lower_bound(g.nodes.begin(), g.nodes.end(), t);
      out_local[i].push_back(static_cast<std::uint32_t>(it - g.nodes.begin()));
    }
  }

  std::vector<double> rank(n, 1.0 / static_cast<double>(n)), next(n);
  s.converged = false;
  for (int iter = 0; iter < max_iter; ++iter) {
    double dangling = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (out_local[i].empty()) dangling += rank[i];
    const double base = (1.0 - damping) / static_cast<double>(n) +
                        damping * dangling / static_cast<double>(n);
    std::fill(next.begin(), next.end(), base);
    for (std::size_t i = 0; i < n; ++i) {
      if (out_local[i].empty()) continue;
      const double share = damping * rank[i] / static_cast<double>(out_local[i].size());
      for (auto j : out_local[i]) next[j] += share;
    }
    double delta = 0.0;
    for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - rank[i]);
    rank.swap(next);
    if (delta < tol) {
      s.converged = true;
      break;
    }
  }
  s.values = std::move(rank);
  return s;
}

inline CentralityScores reciprocal(const CentralityScores& in) {
  CentralityScores out = in;
  out.reciprocal = !in.reciprocal;
  for (auto& v : out.values) {
    if (v <= 0.0) throw std::logic_error("reciprocal: non-positive centrality score");
    v = 1.0 / v;
  }
  return out;
}

}  // namespace trel
