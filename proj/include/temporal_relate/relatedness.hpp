#pragma once

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "temporal_relate/centrality.hpp"
#include "temporal_relate/ego.hpp"
#include "temporal_relate/temporal.hpp"

namespace trel {

// Sparse neighbor -> score map; entries sorted by EntityId, values > 0,
// absent keys read as 0.
struct FeatureVector {
  EntityId owner = 0;
  LinkMode mode = LinkMode::InOut;
  std::vector<std::pair<EntityId, double>> entries;  // sorted by key
};

enum class MethodTag { Jaccard, ExtendedRD, ExtendedRP, ExtendedTWxRD, ExtendedTWxRP };

inline const char* to_string(MethodTag m) {
  switch (m) {
    case MethodTag::Jaccard: return "jaccard";
    case MethodTag::ExtendedRD: return "ext-rd";
    case MethodTag::ExtendedRP: return "ext-rp";
    case MethodTag::ExtendedTWxRD: return "ext-twxrd";
    case MethodTag::ExtendedTWxRP: return "ext-twxrp";
  }
  return "?";
}

struct RelatednessScore {
  EntityId a = 0;
  EntityId b = 0;
  MethodTag method = MethodTag::Jaccard;
  LinkMode mode = LinkMode::InOut;
  double value = 0.0;
  std::string snapshot_or_model;
};

// |A n B| / |A u B| over sorted id sets; both empty -> 0.
inline double binary_jaccard(const std::vector<EntityId>& na,
                             const std::vector<EntityId>& nb) {
  std::size_t inter = 0, i = 0, j = 0;
  while (i < na.size() && j < nb.size()) {
    if (na[i] < nb[j]) ++i;
    else if (nb[j] < na[i]) ++j;
    else { ++inter; ++i; ++j; }
  }
  const std::size_t uni = na.size() + nb.size() - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

// entries[v] = recip score of v, for each direct neighbor v of the owner.
inline FeatureVector build_feature_vector(const EgoNetwork& ego,
                                          const CentralityScores& recip,
                                          LinkMode mode) {
  if (!recip.reciprocal)
    throw std::logic_error("build_feature_vector: scores are not reciprocal");
  FeatureVector fv;
  fv.owner = ego.seed;
  fv.mode = mode;
  for (EntityId v : direct_neighbors(ego, mode))
    fv.entries.emplace_back(v, recip.at(v));
  return fv;
}

// dot / (|a|^2 + |b|^2 - dot); single merge pass, O(|a| + |b|).
inline double tanimoto(const FeatureVector& va, const FeatureVector& vb) {
  double dot = 0.0, na2 = 0.0, nb2 = 0.0;
  std::size_t i = 0, j = 0;
  while (i < va.entries.size() && j < vb.entries.size()) {
    const auto& [ka, xa] = va.entries[i];
    const auto& [kb, xb] = vb.entries[j];
    if (ka < kb) { na2 += xa * xa; ++i; }
    else if (kb < ka) { nb2 += xb * xb; ++j; }
    else { dot += xa * xb; na2 += xa * xa; nb2 += xb * xb; ++i; ++j; }
  }
  for (; i < va.entries.size(); ++i) na2 += va.entries[i].second * va.entries[i].second;
  for (; j < vb.entries.size(); ++j) nb2 += vb.entries[j].second * vb.entries[j].second;
  const double denom = na2 + nb2 - dot;
  return denom <= 0.0 ? 0.0 : dot / denom;
}

namespace detail {

template <typename GraphT>
CentralityScores reciprocal_centrality(const GraphT& g, CentralityKind kind,
                                       DegreeMode degree_mode) {
  return reciprocal(kind == CentralityKind::Degree ? degree_centrality(g, degree_mode)
                                                   : pagerank(g));
}

}  // namespace detail

// R(a,b): reciprocal centralities are computed independently in each seed's
// own ego network, then the two feature vectors meet in the Tanimoto
// coefficient. The same neighbor may carry different scores on the two sides.
inline RelatednessScore extended_jaccard(const EgoNetwork& ego_a, const EgoNetwork& ego_b,
                                         CentralityKind kind, LinkMode mode,
                                         DegreeMode degree_mode = DegreeMode::Total) {
  auto va = build_feature_vector(ego_a, detail::reciprocal_centrality(ego_a, kind, degree_mode), mode);
  auto vb = build_feature_vector(ego_b, detail::reciprocal_centrality(ego_b, kind, degree_mode), mode);
  RelatednessScore s;
  s.a = ego_a.seed;
  s.b = ego_b.seed;
  s.method = kind == CentralityKind::Degree ? MethodTag::ExtendedRD : MethodTag::ExtendedRP;
  s.mode = mode;
  s.value = tanimoto(va, vb);
  s.snapshot_or_model = ego_a.snapshot_label;
  return s;
}

// Direct neighbors of the aggregate's seed under `mode`.
inline std::vector<EntityId> aggregate_neighbors(const AggregateGraph& agg, LinkMode mode) {
  std::vector<EntityId> out;
  auto li = agg.local_index(agg.seed);
  switch (mode) {
    case LinkMode::In: out = agg.in_adj[li]; break;
    case LinkMode::Out: out = agg.out_adj[li]; break;
    case LinkMode::InOut:
      std::set_union(agg.in_adj[li].begin(), agg.in_adj[li].end(),
                     agg.out_adj[li].begin(), agg.out_adj[li].end(),
                     std::back_inserter(out));
      break;
  }
  out.erase(std::remove(out.begin(), out.end(), agg.seed), out.end());
  return out;
}

// Seed-to-neighbor temporal weight; both directed edges count as evidence.
inline double seed_temporal_weight(const AggregateGraph& agg, EntityId v) {
  return edge_temporal_weight(agg, agg.seed, v) + edge_temporal_weight(agg, v, agg.seed);
}

// R_TW(a,b): reciprocal centralities on each aggregate's unweighted
// structure, Hadamard-multiplied by the seed's temporal-weight vector.
inline RelatednessScore extended_jaccard_temporal(const AggregateGraph& agg_a,
                                                  const AggregateGraph& agg_b,
                                                  CentralityKind kind, LinkMode mode,
                                                  DegreeMode degree_mode = DegreeMode::Total) {
  if (agg_a.model != agg_b.model || agg_a.n != agg_b.n)
    throw std::invalid_argument("extended_jaccard_temporal: aggregate model mismatch");
  auto make_vector = [&](const AggregateGraph& agg) {
    auto recip = detail::reciprocal_centrality(agg, kind, degree_mode);
    FeatureVector fv;
    fv.owner = agg.seed;
    fv.mode = mode;
    for (EntityId v : aggregate_neighbors(agg, mode)) {
      double w = recip.at(v) * seed_temporal_weight(agg, v);
      if (w > 0.0) fv.entries.emplace_back(v, w);
    }
    return fv;
  };
  RelatednessScore s;
  s.a = agg_a.seed;
  s.b = agg_b.seed;
  s.method = kind == CentralityKind::Degree ? MethodTag::ExtendedTWxRD : MethodTag::ExtendedTWxRP;
  s.mode = mode;
  s.value = tanimoto(make_vector(agg_a), make_vector(agg_b));
  s.snapshot_or_model = to_string(agg_a.model);
  return s;
}

}  // namespace trel
