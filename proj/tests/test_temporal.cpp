#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "helpers.hpp"
#include "temporal_relate/temporal.hpp"

using namespace trel;

namespace {

EgoSeries make_series(EntityId seed, const std::vector<SnapshotGraph>& snaps, int hops = 2) {
  EgoSeries s;
  s.seed = seed;
  for (const auto& g : snaps) s.snapshots.push_back(extract_ego(g, seed, hops));
  return s;
}

std::vector<SnapshotGraph> random_snapshots(std::mt19937& rng, int n, int max_nodes,
                                            int edges) {
  std::vector<SnapshotGraph> out;
  for (int t = 1; t <= n; ++t)
    out.push_back(test::random_graph(rng, max_nodes, edges, "t" + std::to_string(t),
                                     static_cast<std::uint32_t>(t)));
  return out;
}

std::set<std::pair<EntityId, EntityId>> edge_set(const AggregateGraph& agg) {
  std::set<std::pair<EntityId, EntityId>> out;
  for (std::size_t li = 0; li < agg.nodes.size(); ++li)
    for (EntityId t : agg.out_adj[li]) out.insert({agg.nodes[li], t});
  return out;
}

std::set<std::pair<EntityId, EntityId>> edge_set(const EgoNetwork& ego) {
  std::set<std::pair<EntityId, EntityId>> out;
  for (std::size_t li = 0; li < ego.nodes.size(); ++li)
    for (EntityId t : ego.out_adj[li]) out.insert({ego.nodes[li], t});
  return out;
}

}  // namespace

TEST_CASE("temporal_factor values") {
  CHECK(temporal_factor(AggModel::UnionLinear, 1, 0.1) == doctest::Approx(0.9));
  CHECK(temporal_factor(AggModel::UnionLinear, 15, 0.1) == 0.0);  // clamped
  CHECK(temporal_factor(AggModel::UnionExponential, 1) == doctest::Approx(std::exp(-1.0)));
  CHECK(temporal_factor(AggModel::UnionUniform, 5) == 1.0);
  CHECK(temporal_factor(AggModel::Intersection, 5) == 1.0);
  CHECK(temporal_factor(AggModel::UnionExponential, 0) == 1.0);
  CHECK_THROWS(temporal_factor(AggModel::UnionLinear, -1, 0.1));
  CHECK_THROWS(temporal_factor(AggModel::UnionLinear, 1, 0.0));
  CHECK_THROWS(temporal_factor(AggModel::UnionLinear, 1, 1.5));
}

TEST_CASE("temporal factor table for n=10, r=0.1") {
  for (int dt = 0; dt <= 9; ++dt) {
    CHECK(temporal_factor(AggModel::UnionLinear, dt, 0.1) ==
          doctest::Approx(1.0 - 0.1 * dt).epsilon(1e-12));
    CHECK(temporal_factor(AggModel::UnionExponential, dt) ==
          doctest::Approx(std::exp(-dt)).epsilon(1e-12));
  }
}

TEST_CASE("uniform union counts snapshot presence") {
  // edge (0,1) at t in {1,2}; edge (0,2) only at t=2
  auto g1 = build_snapshot({{0, 1}}, "t1", 1);
  auto g2 = build_snapshot({{0, 1}, {0, 2}}, "t2", 2);
  auto agg = aggregate(make_series(0, {g1, g2}), AggModel::UnionUniform);
  CHECK(edge_temporal_weight(agg, 0, 1) == 2.0);
  CHECK(edge_temporal_weight(agg, 0, 2) == 1.0);
  CHECK(edge_temporal_weight(agg, 1, 2) == 0.0);
}

TEST_CASE("intersection keeps only always-present edges") {
  auto g1 = build_snapshot({{0, 1}, {0, 2}}, "t1", 1);
  auto g2 = build_snapshot({{0, 1}}, "t2", 2);
  auto g3 = build_snapshot({{0, 1}, {0, 2}}, "t3", 3);
  auto agg = aggregate(make_series(0, {g1, g2, g3}), AggModel::Intersection);
  CHECK(edge_temporal_weight(agg, 0, 1) == 1.0);
  CHECK(edge_temporal_weight(agg, 0, 2) == 0.0);
  CHECK(!agg.contains(2));
}

TEST_CASE("linear weights sum hand-computed factors") {
  // edge at t in {1,3} of n=3, r=0.1: (1 - 0.1*2) + (1 - 0.1*0) = 1.8
  auto g1 = build_snapshot({{0, 1}}, "t1", 1);
  auto g2 = build_snapshot({{0, 2}}, "t2", 2);
  auto g3 = build_snapshot({{0, 1}}, "t3", 3);
  auto agg = aggregate(make_series(0, {g1, g2, g3}), AggModel::UnionLinear, 0.1);
  CHECK(edge_temporal_weight(agg, 0, 1) == doctest::Approx(1.8).epsilon(1e-12));
}

TEST_CASE("aggregate edge sets bracket the snapshots") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    auto snaps = random_snapshots(rng, 3, 12, 25);
    auto series = make_series(0, snaps);
    auto inter = aggregate(series, AggModel::Intersection);
    auto uni = aggregate(series, AggModel::UnionUniform);

    std::set<std::pair<EntityId, EntityId>> all_union, each;
    bool first = true;
    std::set<std::pair<EntityId, EntityId>> running_inter;
    for (const auto& ego : series.snapshots) {
      auto es = edge_set(ego);
      all_union.insert(es.begin(), es.end());
      if (first) { running_inter = es; first = false; }
      else {
        std::set<std::pair<EntityId, EntityId>> keep;
        for (auto& e : running_inter) if (es.count(e)) keep.insert(e);
        running_inter = keep;
      }
    }
    CHECK(edge_set(uni) == all_union);
    CHECK(edge_set(inter) == running_inter);
  }
}

TEST_CASE("uniform weight equals brute-force presence count") {
  std::mt19937 rng(43);
  for (int trial = 0; trial < 30; ++trial) {
    auto snaps = random_snapshots(rng, 4, 10, 20);
    auto series = make_series(0, snaps);
    auto uni = aggregate(series, AggModel::UnionUniform);
    std::map<std::pair<EntityId, EntityId>, int> count;
    for (const auto& ego : series.snapshots)
      for (auto& e : edge_set(ego)) ++count[e];
    for (auto& [e, c] : count)
      CHECK(edge_temporal_weight(uni, e.first, e.second) == static_cast<double>(c));
  }
}

TEST_CASE("n=1 series: all models coincide with weight 1") {
  std::mt19937 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    auto snaps = random_snapshots(rng, 1, 10, 20);
    auto series = make_series(0, snaps);
    for (auto model : {AggModel::Intersection, AggModel::UnionUniform,
                       AggModel::UnionLinear, AggModel::UnionExponential}) {
      auto agg = aggregate(series, model, 0.1);
      CHECK(edge_set(agg) == edge_set(series.snapshots[0]));
      for (std::size_t li = 0; li < agg.nodes.size(); ++li)
        for (double w : agg.out_weights[li]) CHECK(w == 1.0);
    }
  }
}

TEST_CASE("adding a snapshot never decreases uniform weights") {
  std::mt19937 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    auto snaps = random_snapshots(rng, 4, 10, 20);
    auto shorter = make_series(0, {snaps.begin(), snaps.end() - 1});
    auto longer = make_series(0, snaps);
    auto a1 = aggregate(shorter, AggModel::UnionUniform);
    auto a2 = aggregate(longer, AggModel::UnionUniform);
    for (auto& e : edge_set(a1))
      CHECK(edge_temporal_weight(a2, e.first, e.second) >=
            edge_temporal_weight(a1, e.first, e.second));
  }
}

TEST_CASE("linear <= uniform <= n; newest-only exponential edge weighs 1") {
  std::mt19937 rng(59);
  for (int trial = 0; trial < 20; ++trial) {
    auto snaps = random_snapshots(rng, 4, 10, 20);
    auto series = make_series(0, snaps);
    auto lin = aggregate(series, AggModel::UnionLinear, 0.1);
    auto uni = aggregate(series, AggModel::UnionUniform);
    const double n = static_cast<double>(series.snapshots.size());
    for (auto& e : edge_set(uni)) {
      const double wu = edge_temporal_weight(uni, e.first, e.second);
      CHECK(edge_temporal_weight(lin, e.first, e.second) <= wu + 1e-12);
      CHECK(wu <= n);
    }
  }
  // edge present only at the newest snapshot has exponential weight e^0 = 1
  auto g1 = build_snapshot({{0, 1}}, "t1", 1);
  auto g2 = build_snapshot({{0, 1}, {0, 2}}, "t2", 2);
  auto agg = aggregate(make_series(0, {g1, g2}), AggModel::UnionExponential);
  CHECK(edge_temporal_weight(agg, 0, 2) == 1.0);
}

TEST_CASE("aggregate rejects an empty series") {
  CHECK_THROWS(aggregate(EgoSeries{}, AggModel::UnionUniform));
}
