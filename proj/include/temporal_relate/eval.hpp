#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace trel {

// Ranked gold standard (KORE-style): seeds each with an ordered candidate
// list. Rank k of L implies gold score L - k + 1.
struct GoldStandard {
  struct Seed {
    std::string name;
    std::vector<std::string> ranked;  // best first
  };
  std::vector<Seed> seeds;

  std::size_t pair_count() const {
    std::size_t n = 0;
    for (const auto& s : seeds) n += s.ranked.size();
    return n;
  }
};

// Seed lines unindented, candidates indented by one TAB, in rank order.
inline GoldStandard load_gold(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open gold file: " + path);
  GoldStandard gold;
  std::string line;
  std::set<std::string> seen;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '\t') {
      if (gold.seeds.empty())
        throw std::runtime_error("gold format error: candidate before any seed");
      std::string cand = line.substr(1);
      if (!seen.insert(cand).second)
        throw std::runtime_error("gold format error: duplicate candidate '" + cand +
                                 "' under seed '" + gold.seeds.back().name + "'");
      gold.seeds.back().ranked.push_back(std::move(cand));
    } else {
      gold.seeds.push_back({line, {}});
      seen.clear();
    }
  }
  if (gold.seeds.empty()) throw std::runtime_error("gold format error: empty file");
  return gold;
}

struct SpearmanResult {
  double rho = 0.0;
  bool degenerate = false;  // either input constant
};

// Average (fractional) ranks for ties.
inline std::vector<double> fractional_ranks(const std::vector<double>& v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  std::size_t i = 0;
  while (i < v.size()) {
    std::size_t j = i;
    while (j + 1 < v.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline SpearmanResult spearman_checked(const std::vector<double>& x,
                                       const std::vector<double>& y) {
  if (x.size() != y.size())
    throw std::invalid_argument("spearman: length mismatch");
  if (x.size() < 2) throw std::invalid_argument("spearman: need >= 2 points");
  auto rx = fractional_ranks(x);
  auto ry = fractional_ranks(y);
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) { sx += rx[i]; sy += ry[i]; }
  const double mx = sx / n, my = sy / n;
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    cov += (rx[i] - mx) * (ry[i] - my);
    vx += (rx[i] - mx) * (rx[i] - mx);
    vy += (ry[i] - my) * (ry[i] - my);
  }
  if (vx == 0.0 || vy == 0.0) return {0.0, true};
  return {cov / std::sqrt(vx * vy), false};
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  return spearman_checked(x, y).rho;
}

enum class Pooling { Pooled, PerSeedMean };

struct EvalReport {
  std::map<std::string, double> per_seed;  // seed name -> rho
  double pooled_rho = 0.0;
  bool pooled_degenerate = false;
  double per_seed_mean = 0.0;
  std::size_t n_pairs = 0;
  std::size_t imputed = 0;  // gold pairs missing a system score, counted as 0
  std::string method_label;
};

// System scores keyed by (seed name, candidate name).
using ScoreMap = std::map<std::pair<std::string, std::string>, double>;

inline EvalReport evaluate(const ScoreMap& scores, const GoldStandard& gold) {
  EvalReport rep;
  std::vector<double> pooled_sys, pooled_gold;
  double rho_sum = 0.0;
  std::size_t rho_count = 0;
  for (const auto& seed : gold.seeds) {
    std::vector<double> sys, gs;
    const double L = static_cast<double>(seed.ranked.size());
    for (std::size_t k = 0; k < seed.ranked.size(); ++k) {
      auto it = scores.find({seed.name, seed.ranked[k]});
      double v = 0.0;
      if (it == scores.end()) ++rep.imputed;
      else v = it->second;
      sys.push_back(v);
      gs.push_back(L - static_cast<double>(k));  // rank 1 -> L ... rank L -> 1
      pooled_sys.push_back(v);
      pooled_gold.push_back(gs.back());
    }
    if (sys.size() >= 2) {
      rep.per_seed[seed.name] = spearman_checked(sys, gs).rho;
      rho_sum += rep.per_seed[seed.name];
      ++rho_count;
    }
  }
  rep.n_pairs = pooled_sys.size();
  if (pooled_sys.size() >= 2) {
    auto r = spearman_checked(pooled_sys, pooled_gold);
    rep.pooled_rho = r.rho;
    rep.pooled_degenerate = r.degenerate;
  }
  rep.per_seed_mean = rho_count == 0 ? 0.0 : rho_sum / static_cast<double>(rho_count);
  return rep;
}

// Pairwise Spearman between labeled score sets covering the same pair list;
// returns the strict upper triangle as (label_i, label_j, rho).
struct LabeledScores {
  std::string label;
  ScoreMap scores;
};

inline std::vector<std::tuple<std::string, std::string, double>> correlation_matrix(
    const std::vector<LabeledScores>& sets) {
  if (sets.size() < 2)
    throw std::invalid_argument("correlation_matrix: need >= 2 score sets");
  for (std::size_t i = 1; i < sets.size(); ++i) {
    if (sets[i].scores.size() != sets[0].scores.size())
      throw std::invalid_argument("correlation_matrix: score sets cover different pairs");
    auto a = sets[0].scores.begin();
    for (auto& [key, _] : sets[i].scores) {
      if (key != a->first)
        throw std::invalid_argument("correlation_matrix: score sets cover different pairs");
      ++a;
    }
  }
  std::vector<std::tuple<std::string, std::string, double>> out;
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      std::vector<double> x, y;
      x.reserve(sets[i].scores.size());
      for (auto& [_, v] : sets[i].scores) x.push_back(v);
      for (auto& [_, v] : sets[j].scores) y.push_back(v);
      out.emplace_back(sets[i].label, sets[j].label, spearman(x, y));
    }
  return out;
}

// Paired bootstrap over seeds: resample the seed list with replacement and
// compare pooled rho of two systems; two-sided p-value for the observed
// difference. This is this artifact's significance test, not a published one.
inline double bootstrap_compare(const ScoreMap& sys_a, const ScoreMap& sys_b,
                                const GoldStandard& gold, int iterations = 10000,
                                std::uint64_t rng_seed = 42) {
  auto pooled_rho = [&](const ScoreMap& scores, const std::vector<std::size_t>& idx) {
    std::vector<double> sys, gs;
    for (auto si : idx) {
      const auto& seed = gold.seeds[si];
      const double L = static_cast<double>(seed.ranked.size());
      for (std::size_t k = 0; k < seed.ranked.size(); ++k) {
        auto it = scores.find({seed.name, seed.ranked[k]});
        sys.push_back(it == scores.end() ? 0.0 : it->second);
        gs.push_back(L - static_cast<double>(k));
      }
    }
    return sys.size() >= 2 ? spearman(sys, gs) : 0.0;
  };

  std::vector<std::size_t> all(gold.seeds.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const double observed = pooled_rho(sys_a, all) - pooled_rho(sys_b, all);

  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<std::size_t> pick(0, gold.seeds.size() - 1);
  int extreme = 0;
  std::vector<std::size_t> idx(gold.seeds.size());
  for (int it = 0; it < iterations; ++it) {
    for (auto& v : idx) v = pick(rng);
    const double diff = pooled_rho(sys_a, idx) - pooled_rho(sys_b, idx);
    // center the bootstrap distribution at the observed difference
    if (std::abs(diff - observed) >= std::abs(observed)) ++extreme;
  }
  return static_cast<double>(extreme + 1) / static_cast<double>(iterations + 1);
}

}  // namespace trel
