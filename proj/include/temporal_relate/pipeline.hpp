#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "temporal_relate/centrality.hpp"
#include "temporal_relate/ego.hpp"
#include "temporal_relate/eval.hpp"
#include "temporal_relate/parse.hpp"
#include "temporal_relate/redirect.hpp"
#include "temporal_relate/relatedness.hpp"
#include "temporal_relate/snapshot.hpp"
#include "temporal_relate/temporal.hpp"

namespace trel {

inline LinkMode parse_link_mode(const std::string& s) {
  if (s == "in") return LinkMode::In;
  if (s == "out") return LinkMode::Out;
  if (s == "inout") return LinkMode::InOut;
  throw std::invalid_argument("unknown link mode: " + s);
}

inline AggModel parse_agg_model(const std::string& s) {
  if (s == "intersection") return AggModel::Intersection;
  if (s == "union-uniform") return AggModel::UnionUniform;
  if (s == "union-linear") return AggModel::UnionLinear;
  if (s == "union-exp") return AggModel::UnionExponential;
  throw std::invalid_argument("unknown aggregation model: " + s);
}

inline MethodTag parse_method(const std::string& s) {
  if (s == "jaccard") return MethodTag::Jaccard;
  if (s == "ext-rd") return MethodTag::ExtendedRD;
  if (s == "ext-rp") return MethodTag::ExtendedRP;
  if (s == "ext-twxrd") return MethodTag::ExtendedTWxRD;
  if (s == "ext-twxrp") return MethodTag::ExtendedTWxRP;
  throw std::invalid_argument("unknown method: " + s);
}

struct ManifestEntry {
  std::string label;
  std::uint32_t ordinal = 1;
  std::string links;
  std::string redirects;  // empty = none
  std::string format;     // "ntriples" | "tsv"
};

inline std::vector<ManifestEntry> load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open manifest: " + path);
  nlohmann::json j;
  is >> j;
  std::vector<ManifestEntry> entries;
  for (const auto& e : j) {
    ManifestEntry m;
    m.label = e.at("label").get<std::string>();
    m.ordinal = e.at("ordinal").get<std::uint32_t>();
    m.links = e.at("links").get<std::string>();
    if (e.contains("redirects") && !e["redirects"].is_null())
      m.redirects = e["redirects"].get<std::string>();
    m.format = e.at("format").get<std::string>();
    if (m.format != "ntriples" && m.format != "tsv")
      throw std::runtime_error("manifest: unknown format '" + m.format + "'");
    entries.push_back(std::move(m));
  }
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.ordinal < b.ordinal; });
  return entries;
}

constexpr const char* kPageLinkPredicate = "http://dbpedia.org/ontology/wikiPageWikiLink";
constexpr const char* kRedirectPredicate = "http://dbpedia.org/ontology/wikiPageRedirects";

// On-disk layout of an ingested store:
//   entities.txt       one entity name per line, id = line number
//   redirects.tsv      resolved source<TAB>target name pairs (may be absent)
//   <label>.trl1       one binary snapshot per manifest entry
//   index.json         labels, ordinals, counts
class SnapshotStore {
 public:
  explicit SnapshotStore(std::string dir) : dir_(std::move(dir)) {}

  const std::string& dir() const { return dir_; }

  void load() {
    std::ifstream names(dir_ + "/entities.txt");
    if (!names) throw std::runtime_error("store missing entities.txt in " + dir_);
    std::string line;
    while (std::getline(names, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      table_.intern(line);
    }
    std::ifstream idx(dir_ + "/index.json");
    if (!idx) throw std::runtime_error("store missing index.json in " + dir_);
    nlohmann::json j;
    idx >> j;
    for (const auto& e : j.at("snapshots")) {
      labels_.push_back(e.at("label").get<std::string>());
      snapshots_.push_back(load_snapshot(dir_ + "/" + e.at("file").get<std::string>()));
    }
    std::ifstream red(dir_ + "/redirects.tsv");
    if (red) {
      while (std::getline(red, line)) {
        auto tab = line.find('\t');
        if (tab == std::string::npos) continue;
        auto s = table_.find(line.substr(0, tab));
        auto t = table_.find(line.substr(tab + 1));
        if (s && t) redirects_.mapping[*s] = *t;
      }
    }
  }

  EntityTable& table() { return table_; }
  const EntityTable& table() const { return table_; }
  const std::vector<SnapshotGraph>& snapshots() const { return snapshots_; }
  const std::vector<std::string>& labels() const { return labels_; }

  // Name -> id after redirect resolution; nullopt for unknown names.
  std::optional<EntityId> resolve_name(const std::string& name) const {
    auto id = table_.find(name);
    if (!id) return std::nullopt;
    return redirects_.resolve(*id);
  }

 private:
  std::string dir_;
  EntityTable table_;
  RedirectTable redirects_;
  std::vector<SnapshotGraph> snapshots_;
  std::vector<std::string> labels_;
};

struct IngestReport {
  struct PerSnapshot {
    std::string label;
    std::uint64_t nodes = 0;
    std::uint64_t edges_before_redirects = 0;
    std::uint64_t edges = 0;
    std::uint64_t malformed = 0;
  };
  std::vector<PerSnapshot> snapshots;
};

inline IngestReport cmd_ingest(const std::string& manifest_path, const std::string& out_dir,
                               bool redirects_enabled = true) {
  auto entries = load_manifest(manifest_path);
  std::filesystem::create_directories(out_dir);
  EntityTable table;
  IngestReport report;
  nlohmann::json index;
  index["snapshots"] = nlohmann::json::array();

  std::vector<std::pair<std::string, std::string>> all_redirect_names;
  auto manifest_dir = std::filesystem::path(manifest_path).parent_path();
  auto resolve_path = [&](const std::string& p) {
    std::filesystem::path fp(p);
    return fp.is_absolute() ? fp.string() : (manifest_dir / fp).string();
  };

  for (const auto& entry : entries) {
    ParseStats stats;
    std::vector<std::pair<EntityId, EntityId>> pairs;
    PairSink sink = [&](EntityId s, EntityId t) { pairs.emplace_back(s, t); };
    if (entry.format == "tsv")
      stats = parse_edge_tsv(resolve_path(entry.links), table, sink);
    else
      stats = parse_ntriples_links(resolve_path(entry.links), kPageLinkPredicate, table, sink);

    SnapshotGraph g = build_snapshot(std::move(pairs), entry.label, entry.ordinal);
    IngestReport::PerSnapshot ps;
    ps.label = entry.label;
    ps.malformed = stats.malformed;
    ps.edges_before_redirects = g.edge_count;

    if (redirects_enabled && !entry.redirects.empty()) {
      std::vector<std::pair<EntityId, EntityId>> raw;
      PairSink rsink = [&](EntityId s, EntityId t) { raw.emplace_back(s, t); };
      if (entry.format == "tsv")
        parse_edge_tsv(resolve_path(entry.redirects), table, rsink);
      else
        parse_ntriples_links(resolve_path(entry.redirects), kRedirectPredicate, table, rsink);
      auto rt = resolve_redirects(raw);
      g = apply_redirects(g, rt);
      for (auto& [s, t] : rt.mapping)
        all_redirect_names.emplace_back(table.name(s), table.name(t));
    }

    ps.nodes = g.node_count();
    ps.edges = g.edge_count;
    report.snapshots.push_back(ps);

    const std::string file = entry.label + ".trl1";
    save_snapshot(g, out_dir + "/" + file);
    index["snapshots"].push_back({{"label", entry.label},
                                  {"ordinal", entry.ordinal},
                                  {"file", file},
                                  {"nodes", ps.nodes},
                                  {"edges", ps.edges}});
  }

  {
    std::ofstream names(out_dir + "/entities.txt");
    for (std::size_t i = 0; i < table.size(); ++i)
      names << table.name(static_cast<EntityId>(i)) << '\n';
  }
  if (!all_redirect_names.empty()) {
    std::sort(all_redirect_names.begin(), all_redirect_names.end());
    all_redirect_names.erase(
        std::unique(all_redirect_names.begin(), all_redirect_names.end()),
        all_redirect_names.end());
    std::ofstream red(out_dir + "/redirects.tsv");
    for (auto& [s, t] : all_redirect_names) red << s << '\t' << t << '\n';
  }
  {
    std::ofstream idx(out_dir + "/index.json");
    idx << index.dump(2) << '\n';
  }
  return report;
}

struct ScoreRow {
  std::string seed;
  std::string candidate;
  std::string method;
  std::string mode;
  std::string scope;  // snapshot label or aggregation model
  double value = 0.0;
};

inline std::string format_score(double v) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(6) << v;
  return os.str();
}

inline void write_scores_csv(const std::vector<ScoreRow>& rows, std::ostream& os) {
  os << "seed,candidate,method,mode,model_or_snapshot,score\n";
  for (const auto& r : rows)
    os << r.seed << ',' << r.candidate << ',' << r.method << ',' << r.mode << ','
       << r.scope << ',' << format_score(r.value) << '\n';
}

inline std::vector<ScoreRow> read_scores_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open score CSV: " + path);
  std::vector<ScoreRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (header) { header = false; continue; }
    if (line.empty()) continue;
    std::stringstream ss(line);
    ScoreRow r;
    std::string score;
    if (!std::getline(ss, r.seed, ',') || !std::getline(ss, r.candidate, ',') ||
        !std::getline(ss, r.method, ',') || !std::getline(ss, r.mode, ',') ||
        !std::getline(ss, r.scope, ',') || !std::getline(ss, score, ','))
      throw std::runtime_error("malformed score CSV line: " + line);
    r.value = std::stod(score);
    rows.push_back(std::move(r));
  }
  return rows;
}

struct ScoringConfig {
  std::vector<MethodTag> methods{MethodTag::ExtendedRD};
  std::vector<LinkMode> modes{LinkMode::InOut};
  std::vector<AggModel> models;  // empty = per-snapshot scoring only
  double decay_r = 0.1;
  int hops = 2;
  int threads = 1;
  DegreeMode degree_mode = DegreeMode::Total;
};

namespace detail {

inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  const int k = std::min<int>(threads, static_cast<int>(count));
  for (int t = 0; t < k; ++t)
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        body(i);
      }
    });
  for (auto& th : pool) th.join();
}

}  // namespace detail

// Precomputed per-entity structures reused across pairs.
class ScoringContext {
 public:
  ScoringContext(const SnapshotStore& store, const ScoringConfig& cfg,
                 const std::vector<std::string>& names)
      : store_(store), cfg_(cfg) {
    std::set<std::string> unique(names.begin(), names.end());
    std::vector<std::string> order(unique.begin(), unique.end());
    std::vector<std::optional<EntityId>> ids(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) ids[i] = store.resolve_name(order[i]);

    const auto& snaps = store.snapshots();
    series_.resize(order.size());
    aggs_.resize(order.size());
    detail::parallel_for(order.size(), cfg.threads, [&](std::size_t i) {
      if (!ids[i]) return;
      EgoSeries s;
      s.seed = *ids[i];
      for (const auto& g : snaps) s.snapshots.push_back(extract_ego(g, *ids[i], cfg.hops));
      for (auto model : cfg_.models) aggs_[i].push_back(aggregate(s, model, cfg_.decay_r));
      series_[i] = std::move(s);
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
      name_index_[order[i]] = i;
      id_[i] = ids[i];
    }
  }

  bool known(const std::string& name) const {
    auto it = name_index_.find(name);
    return it != name_index_.end() && id_.at(it->second).has_value();
  }

  const EgoSeries& series(const std::string& name) const {
    return series_.at(name_index_.at(name));
  }
  const std::vector<AggregateGraph>& aggregates(const std::string& name) const {
    return aggs_.at(name_index_.at(name));
  }

 private:
  const SnapshotStore& store_;
  ScoringConfig cfg_;
  std::map<std::string, std::size_t> name_index_;
  std::map<std::size_t, std::optional<EntityId>> id_;
  std::vector<EgoSeries> series_;
  std::vector<std::vector<AggregateGraph>> aggs_;
};

// Scores one pair across the configured grid. Row order: method, mode, then
// scope (snapshots in store order, then models).
inline std::vector<ScoreRow> score_pair(const ScoringContext& ctx, const SnapshotStore& store,
                                        const ScoringConfig& cfg, const std::string& seed,
                                        const std::string& candidate) {
  std::vector<ScoreRow> rows;
  const bool ok = ctx.known(seed) && ctx.known(candidate);
  for (auto method : cfg.methods) {
    const bool temporal_method =
        method == MethodTag::ExtendedTWxRD || method == MethodTag::ExtendedTWxRP;
    const CentralityKind kind =
        (method == MethodTag::ExtendedRP || method == MethodTag::ExtendedTWxRP)
            ? CentralityKind::PageRank
            : CentralityKind::Degree;
    for (auto mode : cfg.modes) {
      if (!temporal_method) {
        for (std::size_t si = 0; si < store.labels().size(); ++si) {
          double v = 0.0;
          if (ok) {
            const auto& ea = ctx.series(seed).snapshots[si];
            const auto& eb = ctx.series(candidate).snapshots[si];
            if (method == MethodTag::Jaccard)
              v = binary_jaccard(direct_neighbors(ea, mode), direct_neighbors(eb, mode));
            else
              v = extended_jaccard(ea, eb, kind, mode, cfg.degree_mode).value;
          }
          rows.push_back({seed, candidate, to_string(method), to_string(mode),
                          store.labels()[si], v});
        }
      } else {
        for (std::size_t mi = 0; mi < cfg.models.size(); ++mi) {
          double v = 0.0;
          if (ok)
            v = extended_jaccard_temporal(ctx.aggregates(seed)[mi],
                                          ctx.aggregates(candidate)[mi], kind, mode,
                                          cfg.degree_mode)
                    .value;
          rows.push_back({seed, candidate, to_string(method), to_string(mode),
                          to_string(cfg.models[mi]), v});
        }
      }
    }
  }
  return rows;
}

// Pair-major grid over all (seed, candidate) pairs; deterministic order.
inline std::vector<ScoreRow> compute_scores(
    const SnapshotStore& store, const ScoringConfig& cfg,
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<std::string> names;
  for (auto& [a, b] : pairs) { names.push_back(a); names.push_back(b); }
  ScoringContext ctx(store, cfg, names);

  std::vector<std::vector<ScoreRow>> per_pair(pairs.size());
  detail::parallel_for(pairs.size(), cfg.threads, [&](std::size_t i) {
    per_pair[i] = score_pair(ctx, store, cfg, pairs[i].first, pairs[i].second);
  });
  std::vector<ScoreRow> rows;
  for (auto& pr : per_pair) rows.insert(rows.end(), pr.begin(), pr.end());
  return rows;
}

inline std::vector<std::pair<std::string, std::string>> gold_pairs(const GoldStandard& gold) {
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& s : gold.seeds)
    for (const auto& c : s.ranked) pairs.emplace_back(s.name, c);
  return pairs;
}

// `seed<TAB>candidate` per line, '#' comments.
inline std::vector<std::pair<std::string, std::string>> load_pair_list(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open pair list: " + path);
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("pair list line without TAB: " + line);
    pairs.emplace_back(line.substr(0, tab), line.substr(tab + 1));
  }
  return pairs;
}

inline nlohmann::json report_to_json(const EvalReport& rep) {
  nlohmann::json j;
  j["pooled_rho"] = rep.pooled_rho;
  j["pooled_degenerate"] = rep.pooled_degenerate;
  j["per_seed_mean"] = rep.per_seed_mean;
  j["n_pairs"] = rep.n_pairs;
  j["imputed"] = rep.imputed;
  j["method"] = rep.method_label;
  j["per_seed"] = nlohmann::json::object();
  for (auto& [seed, rho] : rep.per_seed) j["per_seed"][seed] = rho;
  return j;
}

// Export helpers (debug surfaces named by the spec)

inline void export_ego(const EgoNetwork& ego, const EntityTable& table,
                       const std::string& tsv_path, const std::string& json_path) {
  std::ofstream tsv(tsv_path);
  for (std::size_t li = 0; li < ego.nodes.size(); ++li)
    for (EntityId t : ego.out_adj[li])
      tsv << table.name(ego.nodes[li]) << '\t' << table.name(t) << '\n';
  nlohmann::json j{{"seed", table.name(ego.seed)},
                   {"label", ego.snapshot_label},
                   {"node_count", ego.nodes.size()},
                   {"edge_count", ego.edge_count()}};
  std::ofstream js(json_path);
  js << j.dump(2) << '\n';
}

inline void export_aggregate(const AggregateGraph& agg, const EntityTable& table,
                             const std::string& tsv_path, const std::string& json_path) {
  std::ofstream tsv(tsv_path);
  for (std::size_t li = 0; li < agg.nodes.size(); ++li)
    for (std::size_t k = 0; k < agg.out_adj[li].size(); ++k)
      tsv << table.name(agg.nodes[li]) << '\t' << table.name(agg.out_adj[li][k]) << '\t'
          << format_score(agg.out_weights[li][k]) << '\n';
  nlohmann::json j{{"seed", table.name(agg.seed)},
                   {"model", to_string(agg.model)},
                   {"n", agg.n},
                   {"r", agg.decay_r}};
  std::ofstream js(json_path);
  js << j.dump(2) << '\n';
}

}  // namespace trel
