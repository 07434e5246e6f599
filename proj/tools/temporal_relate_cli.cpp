// Pipeline driver: ingest -> redirect merge -> ego extraction -> aggregation
// -> scoring -> evolution series -> evaluation.
//
// Exit codes: 0 success, 1 warnings escalated via --strict, 2 fatal input
// error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "temporal_relate/pipeline.hpp"
#include "temporal_relate/text_baseline.hpp"

namespace {

int env_threads() {
  if (const char* v = std::getenv("TEMPORAL_RELATE_THREADS")) {
    int n = std::atoi(v);
    if (n > 0) return n;
  }
  return 1;
}

std::vector<trel::MethodTag> parse_methods(const std::vector<std::string>& names) {
  std::vector<trel::MethodTag> out;
  for (const auto& n : names) out.push_back(trel::parse_method(n));
  return out;
}

std::vector<trel::LinkMode> parse_modes(const std::vector<std::string>& names) {
  std::vector<trel::LinkMode> out;
  for (const auto& n : names) out.push_back(trel::parse_link_mode(n));
  return out;
}

std::vector<trel::AggModel> parse_models(const std::vector<std::string>& names) {
  std::vector<trel::AggModel> out;
  for (const auto& n : names) out.push_back(trel::parse_agg_model(n));
  return out;
}

std::vector<std::pair<std::string, std::string>> load_pairs_arg(const std::string& pairs_path,
                                                                const std::string& gold_path) {
  if (!gold_path.empty()) return trel::gold_pairs(trel::load_gold(gold_path));
  return trel::load_pair_list(pairs_path);
}

int warn_unknown(const trel::SnapshotStore& store,
                 const std::vector<std::pair<std::string, std::string>>& pairs, bool strict) {
  std::set<std::string> unknown;
  for (auto& [a, b] : pairs) {
    if (!store.resolve_name(a)) unknown.insert(a);
    if (!store.resolve_name(b)) unknown.insert(b);
  }
  for (const auto& n : unknown)
    std::cerr << "warning: entity not in store, scores 0: " << n << '\n';
  return (!unknown.empty() && strict) ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"temporal entity relatedness over snapshot link graphs"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may appear after the subcommand

  std::string manifest, store_dir = "store", output_dir = ".";
  int threads = env_threads();
  bool strict = false;
  std::uint64_t rng_seed = 42;
  app.add_option("--manifest", manifest, "ingest manifest (JSON)");
  app.add_option("--store", store_dir, "snapshot store directory");
  app.add_option("--output-dir", output_dir, "output directory");
  app.add_option("--threads", threads, "worker threads");
  app.add_flag("--strict", strict, "escalate warnings to exit code 1");
  app.add_option("--seed", rng_seed, "RNG seed for the bootstrap");

  // shared scoring options
  std::vector<std::string> method_names{"ext-rd"}, mode_names{"inout"},
      model_names;
  std::string pairs_path, gold_path, scores_path;
  double decay_r = 0.1;
  int hops = 2;
  bool no_redirects = false;

  auto add_grid = [&](CLI::App* cmd) {
    cmd->add_option("--methods", method_names,
                    "jaccard | ext-rd | ext-rp | ext-twxrd | ext-twxrp");
    cmd->add_option("--modes", mode_names, "in | out | inout");
    cmd->add_option("--models", model_names,
                    "intersection | union-uniform | union-linear | union-exp");
    cmd->add_option("--decay-r", decay_r, "linear decay rate");
    cmd->add_option("--hops", hops, "ego network radius");
  };

  auto* ingest = app.add_subcommand("ingest", "parse a manifest into a snapshot store");
  ingest->add_flag("--no-redirects", no_redirects, "skip redirect merging");

  auto* relate = app.add_subcommand("relate", "score entity pairs over the grid");
  relate->add_option("--pairs", pairs_path, "TSV pair list");
  relate->add_option("--gold", gold_path, "gold file supplying the pairs");
  add_grid(relate);

  auto* evolve = app.add_subcommand("evolve", "per-snapshot score series for one pair");
  std::string evolve_a, evolve_b, evolve_method = "ext-rd", evolve_mode = "inout";
  evolve->add_option("--a", evolve_a, "first entity")->required();
  evolve->add_option("--b", evolve_b, "second entity")->required();
  evolve->add_option("--method", evolve_method, "scoring method (per-snapshot)");
  evolve->add_option("--mode", evolve_mode, "link mode");
  evolve->add_option("--hops", hops, "ego network radius");

  auto* agg_cmd = app.add_subcommand("aggregate", "export aggregate graphs for seeds");
  std::vector<std::string> agg_seeds;
  agg_cmd->add_option("--seeds", agg_seeds, "seed entities")->required();
  add_grid(agg_cmd);

  auto* evaluate_cmd = app.add_subcommand("evaluate", "Spearman vs a ranked gold standard");
  evaluate_cmd->add_option("--gold", gold_path, "gold file")->required();
  evaluate_cmd->add_option("--scores", scores_path, "score CSV from `relate`")->required();

  auto* corr_cmd = app.add_subcommand("corr-matrix",
                                      "cross-correlations between score-CSV scopes");
  corr_cmd->add_option("--scores", scores_path, "score CSV from `relate`")->required();

  auto* baseline = app.add_subcommand("baseline-text", "TF-IDF cosine baseline");
  std::string corpus_dir, stopwords_path;
  baseline->add_option("--corpus", corpus_dir, "directory of <entity>.txt files")->required();
  baseline->add_option("--stopwords", stopwords_path, "stop word file")->required();
  baseline->add_option("--pairs", pairs_path, "TSV pair list");
  baseline->add_option("--gold", gold_path, "gold file supplying the pairs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (ingest->parsed()) {
      if (manifest.empty()) {
        std::cerr << "error: ingest requires --manifest\n";
        return 2;
      }
      auto report = trel::cmd_ingest(manifest, store_dir, !no_redirects);
      for (const auto& s : report.snapshots) {
        std::cout << s.label << ": nodes=" << s.nodes << " edges=" << s.edges;
        if (s.edges != s.edges_before_redirects)
          std::cout << " (redirect merge: " << s.edges_before_redirects << " -> "
                    << s.edges << ")";
        if (s.malformed) std::cout << " malformed=" << s.malformed;
        std::cout << '\n';
      }
      return 0;
    }

    trel::SnapshotStore store(store_dir);
    store.load();

    if (relate->parsed()) {
      auto pairs = load_pairs_arg(pairs_path, gold_path);
      trel::ScoringConfig cfg;
      cfg.methods = parse_methods(method_names);
      cfg.modes = parse_modes(mode_names);
      cfg.models = parse_models(model_names);
      cfg.decay_r = decay_r;
      cfg.hops = hops;
      cfg.threads = threads;
      int rc = warn_unknown(store, pairs, strict);
      auto rows = trel::compute_scores(store, cfg, pairs);
      std::ofstream os(output_dir + "/scores.csv");
      trel::write_scores_csv(rows, os);
      std::cout << "wrote " << rows.size() << " rows to " << output_dir << "/scores.csv\n";
      return rc;
    }

    if (evolve->parsed()) {
      trel::ScoringConfig cfg;
      cfg.methods = {trel::parse_method(evolve_method)};
      cfg.modes = {trel::parse_link_mode(evolve_mode)};
      cfg.hops = hops;
      cfg.threads = threads;
      std::vector<std::pair<std::string, std::string>> pairs{{evolve_a, evolve_b}};
      int rc = warn_unknown(store, pairs, strict);
      auto rows = trel::compute_scores(store, cfg, pairs);
      std::ofstream os(output_dir + "/evolve.csv");
      os << "label,score\n";
      for (const auto& r : rows) os << r.scope << ',' << trel::format_score(r.value) << '\n';
      std::cout << "wrote " << rows.size() << " rows to " << output_dir << "/evolve.csv\n";
      return rc;
    }

    if (agg_cmd->parsed()) {
      auto models = parse_models(model_names);
      if (models.empty()) models = {trel::AggModel::UnionUniform};
      int rc = 0;
      for (const auto& seed_name : agg_seeds) {
        auto id = store.resolve_name(seed_name);
        if (!id) {
          std::cerr << "warning: entity not in store: " << seed_name << '\n';
          if (strict) rc = 1;
          continue;
        }
        trel::EgoSeries series;
        series.seed = *id;
        for (const auto& g : store.snapshots())
          series.snapshots.push_back(trel::extract_ego(g, *id, hops));
        for (auto model : models) {
          auto agg = trel::aggregate(series, model, decay_r);
          const std::string base =
              output_dir + "/agg_" + seed_name + "_" + trel::to_string(model);
          trel::export_aggregate(agg, store.table(), base + ".tsv", base + ".json");
        }
      }
      return rc;
    }

    if (evaluate_cmd->parsed()) {
      auto gold = trel::load_gold(gold_path);
      auto rows = trel::read_scores_csv(scores_path);
      // one report per (method, mode, scope) group
      std::map<std::string, trel::ScoreMap> groups;
      for (const auto& r : rows)
        groups[r.method + "/" + r.mode + "/" + r.scope][{r.seed, r.candidate}] = r.value;
      nlohmann::json out = nlohmann::json::object();
      bool warned = false;
      for (auto& [label, scores] : groups) {
        auto rep = trel::evaluate(scores, gold);
        rep.method_label = label;
        if (rep.imputed > 0) {
          std::cerr << "warning: " << rep.imputed << " gold pairs missing from " << label
                    << ", imputed 0\n";
          warned = true;
        }
        out[label] = trel::report_to_json(rep);
      }
      std::ofstream os(output_dir + "/eval.json");
      os << out.dump(2) << '\n';
      std::cout << out.dump(2) << '\n';
      return (warned && strict) ? 1 : 0;
    }

    if (corr_cmd->parsed()) {
      auto rows = trel::read_scores_csv(scores_path);
      std::map<std::string, trel::ScoreMap> by_scope;
      for (const auto& r : rows) by_scope[r.scope][{r.seed, r.candidate}] = r.value;
      std::vector<trel::LabeledScores> sets;
      for (auto& [label, scores] : by_scope) sets.push_back({label, std::move(scores)});
      auto matrix = trel::correlation_matrix(sets);
      std::ofstream os(output_dir + "/corr_matrix.csv");
      os << "a,b,rho\n";
      for (auto& [a, b, rho] : matrix) {
        os << a << ',' << b << ',' << trel::format_score(rho) << '\n';
        std::cout << a << " ~ " << b << ": " << trel::format_score(rho) << '\n';
      }
      return 0;
    }

    if (baseline->parsed()) {
      auto pairs = load_pairs_arg(pairs_path, gold_path);
      trel::EntityTable table;
      auto corpus =
          trel::build_corpus(corpus_dir, trel::load_stopwords(stopwords_path), table);
      std::vector<trel::ScoreRow> rows;
      bool warned = false;
      for (auto& [a, b] : pairs) {
        auto ia = table.find(a);
        auto ib = table.find(b);
        double v = 0.0;
        if (ia && ib && corpus.docs.count(*ia) && corpus.docs.count(*ib)) {
          v = trel::tfidf_cosine(corpus, *ia, *ib);
        } else {
          std::cerr << "warning: no document for pair " << a << " / " << b << '\n';
          warned = true;
        }
        rows.push_back({a, b, "tfidf", "-", "corpus", v});
      }
      std::ofstream os(output_dir + "/baseline_scores.csv");
      trel::write_scores_csv(rows, os);
      std::cout << "wrote " << rows.size() << " rows to " << output_dir
                << "/baseline_scores.csv\n";
      return (warned && strict) ? 1 : 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
