#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "temporal_relate/pipeline.hpp"

using namespace trel;

namespace {

const std::string kDataDir = TREL_DATA_DIR;
const std::string kCli = TREL_CLI_PATH;

int run_cli(const std::string& args) {
  const int rc = std::system((kCli + " " + args + " > /dev/null 2>&1").c_str());
  return WEXITSTATUS(rc);
}

// Two tiny TSV snapshots plus a redirect file.
void write_fixture(const test::TempDir& dir) {
  test::write_file(dir.file("t1.tsv"), "A\tB\nB\tC\nA\tOldC\n");
  test::write_file(dir.file("t2.tsv"), "A\tB\nA\tC\n");
  test::write_file(dir.file("redirects.tsv"), "OldC\tC\n");
  test::write_file(dir.file("manifest.json"), R"([
    {"label": "t1", "ordinal": 1, "links": "t1.tsv", "redirects": "redirects.tsv", "format": "tsv"},
    {"label": "t2", "ordinal": 2, "links": "t2.tsv", "redirects": null, "format": "tsv"}
  ])");
}

}  // namespace

TEST_CASE("ingest builds a loadable store with redirects applied") {
  test::TempDir dir("pipe_ingest");
  write_fixture(dir);
  auto report = cmd_ingest(dir.file("manifest.json"), dir.file("store"));
  REQUIRE(report.snapshots.size() == 2);
  // A->OldC merged into A->C
  CHECK(report.snapshots[0].edges_before_redirects == 3);
  CHECK(report.snapshots[0].edges == 3);  // A->B, B->C, A->C

  SnapshotStore store(dir.file("store"));
  store.load();
  CHECK(store.snapshots().size() == 2);
  CHECK(store.labels() == std::vector<std::string>{"t1", "t2"});
  CHECK(store.resolve_name("OldC") == store.resolve_name("C"));
  CHECK(!store.resolve_name("Nope"));

  auto a = *store.resolve_name("A");
  auto c = *store.resolve_name("C");
  CHECK(store.snapshots()[0].has_edge(a, c));
}

TEST_CASE("manifest with a missing file fails") {
  test::TempDir dir("pipe_missing");
  test::write_file(dir.file("manifest.json"),
                   R"([{"label": "x", "ordinal": 1, "links": "absent.tsv", "format": "tsv"}])");
  CHECK_THROWS(cmd_ingest(dir.file("manifest.json"), dir.file("store")));
}

TEST_CASE("manifest with unknown format fails") {
  test::TempDir dir("pipe_badfmt");
  test::write_file(dir.file("manifest.json"),
                   R"([{"label": "x", "ordinal": 1, "links": "x.xml", "format": "xml"}])");
  CHECK_THROWS(load_manifest(dir.file("manifest.json")));
}

TEST_CASE("grid arithmetic: 1 pair x 2 methods x 3 modes x 2 snapshots = 12 rows") {
  test::TempDir dir("pipe_grid");
  write_fixture(dir);
  cmd_ingest(dir.file("manifest.json"), dir.file("store"));
  SnapshotStore store(dir.file("store"));
  store.load();
  ScoringConfig cfg;
  cfg.methods = {MethodTag::Jaccard, MethodTag::ExtendedRD};
  cfg.modes = {LinkMode::In, LinkMode::Out, LinkMode::InOut};
  auto rows = compute_scores(store, cfg, {{"A", "B"}});
  CHECK(rows.size() == 12);
}

TEST_CASE("scoring is deterministic, including under threading") {
  test::TempDir dir("pipe_det");
  write_fixture(dir);
  cmd_ingest(dir.file("manifest.json"), dir.file("store"));
  SnapshotStore store(dir.file("store"));
  store.load();
  ScoringConfig cfg;
  cfg.methods = {MethodTag::Jaccard, MethodTag::ExtendedRD, MethodTag::ExtendedTWxRD};
  cfg.modes = {LinkMode::InOut};
  cfg.models = {AggModel::UnionUniform, AggModel::UnionLinear};
  std::vector<std::pair<std::string, std::string>> pairs{{"A", "B"}, {"A", "C"}, {"B", "C"}};
  auto render = [&](int threads) {
    cfg.threads = threads;
    std::ostringstream os;
    write_scores_csv(compute_scores(store, cfg, pairs), os);
    return os.str();
  };
  const auto once = render(1);
  CHECK(render(1) == once);
  CHECK(render(4) == once);
}

TEST_CASE("unknown entities score 0 in every grid cell") {
  test::TempDir dir("pipe_unknown");
  write_fixture(dir);
  cmd_ingest(dir.file("manifest.json"), dir.file("store"));
  SnapshotStore store(dir.file("store"));
  store.load();
  ScoringConfig cfg;
  cfg.methods = {MethodTag::ExtendedRD};
  auto rows = compute_scores(store, cfg, {{"A", "Ghost"}});
  REQUIRE(!rows.empty());
  for (auto& r : rows) CHECK(r.value == 0.0);
}

TEST_CASE("score CSV round-trip") {
  std::vector<ScoreRow> rows{{"A", "B", "ext-rd", "inout", "t1", 0.123456789},
                             {"A", "C", "jaccard", "in", "t2", 1.0}};
  std::ostringstream os;
  write_scores_csv(rows, os);
  test::TempDir dir("pipe_csv");
  test::write_file(dir.file("s.csv"), os.str());
  auto back = read_scores_csv(dir.file("s.csv"));
  REQUIRE(back.size() == 2);
  CHECK(back[0].seed == "A");
  CHECK(back[0].value == doctest::Approx(0.123457));  // 6-decimal fixed
  CHECK(back[1].scope == "t2");
}

TEST_CASE("ego and aggregate export surfaces") {
  test::TempDir dir("pipe_export");
  write_fixture(dir);
  cmd_ingest(dir.file("manifest.json"), dir.file("store"));
  SnapshotStore store(dir.file("store"));
  store.load();
  auto a = *store.resolve_name("A");
  auto ego = extract_ego(store.snapshots()[0], a, 2);
  export_ego(ego, store.table(), dir.file("ego.tsv"), dir.file("ego.json"));
  auto tsv = test::read_file(dir.file("ego.tsv"));
  CHECK(tsv.find("A\tB") != std::string::npos);
  auto sidecar = nlohmann::json::parse(test::read_file(dir.file("ego.json")));
  CHECK(sidecar["seed"] == "A");
  CHECK(sidecar["edge_count"].get<int>() == static_cast<int>(ego.edge_count()));

  EgoSeries series{a, {ego, extract_ego(store.snapshots()[1], a, 2)}};
  auto agg = aggregate(series, AggModel::UnionUniform);
  export_aggregate(agg, store.table(), dir.file("agg.tsv"), dir.file("agg.json"));
  auto agg_tsv = test::read_file(dir.file("agg.tsv"));
  CHECK(agg_tsv.find("A\tB\t2.000000") != std::string::npos);
  auto agg_sidecar = nlohmann::json::parse(test::read_file(dir.file("agg.json")));
  CHECK(agg_sidecar["model"] == "union-uniform");
  CHECK(agg_sidecar["n"] == 2);
}

TEST_CASE("cli exit codes") {
  test::TempDir dir("pipe_cli");
  write_fixture(dir);
  const std::string store = dir.file("store");
  CHECK(run_cli("ingest --manifest " + dir.file("manifest.json") + " --store " + store) == 0);

  SUBCASE("missing manifest file names exit code 2") {
    CHECK(run_cli("ingest --manifest " + dir.file("nope.json") + " --store " + store) == 2);
  }
  SUBCASE("relate succeeds and is byte-identical across runs") {
    test::write_file(dir.file("pairs.tsv"), "A\tB\nA\tC\n");
    const std::string cmd = "relate --pairs " + dir.file("pairs.tsv") + " --store " + store +
                            " --methods ext-rd jaccard --modes in out inout --output-dir " +
                            dir.str();
    CHECK(run_cli(cmd) == 0);
    auto first = test::read_file(dir.file("scores.csv"));
    CHECK(run_cli(cmd) == 0);
    CHECK(test::read_file(dir.file("scores.csv")) == first);
    CHECK(first.find("nan") == std::string::npos);
  }
  SUBCASE("unknown entity is a warning, exit 1 only under --strict") {
    test::write_file(dir.file("pairs.tsv"), "A\tGhost\n");
    const std::string base = "relate --pairs " + dir.file("pairs.tsv") + " --store " + store +
                             " --output-dir " + dir.str();
    CHECK(run_cli(base) == 0);
    CHECK(run_cli(base + " --strict") == 1);
  }
  SUBCASE("evaluate on shipped synthetic corpus") {
    const std::string synth_store = dir.file("synth_store");
    CHECK(run_cli("ingest --manifest " + kDataDir + "/synthetic/manifest.json --store " +
                  synth_store) == 0);
    CHECK(run_cli("relate --gold " + kDataDir + "/synthetic/gold.txt --store " + synth_store +
                  " --methods ext-rd --modes inout --output-dir " + dir.str()) == 0);
    CHECK(run_cli("evaluate --gold " + kDataDir + "/synthetic/gold.txt --scores " +
                  dir.file("scores.csv") + " --store " + synth_store + " --output-dir " +
                  dir.str()) == 0);
    auto eval = nlohmann::json::parse(test::read_file(dir.file("eval.json")));
    CHECK(eval.size() == 5);  // one report per snapshot scope
    for (auto& [label, rep] : eval.items()) {
      CHECK(rep["pooled_rho"].get<double>() > 0.9);
      CHECK(rep["n_pairs"].get<int>() == 12);
    }
  }
  SUBCASE("corr-matrix across snapshot scopes") {
    test::write_file(dir.file("pairs.tsv"), "A\tB\nA\tC\nB\tC\n");
    CHECK(run_cli("relate --pairs " + dir.file("pairs.tsv") + " --store " + store +
                  " --methods ext-rd --output-dir " + dir.str()) == 0);
    CHECK(run_cli("corr-matrix --scores " + dir.file("scores.csv") + " --store " + store +
                  " --output-dir " + dir.str()) == 0);
    auto csv = test::read_file(dir.file("corr_matrix.csv"));
    CHECK(csv.find("t1,t2,") != std::string::npos);
  }
  SUBCASE("baseline-text on the sample corpus") {
    test::write_file(dir.file("pairs.tsv"), "Seed_A\tCA6\nSeed_A\tCA1\n");
    CHECK(run_cli("baseline-text --corpus " + kDataDir + "/corpus_sample --stopwords " +
                  kDataDir + "/stopwords_en.txt --pairs " + dir.file("pairs.tsv") +
                  " --store " + store + " --output-dir " + dir.str()) == 0);
    auto rows = read_scores_csv(dir.file("baseline_scores.csv"));
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].value > rows[1].value);  // CA6's article overlaps more
  }
  SUBCASE("aggregate export command") {
    CHECK(run_cli("aggregate --seeds A --models union-uniform --store " + store +
                  " --output-dir " + dir.str()) == 0);
    CHECK(std::filesystem::exists(dir.file("agg_A_union-uniform.tsv")));
  }
  SUBCASE("evolve emits one row per snapshot") {
    CHECK(run_cli("evolve --a A --b B --store " + store + " --output-dir " + dir.str()) == 0);
    std::ifstream is(dir.file("evolve.csv"));
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(is, line)) lines.push_back(line);
    REQUIRE(lines.size() == 3);  // header + one row per snapshot
    CHECK(lines[0] == "label,score");
    CHECK(lines[1].rfind("t1,", 0) == 0);
    CHECK(lines[2].rfind("t2,", 0) == 0);
  }
}

TEST_CASE("env var supplies the default thread count") {
  test::TempDir dir("pipe_env");
  write_fixture(dir);
  const std::string store = dir.file("store");
  REQUIRE(run_cli("ingest --manifest " + dir.file("manifest.json") + " --store " + store) == 0);
  test::write_file(dir.file("pairs.tsv"), "A\tB\n");
  const int rc = std::system(("TEMPORAL_RELATE_THREADS=3 " + kCli + " relate --pairs " +
                              dir.file("pairs.tsv") + " --store " + store + " --output-dir " +
                              dir.str() + " > /dev/null 2>&1")
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == 0);
}
