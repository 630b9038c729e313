#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "eigraph/harness.hpp"
#include "eigraph/io.hpp"
#include "eigraph/rng.hpp"

using namespace eigraph;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("eigraph_harness_" + std::to_string(make_rng(std::random_device{}())()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

SynthSweepOptions tiny_sweep() {
  SynthSweepOptions opt;
  opt.base.num_nodes = 120;
  opt.base.num_communities = 3;
  opt.base.prob_in = 0.25;
  opt.base.prob_out = 0.02;
  opt.base.feature_dim = 8;
  opt.base.seed = 3;
  opt.gammas = {0.0, 1.0};
  opt.methods = {"mlp", "gcn2", "eigen_gcn"};
  opt.repetitions = 2;
  opt.train_per_class = 5;
  opt.val_per_class = 5;
  opt.d = 4;
  opt.hidden = 8;
  opt.train.max_epochs = 40;
  opt.train.early_stop_rounds = 0;
  return opt;
}

bool same_rows(const std::vector<SweepRow>& a, const std::vector<SweepRow>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].gamma != b[i].gamma || a[i].method != b[i].method || a[i].d != b[i].d ||
        a[i].train_per_class != b[i].train_per_class || a[i].rep != b[i].rep ||
        a[i].seed != b[i].seed || a[i].test_acc != b[i].test_acc ||
        a[i].best_val_acc != b[i].best_val_acc || a[i].best_epoch != b[i].best_epoch ||
        a[i].epochs_run != b[i].epochs_run)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("synth sweep covers the full grid deterministically") {
  const SynthSweepOptions opt = tiny_sweep();
  const std::vector<SweepRow> rows = run_synth_sweep(opt);
  CHECK(rows.size() == 2 * 3 * 2);  // gammas x methods x reps

  for (const SweepRow& row : rows) {
    CHECK((row.gamma == 0.0 || row.gamma == 1.0));
    CHECK(row.test_acc >= 0.0);
    CHECK(row.test_acc <= 1.0);
    CHECK(row.best_val_acc >= 0.0);
    CHECK(row.best_val_acc <= 1.0);
    CHECK(row.epochs_run == 40);
    CHECK(row.train_per_class == 5);
    CHECK(row.d == (row.method == "eigen_gcn" ? 4 : 0));
  }

  // rows arrive sorted by (gamma, method, d, train size, rep)
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto key = [](const SweepRow& r) {
      return std::make_tuple(r.gamma, r.method, r.d, r.train_per_class, r.rep);
    };
    CHECK(key(rows[i - 1]) <= key(rows[i]));
  }

  CHECK(same_rows(rows, run_synth_sweep(opt)));
}

TEST_CASE("train size grid multiplies rows and nests the splits") {
  SynthSweepOptions opt = tiny_sweep();
  opt.gammas = {1.0};
  opt.methods = {"mlp"};
  opt.repetitions = 1;
  opt.train_sizes = {5, 10};
  const std::vector<SweepRow> rows = run_synth_sweep(opt);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].train_per_class == 5);
  CHECK(rows[1].train_per_class == 10);
  CHECK(rows[0].seed == rows[1].seed);  // same repetition, same data

  // the split shuffle is shared, so the smaller train set is a prefix
  SynthConfig cfg = opt.base;
  cfg.gamma = 1.0;
  cfg.seed = derive_seed(opt.base.seed, 1000);
  const SynthDataset small = generate_synth(cfg, 5, opt.val_per_class);
  const SynthDataset big = generate_synth(cfg, 10, opt.val_per_class);
  for (int node : small.splits.train)
    CHECK(std::find(big.splits.train.begin(), big.splits.train.end(), node) !=
          big.splits.train.end());
}

TEST_CASE("sweep rows stream in completion order and survive thread fan-out") {
  SynthSweepOptions opt = tiny_sweep();
  std::vector<SweepRow> streamed;
  opt.on_row = [&](const SweepRow& row) { streamed.push_back(row); };
  const std::vector<SweepRow> rows = run_synth_sweep(opt);
  REQUIRE(streamed.size() == rows.size());
  std::stable_sort(streamed.begin(), streamed.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(a.gamma, a.method, a.d, a.train_per_class, a.rep) <
           std::make_tuple(b.gamma, b.method, b.d, b.train_per_class, b.rep);
  });
  CHECK(same_rows(streamed, rows));

  SynthSweepOptions threaded = tiny_sweep();
  threaded.threads = 2;
  CHECK(same_rows(run_synth_sweep(threaded), rows));
}

TEST_CASE("sweep repetitions see different data but shared method seeds per rep") {
  const SynthSweepOptions opt = tiny_sweep();
  const std::vector<SweepRow> rows = run_synth_sweep(opt);
  // same (gamma, method) across reps: seeds must differ
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = i + 1; j < rows.size(); ++j)
      if (rows[i].gamma == rows[j].gamma && rows[i].method == rows[j].method)
        CHECK(rows[i].seed != rows[j].seed);
  // same (method, rep) across gammas: identical run seed, dataset differs only in labels
  for (const SweepRow& a : rows)
    for (const SweepRow& b : rows)
      if (a.method == b.method && a.rep == b.rep) CHECK(a.seed == b.seed);
}

TEST_CASE("synth sweep rejects unknown methods and empty grids") {
  SynthSweepOptions opt = tiny_sweep();
  opt.methods = {"gat"};
  CHECK_THROWS_WITH_AS(run_synth_sweep(opt), doctest::Contains("unknown method 'gat'"),
                       std::invalid_argument);
  opt.methods.clear();
  CHECK_THROWS_AS(run_synth_sweep(opt), std::invalid_argument);
  opt = tiny_sweep();
  opt.repetitions = 0;
  CHECK_THROWS_AS(run_synth_sweep(opt), std::invalid_argument);
}

TEST_CASE("summaries aggregate per (gamma, method, d) with sample statistics") {
  std::vector<SweepRow> rows;
  SweepRow row;
  row.method = "mlp";
  row.gamma = 0.5;
  row.test_acc = 0.4;
  row.rep = 0;
  rows.push_back(row);
  row.test_acc = 0.6;
  row.rep = 1;
  rows.push_back(row);
  row.method = "eigen_gcn";
  row.d = 4;
  row.test_acc = 0.9;
  rows.push_back(row);

  const std::vector<SummaryRow> summary = summarize_sweep(rows);
  CHECK(summary.size() == 2);
  const SummaryRow* mlp = find_summary(summary, 0.5, "mlp");
  REQUIRE(mlp != nullptr);
  CHECK(mlp->count == 2);
  CHECK(mlp->mean == doctest::Approx(0.5));
  CHECK(mlp->stddev == doctest::Approx(std::sqrt(0.02)));  // sample std of {0.4, 0.6}
  const SummaryRow* eig = find_summary(summary, 0.5, "eigen_gcn", 4);
  REQUIRE(eig != nullptr);
  CHECK(eig->count == 1);
  CHECK(eig->stddev == 0.0);
  CHECK(find_summary(summary, 0.5, "eigen_gcn", 8) == nullptr);
  CHECK(find_summary(summary, 0.25, "mlp") == nullptr);
}

TEST_CASE("result files round-trip through csv and manifest json") {
  TempDir tmp;
  const SynthSweepOptions opt = tiny_sweep();
  std::vector<SweepRow> rows = run_synth_sweep(opt);

  const std::string sweep_path = (tmp.path / "results.csv").string();
  write_sweep_csv(sweep_path, rows);
  const std::vector<std::string> lines = read_lines(sweep_path);
  REQUIRE(lines.size() == rows.size() + 1);
  CHECK(lines[0] ==
        "gamma,method,d,train_per_class,rep,seed,test_acc,best_val_acc,best_epoch,epochs_run");
  CHECK(lines[1] == sweep_csv_line(rows[0]));

  const std::string summary_path = (tmp.path / "summary.csv").string();
  write_summary_csv(summary_path, summarize_sweep(rows));
  CHECK(read_lines(summary_path).size() == summarize_sweep(rows).size() + 1);

  const std::string manifest_path = (tmp.path / "manifest.json").string();
  write_manifest(manifest_path, "synth_sweep", options_json(opt));
  const nlohmann::json manifest = nlohmann::json::parse(read_text(manifest_path));
  CHECK(manifest.at("task") == "synth_sweep");
  CHECK(manifest.at("version") == std::string(kVersion));
  CHECK(manifest.at("options").at("d") == 4);
  CHECK(manifest.at("options").at("base").at("num_nodes") == 120);
  CHECK(manifest.at("options").at("train").at("max_epochs") == 40);
  CHECK(manifest.at("options").at("methods").size() == 3);
}

TEST_CASE("csl task trains every method on every fold") {
  CslOptions opt;
  opt.n = 11;
  opt.r_set = {2, 3};
  opt.copies = 4;
  opt.num_folds = 2;
  opt.d = 3;
  opt.hidden = 8;
  opt.random_dim = 4;
  opt.seed = 5;
  opt.train.max_epochs = 25;

  const std::vector<CslRow> rows = run_csl(opt);
  CHECK(rows.size() == 3 * 2);  // methods x folds
  for (const CslRow& row : rows) {
    CHECK(row.test_acc >= 0.0);
    CHECK(row.test_acc <= 1.0);
    CHECK(row.fold < 2);
  }
  const std::vector<SummaryRow> summary = summarize_csl(rows);
  CHECK(summary.size() == 3);
  for (const SummaryRow& s : summary) CHECK(s.count == 2);

  // bitwise reproducible
  const std::vector<CslRow> again = run_csl(opt);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].method == again[i].method);
    CHECK(rows[i].test_acc == again[i].test_acc);
  }

  TempDir tmp;
  const std::string path = (tmp.path / "csl.csv").string();
  write_csl_csv(path, rows);
  CHECK(read_lines(path).size() == rows.size() + 1);

  opt.methods = {"gin_attention"};
  CHECK_THROWS_WITH_AS(run_csl(opt), doctest::Contains("unknown method"),
                       std::invalid_argument);
}

TEST_CASE("verify checks pass on freshly generated inputs") {
  VerifyOptions opt;
  opt.equivariance_pairs = 3;
  opt.spectral_graphs = 12;
  opt.sgc_graphs = 2;
  opt.sgc_nodes = 60;
  opt.sgc_edge_prob = 0.12;
  opt.sgc_propagations = 150;
  opt.seed = 11;

  const std::vector<VerifyCheck> checks = run_verify(opt);
  REQUIRE(checks.size() == 4);
  CHECK(checks[0].name == "permutation_equivariance");
  CHECK(checks[1].name == "sgc_limit");
  CHECK(checks[2].name == "spectral_bounds");
  CHECK(checks[3].name == "iteration_cost");
  for (const VerifyCheck& c : checks) {
    INFO(c.name, ": ", c.detail);
    CHECK(c.pass);
  }
  CHECK(all_pass(checks));
  CHECK(!all_pass({}));

  TempDir tmp;
  const std::string path = (tmp.path / "verify.csv").string();
  write_verify_csv(path, checks);
  const std::vector<std::string> lines = read_lines(path);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "name,pass,deviation,detail");
}

TEST_CASE("bench scaling measures both doubling series") {
  BenchOptions opt;
  opt.base_nodes = 500;
  opt.base_edges = 4000;
  opt.doublings = 1;
  opt.d = 8;
  opt.seed = 7;

  const std::vector<BenchRow> rows = run_bench_scaling(opt);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].series == "edges");
  CHECK(rows[1].num_edges == 8000);
  CHECK(rows[2].series == "nodes");
  CHECK(rows[3].num_nodes == 1000);
  // the shared base config is measured once and reported in both series
  CHECK(rows[0].seconds == rows[2].seconds);
  for (const BenchRow& row : rows) {
    CHECK(row.seconds > 0.0);
    CHECK(row.iterations > 0);
    CHECK(row.converged);
  }

  CHECK(bench_ratios(rows, "edges").size() == 1);
  CHECK(bench_ratios(rows, "nodes").size() == 1);
  CHECK(bench_ratios(rows, "edges")[0] > 0.0);

  TempDir tmp;
  const std::string path = (tmp.path / "bench.csv").string();
  write_bench_csv(path, rows);
  const std::vector<std::string> lines = read_lines(path);
  REQUIRE(lines.size() == 5);
  CHECK(lines[0] == "series,num_nodes,num_edges,seconds,iterations,converged");
}

TEST_CASE("d sweep varies only the eigenbasis width") {
  DSweepOptions opt;
  opt.base.num_nodes = 120;
  opt.base.num_communities = 3;
  opt.base.prob_in = 0.25;
  opt.base.prob_out = 0.02;
  opt.base.feature_dim = 8;
  opt.base.seed = 13;
  opt.d_values = {2, 4};
  opt.repetitions = 2;
  opt.train_per_class = 5;
  opt.val_per_class = 5;
  opt.hidden = 8;
  opt.train.max_epochs = 40;
  opt.train.early_stop_rounds = 0;

  const std::vector<SweepRow> rows = run_d_sweep(opt);
  REQUIRE(rows.size() == 4);
  for (const SweepRow& row : rows) {
    CHECK(row.gamma == 1.0);
    CHECK(row.method == "eigen_gcn");
    CHECK((row.d == 2 || row.d == 4));
  }
  int d2 = 0, d4 = 0;
  for (const SweepRow& row : rows) (row.d == 2 ? d2 : d4) += 1;
  CHECK(d2 == 2);
  CHECK(d4 == 2);

  const std::vector<SweepRow> again = run_d_sweep(opt);
  REQUIRE(again.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].test_acc == again[i].test_acc);
}
