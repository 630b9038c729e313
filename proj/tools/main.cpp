// eigraph: dataset generation, eigenbasis extraction, model training, and the
// experiment tasks (sweeps, cross-validation, verification, scaling bench).
// Every run writes its resolved options to a JSON manifest next to the
// results so the exact run can be replayed.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "eigraph/csl.hpp"
#include "eigraph/harness.hpp"
#include "eigraph/io.hpp"
#include "eigraph/nn.hpp"
#include "eigraph/plugin.hpp"
#include "eigraph/rng.hpp"
#include "eigraph/spectral.hpp"
#include "eigraph/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace eigraph;

namespace {

// --config JSON supplies values for flags the command line leaves untouched;
// explicit flags win. Keys mirror the long flag names without the dashes.
json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json j;
  in >> j;
  if (!j.is_object()) throw std::runtime_error("config root must be a JSON object: " + path);
  return j;
}

template <typename T>
void fill(const CLI::App& cmd, const json& cfg, const std::string& flag, const std::string& key,
          T& value) {
  if (cmd.count(flag) > 0) return;  // explicit flag wins
  if (const auto it = cfg.find(key); it != cfg.end()) value = it->get<T>();
}

json train_json(const TrainConfig& cfg) {
  return json{{"learning_rate", cfg.learning_rate}, {"weight_decay", cfg.weight_decay},
              {"dropout", cfg.dropout},             {"max_epochs", cfg.max_epochs},
              {"early_stop_rounds", cfg.early_stop_rounds}};
}

void fill_train(const CLI::App& cmd, const json& cfg, TrainConfig& train) {
  const json sub = cfg.value("train", json::object());
  fill(cmd, sub, "--lr", "learning_rate", train.learning_rate);
  fill(cmd, sub, "--weight-decay", "weight_decay", train.weight_decay);
  fill(cmd, sub, "--dropout", "dropout", train.dropout);
  fill(cmd, sub, "--max-epochs", "max_epochs", train.max_epochs);
  fill(cmd, sub, "--early-stop", "early_stop_rounds", train.early_stop_rounds);
}

// sweep has no per-field flags for the blockmodel itself; the config file's
// "base" object adjusts it after the preset is applied.
void fill_base(const json& cfg, SynthConfig& base) {
  const json sub = cfg.value("base", json::object());
  if (sub.contains("num_nodes")) base.num_nodes = sub["num_nodes"].get<int>();
  if (sub.contains("num_communities")) base.num_communities = sub["num_communities"].get<int>();
  if (sub.contains("prob_in")) base.prob_in = sub["prob_in"].get<double>();
  if (sub.contains("prob_out")) base.prob_out = sub["prob_out"].get<double>();
  if (sub.contains("feature_dim")) base.feature_dim = sub["feature_dim"].get<int>();
  if (sub.contains("group_var")) base.group_var = sub["group_var"].get<double>();
  if (sub.contains("min_group_dist")) base.min_group_dist = sub["min_group_dist"].get<double>();
}

void add_train_flags(CLI::App* cmd, TrainConfig& train) {
  cmd->add_option("--lr", train.learning_rate, "Adam learning rate");
  cmd->add_option("--weight-decay", train.weight_decay, "L2 penalty on weights");
  cmd->add_option("--dropout", train.dropout, "dropout probability on layer inputs");
  cmd->add_option("--max-epochs", train.max_epochs, "training epoch budget");
  cmd->add_option("--early-stop", train.early_stop_rounds,
                  "stop after this many epochs without a validation gain (0 = off)");
}

void write_run_manifest(const fs::path& dir, const std::string& task, const json& options) {
  fs::create_directories(dir);
  json manifest;
  manifest["task"] = task;
  manifest["version"] = kVersion;
  manifest["options"] = options;
  write_text((dir / "run_manifest.json").string(), manifest.dump(2) + "\n");
}

// Open CSV stream that keeps whatever was written if the process dies or a
// later repetition throws; discard() removes it once the sorted file exists.
struct PartialCsv {
  fs::path partial;
  std::ofstream out;

  PartialCsv(const fs::path& dir, const std::string& header) {
    fs::create_directories(dir);
    partial = dir / "results.partial.csv";
    out.open(partial, std::ios::trunc);
    out << header << '\n';
    out.flush();
  }
  void add(const std::string& line) {
    out << line << '\n';
    out.flush();
  }
  void discard() {
    out.close();
    fs::remove(partial);
  }
};

int cmd_gen_synth(const CLI::App& cmd, const json& cfg, SynthConfig base,
                  const std::string& preset, int train_per_class, int val_per_class,
                  const std::string& out_dir) {
  if (preset == "paper")
    base = paper_preset();
  else if (preset == "desk")
    base = desk_preset();
  else if (!preset.empty())
    throw std::runtime_error("unknown preset '" + preset + "' (expected desk or paper)");

  fill(cmd, cfg, "--num-nodes", "num_nodes", base.num_nodes);
  fill(cmd, cfg, "--communities", "num_communities", base.num_communities);
  fill(cmd, cfg, "--p-in", "prob_in", base.prob_in);
  fill(cmd, cfg, "--p-out", "prob_out", base.prob_out);
  fill(cmd, cfg, "--feature-dim", "feature_dim", base.feature_dim);
  fill(cmd, cfg, "--group-var", "group_var", base.group_var);
  fill(cmd, cfg, "--min-group-dist", "min_group_dist", base.min_group_dist);
  fill(cmd, cfg, "--gamma", "gamma", base.gamma);
  fill(cmd, cfg, "--seed", "seed", base.seed);

  const SynthDataset data = generate_synth(base, train_per_class, val_per_class);
  save_synth_dataset(data, base, out_dir);
  json options;
  options["config"] = json::parse(read_text((fs::path(out_dir) / "config.json").string()));
  options["train_per_class"] = train_per_class;
  options["val_per_class"] = val_per_class;
  write_run_manifest(out_dir, "gen_synth", options);
  std::printf("wrote %d nodes, %lld undirected edges, %d features to %s\n", data.graph.num_nodes,
              static_cast<long long>(data.graph.num_undirected_edges()), data.features.cols(),
              out_dir.c_str());
  return 0;
}

int cmd_gen_csl(int n, const std::vector<int>& r_set, int copies, int folds, std::uint64_t seed,
                const std::string& out_dir) {
  const CslDataset data = build_csl_dataset(n, r_set, copies, folds, seed);
  save_csl_dataset(data, out_dir);
  json options;
  options["n"] = n;
  options["r_set"] = data.r_set;
  options["copies"] = copies;
  options["num_folds"] = folds;
  options["seed"] = seed;
  write_run_manifest(out_dir, "gen_csl", options);
  std::printf("wrote %zu graphs (%zu classes x %d copies) to %s\n", data.graphs.size(),
              data.r_set.size(), copies, out_dir.c_str());
  return 0;
}

int cmd_eigen(const std::string& edges_path, int num_nodes, int d, const std::string& kind_name,
              int power, const std::string& f_name, double tol, std::uint64_t seed,
              const std::string& out_dir) {
  if (edges_path.empty()) throw std::runtime_error("eigen: --edges is required");
  const SparseGraph g = load_edge_list(edges_path, num_nodes);
  const StructureKind kind = structure_kind_from_string(kind_name);
  StructureMatrix m;
  switch (kind) {
    case StructureKind::renorm_adjacency: m = renormalized_adjacency(g); break;
    case StructureKind::plain_norm_adjacency: m = plain_normalized_adjacency(g); break;
    case StructureKind::transition_power: m = transition_power(g, power); break;
  }
  const FMode f_mode = f_mode_from_string(f_name);
  const EigenBasis basis = top_eigenpairs(m, d, tol, 0, seed);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  save_eigenbasis((dir / "eigenbasis.txt").string(), basis);
  const InitialBasis h0 = build_initial_basis(nullptr, &basis, f_mode);
  save_initial_basis((dir / "basis.csv").string(), h0, seed);

  json report;
  report["converged"] = basis.converged;
  report["iterations"] = basis.iterations_used;
  report["worst_residual"] = basis.worst_residual();
  report["eigenvalues"] = basis.eigenvalues;
  write_text((dir / "report.json").string(), report.dump(2) + "\n");

  json options;
  options["edges"] = edges_path;
  options["num_nodes"] = g.num_nodes;
  options["d"] = d;
  options["kind"] = kind_name;
  options["power"] = power;
  options["f_mode"] = f_name;
  options["tol"] = tol;
  options["seed"] = seed;
  write_run_manifest(dir, "eigen", options);

  std::printf("%s: d=%d iterations=%lld worst_residual=%.3e\n",
              basis.converged ? "converged" : "NOT CONVERGED", d,
              static_cast<long long>(basis.iterations_used), basis.worst_residual());
  return basis.converged ? 0 : 1;
}

int cmd_train(const std::string& data_dir, const std::string& method, int d,
              const std::string& f_name, int hidden, TrainConfig run_cfg, std::uint64_t seed,
              const std::string& out_dir) {
  if (data_dir.empty()) throw std::runtime_error("train: --data is required");
  const SynthDataset data = load_synth_dataset(data_dir);
  const StructureMatrix structure = renormalized_adjacency(data.graph);
  const FMode f_mode = f_mode_from_string(f_name);
  run_cfg.seed = seed;

  int classes = 0;
  for (int l : data.labels) classes = std::max(classes, l + 1);
  // same input pipeline as the sweep harness: unit-length feature rows
  const Matrix x = row_normalize(data.features);
  const int f = x.cols();

  Model init;
  const StructureMatrix* m = &structure;
  Matrix h0 = x;
  if (method == "mlp") {
    init = init_model(Arch::mlp, {f, hidden, classes}, seed);
    m = nullptr;
  } else if (method == "gcn1") {
    init = init_model(Arch::gcn, {f, classes}, seed);
  } else if (method == "gcn2") {
    init = init_model(Arch::gcn, {f, hidden, classes}, seed, true);
  } else if (method == "gcn3") {
    init = init_model(Arch::gcn, {f, hidden, hidden, classes}, seed, true);
  } else if (method == "eigen_gcn") {
    const EigenBasis basis = top_eigenpairs(structure, d, 1e-10, 0, derive_seed(seed, 77));
    const InitialBasis ib = build_initial_basis(&x, &basis, f_mode);
    h0 = ib.matrix;
    init = init_model(Arch::gcn, {h0.cols(), hidden, classes}, seed);
  } else {
    throw std::runtime_error("train: unknown method '" + method + "'");
  }
  const TrainResult res = train(init, m, h0, data.labels, data.splits, run_cfg);

  const fs::path dir(out_dir);
  fs::create_directories(dir);
  std::ostringstream history;
  history << "epoch,train_loss,val_acc,test_acc\n";
  for (const EpochRecord& e : res.history)
    history << e.epoch << ',' << e.train_loss << ',' << e.val_acc << ',' << e.test_acc << '\n';
  write_text((dir / "history.csv").string(), history.str());

  json result;
  result["method"] = method;
  result["best_epoch"] = res.best_epoch;
  result["best_val_acc"] = res.best_val_acc;
  result["test_acc"] = res.test_acc_at_best;
  result["epochs_run"] = res.history.size();
  write_text((dir / "result.json").string(), result.dump(2) + "\n");

  json options;
  options["data"] = data_dir;
  options["method"] = method;
  options["d"] = d;
  options["f_mode"] = f_name;
  options["hidden"] = hidden;
  options["seed"] = seed;
  options["train"] = train_json(run_cfg);
  write_run_manifest(dir, "train", options);

  std::printf("%s: best epoch %d, val %.4f, test %.4f\n", method.c_str(), res.best_epoch,
              res.best_val_acc, res.test_acc_at_best);
  return 0;
}

int cmd_verify(const VerifyOptions& opt, const std::string& out_dir) {
  const std::vector<VerifyCheck> checks = run_verify(opt);
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  write_verify_csv((dir / "verify.csv").string(), checks);
  write_run_manifest(dir, "verify", json::parse(options_json(opt)));
  for (const VerifyCheck& c : checks)
    std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  return all_pass(checks) ? 0 : 1;
}

int cmd_bench(const BenchOptions& opt, bool no_band_check, double band_lo, double band_hi,
              const std::string& out_dir) {
  const fs::path dir(out_dir);
  write_run_manifest(dir, "bench_scaling", json::parse(options_json(opt)));
  const std::vector<BenchRow> rows = run_bench_scaling(opt);
  write_bench_csv((dir / "bench.csv").string(), rows);

  bool ok = true;
  for (const BenchRow& row : rows) {
    std::printf("%s N=%d E=%lld: %.3f s (%lld iterations%s)\n", row.series.c_str(),
                row.num_nodes, static_cast<long long>(row.num_edges), row.seconds,
                static_cast<long long>(row.iterations), row.converged ? "" : ", NOT CONVERGED");
    ok = ok && row.converged;
  }
  for (const char* series : {"edges", "nodes"}) {
    for (double r : bench_ratios(rows, series)) {
      const bool in_band = r >= band_lo && r <= band_hi;
      std::printf("%s doubling time ratio %.3f%s\n", series, r,
                  no_band_check ? "" : (in_band ? " (within band)" : " (OUT OF BAND)"));
      if (!no_band_check) ok = ok && in_band;
    }
  }
  return ok ? 0 : 1;
}

int sweep_synth(const SynthSweepOptions& opt, const fs::path& dir) {
  SynthSweepOptions run = opt;
  PartialCsv partial(dir, sweep_csv_header());
  run.on_row = [&](const SweepRow& row) { partial.add(sweep_csv_line(row)); };
  write_run_manifest(dir, "synth_sweep", json::parse(options_json(run)));
  const std::vector<SweepRow> rows = run_synth_sweep(run);
  write_sweep_csv((dir / "results.csv").string(), rows);
  const std::vector<SummaryRow> summary = summarize_sweep(rows);
  write_summary_csv((dir / "summary.csv").string(), summary);
  partial.discard();
  for (const SummaryRow& s : summary)
    std::printf("gamma=%.2f %-10s d=%-3d train=%-3d acc %.4f +- %.4f (n=%d)\n", s.gamma,
                s.method.c_str(), s.d, s.train_per_class, s.mean, s.stddev, s.count);
  return 0;
}

int sweep_csl(const CslOptions& opt, const fs::path& dir) {
  CslOptions run = opt;
  PartialCsv partial(dir, csl_csv_header());
  run.on_row = [&](const CslRow& row) { partial.add(csl_csv_line(row)); };
  write_run_manifest(dir, "csl", json::parse(options_json(run)));
  const std::vector<CslRow> rows = run_csl(run);
  write_csl_csv((dir / "results.csv").string(), rows);
  const std::vector<SummaryRow> summary = summarize_csl(rows);
  write_summary_csv((dir / "summary.csv").string(), summary);
  partial.discard();
  for (const SummaryRow& s : summary)
    std::printf("%-12s acc %.4f +- %.4f over %d folds\n", s.method.c_str(), s.mean, s.stddev,
                s.count);
  return 0;
}

int sweep_d(const DSweepOptions& opt, const fs::path& dir) {
  DSweepOptions run = opt;
  PartialCsv partial(dir, sweep_csv_header());
  run.on_row = [&](const SweepRow& row) { partial.add(sweep_csv_line(row)); };
  write_run_manifest(dir, "d_sweep", json::parse(options_json(run)));
  const std::vector<SweepRow> rows = run_d_sweep(run);
  write_sweep_csv((dir / "results.csv").string(), rows);
  const std::vector<SummaryRow> summary = summarize_sweep(rows);
  write_summary_csv((dir / "summary.csv").string(), summary);
  partial.discard();
  for (const SummaryRow& s : summary)
    std::printf("d=%-3d acc %.4f +- %.4f (n=%d)\n", s.d, s.mean, s.stddev, s.count);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse-graph eigenbasis toolkit"};
  app.require_subcommand(1);

  std::string config_path;

  // ---- gen-synth
  auto* gen_synth = app.add_subcommand("gen-synth", "generate a blockmodel dataset directory");
  SynthConfig synth_base = desk_preset();
  std::string synth_preset;
  int gs_train = 20, gs_val = 30;
  std::string gs_out = "synth_data";
  gen_synth->add_option("--config", config_path, "JSON file with option defaults");
  gen_synth->add_option("--preset", synth_preset, "desk or paper scale");
  gen_synth->add_option("--num-nodes", synth_base.num_nodes, "node count");
  gen_synth->add_option("--communities", synth_base.num_communities, "community count");
  gen_synth->add_option("--p-in", synth_base.prob_in, "within-community edge probability");
  gen_synth->add_option("--p-out", synth_base.prob_out, "cross-community edge probability");
  gen_synth->add_option("--feature-dim", synth_base.feature_dim, "feature dimensionality");
  gen_synth->add_option("--group-var", synth_base.group_var, "group vector variance");
  gen_synth->add_option("--min-group-dist", synth_base.min_group_dist,
                        "minimum pairwise group vector distance");
  gen_synth->add_option("--gamma", synth_base.gamma,
                        "probability a label follows the structure community");
  gen_synth->add_option("--seed", synth_base.seed, "master seed");
  gen_synth->add_option("--train-per-class", gs_train, "train nodes per class");
  gen_synth->add_option("--val-per-class", gs_val, "validation nodes per class");
  gen_synth->add_option("--out", gs_out, "output directory");

  // ---- gen-csl
  auto* gen_csl = app.add_subcommand("gen-csl", "generate a circulant skip-link dataset");
  int gc_n = 41, gc_copies = 60, gc_folds = 5;
  std::vector<int> gc_r{2, 3, 4, 5, 6, 9, 11, 12, 13, 16};
  std::uint64_t gc_seed = 0;
  std::string gc_out = "csl_data";
  gen_csl->add_option("--config", config_path, "JSON file with option defaults");
  gen_csl->add_option("--n", gc_n, "nodes per graph");
  gen_csl->add_option("--r", gc_r, "skip lengths, one class each");
  gen_csl->add_option("--copies", gc_copies, "copies per class");
  gen_csl->add_option("--folds", gc_folds, "stratified fold count");
  gen_csl->add_option("--seed", gc_seed, "master seed");
  gen_csl->add_option("--out", gc_out, "output directory");

  // ---- eigen
  auto* eigen = app.add_subcommand("eigen", "extract the top-d eigenbasis of a graph");
  std::string eg_edges, eg_kind = "renorm_adjacency", eg_f = "identity";
  std::string eg_out = "eigen_out";
  int eg_nodes = -1, eg_d = 32, eg_power = 1;
  double eg_tol = 1e-10;
  std::uint64_t eg_seed = 0;
  eigen->add_option("--config", config_path, "JSON file with option defaults");
  eigen->add_option("--edges", eg_edges, "edge list file");
  eigen->add_option("--num-nodes", eg_nodes, "node count (default: 1 + max index)");
  eigen->add_option("--d", eg_d, "eigenpair count");
  eigen->add_option("--kind", eg_kind,
                    "structure matrix: renorm_adjacency, plain_norm_adjacency, transition_power");
  eigen->add_option("--power", eg_power, "transition matrix power K");
  eigen->add_option("--f", eg_f, "basis transform: identity, abs, frobenius_norm");
  eigen->add_option("--tol", eg_tol, "residual tolerance");
  eigen->add_option("--seed", eg_seed, "Lanczos start vector seed");
  eigen->add_option("--out", eg_out, "output directory");

  // ---- train
  auto* tr = app.add_subcommand("train", "train one model on a stored dataset");
  std::string tr_data, tr_method = "eigen_gcn", tr_f = "identity", tr_out = "train_out";
  int tr_d = 32, tr_hidden = 16;
  std::uint64_t tr_seed = 0;
  TrainConfig tr_cfg;
  tr->add_option("--config", config_path, "JSON file with option defaults");
  tr->add_option("--data", tr_data, "dataset directory from gen-synth");
  tr->add_option("--method", tr_method, "mlp, gcn1, gcn2, gcn3, or eigen_gcn");
  tr->add_option("--d", tr_d, "eigenbasis width for eigen_gcn");
  tr->add_option("--f", tr_f, "basis transform");
  tr->add_option("--hidden", tr_hidden, "hidden layer width");
  tr->add_option("--seed", tr_seed, "init/train seed");
  tr->add_option("--out", tr_out, "output directory");
  add_train_flags(tr, tr_cfg);

  // ---- verify
  auto* ver = app.add_subcommand("verify", "run the property checks and report pass/fail");
  VerifyOptions ver_opt;
  std::string ver_out = "verify_out";
  ver->add_option("--config", config_path, "JSON file with option defaults");
  ver->add_option("--equivariance-pairs", ver_opt.equivariance_pairs,
                  "permuted graph pairs to compare");
  ver->add_option("--equivariance-d", ver_opt.equivariance_d, "eigenbasis width for the pairs");
  ver->add_option("--spectral-graphs", ver_opt.spectral_graphs, "graphs for the bounds check");
  ver->add_option("--sgc-graphs", ver_opt.sgc_graphs, "graphs for the propagation limit check");
  ver->add_option("--sgc-nodes", ver_opt.sgc_nodes, "nodes per limit-check graph");
  ver->add_option("--sgc-edge-prob", ver_opt.sgc_edge_prob, "edge probability for those graphs");
  ver->add_option("--sgc-propagations", ver_opt.sgc_propagations, "propagation count");
  ver->add_option("--seed", ver_opt.seed, "master seed");
  ver->add_option("--out", ver_out, "output directory");

  // ---- bench
  auto* bench = app.add_subcommand("bench", "time the solver while doubling edges and nodes");
  BenchOptions bench_opt;
  std::string bench_out = "bench_out";
  bool no_band_check = false;
  std::vector<double> band{1.5, 2.8};
  bench->add_option("--config", config_path, "JSON file with option defaults");
  bench->add_option("--base-nodes", bench_opt.base_nodes, "node count of the base graph");
  bench->add_option("--base-edges", bench_opt.base_edges, "edge count of the base graph");
  bench->add_option("--doublings", bench_opt.doublings, "doublings per series");
  bench->add_option("--d", bench_opt.d, "eigenpair count");
  bench->add_option("--tol", bench_opt.tol, "residual tolerance");
  bench->add_option("--seed", bench_opt.seed, "graph and solver seed");
  bench->add_option("--band", band, "acceptable time-ratio band (two numbers)")->expected(2);
  bench->add_flag("--no-band-check", no_band_check,
                  "report ratios without failing on out-of-band values");
  bench->add_option("--out", bench_out, "output directory");

  // ---- sweep
  auto* sweep = app.add_subcommand("sweep", "run a full experiment grid");
  std::string sweep_task = "synth", sweep_preset, sweep_out = "sweep_out", sweep_f;
  SynthSweepOptions sw_synth;
  CslOptions sw_csl;
  DSweepOptions sw_d;
  TrainConfig sweep_train;
  sweep->add_option("--config", config_path, "JSON file with option defaults");
  sweep->add_option("--task", sweep_task, "synth, csl, or d");
  sweep->add_option("--preset", sweep_preset, "desk or paper scale (synth and d tasks)");
  sweep->add_option("--gammas", sw_synth.gammas, "label mixing grid");
  sweep->add_option("--methods", sw_synth.methods, "synth method roster");
  sweep->add_option("--csl-methods", sw_csl.methods, "csl method roster");
  sweep->add_option("--reps", sw_synth.repetitions, "repetitions per grid cell");
  sweep->add_option("--train-per-class", sw_synth.train_per_class, "train nodes per class");
  sweep->add_option("--val-per-class", sw_synth.val_per_class, "validation nodes per class");
  sweep->add_option("--train-sizes", sw_synth.train_sizes,
                    "grid over train nodes per class (overrides --train-per-class)");
  sweep->add_option("--d", sw_synth.d, "eigenbasis width");
  sweep->add_option("--d-values", sw_d.d_values, "eigenbasis width grid for the d task");
  sweep->add_option("--f", sweep_f, "basis transform");
  sweep->add_option("--hidden", sw_synth.hidden, "hidden layer width");
  sweep->add_option("--n", sw_csl.n, "csl nodes per graph");
  sweep->add_option("--r", sw_csl.r_set, "csl skip lengths");
  sweep->add_option("--copies", sw_csl.copies, "csl copies per class");
  sweep->add_option("--folds", sw_csl.num_folds, "csl fold count");
  sweep->add_option("--random-dim", sw_csl.random_dim, "width of gin_random features");
  sweep->add_option("--batch-size", sw_csl.batch_size,
                    "csl graphs per Adam step (0 = full batch)");
  sweep->add_option("--seed", sw_synth.base.seed, "master seed");
  sweep->add_option("--threads", sw_synth.threads, "concurrent repetitions");
  add_train_flags(sweep, sweep_train);
  sweep->add_option("--out", sweep_out, "output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    const json cfg = load_config(config_path);

    if (gen_synth->parsed()) {
      fill(*gen_synth, cfg, "--preset", "preset", synth_preset);
      fill(*gen_synth, cfg, "--train-per-class", "train_per_class", gs_train);
      fill(*gen_synth, cfg, "--val-per-class", "val_per_class", gs_val);
      fill(*gen_synth, cfg, "--out", "out", gs_out);
      return cmd_gen_synth(*gen_synth, cfg, synth_base, synth_preset, gs_train, gs_val, gs_out);
    }
    if (gen_csl->parsed()) {
      fill(*gen_csl, cfg, "--n", "n", gc_n);
      fill(*gen_csl, cfg, "--r", "r_set", gc_r);
      fill(*gen_csl, cfg, "--copies", "copies", gc_copies);
      fill(*gen_csl, cfg, "--folds", "num_folds", gc_folds);
      fill(*gen_csl, cfg, "--seed", "seed", gc_seed);
      fill(*gen_csl, cfg, "--out", "out", gc_out);
      return cmd_gen_csl(gc_n, gc_r, gc_copies, gc_folds, gc_seed, gc_out);
    }
    if (eigen->parsed()) {
      fill(*eigen, cfg, "--edges", "edges", eg_edges);
      fill(*eigen, cfg, "--num-nodes", "num_nodes", eg_nodes);
      fill(*eigen, cfg, "--d", "d", eg_d);
      fill(*eigen, cfg, "--kind", "kind", eg_kind);
      fill(*eigen, cfg, "--power", "power", eg_power);
      fill(*eigen, cfg, "--f", "f_mode", eg_f);
      fill(*eigen, cfg, "--tol", "tol", eg_tol);
      fill(*eigen, cfg, "--seed", "seed", eg_seed);
      fill(*eigen, cfg, "--out", "out", eg_out);
      return cmd_eigen(eg_edges, eg_nodes, eg_d, eg_kind, eg_power, eg_f, eg_tol, eg_seed,
                       eg_out);
    }
    if (tr->parsed()) {
      fill(*tr, cfg, "--data", "data", tr_data);
      fill(*tr, cfg, "--method", "method", tr_method);
      fill(*tr, cfg, "--d", "d", tr_d);
      fill(*tr, cfg, "--f", "f_mode", tr_f);
      fill(*tr, cfg, "--hidden", "hidden", tr_hidden);
      fill(*tr, cfg, "--seed", "seed", tr_seed);
      fill(*tr, cfg, "--out", "out", tr_out);
      fill_train(*tr, cfg, tr_cfg);
      return cmd_train(tr_data, tr_method, tr_d, tr_f, tr_hidden, tr_cfg, tr_seed, tr_out);
    }
    if (ver->parsed()) {
      fill(*ver, cfg, "--equivariance-pairs", "equivariance_pairs", ver_opt.equivariance_pairs);
      fill(*ver, cfg, "--equivariance-d", "equivariance_d", ver_opt.equivariance_d);
      fill(*ver, cfg, "--spectral-graphs", "spectral_graphs", ver_opt.spectral_graphs);
      fill(*ver, cfg, "--sgc-graphs", "sgc_graphs", ver_opt.sgc_graphs);
      fill(*ver, cfg, "--sgc-nodes", "sgc_nodes", ver_opt.sgc_nodes);
      fill(*ver, cfg, "--sgc-edge-prob", "sgc_edge_prob", ver_opt.sgc_edge_prob);
      fill(*ver, cfg, "--sgc-propagations", "sgc_propagations", ver_opt.sgc_propagations);
      fill(*ver, cfg, "--seed", "seed", ver_opt.seed);
      fill(*ver, cfg, "--out", "out", ver_out);
      return cmd_verify(ver_opt, ver_out);
    }
    if (bench->parsed()) {
      fill(*bench, cfg, "--base-nodes", "base_nodes", bench_opt.base_nodes);
      fill(*bench, cfg, "--base-edges", "base_edges", bench_opt.base_edges);
      fill(*bench, cfg, "--doublings", "doublings", bench_opt.doublings);
      fill(*bench, cfg, "--d", "d", bench_opt.d);
      fill(*bench, cfg, "--tol", "tol", bench_opt.tol);
      fill(*bench, cfg, "--seed", "seed", bench_opt.seed);
      fill(*bench, cfg, "--band", "band", band);
      fill(*bench, cfg, "--out", "out", bench_out);
      if (!bench->count("--no-band-check") && cfg.contains("no_band_check"))
        no_band_check = cfg["no_band_check"].get<bool>();
      if (band.size() != 2 || band[0] > band[1])
        throw std::runtime_error("bench: --band needs lo <= hi");
      return cmd_bench(bench_opt, no_band_check, band[0], band[1], bench_out);
    }
    if (sweep->parsed()) {
      fill(*sweep, cfg, "--task", "task", sweep_task);
      fill(*sweep, cfg, "--preset", "preset", sweep_preset);
      fill(*sweep, cfg, "--out", "out", sweep_out);
      fill(*sweep, cfg, "--seed", "seed", sw_synth.base.seed);
      fill(*sweep, cfg, "--threads", "threads", sw_synth.threads);
      fill(*sweep, cfg, "--f", "f_mode", sweep_f);

      // shared train flags move into whichever task runs, one field at a time
      // so task-specific defaults survive partial overrides
      auto apply_train = [&](TrainConfig& t) {
        if (sweep->count("--lr")) t.learning_rate = sweep_train.learning_rate;
        if (sweep->count("--weight-decay")) t.weight_decay = sweep_train.weight_decay;
        if (sweep->count("--dropout")) t.dropout = sweep_train.dropout;
        if (sweep->count("--max-epochs")) t.max_epochs = sweep_train.max_epochs;
        if (sweep->count("--early-stop")) t.early_stop_rounds = sweep_train.early_stop_rounds;
      };

      if (sweep_task == "synth") {
        if (sweep_preset == "paper") {
          sw_synth.base.seed = [&] {
            const std::uint64_t keep = sw_synth.base.seed;
            sw_synth.base = paper_preset();
            return keep;
          }();
          sw_synth.train_per_class = sweep->count("--train-per-class") ? sw_synth.train_per_class : 50;
          sw_synth.val_per_class = sweep->count("--val-per-class") ? sw_synth.val_per_class : 150;
        } else if (sweep_preset == "desk" || sweep_preset.empty()) {
          const std::uint64_t keep = sw_synth.base.seed;
          sw_synth.base = desk_preset();
          sw_synth.base.seed = keep;
        } else {
          throw std::runtime_error("unknown preset '" + sweep_preset + "'");
        }
        fill_base(cfg, sw_synth.base);
        fill(*sweep, cfg, "--gammas", "gammas", sw_synth.gammas);
        fill(*sweep, cfg, "--methods", "methods", sw_synth.methods);
        fill(*sweep, cfg, "--reps", "repetitions", sw_synth.repetitions);
        fill(*sweep, cfg, "--train-per-class", "train_per_class", sw_synth.train_per_class);
        fill(*sweep, cfg, "--val-per-class", "val_per_class", sw_synth.val_per_class);
        fill(*sweep, cfg, "--train-sizes", "train_sizes", sw_synth.train_sizes);
        fill(*sweep, cfg, "--d", "d", sw_synth.d);
        fill(*sweep, cfg, "--hidden", "hidden", sw_synth.hidden);
        apply_train(sw_synth.train);
        fill_train(*sweep, cfg, sw_synth.train);
        if (!sweep_f.empty()) sw_synth.f_mode = f_mode_from_string(sweep_f);
        return sweep_synth(sw_synth, sweep_out);
      }
      if (sweep_task == "csl") {
        sw_csl.seed = sw_synth.base.seed;
        sw_csl.threads = sw_synth.threads;
        fill(*sweep, cfg, "--n", "n", sw_csl.n);
        fill(*sweep, cfg, "--r", "r_set", sw_csl.r_set);
        fill(*sweep, cfg, "--copies", "copies", sw_csl.copies);
        fill(*sweep, cfg, "--folds", "num_folds", sw_csl.num_folds);
        fill(*sweep, cfg, "--csl-methods", "methods", sw_csl.methods);
        fill(*sweep, cfg, "--random-dim", "random_dim", sw_csl.random_dim);
        fill(*sweep, cfg, "--batch-size", "batch_size", sw_csl.batch_size);
        if (sweep->count("--d")) sw_csl.d = sw_synth.d;
        else fill(*sweep, cfg, "--d", "d", sw_csl.d);
        if (sweep->count("--hidden")) sw_csl.hidden = sw_synth.hidden;
        else fill(*sweep, cfg, "--hidden", "hidden", sw_csl.hidden);
        apply_train(sw_csl.train);
        fill_train(*sweep, cfg, sw_csl.train);
        if (!sweep_f.empty()) sw_csl.f_mode = f_mode_from_string(sweep_f);
        return sweep_csl(sw_csl, sweep_out);
      }
      if (sweep_task == "d") {
        if (sweep_preset == "paper")
          sw_d.base = paper_preset();
        else
          sw_d.base = desk_preset();
        sw_d.base.seed = sw_synth.base.seed;
        sw_d.threads = sw_synth.threads;
        fill_base(cfg, sw_d.base);
        fill(*sweep, cfg, "--d-values", "d_values", sw_d.d_values);
        if (sweep->count("--reps")) sw_d.repetitions = sw_synth.repetitions;
        else fill(*sweep, cfg, "--reps", "repetitions", sw_d.repetitions);
        if (sweep->count("--train-per-class")) sw_d.train_per_class = sw_synth.train_per_class;
        else fill(*sweep, cfg, "--train-per-class", "train_per_class", sw_d.train_per_class);
        if (sweep->count("--val-per-class")) sw_d.val_per_class = sw_synth.val_per_class;
        else fill(*sweep, cfg, "--val-per-class", "val_per_class", sw_d.val_per_class);
        if (sweep->count("--hidden")) sw_d.hidden = sw_synth.hidden;
        else fill(*sweep, cfg, "--hidden", "hidden", sw_d.hidden);
        apply_train(sw_d.train);
        fill_train(*sweep, cfg, sw_d.train);
        if (!sweep_f.empty()) sw_d.f_mode = f_mode_from_string(sweep_f);
        return sweep_d(sw_d, sweep_out);
      }
      throw std::runtime_error("unknown sweep task '" + sweep_task +
                               "' (expected synth, csl, or d)");
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
