#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eigraph/csl.hpp"
#include "eigraph/nn.hpp"
#include "eigraph/spectral.hpp"
#include "eigraph/synth.hpp"

namespace eigraph {

inline constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- synth sweep

// Node-classification roster on the SBM benchmark. eigen_gcn is a one-hidden
// GCN on [X, f(Q)]; gcn2/gcn3 carry identity skips on shape-matching layers.
struct SweepRow {
  double gamma = 0.0;
  std::string method;
  int d = 0;  // eigenbasis width used by the method; 0 when none
  int train_per_class = 0;
  int rep = 0;
  std::uint64_t seed = 0;
  double test_acc = 0.0;
  double best_val_acc = 0.0;
  int best_epoch = 0;
  int epochs_run = 0;
};

struct SynthSweepOptions {
  SynthConfig base;  // base.seed is the master seed; gamma comes from the grid
  std::vector<double> gammas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::vector<std::string> methods{"mlp", "gcn1", "gcn2", "gcn3", "eigen_gcn"};
  int repetitions = 10;
  int train_per_class = 20;
  int val_per_class = 30;
  // optional grid over the training-set size; empty means {train_per_class}.
  // Splits are nested: the train set for a smaller size is a prefix of the
  // larger one within the same repetition.
  std::vector<int> train_sizes;
  int d = 32;
  FMode f_mode = FMode::identity;
  int hidden = 16;
  TrainConfig train;
  int threads = 1;  // repetitions fan out over this many workers
  // streamed as each run finishes (completion order); lets callers keep
  // partial results when a later run throws
  std::function<void(const SweepRow&)> on_row;
};

std::vector<SweepRow> run_synth_sweep(const SynthSweepOptions& opt);

// ------------------------------------------------------------------- csl task

// Graph classification trains on the full fold complement: no validation set,
// no early stopping, no weight decay, final-epoch model.
inline TrainConfig csl_train_defaults() {
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.weight_decay = 0.0;
  cfg.dropout = 0.0;
  cfg.max_epochs = 200;
  cfg.early_stop_rounds = 0;
  return cfg;
}

struct CslRow;

struct CslOptions {
  int n = 41;
  std::vector<int> r_set{2, 3, 4, 5, 6, 9, 11, 12, 13, 16};
  int copies = 60;
  int num_folds = 5;
  std::vector<std::string> methods{"eigen_gin", "gin_degree", "gin_random"};
  int d = 16;
  FMode f_mode = FMode::abs;
  int hidden = 16;
  int random_dim = 16;
  int batch_size = 32;  // graphs per Adam step; 0 trains full-batch
  std::uint64_t seed = 0;
  TrainConfig train = csl_train_defaults();
  int threads = 1;  // folds of one method fan out over this many workers
  std::function<void(const CslRow&)> on_row;
};

struct CslRow {
  std::string method;
  int fold = 0;
  std::uint64_t seed = 0;
  double test_acc = 0.0;
};

std::vector<CslRow> run_csl(const CslOptions& opt);

// ------------------------------------------------------------------ verify

struct VerifyOptions {
  int equivariance_pairs = 20;
  int equivariance_d = 3;
  int spectral_graphs = 100;
  int sgc_graphs = 10;
  int sgc_nodes = 100;
  double sgc_edge_prob = 0.1;
  int sgc_propagations = 200;
  std::uint64_t seed = 0;
};

struct VerifyCheck {
  std::string name;
  bool pass = false;
  double deviation = 0.0;  // measured worst deviation or ratio
  std::string detail;
};

// The individual checks behind run_verify, callable on their own.
VerifyCheck check_equivariance(const VerifyOptions& opt);
VerifyCheck check_sgc_limit(const VerifyOptions& opt);
VerifyCheck check_spectral_bounds(const VerifyOptions& opt);
VerifyCheck check_iteration_cost(const VerifyOptions& opt);

std::vector<VerifyCheck> run_verify(const VerifyOptions& opt);
bool all_pass(const std::vector<VerifyCheck>& checks);

// ------------------------------------------------------------- bench scaling

struct BenchOptions {
  int base_nodes = 10000;
  std::int64_t base_edges = 1000000;
  int doublings = 2;
  int d = 128;
  double tol = 1e-10;
  std::uint64_t seed = 0;
};

struct BenchRow {
  std::string series;  // "edges" or "nodes"
  int num_nodes = 0;
  std::int64_t num_edges = 0;
  double seconds = 0.0;
  std::int64_t iterations = 0;
  bool converged = false;
};

std::vector<BenchRow> run_bench_scaling(const BenchOptions& opt);

// Successive time ratios within a series; empty when rows are missing.
std::vector<double> bench_ratios(const std::vector<BenchRow>& rows, const std::string& series);

// ------------------------------------------------------------------- d sweep

struct DSweepOptions {
  SynthConfig base;  // gamma forced to 1
  std::vector<int> d_values{8, 16, 32, 64, 128};
  int repetitions = 10;
  int train_per_class = 20;
  int val_per_class = 30;
  FMode f_mode = FMode::identity;
  int hidden = 16;
  TrainConfig train;
  int threads = 1;
  std::function<void(const SweepRow&)> on_row;
};

std::vector<SweepRow> run_d_sweep(const DSweepOptions& opt);

// ------------------------------------------------------------------ results

struct SummaryRow {
  double gamma = 0.0;
  std::string method;
  int d = 0;
  int train_per_class = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single value
  int count = 0;
};

std::vector<SummaryRow> summarize_sweep(const std::vector<SweepRow>& rows);
std::vector<SummaryRow> summarize_csl(const std::vector<CslRow>& rows);
// d or train_per_class below zero match any value.
const SummaryRow* find_summary(const std::vector<SummaryRow>& rows, double gamma,
                               const std::string& method, int d = -1,
                               int train_per_class = -1);

// Row formats shared by the file writers and by incremental writers that
// stream partial results while a long run is still going.
std::string sweep_csv_header();
std::string sweep_csv_line(const SweepRow& row);
std::string csl_csv_header();
std::string csl_csv_line(const CslRow& row);

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);
void write_csl_csv(const std::string& path, const std::vector<CslRow>& rows);
void write_verify_csv(const std::string& path, const std::vector<VerifyCheck>& checks);
void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows);

// Manifest JSON: {task, options..., version}; enough to reproduce the run.
void write_manifest(const std::string& path, const std::string& task,
                    const std::string& options_json);

std::string options_json(const SynthSweepOptions& opt);
std::string options_json(const CslOptions& opt);
std::string options_json(const VerifyOptions& opt);
std::string options_json(const BenchOptions& opt);
std::string options_json(const DSweepOptions& opt);

}  // namespace eigraph
