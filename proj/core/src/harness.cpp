#include "eigraph/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "json.hpp"

#include "eigraph/io.hpp"
#include "eigraph/plugin.hpp"
#include "eigraph/rng.hpp"

namespace eigraph {
namespace {

using nlohmann::json;

// Stable per-method substream id, independent of the roster order.
std::uint64_t method_stream(const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

int num_classes(const std::vector<int>& labels) {
  int c = 0;
  for (int l : labels) c = std::max(c, l + 1);
  return c;
}

// Work items pull from a shared counter; the first failure stops the pull and
// is rethrown after all workers drain. Single worker degrades to a plain loop.
void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      while (!failed.load()) {
        const int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// One node-classification run. d_used reports the eigenbasis width the method
// consumed, 0 for purely feature-driven baselines.
TrainResult train_synth_method(const std::string& method, const SynthDataset& data,
                               const StructureMatrix& structure, const EigenBasis& basis,
                               FMode f_mode, int hidden, TrainConfig cfg, std::uint64_t seed,
                               int* d_used) {
  const int classes = num_classes(data.labels);
  const int f = data.features.cols();
  cfg.seed = seed;
  *d_used = 0;
  // standard GCN input pipeline: unit-length feature rows. This also puts the
  // raw features on the same scale as the unit-norm eigenvector columns, so
  // neither block of the concatenated basis drowns the other.
  const Matrix x = row_normalize(data.features);
  if (method == "mlp") {
    const Model init = init_model(Arch::mlp, {f, hidden, classes}, seed);
    return train(init, nullptr, x, data.labels, data.splits, cfg);
  }
  if (method == "gcn1") {
    const Model init = init_model(Arch::gcn, {f, classes}, seed);
    return train(init, &structure, x, data.labels, data.splits, cfg);
  }
  if (method == "gcn2" || method == "gcn3") {
    std::vector<int> dims{f, hidden, classes};
    if (method == "gcn3") dims = {f, hidden, hidden, classes};
    const Model init = init_model(Arch::gcn, dims, seed, /*residual=*/true);
    return train(init, &structure, x, data.labels, data.splits, cfg);
  }
  if (method == "eigen_gcn") {
    const InitialBasis h0 = build_initial_basis(&x, &basis, f_mode);
    *d_used = h0.eigen_cols;
    const Model init = init_model(Arch::gcn, {h0.matrix.cols(), hidden, classes}, seed);
    return train(init, &structure, h0.matrix, data.labels, data.splits, cfg);
  }
  throw std::invalid_argument("run_synth_sweep: unknown method '" + method + "'");
}

void sort_rows(std::vector<SweepRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.gamma, a.method, a.d, a.train_per_class, a.rep) <
           std::tie(b.gamma, b.method, b.d, b.train_per_class, b.rep);
  });
}

SweepRow make_row(double gamma, const std::string& method, int d, int train_per_class, int rep,
                  std::uint64_t seed, const TrainResult& res) {
  SweepRow row;
  row.gamma = gamma;
  row.method = method;
  row.d = d;
  row.train_per_class = train_per_class;
  row.rep = rep;
  row.seed = seed;
  row.test_acc = res.test_acc_at_best;
  row.best_val_acc = res.best_val_acc;
  row.best_epoch = res.best_epoch;
  row.epochs_run = static_cast<int>(res.history.size());
  return row;
}

}  // namespace

// ---------------------------------------------------------------- synth sweep

std::vector<SweepRow> run_synth_sweep(const SynthSweepOptions& opt) {
  if (opt.repetitions < 1)
    throw std::invalid_argument("run_synth_sweep: repetitions must be positive");
  if (opt.gammas.empty() || opt.methods.empty())
    throw std::invalid_argument("run_synth_sweep: empty gamma grid or method roster");

  const std::vector<int> sizes =
      opt.train_sizes.empty() ? std::vector<int>{opt.train_per_class} : opt.train_sizes;
  std::vector<std::vector<SweepRow>> per_rep(opt.repetitions);
  std::mutex emit_mutex;
  parallel_for(opt.repetitions, opt.threads, [&](int rep) {
    const std::uint64_t rep_seed = derive_seed(opt.base.seed, 1000 + rep);
    StructureMatrix structure;
    EigenBasis basis;
    bool solved = false;
    for (double gamma : opt.gammas) {
      SynthConfig cfg = opt.base;
      cfg.gamma = gamma;
      cfg.seed = rep_seed;
      for (int size : sizes) {
        const SynthDataset data = generate_synth(cfg, size, opt.val_per_class);
        if (!solved) {
          // gamma only reshuffles labels and the split shuffle is shared
          // across sizes, so one basis serves the whole grid
          structure = renormalized_adjacency(data.graph);
          basis = top_eigenpairs(structure, opt.d, 1e-10, 0, derive_seed(rep_seed, 77));
          solved = true;
        }
        for (const std::string& method : opt.methods) {
          const std::uint64_t run_seed = derive_seed(rep_seed, method_stream(method));
          int d_used = 0;
          const TrainResult res = train_synth_method(method, data, structure, basis, opt.f_mode,
                                                     opt.hidden, opt.train, run_seed, &d_used);
          const SweepRow row = make_row(gamma, method, d_used, size, rep, run_seed, res);
          if (opt.on_row) {
            std::lock_guard<std::mutex> lock(emit_mutex);
            opt.on_row(row);
          }
          per_rep[rep].push_back(row);
        }
      }
    }
  });

  std::vector<SweepRow> rows;
  for (const std::vector<SweepRow>& part : per_rep) rows.insert(rows.end(), part.begin(), part.end());
  sort_rows(rows);
  return rows;
}

// ------------------------------------------------------------------- d sweep

std::vector<SweepRow> run_d_sweep(const DSweepOptions& opt) {
  if (opt.repetitions < 1)
    throw std::invalid_argument("run_d_sweep: repetitions must be positive");
  if (opt.d_values.empty()) throw std::invalid_argument("run_d_sweep: empty d grid");

  std::vector<std::vector<SweepRow>> per_rep(opt.repetitions);
  std::mutex emit_mutex;
  parallel_for(opt.repetitions, opt.threads, [&](int rep) {
    const std::uint64_t rep_seed = derive_seed(opt.base.seed, 1000 + rep);
    SynthConfig cfg = opt.base;
    cfg.gamma = 1.0;  // structure-aligned labels isolate the eigenbasis width
    cfg.seed = rep_seed;
    const SynthDataset data = generate_synth(cfg, opt.train_per_class, opt.val_per_class);
    const StructureMatrix structure = renormalized_adjacency(data.graph);
    for (int d : opt.d_values) {
      const EigenBasis basis =
          top_eigenpairs(structure, d, 1e-10, 0, derive_seed(rep_seed, 200 + d));
      const std::uint64_t run_seed =
          derive_seed(rep_seed, method_stream("eigen_gcn") + static_cast<std::uint64_t>(d));
      int d_used = 0;
      const TrainResult res = train_synth_method("eigen_gcn", data, structure, basis, opt.f_mode,
                                                 opt.hidden, opt.train, run_seed, &d_used);
      const SweepRow row =
          make_row(1.0, "eigen_gcn", d_used, opt.train_per_class, rep, run_seed, res);
      if (opt.on_row) {
        std::lock_guard<std::mutex> lock(emit_mutex);
        opt.on_row(row);
      }
      per_rep[rep].push_back(row);
    }
  });

  std::vector<SweepRow> rows;
  for (const std::vector<SweepRow>& part : per_rep) rows.insert(rows.end(), part.begin(), part.end());
  sort_rows(rows);
  return rows;
}

// ------------------------------------------------------------------- csl task

std::vector<CslRow> run_csl(const CslOptions& opt) {
  const CslDataset data =
      build_csl_dataset(opt.n, opt.r_set, opt.copies, opt.num_folds, derive_seed(opt.seed, 1));
  const std::size_t ng = data.graphs.size();
  const int classes = static_cast<int>(data.r_set.size());

  std::vector<CslRow> rows;
  for (const std::string& method : opt.methods) {
    std::vector<Matrix> features(ng);
    if (method == "eigen_gin") {
      for (std::size_t i = 0; i < ng; ++i) {
        const StructureMatrix m = renormalized_adjacency(data.graphs[i]);
        const EigenBasis b =
            top_eigenpairs(m, opt.d, 1e-10, 0, derive_seed(opt.seed, 5000 + i));
        features[i] = build_initial_basis(nullptr, &b, opt.f_mode).matrix;
      }
    } else if (method == "gin_degree") {
      for (std::size_t i = 0; i < ng; ++i)
        features[i] = baseline_features(data.graphs[i], BaselineFeature::degree_one_hot);
    } else if (method == "gin_random") {
      for (std::size_t i = 0; i < ng; ++i)
        features[i] = baseline_features(data.graphs[i], BaselineFeature::random_gaussian,
                                        derive_seed(opt.seed, 9000 + i), opt.random_dim);
    } else {
      throw std::invalid_argument("run_csl: unknown method '" + method + "'");
    }
    for (std::size_t i = 0; i < ng; ++i)
      if (features[i].cols() != features[0].cols())
        throw std::runtime_error("run_csl: feature width of graph " + std::to_string(i) +
                                 " is " + std::to_string(features[i].cols()) + ", expected " +
                                 std::to_string(features[0].cols()));

    std::vector<CslRow> fold_rows(opt.num_folds);
    std::mutex emit_mutex;
    parallel_for(opt.num_folds, opt.threads, [&](int fold) {
      Splits splits;
      for (std::size_t i = 0; i < ng; ++i) {
        if (data.folds[i] == fold)
          splits.test.push_back(static_cast<int>(i));
        else
          splits.train.push_back(static_cast<int>(i));
      }
      const std::uint64_t run_seed =
          derive_seed(derive_seed(opt.seed, method_stream(method)), 300 + fold);
      TrainConfig cfg = opt.train;
      cfg.seed = run_seed;
      const Model init =
          init_model(Arch::gin, {features[0].cols(), opt.hidden, classes}, run_seed);
      const TrainResult res = train_gin(init, data.graphs, features, data.labels,
                                        splits, cfg, opt.batch_size);
      CslRow row;
      row.method = method;
      row.fold = fold;
      row.seed = run_seed;
      row.test_acc = res.test_acc_at_best;
      if (opt.on_row) {
        std::lock_guard<std::mutex> lock(emit_mutex);
        opt.on_row(row);
      }
      fold_rows[fold] = row;
    });
    rows.insert(rows.end(), fold_rows.begin(), fold_rows.end());
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CslRow& a, const CslRow& b) {
    return std::tie(a.method, a.fold) < std::tie(b.method, b.fold);
  });
  return rows;
}

// -------------------------------------------------------------------- verify

namespace {

// Path plus parity-respecting chords: connected and two-colorable by parity.
SparseGraph random_connected_bipartite(int n, int extra_edges, std::uint64_t seed) {
  EdgeList edges;
  for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int e = 0; e < extra_edges; ++e) {
    const int u = pick(rng);
    const int v = pick(rng);
    if (u == v || ((u ^ v) & 1) == 0) continue;
    edges.push_back({u, v});
  }
  return from_edge_list(edges, n);
}

Matrix gaussian_matrix(int rows, int cols, std::uint64_t seed) {
  Matrix out(rows, cols);
  Rng rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (double& v : out.data()) v = gauss(rng);
  return out;
}

std::vector<int> random_permutation(int n, std::uint64_t seed) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Rng rng = make_rng(seed);
  std::shuffle(perm.begin(), perm.end(), rng);
  return perm;
}

// Mirrors the precondition equivariance_check enforces: the top d+1
// eigenvalues must be pairwise separated for the basis to be well defined.
bool simple_top_spectrum(const StructureMatrix& m, int d, std::uint64_t seed) {
  const int dcheck = std::min(d + 1, m.num_nodes());
  const EigenBasis probe = top_eigenpairs(m, dcheck, 1e-12, 0, seed);
  if (!probe.converged) return false;
  for (int i = 0; i < dcheck; ++i)
    for (int j = i + 1; j < dcheck; ++j)
      if (std::fabs(probe.eigenvalues[i] - probe.eigenvalues[j]) <= 1e-6) return false;
  return true;
}

}  // namespace

VerifyCheck check_equivariance(const VerifyOptions& opt) {
  VerifyCheck check;
  check.name = "permutation_equivariance";
  const int d = opt.equivariance_d;
  int accepted = 0;
  double worst = 0.0;
  for (int attempt = 0; attempt < 40 * opt.equivariance_pairs; ++attempt) {
    if (accepted >= opt.equivariance_pairs) break;
    const std::uint64_t s = derive_seed(opt.seed, 10000 + attempt);
    const int n = 20 + static_cast<int>(derive_seed(s, 0) % 31);
    const SparseGraph g = random_connected_gnp(n, 0.15, derive_seed(s, 1));
    if (!simple_top_spectrum(renormalized_adjacency(g), d, derive_seed(s, 2))) continue;
    const std::vector<int> perm = random_permutation(n, derive_seed(s, 3));
    const Model model = init_model(Arch::gcn, {d, 8, 4}, derive_seed(s, 4));
    const double dev = equivariance_check(g, nullptr, perm, d, model,
                                          StructureKind::renorm_adjacency, derive_seed(s, 2));
    worst = std::max(worst, dev);
    ++accepted;
  }
  check.deviation = worst;
  check.pass = accepted >= opt.equivariance_pairs && worst < 1e-8;
  check.detail = std::to_string(accepted) + " graph pairs, worst layer deviation " + fmt(worst);
  return check;
}

VerifyCheck check_sgc_limit(const VerifyOptions& opt) {
  VerifyCheck check;
  check.name = "sgc_limit";
  double worst = 0.0;
  int used = 0;
  for (int i = 0; i < opt.sgc_graphs; ++i) {
    const std::uint64_t s = derive_seed(opt.seed, 20000 + i);
    const SparseGraph g = random_connected_gnp(opt.sgc_nodes, opt.sgc_edge_prob, s);
    if (is_bipartite(g)) continue;  // the limit statement needs an aperiodic walk
    const Matrix x = gaussian_matrix(opt.sgc_nodes, 5, derive_seed(s, 1));
    const std::vector<double> angles = sgc_limit_check(g, x, opt.sgc_propagations, s);
    for (double a : angles) worst = std::max(worst, a);
    ++used;
  }
  check.deviation = worst;
  check.pass = used == opt.sgc_graphs && worst < 1e-6;
  check.detail = std::to_string(used) + " graphs, worst column angle " + fmt(worst) +
                 " rad after " + std::to_string(opt.sgc_propagations) + " propagations";
  return check;
}

VerifyCheck check_spectral_bounds(const VerifyOptions& opt) {
  VerifyCheck check;
  check.name = "spectral_bounds";
  const double tol = 1e-8;
  double worst = 0.0;
  int bipartite_count = 0;
  for (int i = 0; i < opt.spectral_graphs; ++i) {
    const std::uint64_t s = derive_seed(opt.seed, 30000 + i);
    SparseGraph g;
    bool bipartite = false;
    switch (i % 4) {
      case 0:
        // keep p well above the ln(n)/n connectivity threshold
        g = random_connected_gnp(40 + (i * 3) % 80, 0.12 + 0.04 * (i % 3), s);
        break;
      case 1: {
        SynthConfig cfg;
        cfg.num_nodes = 60 + i % 60;
        cfg.num_communities = 3;
        cfg.prob_in = 0.2;
        cfg.prob_out = 0.05;
        cfg.seed = s;
        g = generate_structure(cfg).first;
        break;
      }
      case 2:
        g = random_connected_bipartite(24 + (i * 5) % 80, i % 30, s);
        bipartite = true;
        break;
      default:
        g = build_csl(11 + 2 * (i % 20), 2 + i % 3);
        break;
    }

    // Self-loop renormalization pins the top at exactly 1 on every component
    // and keeps the whole spectrum inside [-1, 1].
    const EigenBasis full = dense_eig_oracle(to_dense(renormalized_adjacency(g)));
    double lo = full.eigenvalues[0], hi = full.eigenvalues[0];
    for (double v : full.eigenvalues) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    worst = std::max(worst, hi - 1.0);
    worst = std::max(worst, -1.0 - lo);
    worst = std::max(worst, std::fabs(hi - 1.0));

    if (bipartite && is_connected(g)) {
      // Without the self loops a bipartite spectrum is symmetric: the bottom
      // must sit at exactly -1 while the top stays at 1.
      ++bipartite_count;
      const EigenBasis plain = dense_eig_oracle(to_dense(plain_normalized_adjacency(g)));
      double plo = plain.eigenvalues[0], phi = plain.eigenvalues[0];
      for (double v : plain.eigenvalues) {
        plo = std::min(plo, v);
        phi = std::max(phi, v);
      }
      worst = std::max(worst, std::fabs(plo + 1.0));
      worst = std::max(worst, std::fabs(phi - 1.0));
    }
  }
  check.deviation = worst;
  check.pass = worst < tol;
  check.detail = std::to_string(opt.spectral_graphs) + " graphs (" +
                 std::to_string(bipartite_count) + " bipartite), worst bound violation " +
                 fmt(worst);
  return check;
}

namespace {

double min_solve_seconds(const StructureMatrix& m, int d, std::uint64_t seed,
                         std::int64_t* iterations, bool* converged) {
  double best = 0.0;
  for (int rep = 0; rep < 3; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    const EigenBasis basis = top_eigenpairs(m, d, 1e-10, 0, seed);
    const auto t1 = std::chrono::steady_clock::now();
    const double sec = std::chrono::duration<double>(t1 - t0).count();
    if (rep == 0 || sec < best) best = sec;
    *iterations = basis.iterations_used;
    *converged = basis.converged;
  }
  return best;
}

}  // namespace

// Per-iteration work should grow at most linearly when either the edge count
// or the node count doubles; 2.6 leaves headroom for timer and cache noise.
VerifyCheck check_iteration_cost(const VerifyOptions& opt) {
  VerifyCheck check;
  check.name = "iteration_cost";
  const int d = 16;
  const int n0 = 3000;
  const std::int64_t e0 = 60000;
  struct Point {
    int n;
    std::int64_t e;
  };
  const Point points[3] = {{n0, e0}, {n0, 2 * e0}, {2 * n0, e0}};
  double per_iter[3] = {0, 0, 0};
  bool all_converged = true;
  for (int i = 0; i < 3; ++i) {
    const SparseGraph g =
        erdos_renyi_gnm(points[i].n, points[i].e, derive_seed(opt.seed, 40000 + i));
    const StructureMatrix m = renormalized_adjacency(g);
    std::int64_t iters = 0;
    bool conv = false;
    const double sec = min_solve_seconds(m, d, derive_seed(opt.seed, 41000 + i), &iters, &conv);
    per_iter[i] = sec / static_cast<double>(std::max<std::int64_t>(1, iters));
    all_converged = all_converged && conv;
  }
  const double edge_ratio = per_iter[1] / per_iter[0];
  const double node_ratio = per_iter[2] / per_iter[0];
  check.deviation = std::max(edge_ratio, node_ratio);
  check.pass = all_converged && edge_ratio <= 2.6 && node_ratio <= 2.6;
  check.detail = "per-iteration time ratio " + fmt(edge_ratio) + " for 2x edges, " +
                 fmt(node_ratio) + " for 2x nodes";
  return check;
}

std::vector<VerifyCheck> run_verify(const VerifyOptions& opt) {
  std::vector<VerifyCheck> checks;
  checks.push_back(check_equivariance(opt));
  checks.push_back(check_sgc_limit(opt));
  checks.push_back(check_spectral_bounds(opt));
  checks.push_back(check_iteration_cost(opt));
  return checks;
}

bool all_pass(const std::vector<VerifyCheck>& checks) {
  for (const VerifyCheck& c : checks)
    if (!c.pass) return false;
  return !checks.empty();
}

// ------------------------------------------------------------- bench scaling

std::vector<BenchRow> run_bench_scaling(const BenchOptions& opt) {
  if (opt.doublings < 0) throw std::invalid_argument("run_bench_scaling: negative doublings");

  auto measure = [&](const std::string& series, int n, std::int64_t e,
                     std::uint64_t seed) -> BenchRow {
    const SparseGraph g = erdos_renyi_gnm(n, e, seed);
    const StructureMatrix m = renormalized_adjacency(g);
    const auto t0 = std::chrono::steady_clock::now();
    const EigenBasis basis = top_eigenpairs(m, opt.d, opt.tol, 0, derive_seed(seed, 1));
    const auto t1 = std::chrono::steady_clock::now();
    BenchRow row;
    row.series = series;
    row.num_nodes = n;
    row.num_edges = e;
    row.seconds = std::chrono::duration<double>(t1 - t0).count();
    row.iterations = basis.iterations_used;
    row.converged = basis.converged;
    return row;
  };

  std::vector<BenchRow> rows;
  // the base config anchors both series; measure it once
  BenchRow base = measure("edges", opt.base_nodes, opt.base_edges, derive_seed(opt.seed, 0));
  rows.push_back(base);
  for (int i = 1; i <= opt.doublings; ++i)
    rows.push_back(measure("edges", opt.base_nodes, opt.base_edges << i,
                           derive_seed(opt.seed, 100 + i)));
  base.series = "nodes";
  rows.push_back(base);
  for (int i = 1; i <= opt.doublings; ++i)
    rows.push_back(measure("nodes", opt.base_nodes << i, opt.base_edges,
                           derive_seed(opt.seed, 200 + i)));
  return rows;
}

std::vector<double> bench_ratios(const std::vector<BenchRow>& rows, const std::string& series) {
  std::vector<const BenchRow*> in_series;
  for (const BenchRow& row : rows)
    if (row.series == series) in_series.push_back(&row);
  std::vector<double> ratios;
  for (std::size_t i = 1; i < in_series.size(); ++i)
    ratios.push_back(in_series[i]->seconds / in_series[i - 1]->seconds);
  return ratios;
}

// ------------------------------------------------------------------ results

std::vector<SummaryRow> summarize_sweep(const std::vector<SweepRow>& rows) {
  std::vector<SummaryRow> out;
  auto find = [&](const SweepRow& row) -> SummaryRow* {
    for (SummaryRow& s : out)
      if (s.gamma == row.gamma && s.method == row.method && s.d == row.d &&
          s.train_per_class == row.train_per_class)
        return &s;
    return nullptr;
  };
  for (const SweepRow& row : rows) {
    SummaryRow* s = find(row);
    if (!s) {
      out.push_back({row.gamma, row.method, row.d, row.train_per_class, 0.0, 0.0, 0});
      s = &out.back();
    }
    s->mean += row.test_acc;
    s->stddev += row.test_acc * row.test_acc;
    ++s->count;
  }
  for (SummaryRow& s : out) {
    const double n = s.count;
    const double mean = s.mean / n;
    const double ss = s.stddev - n * mean * mean;
    s.mean = mean;
    s.stddev = s.count > 1 ? std::sqrt(std::max(0.0, ss / (n - 1.0))) : 0.0;
  }
  std::stable_sort(out.begin(), out.end(), [](const SummaryRow& a, const SummaryRow& b) {
    return std::tie(a.gamma, a.method, a.d, a.train_per_class) <
           std::tie(b.gamma, b.method, b.d, b.train_per_class);
  });
  return out;
}

std::vector<SummaryRow> summarize_csl(const std::vector<CslRow>& rows) {
  std::vector<SweepRow> adapted;
  for (const CslRow& row : rows) {
    SweepRow s;
    s.method = row.method;
    s.rep = row.fold;
    s.seed = row.seed;
    s.test_acc = row.test_acc;
    adapted.push_back(s);
  }
  return summarize_sweep(adapted);
}

std::string sweep_csv_header() {
  return "gamma,method,d,train_per_class,rep,seed,test_acc,best_val_acc,best_epoch,epochs_run";
}

std::string sweep_csv_line(const SweepRow& r) {
  std::ostringstream out;
  out << fmt(r.gamma) << ',' << r.method << ',' << r.d << ',' << r.train_per_class << ','
      << r.rep << ',' << r.seed << ',' << fmt(r.test_acc) << ',' << fmt(r.best_val_acc) << ','
      << r.best_epoch << ',' << r.epochs_run;
  return out.str();
}

std::string csl_csv_header() { return "method,fold,seed,test_acc"; }

std::string csl_csv_line(const CslRow& r) {
  std::ostringstream out;
  out << r.method << ',' << r.fold << ',' << r.seed << ',' << fmt(r.test_acc);
  return out.str();
}

const SummaryRow* find_summary(const std::vector<SummaryRow>& rows, double gamma,
                               const std::string& method, int d, int train_per_class) {
  for (const SummaryRow& s : rows)
    if (s.gamma == gamma && s.method == method && (d < 0 || s.d == d) &&
        (train_per_class < 0 || s.train_per_class == train_per_class))
      return &s;
  return nullptr;
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << sweep_csv_header() << '\n';
  for (const SweepRow& r : rows) out << sweep_csv_line(r) << '\n';
  write_text(path, out.str());
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "gamma,method,d,train_per_class,mean,stddev,count\n";
  for (const SummaryRow& r : rows)
    out << fmt(r.gamma) << ',' << r.method << ',' << r.d << ',' << r.train_per_class << ','
        << fmt(r.mean) << ',' << fmt(r.stddev) << ',' << r.count << '\n';
  write_text(path, out.str());
}

void write_csl_csv(const std::string& path, const std::vector<CslRow>& rows) {
  std::ostringstream out;
  out << csl_csv_header() << '\n';
  for (const CslRow& r : rows) out << csl_csv_line(r) << '\n';
  write_text(path, out.str());
}

void write_verify_csv(const std::string& path, const std::vector<VerifyCheck>& checks) {
  std::ostringstream out;
  out << "name,pass,deviation,detail\n";
  for (const VerifyCheck& c : checks)
    out << c.name << ',' << (c.pass ? 1 : 0) << ',' << fmt(c.deviation) << ",\"" << c.detail
        << "\"\n";
  write_text(path, out.str());
}

void write_bench_csv(const std::string& path, const std::vector<BenchRow>& rows) {
  std::ostringstream out;
  out << "series,num_nodes,num_edges,seconds,iterations,converged\n";
  for (const BenchRow& r : rows)
    out << r.series << ',' << r.num_nodes << ',' << r.num_edges << ',' << fmt(r.seconds) << ','
        << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
  write_text(path, out.str());
}

void write_manifest(const std::string& path, const std::string& task,
                    const std::string& opts) {
  json j;
  j["task"] = task;
  j["version"] = kVersion;
  j["options"] = json::parse(opts);
  write_text(path, j.dump(2) + "\n");
}

namespace {

json to_json(const TrainConfig& cfg) {
  return json{{"learning_rate", cfg.learning_rate}, {"weight_decay", cfg.weight_decay},
              {"dropout", cfg.dropout},             {"max_epochs", cfg.max_epochs},
              {"early_stop_rounds", cfg.early_stop_rounds}};
}

json to_json(const SynthConfig& cfg) {
  return json{{"num_nodes", cfg.num_nodes},
              {"num_communities", cfg.num_communities},
              {"prob_in", cfg.prob_in},
              {"prob_out", cfg.prob_out},
              {"feature_dim", cfg.feature_dim},
              {"group_var", cfg.group_var},
              {"min_group_dist", cfg.min_group_dist},
              {"gamma", cfg.gamma},
              {"seed", cfg.seed}};
}

}  // namespace

std::string options_json(const SynthSweepOptions& opt) {
  json j;
  j["base"] = to_json(opt.base);
  j["gammas"] = opt.gammas;
  j["methods"] = opt.methods;
  j["repetitions"] = opt.repetitions;
  j["train_per_class"] = opt.train_per_class;
  j["val_per_class"] = opt.val_per_class;
  j["train_sizes"] = opt.train_sizes;
  j["d"] = opt.d;
  j["f_mode"] = to_string(opt.f_mode);
  j["hidden"] = opt.hidden;
  j["train"] = to_json(opt.train);
  j["threads"] = opt.threads;
  return j.dump();
}

std::string options_json(const CslOptions& opt) {
  json j;
  j["n"] = opt.n;
  j["r_set"] = opt.r_set;
  j["copies"] = opt.copies;
  j["num_folds"] = opt.num_folds;
  j["methods"] = opt.methods;
  j["d"] = opt.d;
  j["f_mode"] = to_string(opt.f_mode);
  j["hidden"] = opt.hidden;
  j["random_dim"] = opt.random_dim;
  j["batch_size"] = opt.batch_size;
  j["seed"] = opt.seed;
  j["train"] = to_json(opt.train);
  j["threads"] = opt.threads;
  return j.dump();
}

std::string options_json(const VerifyOptions& opt) {
  json j;
  j["equivariance_pairs"] = opt.equivariance_pairs;
  j["equivariance_d"] = opt.equivariance_d;
  j["spectral_graphs"] = opt.spectral_graphs;
  j["sgc_graphs"] = opt.sgc_graphs;
  j["sgc_nodes"] = opt.sgc_nodes;
  j["sgc_edge_prob"] = opt.sgc_edge_prob;
  j["sgc_propagations"] = opt.sgc_propagations;
  j["seed"] = opt.seed;
  return j.dump();
}

std::string options_json(const BenchOptions& opt) {
  json j;
  j["base_nodes"] = opt.base_nodes;
  j["base_edges"] = opt.base_edges;
  j["doublings"] = opt.doublings;
  j["d"] = opt.d;
  j["tol"] = opt.tol;
  j["seed"] = opt.seed;
  return j.dump();
}

std::string options_json(const DSweepOptions& opt) {
  json j;
  j["base"] = to_json(opt.base);
  j["d_values"] = opt.d_values;
  j["repetitions"] = opt.repetitions;
  j["train_per_class"] = opt.train_per_class;
  j["val_per_class"] = opt.val_per_class;
  j["f_mode"] = to_string(opt.f_mode);
  j["hidden"] = opt.hidden;
  j["train"] = to_json(opt.train);
  j["threads"] = opt.threads;
  return j.dump();
}

}  // namespace eigraph
