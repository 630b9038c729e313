#include "eigraph/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "eigraph/io.hpp"
#include "eigraph/rng.hpp"
#include "json.hpp"

namespace eigraph {

namespace {

// Substream ids off SynthConfig::seed.
enum : std::uint64_t { kStructure = 0, kFeatures = 1, kLabels = 2, kSplits = 3 };

void check_config(const SynthConfig& cfg) {
  if (cfg.num_nodes < 1) throw std::invalid_argument("synth: num_nodes must be positive");
  if (cfg.num_communities < 1 || cfg.num_communities > cfg.num_nodes)
    throw std::invalid_argument("synth: num_communities must be in [1, num_nodes]");
  if (!(cfg.prob_out >= 0.0 && cfg.prob_out <= cfg.prob_in && cfg.prob_in <= 1.0))
    throw std::invalid_argument("synth: need 0 <= prob_out <= prob_in <= 1");
  if (cfg.feature_dim < 1) throw std::invalid_argument("synth: feature_dim must be positive");
  if (cfg.gamma < 0.0 || cfg.gamma > 1.0)
    throw std::invalid_argument("synth: gamma must be in [0, 1]");
}

// Bernoulli trials over a contiguous pair range via geometric skipping.
// Emits linear pair indices in [0, count) in increasing order.
template <typename Emit>
void skip_sample(std::int64_t count, double p, Rng& rng, Emit emit) {
  if (count <= 0 || p <= 0.0) return;
  if (p >= 1.0) {
    for (std::int64_t t = 0; t < count; ++t) emit(t);
    return;
  }
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double denom = std::log1p(-p);
  std::int64_t t = -1;
  while (true) {
    double u = unif(rng);
    if (u >= 1.0) u = std::nextafter(1.0, 0.0);
    t += 1 + static_cast<std::int64_t>(std::log1p(-u) / denom);
    if (t >= count) return;
    emit(t);
  }
}

// Row-major unordered pairs (i, j), 0 <= i < j < s: linear index -> pair.
std::pair<int, int> triangle_pair(std::int64_t t, int s) {
  // row i starts at offset i*(s-1) - i*(i-1)/2
  double disc = (2.0 * s - 1.0) * (2.0 * s - 1.0) - 8.0 * static_cast<double>(t);
  int i = static_cast<int>(((2.0 * s - 1.0) - std::sqrt(std::max(disc, 0.0))) / 2.0);
  auto row_start = [s](std::int64_t r) { return r * (s - 1) - r * (r - 1) / 2; };
  while (i > 0 && row_start(i) > t) --i;
  while (row_start(i + 1) <= t) ++i;
  const int j = static_cast<int>(i + 1 + (t - row_start(i)));
  return {i, j};
}

}  // namespace

SynthConfig desk_preset() { return SynthConfig{}; }

SynthConfig paper_preset() {
  SynthConfig cfg;
  cfg.num_nodes = 5000;
  cfg.prob_in = 0.025;
  cfg.prob_out = 0.001;
  return cfg;
}

std::vector<int> community_assignment(int num_nodes, int num_communities) {
  std::vector<int> sizes(num_communities, num_nodes / num_communities);
  for (int c = 0; c < num_nodes % num_communities; ++c) ++sizes[c];
  std::vector<int> out;
  out.reserve(num_nodes);
  for (int c = 0; c < num_communities; ++c) out.insert(out.end(), sizes[c], c);
  return out;
}

std::pair<SparseGraph, std::vector<int>> generate_structure(const SynthConfig& cfg) {
  check_config(cfg);
  const int n = cfg.num_nodes;
  const int l = cfg.num_communities;
  std::vector<int> c_struc = community_assignment(n, l);
  std::vector<int> start(l + 1, 0);
  for (int i = 0; i < n; ++i) ++start[c_struc[i] + 1];
  for (int c = 0; c < l; ++c) start[c + 1] += start[c];

  Rng rng = make_rng(derive_seed(cfg.seed, kStructure));
  EdgeList edges;
  // within-community pair ranges, then the community-pair rectangles, in a
  // fixed order so the draw is reproducible
  for (int c = 0; c < l; ++c) {
    const int s = start[c + 1] - start[c];
    const std::int64_t pairs = static_cast<std::int64_t>(s) * (s - 1) / 2;
    skip_sample(pairs, cfg.prob_in, rng, [&](std::int64_t t) {
      auto [i, j] = triangle_pair(t, s);
      edges.push_back({start[c] + i, start[c] + j});
    });
  }
  for (int a = 0; a < l; ++a) {
    const int sa = start[a + 1] - start[a];
    for (int b = a + 1; b < l; ++b) {
      const int sb = start[b + 1] - start[b];
      const std::int64_t pairs = static_cast<std::int64_t>(sa) * sb;
      skip_sample(pairs, cfg.prob_out, rng, [&](std::int64_t t) {
        edges.push_back({start[a] + static_cast<int>(t / sb),
                         start[b] + static_cast<int>(t % sb)});
      });
    }
  }
  return {from_edge_list(edges, n), std::move(c_struc)};
}

std::pair<Matrix, std::vector<int>> generate_features(const SynthConfig& cfg,
                                                      std::uint64_t seed) {
  check_config(cfg);
  const int n = cfg.num_nodes;
  const int l = cfg.num_communities;
  const int f = cfg.feature_dim;
  Rng group_rng = make_rng(derive_seed(seed, 0));
  Rng noise_rng = make_rng(derive_seed(seed, 1));
  Rng shuffle_rng = make_rng(derive_seed(seed, 2));
  std::normal_distribution<double> gauss(0.0, 1.0);

  const double sigma = std::sqrt(cfg.group_var);
  Matrix groups(l, f);
  bool ok = false;
  for (int attempt = 0; attempt < 1000 && !ok; ++attempt) {
    for (int g = 0; g < l; ++g)
      for (int k = 0; k < f; ++k) groups(g, k) = sigma * gauss(group_rng);
    ok = true;
    for (int a = 0; a < l && ok; ++a)
      for (int b = a + 1; b < l && ok; ++b) {
        double d2 = 0.0;
        for (int k = 0; k < f; ++k) {
          const double diff = groups(a, k) - groups(b, k);
          d2 += diff * diff;
        }
        if (d2 <= cfg.min_group_dist * cfg.min_group_dist) ok = false;
      }
  }
  if (!ok)
    throw std::runtime_error(
        "generate_features: could not separate group vectors by min_group_dist "
        "after 1000 redraws; increase group_var or lower min_group_dist");

  std::vector<int> c_feat = community_assignment(n, l);
  std::shuffle(c_feat.begin(), c_feat.end(), shuffle_rng);

  Matrix features(n, f);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < f; ++k) features(i, k) = groups(c_feat[i], k) + gauss(noise_rng);
  return {std::move(features), std::move(c_feat)};
}

std::vector<int> mix_labels(const std::vector<int>& c_struc, const std::vector<int>& c_feat,
                            double gamma, std::uint64_t seed) {
  if (c_struc.size() != c_feat.size())
    throw std::invalid_argument("mix_labels: provenance arrays differ in length");
  if (gamma < 0.0 || gamma > 1.0)
    throw std::invalid_argument("mix_labels: gamma must be in [0, 1]");
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<int> labels(c_struc.size());
  for (std::size_t i = 0; i < labels.size(); ++i)
    labels[i] = unif(rng) < gamma ? c_struc[i] : c_feat[i];
  return labels;
}

Splits split_per_class(const std::vector<int>& labels, int n_train, int n_val,
                       std::uint64_t seed) {
  if (n_train < 0 || n_val < 0)
    throw std::invalid_argument("split_per_class: negative split sizes");
  int num_classes = 0;
  for (int l : labels) {
    if (l < 0) throw std::invalid_argument("split_per_class: negative label");
    num_classes = std::max(num_classes, l + 1);
  }
  std::vector<std::vector<int>> members(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i)
    members[labels[i]].push_back(static_cast<int>(i));

  Rng rng = make_rng(seed);
  Splits splits;
  for (int c = 0; c < num_classes; ++c) {
    auto& nodes = members[c];
    if (static_cast<int>(nodes.size()) < n_train + n_val)
      throw std::invalid_argument("split_per_class: class " + std::to_string(c) + " has " +
                                  std::to_string(nodes.size()) + " members, needs " +
                                  std::to_string(n_train + n_val));
    std::shuffle(nodes.begin(), nodes.end(), rng);
    splits.train.insert(splits.train.end(), nodes.begin(), nodes.begin() + n_train);
    splits.val.insert(splits.val.end(), nodes.begin() + n_train,
                      nodes.begin() + n_train + n_val);
    splits.test.insert(splits.test.end(), nodes.begin() + n_train + n_val, nodes.end());
  }
  std::sort(splits.train.begin(), splits.train.end());
  std::sort(splits.val.begin(), splits.val.end());
  std::sort(splits.test.begin(), splits.test.end());
  return splits;
}

SynthDataset generate_synth(const SynthConfig& cfg, int n_train, int n_val) {
  SynthDataset data;
  auto [graph, c_struc] = generate_structure(cfg);
  auto [features, c_feat] = generate_features(cfg, derive_seed(cfg.seed, kFeatures));
  data.graph = std::move(graph);
  data.features = std::move(features);
  data.c_struc = std::move(c_struc);
  data.c_feat = std::move(c_feat);
  data.labels = mix_labels(data.c_struc, data.c_feat, cfg.gamma,
                           derive_seed(cfg.seed, kLabels));
  data.splits = split_per_class(data.labels, n_train, n_val, derive_seed(cfg.seed, kSplits));
  return data;
}

EdgeCountStats sbm_expected_nnz(const SynthConfig& cfg) {
  check_config(cfg);
  std::vector<int> sizes(cfg.num_communities, cfg.num_nodes / cfg.num_communities);
  for (int c = 0; c < cfg.num_nodes % cfg.num_communities; ++c) ++sizes[c];
  double pairs_in = 0.0, pairs_out = 0.0;
  for (int a = 0; a < cfg.num_communities; ++a) {
    pairs_in += 0.5 * sizes[a] * (sizes[a] - 1.0);
    for (int b = a + 1; b < cfg.num_communities; ++b)
      pairs_out += static_cast<double>(sizes[a]) * sizes[b];
  }
  const double mean = pairs_in * cfg.prob_in + pairs_out * cfg.prob_out;
  const double var = pairs_in * cfg.prob_in * (1.0 - cfg.prob_in) +
                     pairs_out * cfg.prob_out * (1.0 - cfg.prob_out);
  // directed entries double both the count and (by 2x scaling) the deviation
  return {2.0 * mean, 2.0 * std::sqrt(var)};
}

SparseGraph erdos_renyi_gnp(int n, double p, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("erdos_renyi_gnp: n must be positive");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("erdos_renyi_gnp: p must be in [0, 1]");
  Rng rng = make_rng(seed);
  EdgeList edges;
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  skip_sample(pairs, p, rng, [&](std::int64_t t) {
    auto [i, j] = triangle_pair(t, n);
    edges.push_back({i, j});
  });
  return from_edge_list(edges, n);
}

SparseGraph erdos_renyi_gnm(int n, std::int64_t num_edges, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("erdos_renyi_gnm: n must be positive");
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (num_edges < 0 || num_edges > pairs)
    throw std::invalid_argument("erdos_renyi_gnm: edge count " + std::to_string(num_edges) +
                                " outside [0, " + std::to_string(pairs) + "]");
  Rng rng = make_rng(seed);
  std::uniform_int_distribution<std::int64_t> pick(0, pairs - 1);
  std::unordered_set<std::int64_t> chosen;
  chosen.reserve(static_cast<std::size_t>(num_edges) * 2);
  EdgeList edges;
  edges.reserve(num_edges);
  while (static_cast<std::int64_t>(edges.size()) < num_edges) {
    const std::int64_t t = pick(rng);
    if (!chosen.insert(t).second) continue;
    auto [i, j] = triangle_pair(t, n);
    edges.push_back({i, j});
  }
  return from_edge_list(edges, n);
}

SparseGraph random_connected_gnp(int n, double p, std::uint64_t seed, int max_tries) {
  for (int t = 0; t < max_tries; ++t) {
    SparseGraph g = erdos_renyi_gnp(n, p, derive_seed(seed, t));
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("random_connected_gnp: no connected graph in " +
                           std::to_string(max_tries) + " draws; raise p");
}

void save_synth_dataset(const SynthDataset& data, const SynthConfig& cfg,
                        const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);
  save_edge_list((base / "edges.txt").string(), data.graph);
  save_csv_matrix((base / "features.csv").string(), data.features);

  std::ostringstream labels;
  labels << "label,c_struc,c_feat\n";
  for (std::size_t i = 0; i < data.labels.size(); ++i)
    labels << data.labels[i] << ',' << data.c_struc[i] << ',' << data.c_feat[i] << '\n';
  write_text((base / "labels.csv").string(), labels.str());

  nlohmann::json splits;
  splits["train"] = data.splits.train;
  splits["val"] = data.splits.val;
  splits["test"] = data.splits.test;
  write_text((base / "splits.json").string(), splits.dump(2) + "\n");

  nlohmann::json jc;
  jc["num_nodes"] = cfg.num_nodes;
  jc["num_communities"] = cfg.num_communities;
  jc["prob_in"] = cfg.prob_in;
  jc["prob_out"] = cfg.prob_out;
  jc["feature_dim"] = cfg.feature_dim;
  jc["group_var"] = cfg.group_var;
  jc["min_group_dist"] = cfg.min_group_dist;
  jc["gamma"] = cfg.gamma;
  jc["seed"] = cfg.seed;
  write_text((base / "config.json").string(), jc.dump(2) + "\n");
}

SynthDataset load_synth_dataset(const std::string& dir, SynthConfig* cfg_out) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  SynthDataset data;

  const nlohmann::json jc = nlohmann::json::parse(read_text((base / "config.json").string()));
  SynthConfig cfg;
  cfg.num_nodes = jc.at("num_nodes").get<int>();
  cfg.num_communities = jc.at("num_communities").get<int>();
  cfg.prob_in = jc.at("prob_in").get<double>();
  cfg.prob_out = jc.at("prob_out").get<double>();
  cfg.feature_dim = jc.at("feature_dim").get<int>();
  cfg.group_var = jc.at("group_var").get<double>();
  cfg.min_group_dist = jc.at("min_group_dist").get<double>();
  cfg.gamma = jc.at("gamma").get<double>();
  cfg.seed = jc.at("seed").get<std::uint64_t>();
  if (cfg_out) *cfg_out = cfg;

  data.graph = load_edge_list((base / "edges.txt").string(), cfg.num_nodes);
  data.features = load_csv_matrix((base / "features.csv").string());

  const std::string labels_path = (base / "labels.csv").string();
  std::vector<std::string> lines = read_lines(labels_path);
  if (lines.empty() || lines[0] != "label,c_struc,c_feat")
    throw std::runtime_error(labels_path + ":1: expected header label,c_struc,c_feat");
  for (std::size_t ln = 1; ln < lines.size(); ++ln) {
    if (lines[ln].empty()) continue;
    std::istringstream row(lines[ln]);
    std::string cell;
    int vals[3];
    for (int k = 0; k < 3; ++k) {
      if (!std::getline(row, cell, ','))
        throw std::runtime_error(labels_path + ":" + std::to_string(ln + 1) +
                                 ": expected 3 columns");
      vals[k] = std::stoi(cell);
    }
    data.labels.push_back(vals[0]);
    data.c_struc.push_back(vals[1]);
    data.c_feat.push_back(vals[2]);
  }

  const nlohmann::json js = nlohmann::json::parse(read_text((base / "splits.json").string()));
  data.splits.train = js.at("train").get<std::vector<int>>();
  data.splits.val = js.at("val").get<std::vector<int>>();
  data.splits.test = js.at("test").get<std::vector<int>>();
  return data;
}

}  // namespace eigraph
