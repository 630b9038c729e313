#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eigraph/graph.hpp"
#include "eigraph/linalg.hpp"
#include "eigraph/nn.hpp"

namespace eigraph {

// Stochastic blockmodel + Gaussian group features with a Bernoulli(gamma)
// label rule choosing between the structure community and the feature group.
struct SynthConfig {
  int num_nodes = 1000;
  int num_communities = 10;
  double prob_in = 0.125;
  double prob_out = 0.005;
  int feature_dim = 32;
  double group_var = 4.0;
  double min_group_dist = 1.0;
  double gamma = 1.0;
  std::uint64_t seed = 0;
};

// 1/5 of the paper scale with 5x edge probabilities: expected degree kept.
SynthConfig desk_preset();
SynthConfig paper_preset();

struct SynthDataset {
  SparseGraph graph;
  Matrix features;
  std::vector<int> labels;
  std::vector<int> c_struc;
  std::vector<int> c_feat;
  Splits splits;
};

// Communities are contiguous node blocks; sizes differ by at most one with
// the remainder going to the lowest community ids.
std::vector<int> community_assignment(int num_nodes, int num_communities);

std::pair<SparseGraph, std::vector<int>> generate_structure(const SynthConfig& cfg);

// Group vectors ~ N(0, group_var I), redrawn as a whole set until every pair
// is farther apart than min_group_dist; node features add N(0, I) noise.
// Group membership is a seeded shuffle, independent of the communities.
std::pair<Matrix, std::vector<int>> generate_features(const SynthConfig& cfg, std::uint64_t seed);

// One uniform draw per node shared across gamma values: raising gamma only
// flips nodes from the feature label to the structure label.
std::vector<int> mix_labels(const std::vector<int>& c_struc, const std::vector<int>& c_feat,
                            double gamma, std::uint64_t seed);

Splits split_per_class(const std::vector<int>& labels, int n_train, int n_val,
                       std::uint64_t seed);

// Wires the seed substreams: structure, features, labels, splits.
SynthDataset generate_synth(const SynthConfig& cfg, int n_train, int n_val);

// Directed-entry count statistics of the SBM draw (sum of pair Bernoullis).
struct EdgeCountStats {
  double expected = 0.0;
  double stddev = 0.0;
};
EdgeCountStats sbm_expected_nnz(const SynthConfig& cfg);

SparseGraph erdos_renyi_gnp(int n, double p, std::uint64_t seed);
SparseGraph erdos_renyi_gnm(int n, std::int64_t num_edges, std::uint64_t seed);
SparseGraph random_connected_gnp(int n, double p, std::uint64_t seed, int max_tries = 100);

// Dataset directory: edges.txt, features.csv, labels.csv, splits.json,
// config.json.
void save_synth_dataset(const SynthDataset& data, const SynthConfig& cfg,
                        const std::string& dir);
SynthDataset load_synth_dataset(const std::string& dir, SynthConfig* cfg_out = nullptr);

}  // namespace eigraph
