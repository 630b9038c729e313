#include "eigraph/csl.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <random>
#include <stdexcept>

#include "eigraph/io.hpp"
#include "eigraph/rng.hpp"
#include "json.hpp"

namespace eigraph {

namespace {

void check_spec(int n, int r) {
  if (r <= 1 || r >= n - 1)
    throw std::invalid_argument("csl: skip interval r = " + std::to_string(r) +
                                " out of range (1, " + std::to_string(n - 1) + ")");
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

SparseGraph build_csl(int n, int r) {
  check_spec(n, r);
  EdgeList edges;
  edges.reserve(2 * n);
  for (int j = 0; j < n; ++j) {
    edges.push_back({j, (j + 1) % n});
    edges.push_back({j, (j + r) % n});
  }
  return from_edge_list(edges, n);
}

std::vector<double> circulant_spectrum_oracle(int n, int r) {
  check_spec(n, r);
  std::vector<double> vals(n);
  for (int j = 0; j < n; ++j)
    vals[j] = 2.0 * std::cos(2.0 * kPi * j / n) + 2.0 * std::cos(2.0 * kPi * j * r / n);
  return vals;
}

std::vector<double> circulant_renorm_spectrum(int n, int r) {
  check_spec(n, r);
  if (2 * r == n)
    throw std::invalid_argument("csl: 2r = n gives a 3-regular graph; (1+lambda)/5 "
                                "requires 4-regularity");
  std::vector<double> vals = circulant_spectrum_oracle(n, r);
  for (double& v : vals) v = (1.0 + v) / 5.0;
  return vals;
}

CslDataset build_csl_dataset(int n, std::vector<int> r_set, int copies, int num_folds,
                             std::uint64_t seed) {
  if (copies < 1) throw std::invalid_argument("csl: copies must be positive");
  if (num_folds < 1 || num_folds > copies)
    throw std::invalid_argument("csl: num_folds must be in [1, copies]");
  std::sort(r_set.begin(), r_set.end());
  for (std::size_t a = 0; a < r_set.size(); ++a) {
    check_spec(n, r_set[a]);
    for (std::size_t b = a + 1; b < r_set.size(); ++b) {
      if (r_set[a] == r_set[b] || r_set[a] == n - r_set[b])
        throw std::invalid_argument(
            "csl: r = " + std::to_string(r_set[a]) + " and r = " + std::to_string(r_set[b]) +
            " build the same graph on n = " + std::to_string(n));
    }
  }

  CslDataset data;
  data.n = n;
  data.r_set = std::move(r_set);
  data.copies = copies;
  data.seed = seed;
  const int num_classes = static_cast<int>(data.r_set.size());
  data.graphs.reserve(static_cast<std::size_t>(num_classes) * copies);
  data.labels.reserve(data.graphs.capacity());

  for (int c = 0; c < num_classes; ++c) {
    const SparseGraph base = build_csl(n, data.r_set[c]);
    Rng rng = make_rng(derive_seed(seed, c));
    for (int copy = 0; copy < copies; ++copy) {
      if (copy == 0) {
        data.graphs.push_back(base);
      } else {
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        data.graphs.push_back(permute(base, perm));
      }
      data.labels.push_back(c);
    }
  }

  // stratified folds: shuffle each class's copies, deal them out in turn
  data.folds.assign(data.graphs.size(), 0);
  Rng fold_rng = make_rng(derive_seed(seed, 0x666F6C64ULL));
  for (int c = 0; c < num_classes; ++c) {
    std::vector<int> index(copies);
    std::iota(index.begin(), index.end(), 0);
    std::shuffle(index.begin(), index.end(), fold_rng);
    for (int k = 0; k < copies; ++k)
      data.folds[static_cast<std::size_t>(c) * copies + index[k]] = k % num_folds;
  }
  return data;
}

CslDataset paper_csl_dataset(std::uint64_t seed) {
  return build_csl_dataset(41, {2, 3, 4, 5, 6, 9, 11, 12, 13, 16}, 60, 5, seed);
}

void save_csl_dataset(const CslDataset& data, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  const fs::path base(dir);

  nlohmann::json manifest;
  manifest["n"] = data.n;
  manifest["r_set"] = data.r_set;
  manifest["copies"] = data.copies;
  manifest["seed"] = data.seed;
  manifest["folds"] = data.folds;
  manifest["labels"] = data.labels;
  write_text((base / "manifest.json").string(), manifest.dump(2) + "\n");

  char name[32];
  for (std::size_t g = 0; g < data.graphs.size(); ++g) {
    std::snprintf(name, sizeof(name), "graph_%04zu.txt", g);
    save_edge_list((base / name).string(), data.graphs[g]);
  }
}

CslDataset load_csl_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);
  const nlohmann::json manifest =
      nlohmann::json::parse(read_text((base / "manifest.json").string()));

  CslDataset data;
  data.n = manifest.at("n").get<int>();
  data.r_set = manifest.at("r_set").get<std::vector<int>>();
  data.copies = manifest.at("copies").get<int>();
  data.seed = manifest.at("seed").get<std::uint64_t>();
  data.folds = manifest.at("folds").get<std::vector<int>>();
  data.labels = manifest.at("labels").get<std::vector<int>>();

  char name[32];
  data.graphs.reserve(data.labels.size());
  for (std::size_t g = 0; g < data.labels.size(); ++g) {
    std::snprintf(name, sizeof(name), "graph_%04zu.txt", g);
    data.graphs.push_back(load_edge_list((base / name).string(), data.n));
  }
  return data;
}

}  // namespace eigraph
