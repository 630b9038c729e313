#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eigraph/graph.hpp"

namespace eigraph {

// Circulant skip-link graph family: an n-cycle plus skip links at interval r.
// G(n, r) and G(n, n-r) are the same graph, so r sets must avoid the alias.

SparseGraph build_csl(int n, int r);

// Adjacency eigenvalues 2cos(2*pi*j/n) + 2cos(2*pi*j*r/n), j = 0..n-1.
std::vector<double> circulant_spectrum_oracle(int n, int r);

// Renormalized-adjacency spectrum of a 4-regular instance: (1 + lambda)/5.
std::vector<double> circulant_renorm_spectrum(int n, int r);

struct CslDataset {
  int n = 0;
  std::vector<int> r_set;  // sorted; class label = index into it
  int copies = 0;
  std::uint64_t seed = 0;
  // class-major order: all copies of class 0, then class 1, ...
  std::vector<SparseGraph> graphs;
  std::vector<int> labels;
  std::vector<int> folds;
};

// Copy 0 of each class is the base graph; further copies are random node
// relabelings. Folds are stratified per class.
CslDataset build_csl_dataset(int n, std::vector<int> r_set, int copies, int num_folds,
                             std::uint64_t seed);

// Paper setting: n=41, R = {2,3,4,5,6,9,11,12,13,16}, 60 copies, 5 folds.
CslDataset paper_csl_dataset(std::uint64_t seed);

// Directory layout: manifest.json plus graph_<index>.txt edge lists.
void save_csl_dataset(const CslDataset& data, const std::string& dir);
CslDataset load_csl_dataset(const std::string& dir);

}  // namespace eigraph
