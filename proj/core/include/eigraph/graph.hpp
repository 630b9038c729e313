#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "eigraph/linalg.hpp"

namespace eigraph {

// Undirected graph in canonical CSR form: symmetric, columns strictly
// increasing within each row, no duplicates. nnz counts directed entries, so
// each undirected edge appears twice and a self-loop once.
struct SparseGraph {
  int num_nodes = 0;
  std::vector<std::int64_t> row_offsets;  // length num_nodes + 1
  std::vector<std::int32_t> col_indices;  // length nnz
  std::vector<double> values;             // length nnz, 1.0 for unweighted

  std::int64_t nnz() const { return static_cast<std::int64_t>(col_indices.size()); }
  std::int64_t self_loop_count() const;
  std::int64_t num_undirected_edges() const;  // (nnz - self-loops) / 2

  bool operator==(const SparseGraph& other) const = default;
};

using EdgeList = std::vector<std::pair<int, int>>;

// Builds canonical CSR from arbitrary pairs: both orientations and duplicate
// pairs collapse to one undirected edge of weight 1. Self-pairs allowed.
SparseGraph from_edge_list(const EdgeList& edges, int num_nodes);

// Row sums of A (self-loop weight counts once).
std::vector<double> weighted_degrees(const SparseGraph& g);
// Neighbor counts excluding self-loops.
std::vector<int> neighbor_counts(const SparseGraph& g);

bool is_connected(const SparseGraph& g);
// Two-colorable check; any self-loop makes the graph non-bipartite.
bool is_bipartite(const SparseGraph& g);

// Relabels node i to perm[i] and re-canonicalizes. perm must be a bijection.
SparseGraph permute(const SparseGraph& g, const std::vector<int>& perm);

Matrix to_dense(const SparseGraph& g);

enum class StructureKind { renorm_adjacency, plain_norm_adjacency, transition_power };

std::string to_string(StructureKind kind);
StructureKind structure_kind_from_string(const std::string& name);

// Symmetric matrix derived from a graph. transition_power with K > 1 fills in,
// so it is stored densely; everything else stays in CSR. The transition matrix
// (D^-1 A)^K is kept in its symmetrized similarity form D^-1/2 A D^-1/2 raised
// to K, with sqrt_degree retained to map back to the row-stochastic form.
struct StructureMatrix {
  StructureKind kind = StructureKind::renorm_adjacency;
  int power = 1;  // K, only meaningful for transition_power
  SparseGraph sparse;
  Matrix dense;
  std::vector<double> sqrt_degree;  // transition_power only

  bool is_dense() const { return dense.rows() > 0; }
  int num_nodes() const { return is_dense() ? dense.rows() : sparse.num_nodes; }
};

// D~^-1/2 (A + I) D~^-1/2 with D~ the row sums of A + I.
StructureMatrix renormalized_adjacency(const SparseGraph& g);
// D^-1/2 A D^-1/2; rejects zero-degree nodes by index.
StructureMatrix plain_normalized_adjacency(const SparseGraph& g);
// Symmetrized (D^-1 A)^K; K > 1 densifies and requires N <= 2000.
StructureMatrix transition_power(const SparseGraph& g, int k);

// Row sums of the row-stochastic form (D^-1 A)^K of a transition_power matrix.
std::vector<double> transition_row_sums(const StructureMatrix& m);

// m * h with ascending-column summation order per row (bitwise deterministic).
Matrix spmm(const StructureMatrix& m, const Matrix& h);
// A * h on the raw adjacency (weighted neighbor sum, no normalization).
Matrix adjacency_spmm(const SparseGraph& g, const Matrix& h);
std::vector<double> spmv(const StructureMatrix& m, const std::vector<double>& x);

Matrix to_dense(const StructureMatrix& m);

}  // namespace eigraph
