#include "eigraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace eigraph {

std::int64_t SparseGraph::self_loop_count() const {
  std::int64_t count = 0;
  for (int i = 0; i < num_nodes; ++i)
    for (std::int64_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k)
      if (col_indices[k] == i) ++count;
  return count;
}

std::int64_t SparseGraph::num_undirected_edges() const {
  return (nnz() - self_loop_count()) / 2;
}

SparseGraph from_edge_list(const EdgeList& edges, int num_nodes) {
  if (num_nodes < 0) throw std::invalid_argument("from_edge_list: negative node count");
  std::vector<std::pair<int, int>> directed;
  directed.reserve(edges.size() * 2);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto [i, j] = edges[e];
    if (i < 0 || i >= num_nodes || j < 0 || j >= num_nodes)
      throw std::out_of_range("from_edge_list: edge " + std::to_string(e + 1) + " (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              ") has node index outside [0," + std::to_string(num_nodes) + ")");
    directed.emplace_back(i, j);
    if (i != j) directed.emplace_back(j, i);
  }
  std::sort(directed.begin(), directed.end());
  directed.erase(std::unique(directed.begin(), directed.end()), directed.end());

  SparseGraph g;
  g.num_nodes = num_nodes;
  g.row_offsets.assign(num_nodes + 1, 0);
  g.col_indices.reserve(directed.size());
  g.values.assign(directed.size(), 1.0);
  for (const auto& [i, j] : directed) {
    g.row_offsets[i + 1]++;
    g.col_indices.push_back(static_cast<std::int32_t>(j));
  }
  for (int i = 0; i < num_nodes; ++i) g.row_offsets[i + 1] += g.row_offsets[i];
  return g;
}

std::vector<double> weighted_degrees(const SparseGraph& g) {
  std::vector<double> deg(g.num_nodes, 0.0);
  for (int i = 0; i < g.num_nodes; ++i)
    for (std::int64_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k)
      deg[i] += g.values[k];
  return deg;
}

std::vector<int> neighbor_counts(const SparseGraph& g) {
  std::vector<int> deg(g.num_nodes, 0);
  for (int i = 0; i < g.num_nodes; ++i)
    for (std::int64_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k)
      if (g.col_indices[k] != i) ++deg[i];
  return deg;
}

bool is_connected(const SparseGraph& g) {
  if (g.num_nodes <= 1) return true;
  std::vector<char> seen(g.num_nodes, 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  int visited = 1;
  while (!frontier.empty()) {
    const int u = frontier.front();
    frontier.pop();
    for (std::int64_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k) {
      const int v = g.col_indices[k];
      if (!seen[v]) {
        seen[v] = 1;
        ++visited;
        frontier.push(v);
      }
    }
  }
  return visited == g.num_nodes;
}

bool is_bipartite(const SparseGraph& g) {
  std::vector<int> color(g.num_nodes, -1);
  for (int start = 0; start < g.num_nodes; ++start) {
    if (color[start] != -1) continue;
    color[start] = 0;
    std::queue<int> frontier;
    frontier.push(start);
    while (!frontier.empty()) {
      const int u = frontier.front();
      frontier.pop();
      for (std::int64_t k = g.row_offsets[u]; k < g.row_offsets[u + 1]; ++k) {
        const int v = g.col_indices[k];
        if (v == u) return false;
        if (color[v] == -1) {
          color[v] = 1 - color[u];
          frontier.push(v);
        } else if (color[v] == color[u]) {
          return false;
        }
      }
    }
  }
  return true;
}

SparseGraph permute(const SparseGraph& g, const std::vector<int>& perm) {
  if (static_cast<int>(perm.size()) != g.num_nodes)
    throw std::invalid_argument("permute: permutation length differs from node count");
  std::vector<char> hit(g.num_nodes, 0);
  for (int p : perm) {
    if (p < 0 || p >= g.num_nodes || hit[p])
      throw std::invalid_argument("permute: not a bijection on [0,N)");
    hit[p] = 1;
  }
  // Relabel every directed entry, then rebuild canonical CSR. Values ride
  // along so weighted graphs permute correctly.
  std::vector<std::pair<std::pair<int, int>, double>> entries;
  entries.reserve(g.col_indices.size());
  for (int i = 0; i < g.num_nodes; ++i)
    for (std::int64_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k)
      entries.push_back({{perm[i], perm[g.col_indices[k]]}, g.values[k]});
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  SparseGraph out;
  out.num_nodes = g.num_nodes;
  out.row_offsets.assign(g.num_nodes + 1, 0);
  out.col_indices.reserve(entries.size());
  out.values.reserve(entries.size());
  for (const auto& [ij, w] : entries) {
    out.row_offsets[ij.first + 1]++;
    out.col_indices.push_back(static_cast<std::int32_t>(ij.second));
    out.values.push_back(w);
  }
  for (int i = 0; i < g.num_nodes; ++i) out.row_offsets[i + 1] += out.row_offsets[i];
  return out;
}

Matrix to_dense(const SparseGraph& g) {
  Matrix m(g.num_nodes, g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i)
    for (std::int64_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k)
      m(i, g.col_indices[k]) += g.values[k];
  return m;
}

std::string to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::renorm_adjacency: return "renorm_adjacency";
    case StructureKind::plain_norm_adjacency: return "plain_norm_adjacency";
    case StructureKind::transition_power: return "transition_power";
  }
  return "unknown";
}

StructureKind structure_kind_from_string(const std::string& name) {
  if (name == "renorm_adjacency") return StructureKind::renorm_adjacency;
  if (name == "plain_norm_adjacency") return StructureKind::plain_norm_adjacency;
  if (name == "transition_power") return StructureKind::transition_power;
  throw std::invalid_argument("unknown structure kind: " + name);
}

namespace {

// Inserts a unit self-loop into every row, adding to an existing diagonal
// entry when the graph already has one.
SparseGraph add_self_loops(const SparseGraph& g) {
  SparseGraph out;
  out.num_nodes = g.num_nodes;
  out.row_offsets.assign(g.num_nodes + 1, 0);
  out.col_indices.reserve(g.col_indices.size() + g.num_nodes);
  out.values.reserve(g.values.size() + g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) {
    bool placed = false;
    for (std::int64_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k) {
      const int j = g.col_indices[k];
      double w = g.values[k];
      if (!placed && j >= i) {
        if (j == i) {
          w += 1.0;
        } else {
          out.col_indices.push_back(static_cast<std::int32_t>(i));
          out.values.push_back(1.0);
        }
        placed = true;
      }
      out.col_indices.push_back(static_cast<std::int32_t>(j));
      out.values.push_back(w);
    }
    if (!placed) {
      out.col_indices.push_back(static_cast<std::int32_t>(i));
      out.values.push_back(1.0);
    }
    out.row_offsets[i + 1] = static_cast<std::int64_t>(out.col_indices.size());
  }
  return out;
}

SparseGraph scale_symmetric(const SparseGraph& g, const std::vector<double>& inv_sqrt) {
  SparseGraph out = g;
  for (int i = 0; i < g.num_nodes; ++i)
    for (std::int64_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k)
      out.values[k] = g.values[k] * inv_sqrt[i] * inv_sqrt[g.col_indices[k]];
  return out;
}

std::vector<double> inv_sqrt_degrees(const SparseGraph& g, const char* op) {
  std::vector<double> deg = weighted_degrees(g);
  for (int i = 0; i < g.num_nodes; ++i) {
    if (deg[i] <= 0.0)
      throw std::domain_error(std::string(op) + ": node " + std::to_string(i) +
                              " has zero degree");
    deg[i] = 1.0 / std::sqrt(deg[i]);
  }
  return deg;
}

}  // namespace

StructureMatrix renormalized_adjacency(const SparseGraph& g) {
  const SparseGraph with_loops = add_self_loops(g);
  const std::vector<double> inv_sqrt =
      inv_sqrt_degrees(with_loops, "renormalized_adjacency");
  StructureMatrix m;
  m.kind = StructureKind::renorm_adjacency;
  m.sparse = scale_symmetric(with_loops, inv_sqrt);
  return m;
}

StructureMatrix plain_normalized_adjacency(const SparseGraph& g) {
  const std::vector<double> inv_sqrt = inv_sqrt_degrees(g, "plain_normalized_adjacency");
  StructureMatrix m;
  m.kind = StructureKind::plain_norm_adjacency;
  m.sparse = scale_symmetric(g, inv_sqrt);
  return m;
}

StructureMatrix transition_power(const SparseGraph& g, int k) {
  if (k < 1) throw std::invalid_argument("transition_power: K must be >= 1");
  const std::vector<double> inv_sqrt = inv_sqrt_degrees(g, "transition_power");
  StructureMatrix m;
  m.kind = StructureKind::transition_power;
  m.power = k;
  m.sqrt_degree.resize(g.num_nodes);
  for (int i = 0; i < g.num_nodes; ++i) m.sqrt_degree[i] = 1.0 / inv_sqrt[i];

  const SparseGraph s = scale_symmetric(g, inv_sqrt);
  if (k == 1) {
    m.sparse = s;
    return m;
  }
  if (g.num_nodes > 2000)
    throw std::domain_error("transition_power: N = " + std::to_string(g.num_nodes) +
                            " exceeds the densification bound 2000 for K > 1; use K = 1");
  Matrix base = to_dense(s);
  Matrix acc = base;
  for (int step = 1; step < k; ++step) acc = matmul(acc, base);
  m.dense = std::move(acc);
  return m;
}

std::vector<double> transition_row_sums(const StructureMatrix& m) {
  if (m.kind != StructureKind::transition_power)
    throw std::invalid_argument("transition_row_sums: matrix is not a transition power");
  const int n = m.num_nodes();
  std::vector<double> sums(n, 0.0);
  if (m.is_dense()) {
    for (int i = 0; i < n; ++i) {
      const double* row = m.dense.row(i);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += row[j] * m.sqrt_degree[j];
      sums[i] = s / m.sqrt_degree[i];
    }
  } else {
    const SparseGraph& g = m.sparse;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::int64_t p = g.row_offsets[i]; p < g.row_offsets[i + 1]; ++p)
        s += g.values[p] * m.sqrt_degree[g.col_indices[p]];
      sums[i] = s / m.sqrt_degree[i];
    }
  }
  return sums;
}

Matrix spmm(const StructureMatrix& m, const Matrix& h) {
  if (m.num_nodes() != h.rows()) throw std::invalid_argument("spmm: dimension mismatch");
  if (m.is_dense()) return matmul(m.dense, h);
  const SparseGraph& g = m.sparse;
  Matrix out(h.rows(), h.cols());
  const int d = h.cols();
  for (int i = 0; i < g.num_nodes; ++i) {
    double* oi = out.row(i);
    for (std::int64_t p = g.row_offsets[i]; p < g.row_offsets[i + 1]; ++p) {
      const double w = g.values[p];
      const double* hj = h.row(g.col_indices[p]);
      for (int c = 0; c < d; ++c) oi[c] += w * hj[c];
    }
  }
  return out;
}

Matrix adjacency_spmm(const SparseGraph& g, const Matrix& h) {
  if (g.num_nodes != h.rows()) throw std::invalid_argument("adjacency_spmm: dimension mismatch");
  Matrix out(h.rows(), h.cols());
  const int d = h.cols();
  for (int i = 0; i < g.num_nodes; ++i) {
    double* oi = out.row(i);
    for (std::int64_t p = g.row_offsets[i]; p < g.row_offsets[i + 1]; ++p) {
      const double w = g.values[p];
      const double* hj = h.row(g.col_indices[p]);
      for (int c = 0; c < d; ++c) oi[c] += w * hj[c];
    }
  }
  return out;
}

std::vector<double> spmv(const StructureMatrix& m, const std::vector<double>& x) {
  if (m.num_nodes() != static_cast<int>(x.size()))
    throw std::invalid_argument("spmv: dimension mismatch");
  const int n = m.num_nodes();
  std::vector<double> y(n, 0.0);
  if (m.is_dense()) {
    for (int i = 0; i < n; ++i) {
      const double* row = m.dense.row(i);
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += row[j] * x[j];
      y[i] = s;
    }
    return y;
  }
  const SparseGraph& g = m.sparse;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::int64_t p = g.row_offsets[i]; p < g.row_offsets[i + 1]; ++p)
      s += g.values[p] * x[g.col_indices[p]];
    y[i] = s;
  }
  return y;
}

Matrix to_dense(const StructureMatrix& m) {
  if (m.is_dense()) return m.dense;
  return to_dense(m.sparse);
}

}  // namespace eigraph
