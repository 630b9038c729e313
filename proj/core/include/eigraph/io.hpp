#pragma once

#include <string>
#include <vector>

#include "eigraph/graph.hpp"
#include "eigraph/linalg.hpp"

namespace eigraph {

// Edge-list text format: one edge per line, two whitespace-separated 0-based
// node indices. `#` starts a comment line; blank lines are skipped. Parse and
// range errors report the 1-based line number.
SparseGraph load_edge_list(const std::string& path, int num_nodes = -1);
void save_edge_list(const std::string& path, const SparseGraph& g);

// Plain numeric CSV, no header.
Matrix load_csv_matrix(const std::string& path);
void save_csv_matrix(const std::string& path, const Matrix& m);

std::vector<std::string> read_lines(const std::string& path);
void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

}  // namespace eigraph
