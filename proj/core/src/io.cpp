#include "eigraph/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace eigraph {

namespace {

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

// %.17g round-trips doubles exactly and keeps small files readable.
void append_double(std::string& buf, double v) {
  char tmp[32];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  buf += tmp;
}

}  // namespace

SparseGraph load_edge_list(const std::string& path, int num_nodes) {
  std::ifstream in = open_input(path);
  EdgeList edges;
  int max_index = -1;
  std::string line;
  for (int line_no = 1; std::getline(in, line); ++line_no) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    long long i = 0, j = 0;
    if (!(ss >> i)) continue;  // blank or comment-only line
    std::string trailing;
    if (!(ss >> j) || (ss >> trailing))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": expected two whitespace-separated node indices");
    if (i < 0 || j < 0 || (num_nodes >= 0 && (i >= num_nodes || j >= num_nodes)))
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": node index out of range");
    edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    max_index = std::max({max_index, static_cast<int>(i), static_cast<int>(j)});
  }
  const int n = num_nodes >= 0 ? num_nodes : max_index + 1;
  return from_edge_list(edges, n);
}

void save_edge_list(const std::string& path, const SparseGraph& g) {
  std::ofstream out = open_output(path);
  out << "# nodes " << g.num_nodes << "\n";
  for (int i = 0; i < g.num_nodes; ++i)
    for (std::int64_t k = g.row_offsets[i]; k < g.row_offsets[i + 1]; ++k) {
      const int j = g.col_indices[k];
      if (j >= i) out << i << " " << j << "\n";
    }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Matrix load_csv_matrix(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                 ": not a number: '" + cell + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size())
      throw std::runtime_error(path + ":" + std::to_string(line_no) +
                               ": ragged row (expected " +
                               std::to_string(rows.front().size()) + " columns)");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<int>(rows.size()),
           rows.empty() ? 0 : static_cast<int>(rows.front().size()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  return m;
}

void save_csv_matrix(const std::string& path, const Matrix& m) {
  std::ofstream out = open_output(path);
  std::string buf;
  for (int i = 0; i < m.rows(); ++i) {
    buf.clear();
    for (int j = 0; j < m.cols(); ++j) {
      if (j) buf += ',';
      append_double(buf, m(i, j));
    }
    buf += '\n';
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out = open_output(path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in = open_input(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace eigraph
