#include "eigraph/plugin.hpp"

#include <algorithm>
#include <filesystem>
#include <stdexcept>

#include "json.hpp"

#include "eigraph/io.hpp"
#include "eigraph/rng.hpp"

namespace eigraph {

InitialBasis build_initial_basis(const Matrix* x, const EigenBasis* basis, FMode f_mode) {
  if (!x && !basis)
    throw std::invalid_argument("build_initial_basis: need features, an eigenbasis, or both");
  InitialBasis out;
  out.f_mode = f_mode;
  if (x && basis) {
    if (x->rows() != basis->vectors.rows())
      throw std::invalid_argument("build_initial_basis: feature and eigenbasis row counts differ");
    out.matrix = hconcat(*x, apply_f(*basis, f_mode));
    out.feature_cols = x->cols();
    out.eigen_cols = basis->d;
  } else if (x) {
    out.matrix = *x;
    out.feature_cols = x->cols();
  } else {
    out.matrix = apply_f(*basis, f_mode);
    out.eigen_cols = basis->d;
  }
  return out;
}

std::string to_string(BaselineFeature mode) {
  switch (mode) {
    case BaselineFeature::one_hot_id: return "one_hot_id";
    case BaselineFeature::degree_one_hot: return "degree_one_hot";
    case BaselineFeature::random_gaussian: return "random_gaussian";
  }
  return "unknown";
}

BaselineFeature baseline_feature_from_string(const std::string& name) {
  if (name == "one_hot_id") return BaselineFeature::one_hot_id;
  if (name == "degree_one_hot") return BaselineFeature::degree_one_hot;
  if (name == "random_gaussian") return BaselineFeature::random_gaussian;
  throw std::invalid_argument("unknown baseline feature mode: " + name);
}

Matrix baseline_features(const SparseGraph& g, BaselineFeature mode, std::uint64_t seed,
                         int random_dim) {
  const int n = g.num_nodes;
  switch (mode) {
    case BaselineFeature::one_hot_id: {
      if (n > 20000)
        throw std::domain_error("baseline_features: one_hot_id refused for N = " +
                                std::to_string(n) + " (> 20000, would need N^2 memory)");
      return Matrix::identity(n);
    }
    case BaselineFeature::degree_one_hot: {
      const std::vector<int> deg = neighbor_counts(g);
      const int max_deg = deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
      Matrix out(n, max_deg + 1);
      for (int i = 0; i < n; ++i) out(i, deg[i]) = 1.0;
      return out;
    }
    case BaselineFeature::random_gaussian: {
      if (random_dim < 1)
        throw std::invalid_argument("baseline_features: random_dim must be positive");
      Matrix out(n, random_dim);
      Rng rng = make_rng(seed);
      std::normal_distribution<double> gauss(0.0, 1.0);
      for (double& v : out.data()) v = gauss(rng);
      return out;
    }
  }
  throw std::invalid_argument("baseline_features: unknown mode");
}

namespace {

std::string sidecar_path(const std::string& csv_path) {
  return std::filesystem::path(csv_path).replace_extension(".json").string();
}

}  // namespace

void save_initial_basis(const std::string& csv_path, const InitialBasis& basis,
                        std::uint64_t seed) {
  save_csv_matrix(csv_path, basis.matrix);
  nlohmann::json meta = {
      {"feature_cols", basis.feature_cols},
      {"eigen_cols", basis.eigen_cols},
      {"f_mode", to_string(basis.f_mode)},
      {"d", basis.eigen_cols},
      {"seed", seed},
  };
  write_text(sidecar_path(csv_path), meta.dump(2) + "\n");
}

InitialBasis load_initial_basis(const std::string& csv_path) {
  InitialBasis basis;
  basis.matrix = load_csv_matrix(csv_path);
  const nlohmann::json meta = nlohmann::json::parse(read_text(sidecar_path(csv_path)));
  basis.feature_cols = meta.at("feature_cols").get<int>();
  basis.eigen_cols = meta.at("eigen_cols").get<int>();
  basis.f_mode = f_mode_from_string(meta.at("f_mode").get<std::string>());
  if (basis.feature_cols + basis.eigen_cols != basis.matrix.cols())
    throw std::runtime_error("initial basis sidecar disagrees with the CSV column count");
  return basis;
}

}  // namespace eigraph
