#pragma once

#include <cstdint>
#include <string>

#include "eigraph/graph.hpp"
#include "eigraph/linalg.hpp"
#include "eigraph/spectral.hpp"

namespace eigraph {

// H^(0) = [X, f(Q)]: raw features first, transformed eigenbasis after.
struct InitialBasis {
  Matrix matrix;  // N x (feature_cols + eigen_cols)
  int feature_cols = 0;
  int eigen_cols = 0;
  FMode f_mode = FMode::identity;
};

// Either side may be null; at least one must be present, rows must agree.
InitialBasis build_initial_basis(const Matrix* x, const EigenBasis* basis, FMode f_mode);

enum class BaselineFeature { one_hot_id, degree_one_hot, random_gaussian };

std::string to_string(BaselineFeature mode);
BaselineFeature baseline_feature_from_string(const std::string& name);

// one_hot_id: N x N identity, refused above N = 20000. degree_one_hot:
// indicator of the self-loop-free degree. random_gaussian: N x random_dim
// i.i.d. standard normals from the seed.
Matrix baseline_features(const SparseGraph& g, BaselineFeature mode, std::uint64_t seed = 0,
                         int random_dim = 32);

// CSV matrix next to a .json sidecar {feature_cols, eigen_cols, f_mode, d, seed}.
void save_initial_basis(const std::string& csv_path, const InitialBasis& basis,
                        std::uint64_t seed);
InitialBasis load_initial_basis(const std::string& csv_path);

}  // namespace eigraph
