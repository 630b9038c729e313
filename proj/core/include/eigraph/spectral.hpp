#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eigraph/graph.hpp"
#include "eigraph/linalg.hpp"

namespace eigraph {

// Top-d eigenpairs ordered by |lambda| descending, ties by signed value
// descending, then by first differing vector entry. Columns are unit-norm and
// sign-fixed so the largest-magnitude entry (lowest index on ties) is
// nonnegative.
struct EigenBasis {
  int d = 0;
  std::vector<double> eigenvalues;
  Matrix vectors;  // N x d
  std::vector<double> residuals;  // ||M q - lambda q||_2 per pair
  std::int64_t iterations_used = 0;
  bool converged = true;

  double worst_residual() const;
};

// Lanczos with full reorthogonalization (two-pass classical Gram-Schmidt),
// Krylov dimension min(N, max(2d+10, 40)), restarts with deflation against
// locked pairs. Deterministic for a fixed seed. max_iters = 0 picks a budget
// from d; non-convergence is reported via the flag, never thrown.
EigenBasis top_eigenpairs(const StructureMatrix& m, int d, double tol = 1e-10,
                          std::int64_t max_iters = 0, std::uint64_t seed = 0);

// Full decomposition by cyclic Jacobi rotations; N <= 500. Sweeps until the
// off-diagonal Frobenius norm drops below 1e-12. Rejects asymmetric input,
// reporting the worst asymmetry.
EigenBasis dense_eig_oracle(const Matrix& m);

enum class FMode { identity, abs, frobenius_norm };

std::string to_string(FMode mode);
FMode f_mode_from_string(const std::string& name);

// identity -> Q; abs -> entrywise |Q|; frobenius_norm -> Q / ||Q||_F.
Matrix apply_f(const EigenBasis& basis, FMode mode);

// Angle (radians) of each column of F^L X to the dominant eigenvector of the
// renormalized adjacency. Rejects disconnected graphs.
std::vector<double> sgc_limit_check(const SparseGraph& g, const Matrix& x, int propagations,
                                    std::uint64_t seed = 0);

struct Model;

// Runs the model on (g, x) and on the permuted instance and returns the max
// entrywise deviation between H^(l) rows and their permuted counterparts,
// over all layers. Requires f = abs and pairwise top-(d+1) eigenvalue gaps
// above 1e-6, the regime where the basis is permutation-equivariant.
double equivariance_check(const SparseGraph& g, const Matrix* x, const std::vector<int>& perm,
                          int d, const Model& model,
                          StructureKind kind = StructureKind::renorm_adjacency,
                          std::uint64_t seed = 0);

void save_eigenbasis(const std::string& path, const EigenBasis& basis);
EigenBasis load_eigenbasis(const std::string& path);

}  // namespace eigraph
