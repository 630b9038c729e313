#include <cmath>
#include <numeric>
#include <stdexcept>

#include "doctest.h"
#include "eigraph/graph.hpp"
#include "eigraph/nn.hpp"
#include "eigraph/rng.hpp"
#include "eigraph/spectral.hpp"

using namespace eigraph;

namespace {

SparseGraph random_graph(int n, double p, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  EdgeList edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng) < p) edges.emplace_back(i, j);
  return from_edge_list(edges, n);
}

SparseGraph random_connected_graph(int n, double p, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    SparseGraph g = random_graph(n, p, rng);
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("random_connected_graph: no connected draw");
}

double column_angle(const Matrix& a, int ca, const Matrix& b, int cb) {
  double dot = 0.0;
  for (int i = 0; i < a.rows(); ++i) dot += a(i, ca) * b(i, cb);
  return std::acos(std::min(1.0, std::fabs(dot)));
}

double orthonormality_error(const Matrix& q) {
  double err = 0.0;
  for (int a = 0; a < q.cols(); ++a)
    for (int b = a; b < q.cols(); ++b) {
      double dot = 0.0;
      for (int i = 0; i < q.rows(); ++i) dot += q(i, a) * q(i, b);
      err = std::max(err, std::fabs(dot - (a == b ? 1.0 : 0.0)));
    }
  return err;
}

Matrix diag3(double a, double b, double c) {
  Matrix m(3, 3);
  m(0, 0) = a;
  m(1, 1) = b;
  m(2, 2) = c;
  return m;
}

}  // namespace

TEST_CASE("oracle orders a diagonal matrix by magnitude") {
  EigenBasis e = dense_eig_oracle(diag3(3, 1, 2));
  CHECK(e.eigenvalues == std::vector<double>{3, 2, 1});
}

TEST_CASE("oracle on the 2x2 exchange matrix") {
  Matrix m(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  EigenBasis e = dense_eig_oracle(m);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(e.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(e.vectors(0, 0) == doctest::Approx(s).epsilon(1e-13));
  CHECK(e.vectors(1, 0) == doctest::Approx(s).epsilon(1e-13));
  // sign convention: largest-|entry| component nonnegative, lowest index wins
  CHECK(e.vectors(0, 1) == doctest::Approx(s).epsilon(1e-13));
  CHECK(e.vectors(1, 1) == doctest::Approx(-s).epsilon(1e-13));
}

TEST_CASE("oracle reconstruction identity on a random symmetric matrix") {
  Rng rng = make_rng(101);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix m(10, 10);
  for (int i = 0; i < 10; ++i)
    for (int j = i; j < 10; ++j) m(i, j) = m(j, i) = dist(rng);
  EigenBasis e = dense_eig_oracle(m);
  Matrix lam(10, 10);
  for (int i = 0; i < 10; ++i) lam(i, i) = e.eigenvalues[i];
  Matrix rec = matmul(matmul(e.vectors, lam), transpose(e.vectors));
  CHECK(frobenius_norm(rec) > 0.0);
  CHECK(max_abs_diff(rec, m) < 1e-10);
  CHECK(orthonormality_error(e.vectors) < 1e-12);
}

TEST_CASE("oracle rejects asymmetric input with the worst asymmetry") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 1.5;
  CHECK_THROWS_WITH_AS(dense_eig_oracle(m), doctest::Contains("0.5"), std::invalid_argument);
  CHECK_THROWS_AS(dense_eig_oracle(Matrix(501, 501)), std::invalid_argument);
}

TEST_CASE("oracle on small structure matrices matches hand spectra") {
  SparseGraph tri = from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
  EigenBasis renorm = dense_eig_oracle(to_dense(renormalized_adjacency(tri)));
  CHECK(renorm.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::fabs(renorm.eigenvalues[1]) < 1e-12);
  CHECK(std::fabs(renorm.eigenvalues[2]) < 1e-12);

  EigenBasis plain = dense_eig_oracle(to_dense(plain_normalized_adjacency(tri)));
  CHECK(plain.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(plain.eigenvalues[1] == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(plain.eigenvalues[2] == doctest::Approx(-0.5).epsilon(1e-12));

  SparseGraph c4 = from_edge_list({{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 4);
  EigenBasis cyc = dense_eig_oracle(to_dense(plain_normalized_adjacency(c4)));
  CHECK(cyc.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cyc.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(std::fabs(cyc.eigenvalues[2]) < 1e-12);
  CHECK(std::fabs(cyc.eigenvalues[3]) < 1e-12);
}

TEST_CASE("solver finds the dominant pair of the triangle") {
  SparseGraph tri = from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
  EigenBasis e = top_eigenpairs(renormalized_adjacency(tri), 1);
  CHECK(e.converged);
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  const double s = 1.0 / std::sqrt(3.0);
  for (int i = 0; i < 3; ++i) CHECK(e.vectors(i, 0) == doctest::Approx(s).epsilon(1e-10));
}

TEST_CASE("magnitude ties order by descending signed value") {
  SparseGraph edge = from_edge_list({{0, 1}}, 2);
  EigenBasis e = top_eigenpairs(plain_normalized_adjacency(edge), 2);
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("solver agrees with the oracle on a random connected graph") {
  SparseGraph g = random_connected_graph(30, 0.2, 7);
  StructureMatrix m = renormalized_adjacency(g);
  EigenBasis it = top_eigenpairs(m, 5);
  EigenBasis full = dense_eig_oracle(to_dense(m));
  REQUIRE(it.converged);
  for (int c = 0; c < 5; ++c)
    CHECK(std::fabs(it.eigenvalues[c] - full.eigenvalues[c]) < 1e-8);
  // non-degenerate pairs: vectors align up to sign
  for (int c = 0; c < 5; ++c) {
    const double gap_prev = c > 0
        ? std::fabs(full.eigenvalues[c] - full.eigenvalues[c - 1]) : 1.0;
    const double gap_next = std::fabs(full.eigenvalues[c] - full.eigenvalues[c + 1]);
    if (gap_prev > 1e-4 && gap_next > 1e-4)
      CHECK(column_angle(it.vectors, c, full.vectors, c) < 1e-6);
  }
  CHECK(orthonormality_error(it.vectors) < 1e-8);
  for (double r : it.residuals) CHECK(r < 1e-10);
}

TEST_CASE("solver handles degenerate spectra deterministically") {
  // C6 renormalized has two eigenvalue pairs of multiplicity 2
  SparseGraph c6 = from_edge_list({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}, 6);
  StructureMatrix m = renormalized_adjacency(c6);
  EigenBasis a = top_eigenpairs(m, 4, 1e-10, 0, 42);
  EigenBasis b = top_eigenpairs(m, 4, 1e-10, 0, 42);
  CHECK(a.converged);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.vectors == b.vectors);
  CHECK(orthonormality_error(a.vectors) < 1e-8);
  EigenBasis full = dense_eig_oracle(to_dense(m));
  for (int c = 0; c < 4; ++c)
    CHECK(std::fabs(a.eigenvalues[c] - full.eigenvalues[c]) < 1e-8);
}

TEST_CASE("solver rejects d beyond N") {
  SparseGraph edge = from_edge_list({{0, 1}}, 2);
  CHECK_THROWS_AS(top_eigenpairs(plain_normalized_adjacency(edge), 3), std::invalid_argument);
}

TEST_CASE("identical inputs give bitwise identical bases") {
  SparseGraph g = random_connected_graph(40, 0.15, 11);
  StructureMatrix m = renormalized_adjacency(g);
  EigenBasis a = top_eigenpairs(m, 6, 1e-10, 0, 5);
  EigenBasis b = top_eigenpairs(m, 6, 1e-10, 0, 5);
  CHECK(a.eigenvalues == b.eigenvalues);
  CHECK(a.vectors == b.vectors);
  CHECK(a.residuals == b.residuals);
  CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("renormalized spectra stay inside [-1,1] with top value 1 when connected") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    SparseGraph g = random_connected_graph(25, 0.25, seed);
    EigenBasis e = dense_eig_oracle(to_dense(renormalized_adjacency(g)));
    CHECK(std::fabs(e.eigenvalues.front() - 1.0) < 1e-8);
    for (double v : e.eigenvalues) {
      CHECK(v <= 1.0 + 1e-10);
      CHECK(v >= -1.0 - 1e-10);
    }
  }
}

TEST_CASE("plain normalization hits -1 exactly when bipartite") {
  SparseGraph c4 = from_edge_list({{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 4);
  EigenBasis bip = dense_eig_oracle(to_dense(plain_normalized_adjacency(c4)));
  double lo = 1.0;
  for (double v : bip.eigenvalues) lo = std::min(lo, v);
  CHECK(is_bipartite(c4));
  CHECK(std::fabs(lo + 1.0) < 1e-8);

  SparseGraph tri = from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
  EigenBasis odd = dense_eig_oracle(to_dense(plain_normalized_adjacency(tri)));
  lo = 1.0;
  for (double v : odd.eigenvalues) lo = std::min(lo, v);
  CHECK_FALSE(is_bipartite(tri));
  CHECK(lo > -1.0 + 1e-3);
}

TEST_CASE("solver matches oracle across sizes and depths") {
  for (int n : {12, 60, 150}) {
    SparseGraph g = random_connected_graph(n, n <= 20 ? 0.35 : 0.1, 100 + n);
    StructureMatrix m = renormalized_adjacency(g);
    EigenBasis full = dense_eig_oracle(to_dense(m));
    for (int d : {1, 4, 10}) {
      EigenBasis it = top_eigenpairs(m, d);
      REQUIRE(it.converged);
      for (int c = 0; c < d; ++c)
        CHECK(std::fabs(it.eigenvalues[c] - full.eigenvalues[c]) < 1e-8);
    }
  }
}

TEST_CASE("solver works on the dense transition power path") {
  SparseGraph tri = from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
  StructureMatrix m = transition_power(tri, 2);
  EigenBasis e = top_eigenpairs(m, 3);
  CHECK(e.eigenvalues[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(e.eigenvalues[1] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(e.eigenvalues[2] == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("exhausted budget reports honest residuals instead of lying") {
  SparseGraph g = random_connected_graph(60, 0.1, 13);
  StructureMatrix m = renormalized_adjacency(g);
  EigenBasis e = top_eigenpairs(m, 5, 1e-10, 3);
  CHECK_FALSE(e.converged);
  CHECK(e.worst_residual() > 1e-10);
  CHECK(orthonormality_error(e.vectors) < 1e-8);
  CHECK(e.iterations_used <= 3 + 5);  // build steps plus verification products
}

TEST_CASE("apply_f modes") {
  SparseGraph g = random_connected_graph(12, 0.4, 3);
  EigenBasis e = top_eigenpairs(renormalized_adjacency(g), 3);
  CHECK(apply_f(e, FMode::identity) == e.vectors);

  EigenBasis tiny;
  tiny.d = 1;
  tiny.eigenvalues = {1.0};
  tiny.vectors = Matrix(2, 1);
  tiny.vectors(0, 0) = 0.6;
  tiny.vectors(1, 0) = -0.8;
  Matrix a = apply_f(tiny, FMode::abs);
  CHECK(a(0, 0) == 0.6);
  CHECK(a(1, 0) == 0.8);

  Matrix f = apply_f(e, FMode::frobenius_norm);
  const double expected = 1.0 / std::sqrt(3.0);  // orthonormal N x 3 has norm sqrt(3)
  CHECK(frobenius_norm(f) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(max_abs_diff(f, e.vectors) > 0.0);
  Matrix scaled = e.vectors;
  scale_inplace(scaled, expected);
  CHECK(max_abs_diff(f, scaled) < 1e-12);
}

TEST_CASE("f mode names round trip") {
  for (FMode mode : {FMode::identity, FMode::abs, FMode::frobenius_norm})
    CHECK(f_mode_from_string(to_string(mode)) == mode);
  CHECK_THROWS_AS(f_mode_from_string("square"), std::invalid_argument);
}

TEST_CASE("repeated propagation converges to the dominant eigenvector") {
  SparseGraph tri = from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
  StructureMatrix f = renormalized_adjacency(tri);
  EigenBasis top1 = top_eigenpairs(f, 1);

  Matrix q1(3, 1);
  for (int i = 0; i < 3; ++i) q1(i, 0) = top1.vectors(i, 0);
  CHECK(sgc_limit_check(tri, q1, 7)[0] < 1e-12);

  Matrix e0(3, 1);
  e0(0, 0) = 1.0;
  CHECK(sgc_limit_check(tri, e0, 50)[0] < 1e-10);

  SparseGraph big = random_connected_graph(100, 0.1, 19);
  Rng rng = make_rng(23);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix x(100, 3);
  for (double& v : x.data()) v = dist(rng);
  for (double angle : sgc_limit_check(big, x, 200)) CHECK(angle < 1e-6);
}

TEST_CASE("propagation check rejects disconnected graphs") {
  SparseGraph g = from_edge_list({{0, 1}}, 3);
  Matrix x(3, 1);
  x(0, 0) = 1.0;
  CHECK_THROWS_AS(sgc_limit_check(g, x, 5), std::domain_error);
}

TEST_CASE("eigenbasis csv round trip") {
  SparseGraph g = random_connected_graph(15, 0.3, 29);
  EigenBasis e = top_eigenpairs(renormalized_adjacency(g), 4);
  const std::string path = "/tmp/eigraph_basis_test.csv";
  save_eigenbasis(path, e);
  EigenBasis back = load_eigenbasis(path);
  CHECK(back.d == e.d);
  CHECK(back.eigenvalues == e.eigenvalues);
  CHECK(back.vectors == e.vectors);
  std::remove(path.c_str());
}

TEST_CASE("identity permutation gives exactly zero deviation") {
  SparseGraph p4 = from_edge_list({{0, 1}, {1, 2}, {2, 3}}, 4);
  Rng rng = make_rng(31);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix x(4, 2);
  for (double& v : x.data()) v = dist(rng);
  Model model = init_model(Arch::gcn, {4, 3, 2}, 1);  // 2 feature + 2 eigen columns
  std::vector<int> id = {0, 1, 2, 3};
  CHECK(equivariance_check(p4, &x, id, 2, model) == 0.0);
}

TEST_CASE("relabeling nodes relabels every layer the same way") {
  SparseGraph p4 = from_edge_list({{0, 1}, {1, 2}, {2, 3}}, 4);
  Rng rng = make_rng(37);
  std::normal_distribution<double> dist(0.0, 1.0);
  Matrix x(4, 2);
  for (double& v : x.data()) v = dist(rng);
  std::vector<int> perm = {2, 0, 3, 1};

  Model gcn = init_model(Arch::gcn, {4, 3, 2}, 1);
  CHECK(equivariance_check(p4, &x, perm, 2, gcn) < 1e-8);

  Model mlp = init_model(Arch::mlp, {4, 3, 2}, 2);
  CHECK(equivariance_check(p4, &x, perm, 2, mlp) < 1e-8);

  // featureless: the basis alone feeds the model
  Model bare = init_model(Arch::gcn, {2, 3, 2}, 3);
  CHECK(equivariance_check(p4, nullptr, perm, 2, bare) < 1e-8);
}

TEST_CASE("degenerate eigenvalues fail the uniqueness precondition") {
  SparseGraph c6 = from_edge_list({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 0}}, 6);
  Model model = init_model(Arch::gcn, {2, 3, 2}, 1);
  std::vector<int> perm = {1, 2, 3, 4, 5, 0};
  CHECK_THROWS_WITH_AS(equivariance_check(c6, nullptr, perm, 2, model),
                       doctest::Contains("unique"), std::domain_error);
}
