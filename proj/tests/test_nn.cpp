#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "doctest.h"
#include "eigraph/nn.hpp"
#include "eigraph/rng.hpp"

using namespace eigraph;

namespace {

SparseGraph random_connected_graph(int n, double p, std::uint64_t seed) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    EdgeList edges;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (coin(rng) < p) edges.emplace_back(i, j);
    SparseGraph g = from_edge_list(edges, n);
    if (is_connected(g)) return g;
  }
  throw std::runtime_error("no connected draw");
}

Matrix random_matrix(int rows, int cols, std::uint64_t seed, double scale = 1.0) {
  Rng rng = make_rng(seed);
  std::normal_distribution<double> dist(0.0, scale);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = dist(rng);
  return m;
}

// Central finite differences over every weight entry (and epsilon for gin).
// rel tolerance 1e-4 per entry, guarded against tiny denominators.
void check_gradients(Model& model, const std::function<double(const Model&)>& loss_of,
                     const Gradients& analytic) {
  const double h = 1e-5;
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    for (std::size_t i = 0; i < model.weights[l].size(); ++i) {
      const double saved = model.weights[l].data()[i];
      model.weights[l].data()[i] = saved + h;
      const double up = loss_of(model);
      model.weights[l].data()[i] = saved - h;
      const double down = loss_of(model);
      model.weights[l].data()[i] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double got = analytic.weights[l].data()[i];
      const double err = std::fabs(numeric - got) /
                         std::max(1e-3, std::fabs(numeric) + std::fabs(got));
      CHECK(err < 1e-4);
    }
  }
  if (model.arch == Arch::gin) {
    const double saved = model.epsilon;
    model.epsilon = saved + h;
    const double up = loss_of(model);
    model.epsilon = saved - h;
    const double down = loss_of(model);
    model.epsilon = saved;
    const double numeric = (up - down) / (2.0 * h);
    const double err = std::fabs(numeric - analytic.epsilon) /
                       std::max(1e-3, std::fabs(numeric) + std::fabs(analytic.epsilon));
    CHECK(err < 1e-4);
  }
}

// ReLU kinks break finite differences; demand clearance on every pre-activation.
bool has_kink(const ForwardTrace& tr) {
  for (std::size_t l = 0; l + 1 < tr.pre.size(); ++l)
    for (double v : tr.pre[l].data())
      if (std::fabs(v) < 1e-4) return true;
  return false;
}

}  // namespace

TEST_CASE("one gcn layer with identity weight on a self-loop graph is a no-op") {
  SparseGraph g = from_edge_list({{0, 0}, {1, 1}, {2, 2}}, 3);
  StructureMatrix m = renormalized_adjacency(g);
  Model model;
  model.arch = Arch::gcn;
  model.weights.push_back(Matrix::identity(2));
  Matrix h0 = random_matrix(3, 2, 5);
  for (double& v : h0.data()) v = std::fabs(v);
  std::vector<Matrix> acts = gcn_forward(m, h0, model);
  REQUIRE(acts.size() == 2);
  CHECK(max_abs_diff(acts.back(), h0) < 1e-15);
}

TEST_CASE("triangle row sums of one make the all-ones column double") {
  SparseGraph tri = from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
  StructureMatrix m = renormalized_adjacency(tri);
  Model model;
  model.arch = Arch::gcn;
  model.weights.emplace_back(1, 1);
  model.weights[0](0, 0) = 2.0;
  Matrix ones(3, 1);
  for (double& v : ones.data()) v = 1.0;
  Matrix out = gcn_forward(m, ones, model).back();
  for (int i = 0; i < 3; ++i) CHECK(out(i, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gcn forward matches a straight-line dense reimplementation") {
  SparseGraph g = random_connected_graph(9, 0.4, 3);
  StructureMatrix m = renormalized_adjacency(g);
  Model model = init_model(Arch::gcn, {4, 6, 3}, 7);
  Matrix h0 = random_matrix(9, 4, 11);
  Matrix dense_f = to_dense(m);
  Matrix z0 = matmul(matmul(dense_f, h0), model.weights[0]);
  Matrix h1 = relu(z0);
  Matrix logits = matmul(matmul(dense_f, h1), model.weights[1]);
  std::vector<Matrix> acts = gcn_forward(m, h0, model);
  CHECK(max_abs_diff(acts[1], h1) < 1e-12);
  CHECK(max_abs_diff(acts[2], logits) < 1e-12);
}

TEST_CASE("sgc propagation depths") {
  SparseGraph g = random_connected_graph(8, 0.5, 13);
  StructureMatrix m = renormalized_adjacency(g);
  Matrix x = random_matrix(8, 3, 17);
  Matrix w = random_matrix(3, 2, 19);
  CHECK(max_abs_diff(sgc_forward(m, x, 0, w), matmul(x, w)) == 0.0);
  CHECK(max_abs_diff(sgc_propagate(m, x, 1), spmm(m, x)) == 0.0);
}

TEST_CASE("gin on an edgeless graph pools relu of the features") {
  SparseGraph g = from_edge_list({}, 4);
  Model model;
  model.arch = Arch::gin;
  model.epsilon = 0.0;
  model.weights.push_back(Matrix::identity(3));
  model.weights.push_back(Matrix::identity(3));
  Matrix h0 = random_matrix(4, 3, 23);
  GinTrace tr = gin_forward(g, h0, model);
  Matrix relu_h0 = relu(h0);
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (int i = 0; i < 4; ++i) sum += relu_h0(i, c);
    CHECK(tr.logits(0, c) == doctest::Approx(sum).epsilon(1e-14));
  }
}

TEST_CASE("gin aggregation on the triangle with unit epsilon") {
  SparseGraph tri = from_edge_list({{0, 1}, {1, 2}, {0, 2}}, 3);
  Model model;
  model.arch = Arch::gin;
  model.epsilon = 1.0;
  model.weights.push_back(Matrix::identity(1));
  model.weights.push_back(Matrix::identity(1));
  Matrix h0(3, 1);
  for (double& v : h0.data()) v = 0.7;
  GinTrace tr = gin_forward(tri, h0, model);
  for (int i = 0; i < 3; ++i)
    CHECK(tr.aggregated(i, 0) == doctest::Approx(4 * 0.7).epsilon(1e-14));
}

TEST_CASE("uniform logits cost ln C plus the weight penalty") {
  Model model = init_model(Arch::mlp, {3, 4}, 29);
  Matrix h0(5, 3);  // all-zero features force all-zero logits
  ForwardTrace tr = node_forward(model, nullptr, h0);
  std::vector<int> labels = {0, 1, 2, 3, 0};
  Gradients grads;
  const double wd = 0.3;
  double loss = loss_and_grads(model, tr, nullptr, labels, {0, 1, 2, 3, 4}, wd, grads);
  double penalty = 0.5 * wd * frobenius_norm(model.weights[0]) *
                   frobenius_norm(model.weights[0]);
  CHECK(loss == doctest::Approx(std::log(4.0) + penalty).epsilon(1e-12));
}

TEST_CASE("a saturated correct logit leaves only the weight penalty") {
  Model model;
  model.arch = Arch::mlp;
  model.weights.push_back(Matrix::identity(3));
  Matrix h0(2, 3);
  h0(0, 1) = 200.0;  // class 1 overwhelmingly correct for node 0
  ForwardTrace tr = node_forward(model, nullptr, h0);
  Gradients grads;
  double loss = loss_and_grads(model, tr, nullptr, {1, 0}, {0}, 0.0, grads);
  CHECK(loss < 1e-15);
}

TEST_CASE("empty mask is rejected") {
  Model model = init_model(Arch::mlp, {2, 2}, 1);
  ForwardTrace tr = node_forward(model, nullptr, Matrix(3, 2));
  Gradients grads;
  CHECK_THROWS_AS(loss_and_grads(model, tr, nullptr, {0, 1, 0}, {}, 0.0, grads),
                  std::invalid_argument);
}

TEST_CASE("analytic gradients match central differences everywhere") {
  SparseGraph g = random_connected_graph(10, 0.4, 31);
  StructureMatrix m = renormalized_adjacency(g);
  std::vector<int> labels(10), mask;
  Rng lrng = make_rng(37);
  for (int i = 0; i < 10; ++i) labels[i] = static_cast<int>(lrng() % 3);
  for (int i = 0; i < 7; ++i) mask.push_back(i);
  const double wd = 0.05;

  SUBCASE("gcn") {
    for (std::uint64_t seed = 0;; ++seed) {
      Model model = init_model(Arch::gcn, {4, 5, 3}, seed);
      Matrix h0 = random_matrix(10, 4, seed + 100);
      ForwardTrace tr = node_forward(model, &m, h0);
      if (has_kink(tr)) continue;
      Gradients grads;
      loss_and_grads(model, tr, &m, labels, mask, wd, grads);
      check_gradients(model, [&](const Model& mo) {
        ForwardTrace t = node_forward(mo, &m, h0);
        Gradients tmp;
        return loss_and_grads(mo, t, &m, labels, mask, wd, tmp);
      }, grads);
      break;
    }
  }

  SUBCASE("gcn with identity skips") {
    for (std::uint64_t seed = 0;; ++seed) {
      Model model = init_model(Arch::gcn, {4, 4, 4, 3}, seed, true);
      Matrix h0 = random_matrix(10, 4, seed + 200);
      ForwardTrace tr = node_forward(model, &m, h0);
      if (has_kink(tr)) continue;
      REQUIRE(tr.skipped[0] == 1);
      REQUIRE(tr.skipped[1] == 1);
      Gradients grads;
      loss_and_grads(model, tr, &m, labels, mask, wd, grads);
      check_gradients(model, [&](const Model& mo) {
        ForwardTrace t = node_forward(mo, &m, h0);
        Gradients tmp;
        return loss_and_grads(mo, t, &m, labels, mask, wd, tmp);
      }, grads);
      break;
    }
  }

  SUBCASE("mlp") {
    for (std::uint64_t seed = 0;; ++seed) {
      Model model = init_model(Arch::mlp, {4, 5, 3}, seed);
      Matrix h0 = random_matrix(10, 4, seed + 300);
      ForwardTrace tr = node_forward(model, nullptr, h0);
      if (has_kink(tr)) continue;
      Gradients grads;
      loss_and_grads(model, tr, nullptr, labels, mask, wd, grads);
      check_gradients(model, [&](const Model& mo) {
        ForwardTrace t = node_forward(mo, nullptr, h0);
        Gradients tmp;
        return loss_and_grads(mo, t, nullptr, labels, mask, wd, tmp);
      }, grads);
      break;
    }
  }

  SUBCASE("sgc") {
    Model model = init_model(Arch::sgc, {4, 3}, 41, false, 2);
    Matrix h0 = random_matrix(10, 4, 43);
    ForwardTrace tr = node_forward(model, &m, h0);
    Gradients grads;
    loss_and_grads(model, tr, &m, labels, mask, wd, grads);
    check_gradients(model, [&](const Model& mo) {
      ForwardTrace t = node_forward(mo, &m, h0);
      Gradients tmp;
      return loss_and_grads(mo, t, &m, labels, mask, wd, tmp);
    }, grads);
  }
}

TEST_CASE("gin gradients including epsilon match central differences") {
  std::vector<SparseGraph> graphs;
  std::vector<Matrix> feats;
  std::vector<int> labels;
  for (int k = 0; k < 4; ++k) {
    graphs.push_back(random_connected_graph(6, 0.5, 50 + k));
    feats.push_back(random_matrix(6, 3, 60 + k));
    labels.push_back(k % 2);
  }
  std::vector<int> batch = {0, 1, 2, 3};
  const double wd = 0.02;
  for (std::uint64_t seed = 0;; ++seed) {
    Model model = init_model(Arch::gin, {3, 5, 2}, seed);
    model.epsilon = 0.3;
    bool kink = false;
    for (int k = 0; k < 4 && !kink; ++k) {
      GinTrace tr = gin_forward(graphs[k], feats[k], model);
      for (double v : tr.pre.data())
        if (std::fabs(v) < 1e-4) kink = true;
    }
    if (kink) continue;
    Gradients grads;
    gin_loss_and_grads(model, graphs, feats, labels, batch, wd, grads);
    check_gradients(model, [&](const Model& mo) {
      Gradients tmp;
      return gin_loss_and_grads(mo, graphs, feats, labels, batch, wd, tmp);
    }, grads);
    break;
  }
}

TEST_CASE("adam leaves weights untouched under zero gradients") {
  Model model = init_model(Arch::mlp, {3, 2}, 71);
  Model before = model;
  Gradients zero;
  zero.weights.push_back(Matrix(3, 2));
  AdamState state;
  for (int i = 0; i < 5; ++i) adam_step(model, zero, state, 0.1);
  CHECK(model.weights[0] == before.weights[0]);
}

TEST_CASE("adam walks a quadratic bowl to its minimum") {
  Model model;
  model.arch = Arch::mlp;
  model.weights.emplace_back(1, 1);
  model.weights[0](0, 0) = 0.0;
  AdamState state;
  for (int step = 0; step < 500; ++step) {
    Gradients g;
    g.weights.emplace_back(1, 1);
    g.weights[0](0, 0) = model.weights[0](0, 0) - 3.0;
    adam_step(model, g, state, 0.05);
  }
  CHECK(std::fabs(model.weights[0](0, 0) - 3.0) < 1e-6);
}

TEST_CASE("training is deterministic and restores the best epoch") {
  // two cliques joined by one bridge; features and labels follow the cliques,
  // so propagation reinforces the signal instead of mixing it away
  EdgeList edges;
  for (int c = 0; c < 2; ++c)
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) edges.push_back({c * 10 + i, c * 10 + j});
  edges.push_back({0, 10});
  SparseGraph g = from_edge_list(edges, 20);
  StructureMatrix m = renormalized_adjacency(g);
  Matrix h0(20, 2);
  std::vector<int> labels(20);
  Rng rng = make_rng(79);
  std::normal_distribution<double> noise(0.0, 0.1);
  for (int i = 0; i < 20; ++i) {
    labels[i] = i / 10;
    h0(i, labels[i]) = 1.0 + noise(rng);
    h0(i, 1 - labels[i]) = noise(rng);
  }
  Splits splits;
  for (int i = 0; i < 20; ++i)
    ((i % 10) < 4 ? splits.train : (i % 10) < 7 ? splits.val : splits.test).push_back(i);

  TrainConfig cfg;
  cfg.max_epochs = 60;
  cfg.early_stop_rounds = 0;
  cfg.seed = 3;
  Model init = init_model(Arch::gcn, {2, 8, 2}, 5);
  TrainResult a = train(init, &m, h0, labels, splits, cfg);
  TrainResult b = train(init, &m, h0, labels, splits, cfg);

  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    CHECK(a.history[e].train_loss == b.history[e].train_loss);
    CHECK(a.history[e].val_acc == b.history[e].val_acc);
    CHECK(a.history[e].test_acc == b.history[e].test_acc);
  }
  CHECK(a.best_val_acc == 1.0);
  CHECK(a.history.back().train_loss < a.history.front().train_loss);

  // the restored model reproduces the recorded best-epoch validation accuracy
  Matrix logits = predict_logits(a.model, &m, h0);
  CHECK(accuracy(logits, labels, splits.val) == a.best_val_acc);
  CHECK(accuracy(logits, labels, splits.test) == a.test_acc_at_best);
}

TEST_CASE("gin minibatch training is seeded and collapses to full batch") {
  std::vector<SparseGraph> graphs;
  std::vector<Matrix> feats;
  std::vector<int> labels;
  for (int k = 0; k < 10; ++k) {
    graphs.push_back(random_connected_graph(7, 0.4, 500 + k));
    feats.push_back(random_matrix(7, 3, 520 + k));
    labels.push_back(k % 2);
  }
  Splits splits;
  splits.train = {0, 1, 2, 3, 4, 5};
  splits.val = {6, 7};
  splits.test = {8, 9};
  TrainConfig cfg;
  cfg.max_epochs = 12;
  cfg.early_stop_rounds = 0;
  cfg.dropout = 0.2;
  cfg.seed = 9;
  const Model init = init_model(Arch::gin, {3, 6, 2}, 31);

  // a batch at least as large as the train split is exactly full-batch training
  const TrainResult full = train_gin(init, graphs, feats, labels, splits, cfg);
  const TrainResult wide = train_gin(init, graphs, feats, labels, splits, cfg, 6);
  REQUIRE(full.history.size() == wide.history.size());
  for (std::size_t e = 0; e < full.history.size(); ++e)
    CHECK(full.history[e].train_loss == wide.history[e].train_loss);
  for (std::size_t l = 0; l < full.model.weights.size(); ++l)
    CHECK(full.model.weights[l].data() == wide.model.weights[l].data());

  // smaller batches walk a different trajectory but stay reproducible
  const TrainResult a = train_gin(init, graphs, feats, labels, splits, cfg, 2);
  const TrainResult b = train_gin(init, graphs, feats, labels, splits, cfg, 2);
  REQUIRE(a.history.size() == b.history.size());
  for (std::size_t e = 0; e < a.history.size(); ++e) {
    CHECK(a.history[e].train_loss == b.history[e].train_loss);
    CHECK(a.history[e].val_acc == b.history[e].val_acc);
  }
  bool differs = false;
  for (std::size_t l = 0; l < a.model.weights.size(); ++l)
    if (a.model.weights[l].data() != full.model.weights[l].data()) differs = true;
  CHECK(differs);
  double lowest = a.history.front().train_loss;
  for (const EpochRecord& rec : a.history) lowest = std::min(lowest, rec.train_loss);
  CHECK(lowest < a.history.front().train_loss);
}

TEST_CASE("early stopping halts after the configured patience") {
  SparseGraph g = random_connected_graph(12, 0.4, 83);
  StructureMatrix m = renormalized_adjacency(g);
  Matrix h0 = random_matrix(12, 3, 89);
  std::vector<int> labels(12);
  Rng rng = make_rng(97);
  for (int& l : labels) l = static_cast<int>(rng() % 2);  // noise labels
  Splits splits;
  for (int i = 0; i < 12; ++i) (i < 6 ? splits.train : splits.val).push_back(i);
  TrainConfig cfg;
  cfg.max_epochs = 500;
  cfg.early_stop_rounds = 10;
  Model init = init_model(Arch::mlp, {3, 4, 2}, 7);
  TrainResult r = train(init, nullptr, h0, labels, splits, cfg);
  CHECK(r.history.size() < 500);
  CHECK(static_cast<int>(r.history.size()) - r.best_epoch >= 10);
}

TEST_CASE("exploding training reports the failing epoch") {
  SparseGraph g = random_connected_graph(10, 0.4, 101);
  StructureMatrix m = renormalized_adjacency(g);
  Matrix h0 = random_matrix(10, 2, 103, 1e150);
  std::vector<int> labels(10, 0);
  for (int i = 5; i < 10; ++i) labels[i] = 1;
  Splits splits;
  for (int i = 0; i < 10; ++i) splits.train.push_back(i);
  TrainConfig cfg;
  cfg.learning_rate = 1e200;
  cfg.max_epochs = 50;
  Model init = init_model(Arch::gcn, {2, 3, 2}, 11);
  CHECK_THROWS_WITH_AS(train(init, &m, h0, labels, splits, cfg),
                       doctest::Contains("epoch"), std::runtime_error);
}

TEST_CASE("accuracy follows argmax with low-index tie-breaks") {
  Matrix logits(3, 3);  // all zeros: every argmax resolves to class 0
  CHECK(accuracy(logits, {0, 0, 0}, {0, 1, 2}) == 1.0);
  CHECK(accuracy(logits, {1, 1, 1}, {0, 1, 2}) == 0.0);
  logits(1, 2) = 5.0;
  CHECK(accuracy(logits, {0, 2, 0}, {0, 1, 2}) == 1.0);
  CHECK_THROWS_AS(accuracy(logits, {0, 0, 0}, {}), std::invalid_argument);
}

TEST_CASE("random logits on ten balanced classes sit near chance") {
  Matrix logits = random_matrix(1000, 10, 107);
  std::vector<int> labels(1000);
  std::vector<int> mask(1000);
  for (int i = 0; i < 1000; ++i) {
    labels[i] = i % 10;
    mask[i] = i;
  }
  const double acc = accuracy(logits, labels, mask);
  CHECK(acc > 0.07);
  CHECK(acc < 0.13);
}

TEST_CASE("forward is pure with dropout off and seeded with dropout on") {
  SparseGraph g = random_connected_graph(8, 0.5, 109);
  StructureMatrix m = renormalized_adjacency(g);
  Model model = init_model(Arch::gcn, {3, 4, 2}, 13);
  Matrix h0 = random_matrix(8, 3, 113);
  CHECK(max_abs_diff(gcn_forward(m, h0, model).back(),
                     gcn_forward(m, h0, model).back()) == 0.0);
  Matrix a = gcn_forward(m, h0, model, true, 0.5, 1).back();
  Matrix b = gcn_forward(m, h0, model, true, 0.5, 1).back();
  Matrix c = gcn_forward(m, h0, model, true, 0.5, 2).back();
  CHECK(max_abs_diff(a, b) == 0.0);
  CHECK(max_abs_diff(a, c) > 0.0);
}

TEST_CASE("dropout keeps the expected scale") {
  // inverted dropout: with all-ones weights and input, E[output] = input level
  Model model;
  model.arch = Arch::mlp;
  model.weights.push_back(Matrix(50, 1));
  for (double& v : model.weights[0].data()) v = 1.0;
  Matrix h0(200, 50);
  for (double& v : h0.data()) v = 1.0;
  Matrix out = node_forward(model, nullptr, h0, true, 0.5, 31).activations.back();
  double mean = 0.0;
  for (double v : out.data()) mean += v;
  mean /= out.size();
  CHECK(mean == doctest::Approx(50.0).epsilon(0.05));
}
