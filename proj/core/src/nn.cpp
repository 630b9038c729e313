#include "eigraph/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "eigraph/rng.hpp"

namespace eigraph {

std::string to_string(Arch arch) {
  switch (arch) {
    case Arch::gcn: return "gcn";
    case Arch::sgc: return "sgc";
    case Arch::gin: return "gin";
    case Arch::mlp: return "mlp";
  }
  return "unknown";
}

Arch arch_from_string(const std::string& name) {
  if (name == "gcn") return Arch::gcn;
  if (name == "sgc") return Arch::sgc;
  if (name == "gin") return Arch::gin;
  if (name == "mlp") return Arch::mlp;
  throw std::invalid_argument("unknown architecture: " + name);
}

Model init_model(Arch arch, const std::vector<int>& dims, std::uint64_t seed, bool residual,
                 int propagations) {
  if (dims.size() < 2) throw std::invalid_argument("init_model: need at least two dimensions");
  for (int d : dims)
    if (d < 1) throw std::invalid_argument("init_model: dimensions must be positive");
  Model model;
  model.arch = arch;
  model.residual = residual;
  model.propagations = propagations;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    Matrix w(dims[l], dims[l + 1]);
    const double bound = std::sqrt(6.0 / (dims[l] + dims[l + 1]));
    Rng rng = make_rng(derive_seed(seed, l));
    std::uniform_real_distribution<double> u(-bound, bound);
    for (double& x : w.data()) x = u(rng);
    model.weights.push_back(std::move(w));
  }
  if (arch == Arch::sgc && model.weights.size() != 1)
    throw std::invalid_argument("init_model: sgc takes exactly one weight matrix");
  if (arch == Arch::gin && model.weights.size() != 2)
    throw std::invalid_argument("init_model: gin takes exactly two weight matrices");
  return model;
}

namespace {

Matrix dropout_mask(int rows, int cols, double dropout, std::uint64_t seed) {
  Matrix mask(rows, cols);
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double keep = 1.0 - dropout;
  for (double& x : mask.data()) x = (u(rng) < keep) ? 1.0 / keep : 0.0;
  return mask;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  Matrix out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out.data()[i] *= b.data()[i];
  return out;
}

void check_labels(const std::vector<int>& labels, const std::vector<int>& mask, int rows,
                  int classes) {
  if (mask.empty()) throw std::invalid_argument("loss: empty mask");
  for (int i : mask) {
    if (i < 0 || i >= rows || i >= static_cast<int>(labels.size()))
      throw std::out_of_range("loss: mask index out of range");
    if (labels[i] < 0 || labels[i] >= classes)
      throw std::out_of_range("loss: label " + std::to_string(labels[i]) +
                              " outside [0," + std::to_string(classes) + ")");
  }
}

double weight_penalty(const Model& model, double weight_decay) {
  double sum = 0.0;
  for (const Matrix& w : model.weights) {
    const double f = frobenius_norm(w);
    sum += f * f;
  }
  return 0.5 * weight_decay * sum;
}

}  // namespace

ForwardTrace node_forward(const Model& model, const StructureMatrix* m, const Matrix& h0,
                          bool train_mode, double dropout, std::uint64_t seed) {
  if (model.arch == Arch::gin)
    throw std::invalid_argument("node_forward: gin is graph-level, use gin_forward");
  if ((model.arch == Arch::gcn || model.arch == Arch::sgc) && m == nullptr)
    throw std::invalid_argument("node_forward: structure matrix required");
  if (dropout < 0.0 || dropout >= 1.0)
    throw std::invalid_argument("node_forward: dropout must be in [0,1)");

  ForwardTrace tr;
  tr.activations.push_back(model.arch == Arch::sgc
                               ? sgc_propagate(*m, h0, model.propagations)
                               : h0);
  const int layers = static_cast<int>(model.weights.size());
  for (int l = 0; l < layers; ++l) {
    const Matrix& w = model.weights[l];
    const Matrix& input = tr.activations.back();
    if (input.cols() != w.rows())
      throw std::invalid_argument("node_forward: layer " + std::to_string(l) +
                                  " expects " + std::to_string(w.rows()) + " inputs, got " +
                                  std::to_string(input.cols()));
    Matrix dropped = input;
    if (train_mode && dropout > 0.0) {
      Matrix mask = dropout_mask(input.rows(), input.cols(), dropout, derive_seed(seed, l));
      dropped = hadamard(dropped, mask);
      tr.masks.push_back(std::move(mask));
    }
    Matrix prop = (model.arch == Arch::gcn) ? spmm(*m, dropped) : std::move(dropped);
    Matrix z = matmul(prop, w);
    const bool skip = model.residual && model.arch == Arch::gcn &&
                      z.rows() == input.rows() && z.cols() == input.cols();
    Matrix next = (l + 1 < layers) ? relu(z) : z;
    if (skip) add_inplace(next, input);
    tr.propagated.push_back(std::move(prop));
    tr.pre.push_back(std::move(z));
    tr.skipped.push_back(skip ? 1 : 0);
    tr.activations.push_back(std::move(next));
  }
  return tr;
}

std::vector<Matrix> gcn_forward(const StructureMatrix& m, const Matrix& h0, const Model& model,
                                bool train_mode, double dropout, std::uint64_t seed) {
  if (model.arch != Arch::gcn) throw std::invalid_argument("gcn_forward: model is not a gcn");
  return node_forward(model, &m, h0, train_mode, dropout, seed).activations;
}

std::vector<Matrix> mlp_forward(const Matrix& h0, const Model& model, bool train_mode,
                                double dropout, std::uint64_t seed) {
  if (model.arch != Arch::mlp) throw std::invalid_argument("mlp_forward: model is not an mlp");
  return node_forward(model, nullptr, h0, train_mode, dropout, seed).activations;
}

Matrix sgc_propagate(const StructureMatrix& m, const Matrix& x, int propagations) {
  if (propagations < 0) throw std::invalid_argument("sgc_propagate: negative depth");
  Matrix u = x;
  for (int l = 0; l < propagations; ++l) u = spmm(m, u);
  return u;
}

Matrix sgc_forward(const StructureMatrix& m, const Matrix& x, int propagations,
                   const Matrix& w) {
  return matmul(sgc_propagate(m, x, propagations), w);
}

GinTrace gin_forward(const SparseGraph& g, const Matrix& h0, const Model& model,
                     bool train_mode, double dropout, std::uint64_t seed) {
  if (model.arch != Arch::gin) throw std::invalid_argument("gin_forward: model is not a gin");
  if (model.weights.size() != 2)
    throw std::invalid_argument("gin_forward: expected two weight matrices");
  if (h0.rows() != g.num_nodes)
    throw std::invalid_argument("gin_forward: feature rows != N");

  GinTrace tr;
  tr.layer_input = h0;
  if (train_mode && dropout > 0.0)
    tr.layer_input = hadamard(h0, dropout_mask(h0.rows(), h0.cols(), dropout, seed));
  tr.aggregated = adjacency_spmm(g, tr.layer_input);
  Matrix scaled = tr.layer_input;
  scale_inplace(scaled, 1.0 + model.epsilon);
  add_inplace(tr.aggregated, scaled);
  tr.pre = matmul(tr.aggregated, model.weights[0]);
  tr.node_embeddings = relu(tr.pre);
  tr.pooled = Matrix(1, tr.node_embeddings.cols());
  for (int i = 0; i < tr.node_embeddings.rows(); ++i)
    for (int c = 0; c < tr.node_embeddings.cols(); ++c)
      tr.pooled(0, c) += tr.node_embeddings(i, c);
  tr.logits = matmul(tr.pooled, model.weights[1]);
  return tr;
}

double loss_and_grads(const Model& model, const ForwardTrace& trace, const StructureMatrix* m,
                      const std::vector<int>& labels, const std::vector<int>& mask,
                      double weight_decay, Gradients& grads) {
  const Matrix& logits = trace.activations.back();
  check_labels(labels, mask, logits.rows(), logits.cols());
  const Matrix probs = softmax_rows(logits);

  double loss = 0.0;
  Matrix dh(logits.rows(), logits.cols());
  const double inv = 1.0 / static_cast<double>(mask.size());
  for (int i : mask) {
    loss -= std::log(std::max(probs(i, labels[i]), 1e-300));
    for (int c = 0; c < logits.cols(); ++c)
      dh(i, c) = (probs(i, c) - (c == labels[i] ? 1.0 : 0.0)) * inv;
  }
  loss = loss * inv + weight_penalty(model, weight_decay);

  const int layers = static_cast<int>(model.weights.size());
  grads.weights.assign(layers, Matrix());
  grads.epsilon = 0.0;
  for (int l = layers - 1; l >= 0; --l) {
    Matrix dz = dh;
    if (l + 1 < layers) {
      const Matrix& z = trace.pre[l];
      for (std::size_t i = 0; i < dz.size(); ++i)
        if (z.data()[i] <= 0.0) dz.data()[i] = 0.0;
    }
    grads.weights[l] = matmul_tn(trace.propagated[l], dz);
    if (weight_decay != 0.0) {
      Matrix decay = model.weights[l];
      scale_inplace(decay, weight_decay);
      add_inplace(grads.weights[l], decay);
    }
    if (l == 0) break;
    Matrix dprop = matmul_nt(dz, model.weights[l]);
    Matrix ddropped = (model.arch == Arch::gcn) ? spmm(*m, dprop) : std::move(dprop);
    if (!trace.masks.empty()) ddropped = hadamard(ddropped, trace.masks[l]);
    if (trace.skipped[l]) add_inplace(ddropped, dh);
    dh = std::move(ddropped);
  }
  return loss;
}

double gin_loss_and_grads(const Model& model, const std::vector<SparseGraph>& graphs,
                          const std::vector<Matrix>& features, const std::vector<int>& labels,
                          const std::vector<int>& batch, double weight_decay, Gradients& grads,
                          bool train_mode, double dropout, std::uint64_t seed) {
  if (batch.empty()) throw std::invalid_argument("gin loss: empty batch");
  if (graphs.size() != features.size() || graphs.size() != labels.size())
    throw std::invalid_argument("gin loss: dataset arrays disagree in length");

  grads.weights.assign(2, Matrix());
  grads.weights[0] = Matrix(model.weights[0].rows(), model.weights[0].cols());
  grads.weights[1] = Matrix(model.weights[1].rows(), model.weights[1].cols());
  grads.epsilon = 0.0;

  const int classes = model.weights[1].cols();
  double loss = 0.0;
  const double inv = 1.0 / static_cast<double>(batch.size());
  for (int gi : batch) {
    if (gi < 0 || gi >= static_cast<int>(graphs.size()))
      throw std::out_of_range("gin loss: batch index out of range");
    if (labels[gi] < 0 || labels[gi] >= classes)
      throw std::out_of_range("gin loss: label outside [0,classes)");
    const GinTrace tr = gin_forward(graphs[gi], features[gi], model, train_mode, dropout,
                                    derive_seed(seed, static_cast<std::uint64_t>(gi)));
    const Matrix probs = softmax_rows(tr.logits);
    loss -= std::log(std::max(probs(0, labels[gi]), 1e-300)) * inv;

    Matrix dlogits(1, classes);
    for (int c = 0; c < classes; ++c)
      dlogits(0, c) = (probs(0, c) - (c == labels[gi] ? 1.0 : 0.0)) * inv;
    add_inplace(grads.weights[1], matmul_tn(tr.pooled, dlogits));
    const Matrix dpool = matmul_nt(dlogits, model.weights[1]);  // 1 x hidden
    Matrix dz(tr.pre.rows(), tr.pre.cols());
    for (int i = 0; i < dz.rows(); ++i)
      for (int c = 0; c < dz.cols(); ++c)
        dz(i, c) = tr.pre(i, c) > 0.0 ? dpool(0, c) : 0.0;
    add_inplace(grads.weights[0], matmul_tn(tr.aggregated, dz));
    const Matrix dagg = matmul_nt(dz, model.weights[0]);
    for (std::size_t i = 0; i < dagg.size(); ++i)
      grads.epsilon += dagg.data()[i] * tr.layer_input.data()[i];
  }
  loss += weight_penalty(model, weight_decay);
  if (weight_decay != 0.0)
    for (int l = 0; l < 2; ++l) {
      Matrix decay = model.weights[l];
      scale_inplace(decay, weight_decay);
      add_inplace(grads.weights[l], decay);
    }
  return loss;
}

void adam_step(Model& model, const Gradients& grads, AdamState& state, double lr) {
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999, kEps = 1e-8;
  if (grads.weights.size() != model.weights.size())
    throw std::invalid_argument("adam_step: gradient count mismatch");
  if (state.first.empty()) {
    for (const Matrix& w : model.weights) {
      state.first.emplace_back(w.rows(), w.cols());
      state.second.emplace_back(w.rows(), w.cols());
    }
  }
  ++state.t;
  const double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.t));
  for (std::size_t l = 0; l < model.weights.size(); ++l) {
    Matrix& w = model.weights[l];
    const Matrix& g = grads.weights[l];
    Matrix& mo = state.first[l];
    Matrix& ve = state.second[l];
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double gi = g.data()[i];
      mo.data()[i] = kBeta1 * mo.data()[i] + (1.0 - kBeta1) * gi;
      ve.data()[i] = kBeta2 * ve.data()[i] + (1.0 - kBeta2) * gi * gi;
      w.data()[i] -= lr * (mo.data()[i] / bc1) / (std::sqrt(ve.data()[i] / bc2) + kEps);
    }
  }
  if (model.arch == Arch::gin) {
    state.first_eps = kBeta1 * state.first_eps + (1.0 - kBeta1) * grads.epsilon;
    state.second_eps = kBeta2 * state.second_eps + (1.0 - kBeta2) * grads.epsilon * grads.epsilon;
    model.epsilon -= lr * (state.first_eps / bc1) / (std::sqrt(state.second_eps / bc2) + kEps);
  }
}

double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<int>& mask) {
  if (mask.empty()) throw std::invalid_argument("accuracy: empty mask");
  int correct = 0;
  for (int i : mask) {
    int arg = 0;
    for (int c = 1; c < logits.cols(); ++c)
      if (logits(i, c) > logits(i, arg)) arg = c;
    if (arg == labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(mask.size());
}

Matrix predict_logits(const Model& model, const StructureMatrix* m, const Matrix& h0) {
  return node_forward(model, m, h0).activations.back();
}

Matrix gin_predict_logits(const Model& model, const std::vector<SparseGraph>& graphs,
                          const std::vector<Matrix>& features) {
  Matrix out(static_cast<int>(graphs.size()), model.weights.at(1).cols());
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const GinTrace tr = gin_forward(graphs[gi], features[gi], model);
    for (int c = 0; c < out.cols(); ++c) out(static_cast<int>(gi), c) = tr.logits(0, c);
  }
  return out;
}

namespace {

void validate_config(const TrainConfig& cfg) {
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
  if (cfg.dropout < 0.0 || cfg.dropout >= 1.0)
    throw std::invalid_argument("train: dropout must be in [0,1)");
  if (cfg.max_epochs < 1) throw std::invalid_argument("train: max_epochs must be >= 1");
}

void check_finite_weights(const Model& model, int epoch) {
  for (const Matrix& w : model.weights)
    if (!all_finite(w))
      throw std::runtime_error("training diverged: non-finite weights after epoch " +
                               std::to_string(epoch));
}

// Shared epoch loop; the two lambdas hide the node/graph distinction.
template <typename StepFn, typename EvalFn>
TrainResult run_training(const Model& init, const Splits& splits, const TrainConfig& cfg,
                         StepFn step, EvalFn eval) {
  if (splits.train.empty()) throw std::invalid_argument("train: empty training set");
  Model model = init;
  AdamState state;
  TrainResult result;
  const bool track_val = !splits.val.empty();
  double best_val = -1.0;
  int best_epoch = 0;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const double loss = step(model, state, epoch);
    if (!std::isfinite(loss))
      throw std::runtime_error("training diverged: non-finite loss at epoch " +
                               std::to_string(epoch));
    check_finite_weights(model, epoch);

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = loss;
    eval(model, rec);
    result.history.push_back(rec);

    if (track_val && rec.val_acc > best_val) {
      best_val = rec.val_acc;
      best_epoch = epoch;
      result.model = model;
      result.best_val_acc = rec.val_acc;
      result.test_acc_at_best = rec.test_acc;
    }
    if (track_val && cfg.early_stop_rounds > 0 && epoch - best_epoch >= cfg.early_stop_rounds)
      break;
  }
  if (!track_val) {
    result.model = std::move(model);
    best_epoch = static_cast<int>(result.history.size());
    result.best_val_acc = 0.0;
    result.test_acc_at_best = result.history.back().test_acc;
  }
  result.best_epoch = best_epoch;
  return result;
}

}  // namespace

TrainResult train(const Model& init, const StructureMatrix* m, const Matrix& h0,
                  const std::vector<int>& labels, const Splits& splits,
                  const TrainConfig& cfg) {
  validate_config(cfg);
  auto step = [&](Model& model, AdamState& state, int epoch) {
    const ForwardTrace tr = node_forward(model, m, h0, true, cfg.dropout,
                                         derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch)));
    Gradients grads;
    const double loss =
        loss_and_grads(model, tr, m, labels, splits.train, cfg.weight_decay, grads);
    adam_step(model, grads, state, cfg.learning_rate);
    return loss;
  };
  auto eval = [&](const Model& model, EpochRecord& rec) {
    const Matrix logits = predict_logits(model, m, h0);
    if (!splits.val.empty()) rec.val_acc = accuracy(logits, labels, splits.val);
    if (!splits.test.empty()) rec.test_acc = accuracy(logits, labels, splits.test);
  };
  return run_training(init, splits, cfg, step, eval);
}

TrainResult train_gin(const Model& init, const std::vector<SparseGraph>& graphs,
                      const std::vector<Matrix>& features, const std::vector<int>& labels,
                      const Splits& splits, const TrainConfig& cfg, int batch_size) {
  validate_config(cfg);
  auto step = [&](Model& model, AdamState& state, int epoch) {
    const std::uint64_t epoch_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(epoch));
    const int n = static_cast<int>(splits.train.size());
    if (batch_size <= 0 || batch_size >= n) {
      Gradients grads;
      const double loss = gin_loss_and_grads(model, graphs, features, labels, splits.train,
                                             cfg.weight_decay, grads, true, cfg.dropout,
                                             epoch_seed);
      adam_step(model, grads, state, cfg.learning_rate);
      return loss;
    }
    std::vector<int> order = splits.train;
    Rng rng = make_rng(derive_seed(epoch_seed, 1));
    std::shuffle(order.begin(), order.end(), rng);
    double loss_sum = 0.0;
    for (int start = 0; start < n; start += batch_size) {
      const int stop = std::min(n, start + batch_size);
      const std::vector<int> batch(order.begin() + start, order.begin() + stop);
      Gradients grads;
      const double loss =
          gin_loss_and_grads(model, graphs, features, labels, batch, cfg.weight_decay, grads,
                             true, cfg.dropout, derive_seed(epoch_seed, 2 + start));
      adam_step(model, grads, state, cfg.learning_rate);
      loss_sum += loss * (stop - start);
    }
    return loss_sum / n;
  };
  auto eval = [&](const Model& model, EpochRecord& rec) {
    if (splits.val.empty() && splits.test.empty()) return;
    const Matrix logits = gin_predict_logits(model, graphs, features);
    if (!splits.val.empty()) rec.val_acc = accuracy(logits, labels, splits.val);
    if (!splits.test.empty()) rec.test_acc = accuracy(logits, labels, splits.test);
  };
  return run_training(init, splits, cfg, step, eval);
}

}  // namespace eigraph
