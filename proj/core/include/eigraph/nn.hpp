#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eigraph/graph.hpp"
#include "eigraph/linalg.hpp"

namespace eigraph {

enum class Arch { gcn, sgc, gin, mlp };

std::string to_string(Arch arch);
Arch arch_from_string(const std::string& name);

// Bias-free stack: every layer is input -> (propagate) -> W -> activation.
// Hidden layers use ReLU; the head emits raw logits.
struct Model {
  Arch arch = Arch::gcn;
  std::vector<Matrix> weights;  // W^(l), shape d_l x d_{l+1}
  double epsilon = 0.0;         // gin neighbor-sum weighting, trained
  int propagations = 0;         // sgc propagation depth
  bool residual = false;        // gcn identity skip where shapes match
};

// Glorot-uniform weights along the dimension chain dims[0] -> dims.back().
Model init_model(Arch arch, const std::vector<int>& dims, std::uint64_t seed,
                 bool residual = false, int propagations = 0);

struct TrainConfig {
  double learning_rate = 0.01;
  double weight_decay = 5e-4;
  double dropout = 0.0;
  int max_epochs = 400;
  int early_stop_rounds = 100;  // 0 disables early stopping
  std::uint64_t seed = 0;
};

struct Splits {
  std::vector<int> train, val, test;
};

// Everything the backward pass needs from one forward run.
struct ForwardTrace {
  std::vector<Matrix> activations;  // H^(0..L); last entry is the logits
  std::vector<Matrix> propagated;   // F * dropped input (the input itself for mlp)
  std::vector<Matrix> pre;          // propagated * W^(l)
  std::vector<Matrix> masks;        // dropout multipliers; empty when off
  std::vector<char> skipped;        // identity skip applied at layer l
};

// m may be null for mlp. sgc applies its propagations to h0 up front.
ForwardTrace node_forward(const Model& model, const StructureMatrix* m, const Matrix& h0,
                          bool train_mode = false, double dropout = 0.0,
                          std::uint64_t seed = 0);

std::vector<Matrix> gcn_forward(const StructureMatrix& m, const Matrix& h0, const Model& model,
                                bool train_mode = false, double dropout = 0.0,
                                std::uint64_t seed = 0);
std::vector<Matrix> mlp_forward(const Matrix& h0, const Model& model, bool train_mode = false,
                                double dropout = 0.0, std::uint64_t seed = 0);

Matrix sgc_propagate(const StructureMatrix& m, const Matrix& x, int propagations);
Matrix sgc_forward(const StructureMatrix& m, const Matrix& x, int propagations,
                   const Matrix& w);

// One GNN layer with learnable epsilon, one-layer MLP, sum pooling, linear
// head: aggregated = (1+eps) X + A X; logits = sum_v ReLU(aggregated W0) W1.
struct GinTrace {
  Matrix layer_input;      // X after dropout
  Matrix aggregated;       // (1+eps) X + A X
  Matrix pre;              // aggregated * W0
  Matrix node_embeddings;  // ReLU(pre)
  Matrix pooled;           // 1 x hidden
  Matrix logits;           // 1 x classes
};

GinTrace gin_forward(const SparseGraph& g, const Matrix& h0, const Model& model,
                     bool train_mode = false, double dropout = 0.0, std::uint64_t seed = 0);

struct Gradients {
  std::vector<Matrix> weights;
  double epsilon = 0.0;
};

// Mean softmax cross-entropy over masked rows plus (weight_decay/2) sum of
// squared weight norms. Gradients cover every weight matrix.
double loss_and_grads(const Model& model, const ForwardTrace& trace, const StructureMatrix* m,
                      const std::vector<int>& labels, const std::vector<int>& mask,
                      double weight_decay, Gradients& grads);

// Graph-level counterpart averaged over the batch; also differentiates epsilon.
double gin_loss_and_grads(const Model& model, const std::vector<SparseGraph>& graphs,
                          const std::vector<Matrix>& features, const std::vector<int>& labels,
                          const std::vector<int>& batch, double weight_decay, Gradients& grads,
                          bool train_mode = false, double dropout = 0.0,
                          std::uint64_t seed = 0);

struct AdamState {
  std::vector<Matrix> first, second;
  double first_eps = 0.0, second_eps = 0.0;
  std::int64_t t = 0;
};

void adam_step(Model& model, const Gradients& grads, AdamState& state, double lr);

// Argmax accuracy over the masked rows; logit ties pick the lowest class.
double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<int>& mask);

Matrix predict_logits(const Model& model, const StructureMatrix* m, const Matrix& h0);
// Stacked per-graph logits, one row per graph.
Matrix gin_predict_logits(const Model& model, const std::vector<SparseGraph>& graphs,
                          const std::vector<Matrix>& features);

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_acc = 0.0;
  double test_acc = 0.0;
};

struct TrainResult {
  Model model;  // weights from the best validation epoch (final epoch if no val)
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_acc = 0.0;
  double test_acc_at_best = 0.0;
};

// Full-batch training with Adam; restores the earliest best-validation epoch.
// Deterministic for a fixed config seed. Throws on non-finite loss.
TrainResult train(const Model& init, const StructureMatrix* m, const Matrix& h0,
                  const std::vector<int>& labels, const Splits& splits,
                  const TrainConfig& cfg);
// batch_size > 0 takes one Adam step per shuffled mini-batch of graphs each
// epoch (shuffle order derived from the config seed); 0 trains full-batch.
TrainResult train_gin(const Model& init, const std::vector<SparseGraph>& graphs,
                      const std::vector<Matrix>& features, const std::vector<int>& labels,
                      const Splits& splits, const TrainConfig& cfg, int batch_size = 0);

}  // namespace eigraph
