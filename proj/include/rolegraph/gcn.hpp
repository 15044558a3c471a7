#pragma once

#include "rolegraph/graph_build.hpp"
#include "rolegraph/prediction.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rolegraph {

inline constexpr std::size_t kDefaultHidden = 64;

// Two-layer GCN weights: Z = softmax(Â · ReLU(Â X W0) · W1).
struct GcnModel {
  Eigen::MatrixXd w0;  // d x h
  Eigen::MatrixXd w1;  // h x k

  std::size_t input_dim() const { return static_cast<std::size_t>(w0.rows()); }
  std::size_t hidden_dim() const { return static_cast<std::size_t>(w0.cols()); }
  std::size_t num_classes() const { return static_cast<std::size_t>(w1.cols()); }

  // Glorot-uniform initialization from a 64-bit Mersenne Twister; the mapping
  // from generator output to reals is fixed here so weights are identical
  // across standard libraries.
  static GcnModel init(std::size_t d, std::size_t h, std::size_t k, std::uint64_t seed);
};

struct TrainConfig {
  double learning_rate = 1e-2;
  int epochs = 200;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
};

// Row-stochastic n x k output. Throws NumericalError naming the layer if an
// intermediate goes non-finite.
Eigen::MatrixXd forward(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x);

struct LossAndGrads {
  double loss = 0.0;
  Eigen::MatrixXd grad_w0;
  Eigen::MatrixXd grad_w1;
};

// Mean cross-entropy over unmasked rows (mask[i] == true hides row i) and its
// analytic gradient with respect to both weight matrices. `targets` is n x k
// with one-hot rows for unmasked nodes.
LossAndGrads loss_and_grads(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x,
                            const Eigen::MatrixXd& targets, const std::vector<bool>& mask);

struct TrainResult {
  GcnModel model;
  // Loss before each epoch's update.
  std::vector<double> loss_history;
};

// Full-batch Adam. Deterministic for fixed inputs.
TrainResult train(GcnModel model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x,
                  const Eigen::MatrixXd& targets, const std::vector<bool>& mask, const TrainConfig& cfg = {});

std::vector<Prediction> predict(const GcnModel& model, const NormalizedGraph& ahat, const Eigen::MatrixXd& x,
                                std::span<const std::size_t> masked_indices);

// GCN1: "GCN1", d/h/k as u32 LE, W0 then W1 as f32 LE row-major. Loading
// yields the f32-rounded weights.
std::string encode_checkpoint(const GcnModel& model);
GcnModel decode_checkpoint(std::string_view bytes);
void write_checkpoint(const GcnModel& model, const std::filesystem::path& path);
GcnModel read_checkpoint(const std::filesystem::path& path);

// "epoch,loss" header, one row per epoch.
std::string encode_loss_history(std::span<const double> history);

}  // namespace rolegraph
