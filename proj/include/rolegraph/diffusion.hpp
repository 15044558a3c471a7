#pragma once

#include "rolegraph/graph_build.hpp"
#include "rolegraph/prediction.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace rolegraph {

struct DiffusionConfig {
  double alpha = 0.5;
  int max_iters = 1000;
  // Stop when the largest per-entry change between sweeps drops below this.
  double tol = 1e-8;

  void validate() const;
};

// Largest system the closed-form path will factor.
inline constexpr std::size_t kClosedFormMaxNodes = 20000;

struct DiffusionResult {
  Eigen::MatrixXd scores;
  int iterations_run = 0;
  bool converged = false;
  // Nodes whose score row is entirely zero.
  std::vector<std::size_t> undecided;
};

// F <- alpha * P * F + (1 - alpha) * Y, starting from F = Y.
DiffusionResult diffuse_iterative(const NormalizedGraph& p, const Eigen::MatrixXd& y, const DiffusionConfig& cfg = {});

// Solves (I - alpha * P) F = (1 - alpha) * Y with a sparse Cholesky
// factorization.
DiffusionResult diffuse_closed_form(const NormalizedGraph& p, const Eigen::MatrixXd& y, const DiffusionConfig& cfg = {});

// max |F - (alpha * P * F + (1 - alpha) * Y)|
double fixed_point_residual(const NormalizedGraph& p, const Eigen::MatrixXd& y, const Eigen::MatrixXd& f, double alpha);

std::vector<Prediction> predict(const DiffusionResult& result, std::span<const std::size_t> masked_indices);

}  // namespace rolegraph
