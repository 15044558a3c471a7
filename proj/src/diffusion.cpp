#include "rolegraph/diffusion.hpp"

#include "rolegraph/error.hpp"

#include <Eigen/SparseCholesky>

#include <string>

namespace rolegraph {

namespace {

void check_inputs(const NormalizedGraph& p, const Eigen::MatrixXd& y) {
  if (p.mode != NormMode::Diffusion) throw ConfigError("label diffusion needs a diffusion-normalized graph");
  if (y.rows() != p.matrix.rows())
    throw DimensionError("label matrix has " + std::to_string(y.rows()) + " rows but the graph has " +
                         std::to_string(p.matrix.rows()) + " nodes");
  if (y.cols() < 1) throw DimensionError("label matrix has no class columns");
}

std::vector<std::size_t> zero_rows(const Eigen::MatrixXd& f) {
  std::vector<std::size_t> out;
  for (Eigen::Index i = 0; i < f.rows(); ++i)
    if ((f.row(i).array() == 0.0).all()) out.push_back(static_cast<std::size_t>(i));
  return out;
}

}  // namespace

void DiffusionConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1), got " + format_double(alpha));
  if (max_iters < 1) throw ConfigError("max_iters must be positive");
  if (!(tol > 0.0)) throw ConfigError("tol must be positive");
}

DiffusionResult diffuse_iterative(const NormalizedGraph& p, const Eigen::MatrixXd& y, const DiffusionConfig& cfg) {
  cfg.validate();
  check_inputs(p, y);
  const Eigen::MatrixXd prior = (1.0 - cfg.alpha) * y;
  DiffusionResult res;
  res.scores = y;
  Eigen::MatrixXd next(y.rows(), y.cols());
  while (res.iterations_run < cfg.max_iters) {
    next.noalias() = cfg.alpha * (p.matrix * res.scores);
    next += prior;
    const double change = y.size() == 0 ? 0.0 : (next - res.scores).cwiseAbs().maxCoeff();
    res.scores.swap(next);
    ++res.iterations_run;
    if (change < cfg.tol) {
      res.converged = true;
      break;
    }
  }
  res.undecided = zero_rows(res.scores);
  return res;
}

DiffusionResult diffuse_closed_form(const NormalizedGraph& p, const Eigen::MatrixXd& y, const DiffusionConfig& cfg) {
  cfg.validate();
  check_inputs(p, y);
  const auto n = p.matrix.rows();
  if (static_cast<std::size_t>(n) > kClosedFormMaxNodes)
    throw ConfigError("closed-form diffusion is limited to " + std::to_string(kClosedFormMaxNodes) +
                      " nodes; use the iterative solver");

  Eigen::SparseMatrix<double> system(n, n);
  system.setIdentity();
  system -= cfg.alpha * Eigen::SparseMatrix<double>(p.matrix);

  // I - alpha * P is symmetric positive definite: the eigenvalues of P lie in
  // [-1, 1] and alpha < 1.
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> solver(system);
  if (solver.info() != Eigen::Success) throw NumericalError("closed-form diffusion: factorization failed");

  DiffusionResult res;
  res.scores = solver.solve((1.0 - cfg.alpha) * y);
  if (solver.info() != Eigen::Success) throw NumericalError("closed-form diffusion: solve failed");
  res.converged = true;
  res.undecided = zero_rows(res.scores);
  return res;
}

double fixed_point_residual(const NormalizedGraph& p, const Eigen::MatrixXd& y, const Eigen::MatrixXd& f,
                            double alpha) {
  if (f.size() == 0) return 0.0;
  const Eigen::MatrixXd step = alpha * (p.matrix * f) + (1.0 - alpha) * y;
  return (f - step).cwiseAbs().maxCoeff();
}

std::vector<Prediction> predict(const DiffusionResult& result, std::span<const std::size_t> masked_indices) {
  return predict_rows(result.scores, masked_indices);
}

}  // namespace rolegraph
