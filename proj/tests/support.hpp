#pragma once

// Test-only generators and independent oracles. Nothing here calls into the
// code paths it is used to check.

#include "rolegraph/corpus_io.hpp"
#include "rolegraph/gcn.hpp"
#include "rolegraph/graph_build.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

namespace rolegraph::testing {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return lo + (hi - lo) * (static_cast<double>(gen_() >> 11) * 0x1.0p-53);
  }
  std::size_t index(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + static_cast<std::size_t>(gen_() % (hi - lo + 1));
  }
  double normal() {
    const double u1 = uniform() + 0x1.0p-54;
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }
  bool coin(double p = 0.5) { return uniform() < p; }
  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

// Rows drawn around a handful of random directions so thresholded graphs get
// a useful mix of edges and non-edges.
inline EmbeddingMatrix random_embeddings(Rng& rng, std::size_t n, std::size_t d, double noise = 0.6) {
  const std::size_t centres = 1 + rng.index(1, 4);
  std::vector<std::vector<double>> c(centres, std::vector<double>(d));
  for (auto& v : c)
    for (auto& x : v) x = rng.normal();
  std::vector<float> data;
  data.reserve(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& centre = c[rng.index(0, centres - 1)];
    for (std::size_t k = 0; k < d; ++k) {
      float v = static_cast<float>(centre[k] + noise * rng.normal());
      if (v == 0.0f) v = 1e-3f;
      data.push_back(v);
    }
  }
  return EmbeddingMatrix(n, d, std::move(data));
}

// Random graph with weights in (threshold, 1].
inline SentenceGraph random_graph(Rng& rng, std::size_t n, double density, double threshold = 0.5) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.coin(density)) {
        double w = rng.uniform(threshold, 1.0);
        if (w <= threshold) w = 1.0;
        edges.push_back({i, j, w});
      }
  return SentenceGraph(n, threshold, std::move(edges));
}

inline SentenceGraph path_graph(std::size_t n) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1, 1.0});
  return SentenceGraph(n, 0.5, std::move(edges));
}

// 3-cube: 3-regular, so with self-loops every entry of Â is exactly 1/4.
inline SentenceGraph cube_graph(const std::vector<std::size_t>& relabel) {
  std::vector<Edge> edges;
  for (std::size_t v = 0; v < 8; ++v)
    for (std::size_t bit : {1u, 2u, 4u}) {
      const std::size_t u = v ^ bit;
      if (v < u) {
        const std::size_t a = relabel[v];
        const std::size_t b = relabel[u];
        edges.push_back({std::min(a, b), std::max(a, b), 1.0});
      }
    }
  return SentenceGraph(8, 0.5, std::move(edges));
}

inline GcnModel random_model(Rng& rng, std::size_t d, std::size_t h, std::size_t k) {
  return GcnModel::init(d, h, k, rng.engine()());
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = rng.normal();
  return m;
}

// O(n^2 d) all-pairs oracle in extended precision.
struct OracleEdge {
  std::size_t i;
  std::size_t j;
  long double weight;
};

inline std::vector<OracleEdge> brute_force_edges(const EmbeddingMatrix& m, double threshold) {
  std::vector<OracleEdge> out;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.rows(); ++j) {
      long double xy = 0, xx = 0, yy = 0;
      for (std::size_t k = 0; k < m.dims(); ++k) {
        const long double a = m.row(i)[k];
        const long double b = m.row(j)[k];
        xy += a * b;
        xx += a * a;
        yy += b * b;
      }
      const long double c = xy / (std::sqrt(xx) * std::sqrt(yy));
      if (c > threshold) out.push_back({i, j, c});
    }
  return out;
}

inline Eigen::MatrixXd to_dense(const SparseMatrix& s) { return Eigen::MatrixXd(s); }

// Largest |eigenvalue| of a symmetric matrix by power iteration.
inline double spectral_radius(const Eigen::MatrixXd& m, int steps = 500) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(m.rows());
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += 0.01 * static_cast<double>(i % 7);
  v.normalize();
  double lambda = 0.0;
  for (int s = 0; s < steps; ++s) {
    Eigen::VectorXd w = m * v;
    const double norm = w.norm();
    if (norm == 0.0) return 0.0;
    lambda = norm;
    v = w / norm;
  }
  return lambda;
}

// Dense oracle for the diffusion fixed point: LU on (I - alpha P).
inline Eigen::MatrixXd dense_diffusion_oracle(const Eigen::MatrixXd& p, const Eigen::MatrixXd& y, double alpha) {
  const Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(p.rows(), p.cols()) - alpha * p;
  return sys.partialPivLu().solve((1.0 - alpha) * y);
}

// Central finite differences of the GCN loss with respect to every weight.
struct NumericGrads {
  Eigen::MatrixXd w0;
  Eigen::MatrixXd w1;
};

inline NumericGrads finite_difference_grads(const GcnModel& model, const NormalizedGraph& ahat,
                                            const Eigen::MatrixXd& x, const Eigen::MatrixXd& y,
                                            const std::vector<bool>& mask, double step) {
  // Loss recomputed densely from scratch so the oracle shares no code with the
  // analytic path beyond the definition.
  const Eigen::MatrixXd a = to_dense(ahat.matrix);
  auto loss = [&](const GcnModel& m) {
    const Eigen::MatrixXd h = (a * x * m.w0).cwiseMax(0.0);
    const Eigen::MatrixXd logits = a * h * m.w1;
    double total = 0.0;
    int count = 0;
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
      if (mask[static_cast<std::size_t>(i)]) continue;
      const double mx = logits.row(i).maxCoeff();
      double z = 0.0;
      for (Eigen::Index c = 0; c < logits.cols(); ++c) z += std::exp(logits(i, c) - mx);
      for (Eigen::Index c = 0; c < logits.cols(); ++c) total -= y(i, c) * (logits(i, c) - mx - std::log(z));
      ++count;
    }
    return total / count;
  };
  NumericGrads g{Eigen::MatrixXd::Zero(model.w0.rows(), model.w0.cols()),
                 Eigen::MatrixXd::Zero(model.w1.rows(), model.w1.cols())};
  GcnModel probe = model;
  for (Eigen::Index i = 0; i < model.w0.size(); ++i) {
    const double keep = probe.w0.data()[i];
    probe.w0.data()[i] = keep + step;
    const double up = loss(probe);
    probe.w0.data()[i] = keep - step;
    const double down = loss(probe);
    probe.w0.data()[i] = keep;
    g.w0.data()[i] = (up - down) / (2.0 * step);
  }
  for (Eigen::Index i = 0; i < model.w1.size(); ++i) {
    const double keep = probe.w1.data()[i];
    probe.w1.data()[i] = keep + step;
    const double up = loss(probe);
    probe.w1.data()[i] = keep - step;
    const double down = loss(probe);
    probe.w1.data()[i] = keep;
    g.w1.data()[i] = (up - down) / (2.0 * step);
  }
  return g;
}

// ||a - b|| / max(||a||, ||b||), zero when both vanish.
inline double relative_error(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

// Two groups of ten nodes with orthogonal feature directions, so the built
// graph is two disconnected cliques. The last three nodes of each clique are
// masked.
struct CliqueFixture {
  EmbeddingMatrix embeddings;
  std::vector<RoleLabel> labels;
  std::vector<bool> mask;
};

inline CliqueFixture two_clique_fixture() {
  constexpr std::size_t kPerClique = 10;
  constexpr std::size_t kDims = 8;
  Rng rng(7);
  std::vector<float> data;
  std::vector<RoleLabel> labels;
  std::vector<bool> mask;
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < kPerClique; ++i) {
      for (std::size_t k = 0; k < kDims; ++k) {
        const bool own = (c == 0) ? k < kDims / 2 : k >= kDims / 2;
        data.push_back(static_cast<float>((own ? 1.0 : 0.0) + 0.1 * rng.uniform(0.0, 1.0)));
      }
      labels.push_back(c == 0 ? RoleLabel::FAC : RoleLabel::RPC);
      mask.push_back(i >= kPerClique - 3);
    }
  return {EmbeddingMatrix(2 * kPerClique, kDims, std::move(data)), std::move(labels), std::move(mask)};
}

inline Eigen::MatrixXd onehot_targets(const std::vector<RoleLabel>& labels, const std::vector<bool>& mask) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), kNumRoles);
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (!mask[i]) y(static_cast<Eigen::Index>(i), role_code(labels[i])) = 1.0;
  return y;
}

class TempDir {
 public:
  TempDir() {
    static std::uint64_t counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("rolegraph-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

}  // namespace rolegraph::testing
