#pragma once

#include "rolegraph/corpus_io.hpp"

#include <Eigen/SparseCore>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rolegraph {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

inline constexpr double kDefaultThreshold = 0.5;

struct Edge {
  std::size_t i;
  std::size_t j;
  double weight;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Cosine similarity with 64-bit accumulation, clamped to [-1, 1].
// Throws DimensionError on length mismatch and NumericalError on a zero-norm
// input.
double cosine(std::span<const float> x, std::span<const float> y);

// Thresholded similarity graph. Edges are stored once with i < j, sorted by
// (i, j); the adjacency they describe is symmetric with a zero diagonal.
class SentenceGraph {
 public:
  SentenceGraph(std::size_t n, double threshold, std::vector<Edge> edges);

  std::size_t size() const { return n_; }
  double threshold() const { return threshold_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<double>& degree() const { return degree_; }

  // Full symmetric adjacency.
  SparseMatrix adjacency() const;

  friend bool operator==(const SentenceGraph& a, const SentenceGraph& b) {
    return a.n_ == b.n_ && a.threshold_ == b.threshold_ && a.edges_ == b.edges_;
  }

 private:
  std::size_t n_;
  double threshold_;
  std::vector<Edge> edges_;
  std::vector<double> degree_;
};

// All-pairs build: edge (i, j) with weight cos(x_i, x_j) iff that cosine is
// strictly above the threshold. Rows are split across `workers` threads; the
// output does not depend on the worker count.
SentenceGraph build_graph(const EmbeddingMatrix& m, double threshold = kDefaultThreshold,
                          unsigned workers = 1);

enum class NormMode { Diffusion, Gcn };

struct NormalizedGraph {
  SparseMatrix matrix;
  NormMode mode;
  // Diffusion mode only: nodes with zero degree, whose rows and columns are
  // left at zero.
  std::vector<std::size_t> isolated;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

// Diffusion: D^{-1/2} A D^{-1/2}. Gcn: the same on A + I with the degree of
// A + I.
NormalizedGraph normalize(const SentenceGraph& g, NormMode mode);

// SGRAPH1 text format.
std::string encode_graph(const SentenceGraph& g);
SentenceGraph decode_graph(std::string_view text);
void write_graph(const SentenceGraph& g, const std::filesystem::path& path);
SentenceGraph read_graph(const std::filesystem::path& path);

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

}  // namespace rolegraph
