#include "rolegraph/graph_build.hpp"

#include "rolegraph/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <thread>

namespace rolegraph {

namespace {

double sq_norm(std::span<const float> x) {
  double s = 0.0;
  for (float v : x) s += static_cast<double>(v) * static_cast<double>(v);
  return s;
}

double dot(std::span<const float> x, std::span<const float> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += static_cast<double>(x[i]) * static_cast<double>(y[i]);
  return s;
}

// One rounding in the denominator keeps parallel vectors at exactly +-1.
double cosine_from_parts(double dot_xy, double sq_x, double sq_y) {
  return std::clamp(dot_xy / std::sqrt(sq_x * sq_y), -1.0, 1.0);
}

void check_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold < 1.0))
    throw ConfigError("threshold must lie in [0, 1), got " + format_double(threshold));
}

}  // namespace

double cosine(std::span<const float> x, std::span<const float> y) {
  if (x.size() != y.size())
    throw DimensionError("cosine: vector lengths differ (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
  if (x.empty()) throw DimensionError("cosine: empty vectors");
  const double nx = sq_norm(x);
  const double ny = sq_norm(y);
  if (nx == 0.0 || ny == 0.0) throw NumericalError("cosine: similarity undefined for a zero-norm vector");
  return cosine_from_parts(dot(x, y), nx, ny);
}

SentenceGraph::SentenceGraph(std::size_t n, double threshold, std::vector<Edge> edges)
    : n_(n), threshold_(threshold), edges_(std::move(edges)), degree_(n, 0.0) {
  check_threshold(threshold_);
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const auto& [i, j, w] = edges_[e];
    if (i >= j) throw FormatError("graph edge (" + std::to_string(i) + ", " + std::to_string(j) + ") must have i < j");
    if (j >= n_) throw FormatError("graph edge (" + std::to_string(i) + ", " + std::to_string(j) + ") out of range");
    if (!(w > threshold_ && w <= 1.0))
      throw FormatError("graph edge (" + std::to_string(i) + ", " + std::to_string(j) + ") weight " +
                        format_double(w) + " outside (threshold, 1]");
    if (e > 0 && edges_[e - 1].i == i && edges_[e - 1].j == j)
      throw FormatError("duplicate graph edge (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  }
  // Sum each row in ascending neighbour order so the degree is reproducible
  // bit for bit from the adjacency.
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n_);
  for (const auto& [i, j, w] : edges_) {
    rows[i].emplace_back(j, w);
    rows[j].emplace_back(i, w);
  }
  for (std::size_t i = 0; i < n_; ++i) {
    std::sort(rows[i].begin(), rows[i].end());
    for (const auto& [j, w] : rows[i]) degree_[i] += w;
  }
}

SparseMatrix SentenceGraph::adjacency() const {
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * edges_.size());
  for (const auto& [i, j, w] : edges_) {
    triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), w);
    triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), w);
  }
  SparseMatrix a(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(n_));
  a.setFromTriplets(triplets.begin(), triplets.end());
  return a;
}

SentenceGraph build_graph(const EmbeddingMatrix& m, double threshold, unsigned workers) {
  check_threshold(threshold);
  const std::size_t n = m.rows();
  std::vector<double> sq_norms(n);
  for (std::size_t i = 0; i < n; ++i) {
    sq_norms[i] = sq_norm(m.row(i));
    if (sq_norms[i] == 0.0) throw NumericalError("embedding row " + std::to_string(i) + " has zero norm");
  }

  std::vector<std::vector<Edge>> per_row(n);
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < n; i += stride) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double c = cosine_from_parts(dot(m.row(i), m.row(j)), sq_norms[i], sq_norms[j]);
        if (c > threshold) per_row[i].push_back({i, j, c});
      }
    }
  };

  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w, workers);
  }

  std::vector<Edge> edges;
  for (auto& row : per_row) edges.insert(edges.end(), row.begin(), row.end());
  return SentenceGraph(n, threshold, std::move(edges));
}

NormalizedGraph normalize(const SentenceGraph& g, NormMode mode) {
  const std::size_t n = g.size();
  const auto& deg = g.degree();
  NormalizedGraph out{SparseMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), mode, {}};
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(2 * g.edges().size() + (mode == NormMode::Gcn ? n : 0));

  if (mode == NormMode::Diffusion) {
    for (std::size_t i = 0; i < n; ++i)
      if (deg[i] == 0.0) out.isolated.push_back(i);
    for (const auto& [i, j, w] : g.edges()) {
      const double v = w / std::sqrt(deg[i] * deg[j]);
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
      triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
    }
  } else {
    std::vector<double> loop_deg(n);
    for (std::size_t i = 0; i < n; ++i) {
      loop_deg[i] = deg[i] + 1.0;
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0 / loop_deg[i]);
    }
    for (const auto& [i, j, w] : g.edges()) {
      const double v = w / std::sqrt(loop_deg[i] * loop_deg[j]);
      triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), v);
      triplets.emplace_back(static_cast<int>(j), static_cast<int>(i), v);
    }
  }
  out.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

// ---------------------------------------------------------------------------
// SGRAPH1

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

template <typename T>
T parse_number(std::string_view s, const std::string& where) {
  T value{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw FormatError(where + ": cannot parse '" + std::string(s) + "' as a number");
  return value;
}

}  // namespace

std::string encode_graph(const SentenceGraph& g) {
  std::string out = "#SGRAPH1 n=" + std::to_string(g.size()) + " threshold=" + format_double(g.threshold()) + "\n";
  for (const auto& [i, j, w] : g.edges()) {
    out += std::to_string(i);
    out += '\t';
    out += std::to_string(j);
    out += '\t';
    out += format_double(w);
    out += '\n';
  }
  return out;
}

SentenceGraph decode_graph(std::string_view text) {
  std::size_t pos = text.find('\n');
  const std::string_view header = text.substr(0, pos);
  constexpr std::string_view kPrefix = "#SGRAPH1 n=";
  constexpr std::string_view kThr = " threshold=";
  if (!header.starts_with(kPrefix)) throw FormatError("SGRAPH1: missing or malformed header");
  const std::size_t thr_at = header.find(kThr);
  if (thr_at == std::string_view::npos) throw FormatError("SGRAPH1: header lacks threshold");
  const auto n = parse_number<std::size_t>(header.substr(kPrefix.size(), thr_at - kPrefix.size()), "SGRAPH1 header");
  const auto threshold = parse_number<double>(header.substr(thr_at + kThr.size()), "SGRAPH1 header");
  if (!(threshold >= 0.0 && threshold < 1.0)) throw FormatError("SGRAPH1: threshold outside [0, 1)");

  std::vector<Edge> edges;
  std::size_t line_no = 1;
  while (pos != std::string_view::npos && pos + 1 < text.size()) {
    const std::size_t start = pos + 1;
    pos = text.find('\n', start);
    const std::string_view line = text.substr(start, pos == std::string_view::npos ? text.size() - start : pos - start);
    ++line_no;
    const std::string where = "SGRAPH1 line " + std::to_string(line_no);
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw FormatError(where + ": expected i<TAB>j<TAB>weight");
    const auto i = parse_number<std::size_t>(line.substr(0, t1), where);
    const auto j = parse_number<std::size_t>(line.substr(t1 + 1, t2 - t1 - 1), where);
    const auto w = parse_number<double>(line.substr(t2 + 1), where);
    if (i >= j) throw FormatError(where + ": edge must satisfy i < j");
    if (j >= n) throw FormatError(where + ": node index out of range for n=" + std::to_string(n));
    if (!(w > threshold && w <= 1.0)) throw FormatError(where + ": weight must lie in (threshold, 1]");
    edges.push_back({i, j, w});
  }
  return SentenceGraph(n, threshold, std::move(edges));
}

void write_graph(const SentenceGraph& g, const std::filesystem::path& path) { write_file(path, encode_graph(g)); }

SentenceGraph read_graph(const std::filesystem::path& path) { return decode_graph(read_file(path)); }

}  // namespace rolegraph
