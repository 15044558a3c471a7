#include "rolegraph/diffusion.hpp"
#include "rolegraph/error.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>

using namespace rolegraph;
using namespace rolegraph::testing;

namespace {

NormalizedGraph two_node_graph() { return normalize(SentenceGraph(2, 0.5, {{0, 1, 1.0}}), NormMode::Diffusion); }

Eigen::MatrixXd two_node_labels() {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(2, 13);
  y(0, 0) = 1.0;
  return y;
}

Eigen::MatrixXd random_labels(Rng& rng, std::size_t n, std::size_t k, double masked_fraction) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(k));
  for (std::size_t i = 0; i < n; ++i)
    if (!rng.coin(masked_fraction)) y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(rng.index(0, k - 1))) = 1.0;
  return y;
}

}  // namespace

TEST_SUITE("diffusion") {

TEST_CASE("two-node instance matches the 2x2 inversion oracle") {
  // (I - 0.5 P)^{-1} = (4/3) [[1, 0.5], [0.5, 1]], times (1 - 0.5) Y.
  const double expected0 = 0.5 * (4.0 / 3.0) * 1.0;
  const double expected1 = 0.5 * (4.0 / 3.0) * 0.5;
  CHECK(expected0 == doctest::Approx(2.0 / 3.0));
  CHECK(expected1 == doctest::Approx(1.0 / 3.0));

  const auto p = two_node_graph();
  const auto y = two_node_labels();
  DiffusionConfig cfg;
  cfg.tol = 1e-14;
  for (const auto& res : {diffuse_closed_form(p, y, cfg), diffuse_iterative(p, y, cfg)}) {
    CHECK(std::abs(res.scores(0, 0) - 2.0 / 3.0) <= 1e-9);
    CHECK(std::abs(res.scores(1, 0) - 1.0 / 3.0) <= 1e-9);
    CHECK(res.scores.rightCols(12).isZero(0.0));
    CHECK(res.converged);
    const std::vector<std::size_t> masked{1};
    const auto preds = predict(res, masked);
    REQUIRE(preds.size() == 1);
    CHECK(preds[0].index == 1);
    CHECK(preds[0].label == RoleLabel::PREAMBLE);
    CHECK_FALSE(preds[0].undecided);
  }
}

TEST_CASE("tiny alpha leaves the prior in place") {
  Rng rng(4);
  const auto g = random_graph(rng, 20, 0.3);
  const auto p = normalize(g, NormMode::Diffusion);
  const auto y = random_labels(rng, 20, 13, 0.3);
  DiffusionConfig cfg;
  cfg.alpha = 1e-9;
  CHECK((diffuse_iterative(p, y, cfg).scores - y).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((diffuse_closed_form(p, y, cfg).scores - y).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("isolated masked node is undecided") {
  const auto p = normalize(SentenceGraph(3, 0.5, {{0, 1, 0.9}}), NormMode::Diffusion);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(3, 13);
  y(0, 4) = 1.0;
  for (const auto& res : {diffuse_iterative(p, y), diffuse_closed_form(p, y)}) {
    CHECK(res.scores.row(2).isZero(0.0));
    CHECK(std::find(res.undecided.begin(), res.undecided.end(), 2) != res.undecided.end());
    const std::vector<std::size_t> masked{1, 2};
    const auto preds = predict(res, masked);
    CHECK(preds[0].label == RoleLabel::ARG_PETITIONER);
    CHECK_FALSE(preds[0].undecided);
    CHECK(preds[1].label == RoleLabel::NONE);
    CHECK(preds[1].undecided);
  }
}

TEST_CASE("empty graph: closed form returns the scaled prior") {
  const auto p = normalize(SentenceGraph(4, 0.5, {}), NormMode::Diffusion);
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(4, 13);
  y(0, 1) = 1.0;
  y(2, 7) = 1.0;
  const auto res = diffuse_closed_form(p, y);
  CHECK((res.scores - 0.5 * y).cwiseAbs().maxCoeff() == 0.0);
  CHECK(res.undecided == std::vector<std::size_t>{1, 3});
}

TEST_CASE("closed form and iterative agree on random 30-node graphs") {
  Rng rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const auto p = normalize(random_graph(rng, 30, rng.uniform(0.05, 0.4)), NormMode::Diffusion);
    const auto y = random_labels(rng, 30, 13, 0.4);
    DiffusionConfig cfg;
    const auto closed = diffuse_closed_form(p, y, cfg);
    const auto iter = diffuse_iterative(p, y, cfg);
    CHECK(iter.converged);
    CHECK((closed.scores - iter.scores).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK(fixed_point_residual(p, y, iter.scores, cfg.alpha) <= 10 * cfg.tol);
    CHECK(fixed_point_residual(p, y, closed.scores, cfg.alpha) <= 10 * cfg.tol);
    // Independent dense LU oracle.
    const Eigen::MatrixXd oracle = dense_diffusion_oracle(to_dense(p.matrix), y, cfg.alpha);
    CHECK((closed.scores - oracle).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("scores are bounded in [0, 1]") {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = rng.index(2, 100);
    const auto p = normalize(random_graph(rng, n, rng.uniform(0.01, 0.3)), NormMode::Diffusion);
    const auto y = random_labels(rng, n, 13, 0.5);
    const auto iter = diffuse_iterative(p, y);
    CHECK(iter.scores.minCoeff() >= 0.0);
    CHECK(iter.scores.maxCoeff() <= 1.0);
    const auto closed = diffuse_closed_form(p, y);
    CHECK(closed.scores.minCoeff() >= -1e-12);
    CHECK(closed.scores.maxCoeff() <= 1.0 + 1e-12);
    CHECK(std::isfinite(closed.scores.sum()));
  }
}

TEST_CASE("class permutation equivariance and scale invariance of predictions") {
  Rng rng(55);
  const std::size_t n = 40;
  const auto p = normalize(random_graph(rng, n, 0.15), NormMode::Diffusion);
  const auto y = random_labels(rng, n, 13, 0.5);

  std::vector<int> perm(13);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng.engine());
  Eigen::MatrixXd y_perm(y.rows(), y.cols());
  for (int c = 0; c < 13; ++c) y_perm.col(perm[c]) = y.col(c);

  const auto base = diffuse_closed_form(p, y);
  const auto permuted = diffuse_closed_form(p, y_perm);
  for (int c = 0; c < 13; ++c) CHECK((permuted.scores.col(perm[c]) - base.scores.col(c)).cwiseAbs().maxCoeff() <= 1e-12);

  std::vector<std::size_t> all(n);
  std::iota(all.begin(), all.end(), 0);
  const auto preds = predict(base, all);
  for (double scale : {0.25, 3.0, 1024.0}) {
    const auto scaled = predict(diffuse_closed_form(p, scale * y), all);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(scaled[i].label == preds[i].label);
      CHECK(scaled[i].undecided == preds[i].undecided);
    }
  }
}

TEST_CASE("predict: argmax, tie-break and zero rows") {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(3, 13);
  s.row(0).head(3) << 0.1, 0.7, 0.2;
  s.row(1).head(2) << 0.5, 0.5;
  const DiffusionResult r{s, 0, true, {2}};
  const std::vector<std::size_t> idx{0, 1, 2};
  const auto preds = predict(r, idx);
  CHECK(preds[0].label == RoleLabel::FAC);
  CHECK(preds[1].label == RoleLabel::PREAMBLE);
  CHECK(preds[2].label == RoleLabel::NONE);
  CHECK(preds[2].undecided);
  CHECK(preds[0].scores.size() == 13);
}

TEST_CASE("configuration and shape errors") {
  const auto p = two_node_graph();
  const auto y = two_node_labels();
  for (double alpha : {0.0, 1.0, 1.5, -0.2}) {
    DiffusionConfig cfg;
    cfg.alpha = alpha;
    CHECK_THROWS_AS(diffuse_iterative(p, y, cfg), ConfigError);
    CHECK_THROWS_AS(diffuse_closed_form(p, y, cfg), ConfigError);
  }
  DiffusionConfig bad_tol;
  bad_tol.tol = 0.0;
  CHECK_THROWS_AS(diffuse_iterative(p, y, bad_tol), ConfigError);
  DiffusionConfig bad_iters;
  bad_iters.max_iters = 0;
  CHECK_THROWS_AS(diffuse_iterative(p, y, bad_iters), ConfigError);

  CHECK_THROWS_AS(diffuse_iterative(p, Eigen::MatrixXd::Zero(3, 13)), DimensionError);
  CHECK_THROWS_AS(diffuse_closed_form(p, Eigen::MatrixXd::Zero(3, 13)), DimensionError);
  const auto gcn = normalize(SentenceGraph(2, 0.5, {{0, 1, 1.0}}), NormMode::Gcn);
  CHECK_THROWS_AS(diffuse_iterative(gcn, y), ConfigError);
}

TEST_CASE("closed form refuses oversized systems") {
  const std::size_t n = kClosedFormMaxNodes + 1;
  const auto p = normalize(SentenceGraph(n, 0.5, {}), NormMode::Diffusion);
  try {
    diffuse_closed_form(p, Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), 13));
    FAIL("expected the size guard to trigger");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("iterative") != std::string::npos);
  }
}

TEST_CASE("iteration cap reports non-convergence") {
  const auto p = two_node_graph();
  DiffusionConfig cfg;
  cfg.max_iters = 3;
  const auto res = diffuse_iterative(p, two_node_labels(), cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations_run == 3);
}

}  // TEST_SUITE
