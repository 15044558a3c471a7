#pragma once

#include "rolegraph/corpus_io.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rolegraph {

struct Prediction {
  std::size_t index = 0;
  RoleLabel label = RoleLabel::NONE;
  std::vector<double> scores;
  // Score row was entirely zero; label defaults to NONE.
  bool undecided = false;
};

// Row argmax with ties going to the lowest class code.
std::size_t argmax_row(const Eigen::Ref<const Eigen::RowVectorXd>& row);

std::vector<Prediction> predict_rows(const Eigen::MatrixXd& scores, std::span<const std::size_t> indices);

// One JSON object per line: {"index","label","scores","undecided"}.
std::string encode_predictions(std::span<const Prediction> predictions);
std::vector<Prediction> decode_predictions(std::string_view text);
std::vector<Prediction> read_predictions(const std::filesystem::path& path);

}  // namespace rolegraph
