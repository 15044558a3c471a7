#pragma once

#include "rolegraph/corpus_io.hpp"
#include "rolegraph/prediction.hpp"

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rolegraph {

struct ClassScores {
  RoleLabel label = RoleLabel::NONE;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;
};

struct EvalReport {
  std::string model_name;
  std::size_t n_eval = 0;
  double accuracy = 0.0;
  // One entry per taxonomy class, in code order.
  std::vector<ClassScores> per_class;
  // Mean F1 over classes that occur in the gold labels or the predictions.
  double macro_f1 = 0.0;
  // confusion[gold][predicted]
  std::array<std::array<std::size_t, kNumRoles>, kNumRoles> confusion{};
};

// Predictions must cover exactly the masked indices, each once, and the gold
// array must carry a label for every one of them.
EvalReport evaluate(std::span<const Prediction> predictions, const LabelArray& gold,
                    std::span<const std::size_t> masked_indices, std::string model_name = "model");

// Summary table (model, accuracy, macro-F1) followed by per-model class
// breakdowns and confusion matrices. Percentages use two decimals.
std::string render_text(std::span<const EvalReport> reports);

std::string render_json(const EvalReport& report);
// A single report renders as an object, several as an array.
std::string render_json(std::span<const EvalReport> reports);

}  // namespace rolegraph
