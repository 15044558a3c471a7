#include "rolegraph/prediction.hpp"

#include "rolegraph/error.hpp"

#include <json.hpp>

namespace rolegraph {

using json = nlohmann::ordered_json;

std::size_t argmax_row(const Eigen::Ref<const Eigen::RowVectorXd>& row) {
  std::size_t best = 0;
  for (Eigen::Index c = 1; c < row.size(); ++c)
    if (row(c) > row(static_cast<Eigen::Index>(best))) best = static_cast<std::size_t>(c);
  return best;
}

std::vector<Prediction> predict_rows(const Eigen::MatrixXd& scores, std::span<const std::size_t> indices) {
  if (scores.cols() != static_cast<Eigen::Index>(kNumRoles))
    throw DimensionError("score matrix must have " + std::to_string(kNumRoles) + " columns");
  std::vector<Prediction> out;
  out.reserve(indices.size());
  for (std::size_t idx : indices) {
    if (idx >= static_cast<std::size_t>(scores.rows()))
      throw DimensionError("prediction index " + std::to_string(idx) + " out of range");
    const auto row = scores.row(static_cast<Eigen::Index>(idx));
    Prediction p;
    p.index = idx;
    p.scores.reserve(kNumRoles);
    for (Eigen::Index c = 0; c < row.size(); ++c) p.scores.push_back(row(c));
    p.undecided = (row.array() == 0.0).all();
    p.label = p.undecided ? RoleLabel::NONE : role_from_code(static_cast<int>(argmax_row(row)));
    out.push_back(std::move(p));
  }
  return out;
}

std::string encode_predictions(std::span<const Prediction> predictions) {
  std::string out;
  for (const auto& p : predictions) {
    json obj = {{"index", p.index},
                {"label", std::string(role_name(p.label))},
                {"scores", p.scores},
                {"undecided", p.undecided}};
    out += obj.dump();
    out += '\n';
  }
  return out;
}

std::vector<Prediction> decode_predictions(std::string_view text) {
  std::vector<Prediction> out;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    const std::string where = "predictions line " + std::to_string(line_no);
    try {
      const json obj = json::parse(line);
      Prediction p;
      if (!obj.at("index").is_number_unsigned()) throw FormatError(where + ": index must be a non-negative integer");
      p.index = obj.at("index").get<std::size_t>();
      p.label = parse_role(obj.at("label").get<std::string>());
      if (auto it = obj.find("scores"); it != obj.end()) p.scores = it->get<std::vector<double>>();
      p.undecided = obj.value("undecided", false);
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return out;
}

std::vector<Prediction> read_predictions(const std::filesystem::path& path) {
  return decode_predictions(read_file(path));
}

}  // namespace rolegraph
