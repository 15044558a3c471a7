#include "rolegraph/evaluate.hpp"

#include "rolegraph/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace rolegraph {

using json = nlohmann::ordered_json;

namespace {

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * v);
  return buf;
}

std::string pad_right(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string pad_left(std::string s, std::size_t width) {
  if (s.size() < width) s.insert(0, width - s.size(), ' ');
  return s;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

json report_to_json(const EvalReport& r) {
  json per_class = json::array();
  for (const auto& c : r.per_class)
    per_class.push_back({{"label", std::string(role_name(c.label))},
                         {"precision", c.precision},
                         {"recall", c.recall},
                         {"f1", c.f1},
                         {"support", c.support}});
  json confusion = json::array();
  for (const auto& row : r.confusion) confusion.push_back(row);
  return {{"model", r.model_name},       {"n_eval", r.n_eval},       {"accuracy", r.accuracy},
          {"macro_f1", r.macro_f1},      {"per_class", per_class},   {"confusion", confusion}};
}

}  // namespace

EvalReport evaluate(std::span<const Prediction> predictions, const LabelArray& gold,
                    std::span<const std::size_t> masked_indices, std::string model_name) {
  std::vector<std::size_t> expected(masked_indices.begin(), masked_indices.end());
  std::sort(expected.begin(), expected.end());
  std::vector<const Prediction*> by_index;
  by_index.reserve(predictions.size());
  for (const auto& p : predictions) by_index.push_back(&p);
  std::sort(by_index.begin(), by_index.end(), [](auto* a, auto* b) { return a->index < b->index; });

  for (std::size_t i = 0; i + 1 < by_index.size(); ++i)
    if (by_index[i]->index == by_index[i + 1]->index)
      throw CorpusError("duplicate prediction for index " + std::to_string(by_index[i]->index));
  for (std::size_t i = 0; i + 1 < expected.size(); ++i)
    if (expected[i] == expected[i + 1]) throw CorpusError("duplicate masked index " + std::to_string(expected[i]));
  {
    std::vector<std::size_t> got;
    for (auto* p : by_index) got.push_back(p->index);
    std::vector<std::size_t> missing, extra;
    std::set_difference(expected.begin(), expected.end(), got.begin(), got.end(), std::back_inserter(missing));
    std::set_difference(got.begin(), got.end(), expected.begin(), expected.end(), std::back_inserter(extra));
    if (!missing.empty()) throw CorpusError("no prediction for masked index " + std::to_string(missing.front()));
    if (!extra.empty()) throw CorpusError("prediction for index " + std::to_string(extra.front()) + " which is not masked");
  }

  EvalReport r;
  r.model_name = std::move(model_name);
  r.n_eval = expected.size();
  for (auto* p : by_index) {
    if (p->index >= gold.size()) throw CorpusError("prediction index " + std::to_string(p->index) + " out of range");
    const auto& g = gold.assignment(p->index);
    if (!g) throw CorpusError("no gold label for masked index " + std::to_string(p->index));
    ++r.confusion[role_code(*g)][role_code(p->label)];
  }

  std::size_t correct = 0;
  double f1_sum = 0.0;
  std::size_t f1_count = 0;
  for (std::size_t c = 0; c < kNumRoles; ++c) {
    correct += r.confusion[c][c];
    std::size_t predicted = 0;
    std::size_t support = 0;
    for (std::size_t o = 0; o < kNumRoles; ++o) {
      predicted += r.confusion[o][c];
      support += r.confusion[c][o];
    }
    ClassScores s;
    s.label = role_from_code(static_cast<int>(c));
    s.support = support;
    s.precision = ratio(r.confusion[c][c], predicted);
    s.recall = ratio(r.confusion[c][c], support);
    s.f1 = s.precision + s.recall == 0.0 ? 0.0 : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    if (support > 0 || predicted > 0) {
      f1_sum += s.f1;
      ++f1_count;
    }
    r.per_class.push_back(s);
  }
  r.accuracy = ratio(correct, r.n_eval);
  r.macro_f1 = f1_count == 0 ? 0.0 : f1_sum / static_cast<double>(f1_count);
  return r;
}

std::string render_text(std::span<const EvalReport> reports) {
  std::size_t name_w = 5;
  for (const auto& r : reports) name_w = std::max(name_w, r.model_name.size());
  name_w += 2;

  std::string out = pad_right("Model", name_w) + pad_left("Accuracy", 10) + pad_left("Macro-F1", 10) + "\n";
  out += std::string(name_w + 20, '-') + "\n";
  for (const auto& r : reports)
    out += pad_right(r.model_name, name_w) + pad_left(percent(r.accuracy), 10) + pad_left(percent(r.macro_f1), 10) + "\n";

  for (const auto& r : reports) {
    out += "\n[" + r.model_name + "] n_eval=" + std::to_string(r.n_eval) + "\n";
    out += pad_right("Class", 16) + pad_left("Precision", 11) + pad_left("Recall", 10) + pad_left("F1", 10) +
           pad_left("Support", 9) + "\n";
    for (const auto& c : r.per_class)
      out += pad_right(std::string(role_name(c.label)), 16) + pad_left(percent(c.precision), 11) +
             pad_left(percent(c.recall), 10) + pad_left(percent(c.f1), 10) + pad_left(std::to_string(c.support), 9) +
             "\n";
    out += "Confusion (rows: gold, columns: predicted, by class code)\n";
    out += pad_right("", 16);
    for (std::size_t c = 0; c < kNumRoles; ++c) out += pad_left(std::to_string(c), 4);
    out += "\n";
    for (std::size_t g = 0; g < kNumRoles; ++g) {
      out += pad_right(std::to_string(g) + " " + std::string(role_name(role_from_code(static_cast<int>(g)))), 16);
      for (std::size_t p = 0; p < kNumRoles; ++p) out += pad_left(std::to_string(r.confusion[g][p]), 4);
      out += "\n";
    }
  }
  return out;
}

std::string render_json(const EvalReport& report) { return report_to_json(report).dump(2) + "\n"; }

std::string render_json(std::span<const EvalReport> reports) {
  if (reports.size() == 1) return render_json(reports.front());
  json arr = json::array();
  for (const auto& r : reports) arr.push_back(report_to_json(r));
  return arr.dump(2) + "\n";
}

}  // namespace rolegraph
