#include "rolegraph/corpus_io.hpp"

#include "rolegraph/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>
#include <utility>

namespace rolegraph {

using json = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, kNumRoles> kRoleNames = {
    "PREAMBLE",   "FAC",         "RLC",          "ISSUE", "ARG_PETITIONER",
    "ARG_RESPONDENT", "ANALYSIS", "STA",         "PRE_RELIED",
    "PRE_NOT_RELIED", "RATIO",   "RPC",          "NONE",
};

constexpr std::array<RoleLabel, kNumRoles> kRoles = {
    RoleLabel::PREAMBLE,       RoleLabel::FAC,       RoleLabel::RLC,
    RoleLabel::ISSUE,          RoleLabel::ARG_PETITIONER,
    RoleLabel::ARG_RESPONDENT, RoleLabel::ANALYSIS,  RoleLabel::STA,
    RoleLabel::PRE_RELIED,     RoleLabel::PRE_NOT_RELIED,
    RoleLabel::RATIO,          RoleLabel::RPC,       RoleLabel::NONE,
};

constexpr char kEmbMagic[4] = {'E', 'M', 'B', '1'};
constexpr std::size_t kEmbHeader = 12;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}

std::uint32_t get_u32(std::string_view bytes, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i)
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[at + i])) << (8 * i);
  return v;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::toupper(static_cast<unsigned char>(x)) ==
                  std::toupper(static_cast<unsigned char>(y));
         });
}

}  // namespace

std::string_view role_name(RoleLabel label) { return kRoleNames.at(role_code(label)); }

int role_code(RoleLabel label) { return static_cast<int>(label); }

RoleLabel role_from_code(int code) {
  if (code < 0 || code >= static_cast<int>(kNumRoles))
    throw TaxonomyError("role code out of range: " + std::to_string(code));
  return kRoles[static_cast<std::size_t>(code)];
}

RoleLabel parse_role(std::string_view name) {
  for (std::size_t i = 0; i < kNumRoles; ++i)
    if (iequals(name, kRoleNames[i])) return kRoles[i];
  throw TaxonomyError("unknown role label '" + std::string(name) + "'");
}

const std::array<RoleLabel, kNumRoles>& all_roles() { return kRoles; }

// ---------------------------------------------------------------------------
// Corpus

std::vector<SentenceRecord> parse_corpus(std::string_view content) {
  std::vector<SentenceRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < content.size()) {
    std::size_t end = content.find('\n', pos);
    if (end == std::string_view::npos) end = content.size();
    std::string_view line = content.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    pos = end + 1;
    const std::string where = "corpus line " + std::to_string(line_no + 1);

    json obj;
    try {
      obj = json::parse(line);
    } catch (const json::parse_error& e) {
      throw FormatError(where + ": " + e.what());
    }
    if (!obj.is_object()) throw FormatError(where + ": expected a JSON object");

    SentenceRecord rec;
    try {
      rec.doc_id = obj.at("doc_id").get<std::string>();
      const auto& idx = obj.at("sent_index");
      if (!idx.is_number_unsigned()) throw FormatError(where + ": sent_index must be a non-negative integer");
      rec.sent_index = idx.get<std::size_t>();
      rec.text = obj.at("text").get<std::string>();
    } catch (const json::exception& e) {
      throw FormatError(where + ": " + e.what());
    }
    if (auto it = obj.find("label"); it != obj.end() && !it->is_null()) {
      if (!it->is_string()) throw FormatError(where + ": label must be a string");
      try {
        rec.label = parse_role(it->get<std::string>());
      } catch (const TaxonomyError& e) {
        throw TaxonomyError(where + ": " + e.what());
      }
    }
    records.push_back(std::move(rec));
    ++line_no;
  }
  validate_corpus(records);
  return records;
}

void validate_corpus(const std::vector<SentenceRecord>& records) {
  std::unordered_map<std::string, std::set<std::size_t>> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (!seen[r.doc_id].insert(r.sent_index).second)
      throw DuplicateKeyError("duplicate (doc_id, sent_index) = (" + r.doc_id + ", " +
                              std::to_string(r.sent_index) + ") at corpus line " +
                              std::to_string(i + 1));
  }
  for (const auto& [doc, indices] : seen) {
    // std::set is sorted, so contiguity from 0 means the last element is size-1.
    if (*indices.rbegin() != indices.size() - 1)
      throw CorpusError("document '" + doc + "' has non-contiguous sent_index values");
  }
}

std::vector<SentenceRecord> read_corpus(const std::filesystem::path& path) {
  return parse_corpus(read_file(path));
}

// ---------------------------------------------------------------------------
// Embeddings

EmbeddingMatrix::EmbeddingMatrix(std::size_t rows, std::size_t dims, std::vector<float> data)
    : rows_(rows), dims_(dims), data_(std::move(data)) {
  if (rows_ == 0 || dims_ == 0) throw DimensionError("embedding matrix must have rows >= 1 and dims >= 1");
  if (data_.size() != rows_ * dims_)
    throw DimensionError("embedding data has " + std::to_string(data_.size()) + " values, expected " +
                         std::to_string(rows_ * dims_));
  for (std::size_t i = 0; i < data_.size(); ++i)
    if (!std::isfinite(data_[i]))
      throw NumericalError("non-finite embedding value at row " + std::to_string(i / dims_) +
                           ", column " + std::to_string(i % dims_));
}

Eigen::MatrixXd EmbeddingMatrix::to_dense() const {
  Eigen::MatrixXd out(rows_, dims_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < dims_; ++j) out(i, j) = data_[i * dims_ + j];
  return out;
}

std::string encode_embeddings(const EmbeddingMatrix& m) {
  if (m.rows() > UINT32_MAX || m.dims() > UINT32_MAX) throw DimensionError("embedding matrix too large for EMB1");
  std::string out;
  out.reserve(kEmbHeader + 4 * m.data().size());
  out.append(kEmbMagic, 4);
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.dims()));
  for (float v : m.data()) put_u32(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

EmbeddingMatrix decode_embeddings(std::string_view bytes) {
  if (bytes.size() < 4 || bytes.substr(0, 4) != std::string_view(kEmbMagic, 4))
    throw FormatError("EMB1: bad magic");
  if (bytes.size() < kEmbHeader) throw TruncationError("EMB1: truncated header");
  const std::uint64_t rows = get_u32(bytes, 4);
  const std::uint64_t dims = get_u32(bytes, 8);
  const std::uint64_t expected = kEmbHeader + 4 * rows * dims;
  if (bytes.size() != expected)
    throw TruncationError("EMB1: truncated payload, expected " + std::to_string(expected) + " bytes, found " +
                      std::to_string(bytes.size()));
  std::vector<float> data(rows * dims);
  for (std::size_t i = 0; i < data.size(); ++i) {
    data[i] = std::bit_cast<float>(get_u32(bytes, kEmbHeader + 4 * i));
    if (!std::isfinite(data[i]))
      throw NumericalError("EMB1: non-finite value at row " + std::to_string(i / dims) + ", column " +
                           std::to_string(i % dims));
  }
  return EmbeddingMatrix(rows, dims, std::move(data));
}

void write_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path) {
  write_file(path, encode_embeddings(m));
}

EmbeddingMatrix read_embeddings(const std::filesystem::path& path) {
  return decode_embeddings(read_file(path));
}

// ---------------------------------------------------------------------------
// Partition and labels

PartitionSpec parse_partition(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("partition: ") + e.what());
  }
  if (!obj.is_object()) throw FormatError("partition: expected a JSON object of doc_id -> \"train\"|\"eval\"");
  PartitionSpec spec;
  for (const auto& [doc, value] : obj.items()) {
    if (!value.is_string()) throw FormatError("partition: value for '" + doc + "' must be a string");
    const auto s = value.get<std::string>();
    if (s == "train")
      spec.emplace(doc, Split::Train);
    else if (s == "eval")
      spec.emplace(doc, Split::Eval);
    else
      throw FormatError("partition: '" + doc + "' assigned to unknown split '" + s + "'");
  }
  return spec;
}

PartitionSpec read_partition(const std::filesystem::path& path) { return parse_partition(read_file(path)); }

LabelArray::LabelArray(std::vector<std::optional<RoleLabel>> assignments, std::vector<bool> mask)
    : assignments_(std::move(assignments)), mask_(std::move(mask)) {
  if (assignments_.size() != mask_.size())
    throw DimensionError("label array: " + std::to_string(assignments_.size()) + " assignments but " +
                         std::to_string(mask_.size()) + " mask entries");
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (!mask_[i] && !assignments_[i])
      throw CorpusError("label array: sentence " + std::to_string(i) + " is unmasked but has no label");
}

std::vector<std::size_t> LabelArray::masked_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> LabelArray::unmasked_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (!mask_[i]) out.push_back(i);
  return out;
}

Eigen::MatrixXd LabelArray::onehot() const {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(size()), kNumRoles);
  for (std::size_t i = 0; i < size(); ++i)
    if (!mask_[i]) y(static_cast<Eigen::Index>(i), role_code(*assignments_[i])) = 1.0;
  return y;
}

MaskedSplit split_mask(const std::vector<SentenceRecord>& records, const PartitionSpec& partition) {
  std::set<std::string, std::less<>> docs;
  for (const auto& r : records) docs.insert(r.doc_id);
  for (const auto& [doc, split] : partition)
    if (!docs.contains(doc)) throw CorpusError("partition names unknown document '" + doc + "'");

  std::vector<std::optional<RoleLabel>> assignments;
  std::vector<bool> mask;
  assignments.reserve(records.size());
  mask.reserve(records.size());
  bool any_train = false;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto it = partition.find(r.doc_id);
    if (it == partition.end()) throw CorpusError("document '" + r.doc_id + "' is not assigned by the partition");
    const bool eval = it->second == Split::Eval;
    if (!eval && !r.label)
      throw CorpusError("missing label for train sentence (" + r.doc_id + ", " + std::to_string(r.sent_index) +
                        ") at index " + std::to_string(i));
    any_train = any_train || !eval;
    assignments.push_back(r.label);
    mask.push_back(eval);
  }
  if (!any_train) throw CorpusError("no supervision available: every document is in the eval partition");
  LabelArray labels(std::move(assignments), std::move(mask));
  auto masked = labels.masked_indices();
  return {std::move(labels), std::move(masked)};
}

std::string encode_labels(const LabelArray& labels) {
  json names = json::array();
  json mask = json::array();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto& a = labels.assignment(i);
    names.push_back(a ? json(std::string(role_name(*a))) : json(nullptr));
    mask.push_back(labels.masked(i));
  }
  json out = {{"format", "LABELS1"}, {"labels", std::move(names)}, {"mask", std::move(mask)}};
  return out.dump() + "\n";
}

LabelArray decode_labels(std::string_view json_text) {
  json obj;
  try {
    obj = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("labels: ") + e.what());
  }
  if (!obj.is_object() || !obj.contains("format") || obj["format"] != "LABELS1")
    throw FormatError("labels: expected an object with \"format\": \"LABELS1\"");
  if (!obj.contains("labels") || !obj.contains("mask")) throw FormatError("labels: missing 'labels' or 'mask'");
  const auto& names = obj["labels"];
  const auto& mask_json = obj["mask"];
  if (!names.is_array() || !mask_json.is_array()) throw FormatError("labels: 'labels' and 'mask' must be arrays");
  if (names.size() != mask_json.size()) throw FormatError("labels: 'labels' and 'mask' differ in length");
  std::vector<std::optional<RoleLabel>> assignments;
  std::vector<bool> mask;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i].is_null())
      assignments.emplace_back();
    else if (names[i].is_string())
      assignments.emplace_back(parse_role(names[i].get<std::string>()));
    else
      throw FormatError("labels: entry " + std::to_string(i) + " must be a string or null");
    if (!mask_json[i].is_boolean()) throw FormatError("labels: mask entry " + std::to_string(i) + " must be a boolean");
    mask.push_back(mask_json[i].get<bool>());
  }
  return LabelArray(std::move(assignments), std::move(mask));
}

void write_labels(const LabelArray& labels, const std::filesystem::path& path) {
  write_file(path, encode_labels(labels));
}

LabelArray read_labels(const std::filesystem::path& path) { return decode_labels(read_file(path)); }

// ---------------------------------------------------------------------------

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return std::move(ss).str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace rolegraph
