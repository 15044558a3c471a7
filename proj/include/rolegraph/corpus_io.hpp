#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rolegraph {

// Rhetorical roles of sentences in court judgments. Codes follow the order
// in which the categories are usually listed and are part of every on-disk
// format, so never reorder.
enum class RoleLabel : std::uint8_t {
  PREAMBLE = 0,
  FAC,
  RLC,
  ISSUE,
  ARG_PETITIONER,
  ARG_RESPONDENT,
  ANALYSIS,
  STA,
  PRE_RELIED,
  PRE_NOT_RELIED,
  RATIO,
  RPC,
  NONE,
};

inline constexpr std::size_t kNumRoles = 13;

std::string_view role_name(RoleLabel label);
int role_code(RoleLabel label);
RoleLabel role_from_code(int code);
// Case-insensitive, so "Ratio" and "None" parse. Throws TaxonomyError.
RoleLabel parse_role(std::string_view name);
const std::array<RoleLabel, kNumRoles>& all_roles();

struct SentenceRecord {
  std::string doc_id;
  std::size_t sent_index = 0;
  std::string text;
  std::optional<RoleLabel> label;
};

// Reads line-delimited JSON records. Global sentence index is the 0-based
// line number. Validates that (doc_id, sent_index) is unique and that each
// document's indices form 0..m-1.
std::vector<SentenceRecord> read_corpus(const std::filesystem::path& path);
std::vector<SentenceRecord> parse_corpus(std::string_view content);
void validate_corpus(const std::vector<SentenceRecord>& records);

// Dense row-major matrix of 32-bit sentence embeddings. Always non-empty and
// finite.
class EmbeddingMatrix {
 public:
  EmbeddingMatrix(std::size_t rows, std::size_t dims, std::vector<float> data);

  std::size_t rows() const { return rows_; }
  std::size_t dims() const { return dims_; }
  std::span<const float> row(std::size_t i) const {
    return {data_.data() + i * dims_, dims_};
  }
  std::span<const float> data() const { return data_; }

  // Widened copy for the numeric modules.
  Eigen::MatrixXd to_dense() const;

  friend bool operator==(const EmbeddingMatrix&, const EmbeddingMatrix&) = default;

 private:
  std::size_t rows_;
  std::size_t dims_;
  std::vector<float> data_;
};

// EMB1: "EMB1", rows u32 LE, dims u32 LE, rows*dims f32 LE row-major.
std::string encode_embeddings(const EmbeddingMatrix& m);
EmbeddingMatrix decode_embeddings(std::string_view bytes);
void write_embeddings(const EmbeddingMatrix& m, const std::filesystem::path& path);
EmbeddingMatrix read_embeddings(const std::filesystem::path& path);

enum class Split { Train, Eval };

using PartitionSpec = std::map<std::string, Split, std::less<>>;

// JSON object mapping doc_id to "train" or "eval".
PartitionSpec parse_partition(std::string_view json_text);
PartitionSpec read_partition(const std::filesystem::path& path);

// Per-sentence labels plus a mask of hidden (to-be-predicted) sentences.
// A masked sentence may still carry its gold label; it is simply excluded
// from the supervision matrix.
class LabelArray {
 public:
  LabelArray(std::vector<std::optional<RoleLabel>> assignments, std::vector<bool> mask);

  std::size_t size() const { return assignments_.size(); }
  std::size_t num_classes() const { return kNumRoles; }
  const std::optional<RoleLabel>& assignment(std::size_t i) const { return assignments_[i]; }
  bool masked(std::size_t i) const { return mask_[i]; }
  std::vector<std::size_t> masked_indices() const;
  std::vector<std::size_t> unmasked_indices() const;

  // n x 13; one-hot rows for unmasked sentences, zero rows for masked ones.
  Eigen::MatrixXd onehot() const;

 private:
  std::vector<std::optional<RoleLabel>> assignments_;
  std::vector<bool> mask_;
};

struct MaskedSplit {
  LabelArray labels;
  std::vector<std::size_t> masked;
};

// Eval-partition sentences are masked; train-partition sentences must be
// labeled.
MaskedSplit split_mask(const std::vector<SentenceRecord>& records, const PartitionSpec& partition);

// LABELS1 JSON: {"format":"LABELS1","labels":[name|null,...],"mask":[bool,...]}
std::string encode_labels(const LabelArray& labels);
LabelArray decode_labels(std::string_view json_text);
void write_labels(const LabelArray& labels, const std::filesystem::path& path);
LabelArray read_labels(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace rolegraph
