#pragma once

#include "rolegraph/corpus_io.hpp"

#include <array>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rolegraph {

// Lowercase word forms removed during cleaning.
class StopwordList {
 public:
  explicit StopwordList(std::set<std::string, std::less<>> words);

  // The bundled 179-word English list (data/stopwords/english.txt).
  static StopwordList english();
  // One word per line; blank lines and lines starting with '#' are skipped.
  static StopwordList parse(std::string_view text);
  static StopwordList load(const std::filesystem::path& path);

  bool contains(std::string_view lowercase_word) const { return words_.find(lowercase_word) != words_.end(); }
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string, std::less<>> words_;
};

// Whitespace tokenization; a token is dropped when its ASCII-lowercased form,
// with leading and trailing punctuation trimmed, is a stopword. Survivors are
// joined with single spaces.
std::string strip_stopwords(std::string_view text, const StopwordList& stopwords);

inline constexpr std::string_view kDefaultPad = "<pad>";
inline constexpr std::string_view kDefaultSeparator = "</s>";
inline constexpr std::size_t kWindowSlots = 5;

struct ContextWindow {
  std::string target_doc;
  std::size_t target_index = 0;
  // prev2, prev1, target, next1, next2
  std::array<std::string, kWindowSlots> slots;
  std::string rendered;
};

// Two sentences either side of doc[i], padded at document boundaries and
// joined as "s0 </s> s1 </s> ...". Throws DimensionError if i is out of
// range.
ContextWindow build_window(std::span<const std::string> doc, std::size_t i, std::string_view pad = kDefaultPad,
                           std::string_view separator = kDefaultSeparator);

struct WindowOptions {
  std::string pad = std::string(kDefaultPad);
  std::string separator = std::string(kDefaultSeparator);
  // Strip stopwords before windowing.
  bool clean = true;
};

struct WindowedInput {
  std::string doc_id;
  std::size_t sent_index = 0;
  std::string input;
};

// Records must be grouped by document with sent_index running 0, 1, 2, ...
// inside each group; anything else is a CorpusError. Calls `sink` once per
// sentence in input order.
void windowize_corpus(std::span<const SentenceRecord> records, const StopwordList& stopwords,
                      const WindowOptions& options, const std::function<void(const WindowedInput&)>& sink);

std::vector<WindowedInput> windowize_corpus(std::span<const SentenceRecord> records, const StopwordList& stopwords,
                                            const WindowOptions& options = {});

// {"doc_id","sent_index","input"} per line.
std::string encode_windowed(const WindowedInput& w);

}  // namespace rolegraph
