#include "rolegraph/context_window.hpp"

#include "rolegraph/error.hpp"

#include <json.hpp>

#include <cctype>
#include <unordered_set>

namespace rolegraph {

extern const std::string_view kEnglishStopwords;

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

std::string match_form(std::string_view token) {
  std::size_t b = 0;
  std::size_t e = token.size();
  while (b < e && is_punct(token[b])) ++b;
  while (e > b && is_punct(token[e - 1])) --e;
  std::string out(token.substr(b, e - b));
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

StopwordList::StopwordList(std::set<std::string, std::less<>> words) : words_(std::move(words)) {
  if (words_.empty()) throw FormatError("stopword list is empty");
  for (const auto& w : words_) {
    if (w.empty()) throw FormatError("stopword list contains an empty entry");
    for (char c : w) {
      if (is_space(c)) throw FormatError("stopword '" + w + "' contains whitespace");
      if (std::isupper(static_cast<unsigned char>(c))) throw FormatError("stopword '" + w + "' is not lowercase");
    }
  }
}

StopwordList StopwordList::parse(std::string_view text) {
  std::set<std::string, std::less<>> words;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    while (!line.empty() && is_space(line.front())) line.remove_prefix(1);
    while (!line.empty() && is_space(line.back())) line.remove_suffix(1);
    if (line.empty() || line.front() == '#') continue;
    words.emplace(line);
  }
  return StopwordList(std::move(words));
}

StopwordList StopwordList::english() { return parse(kEnglishStopwords); }

StopwordList StopwordList::load(const std::filesystem::path& path) { return parse(read_file(path)); }

std::string strip_stopwords(std::string_view text, const StopwordList& stopwords) {
  std::string out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && is_space(text[pos])) ++pos;
    const std::size_t start = pos;
    while (pos < text.size() && !is_space(text[pos])) ++pos;
    if (start == pos) break;
    const std::string_view token = text.substr(start, pos - start);
    if (stopwords.contains(match_form(token))) continue;
    if (!out.empty()) out += ' ';
    out += token;
  }
  return out;
}

ContextWindow build_window(std::span<const std::string> doc, std::size_t i, std::string_view pad,
                           std::string_view separator) {
  if (i >= doc.size())
    throw DimensionError("window target " + std::to_string(i) + " out of range for a document of " +
                         std::to_string(doc.size()) + " sentences");
  ContextWindow w;
  w.target_index = i;
  for (std::size_t s = 0; s < kWindowSlots; ++s) {
    // Slot s holds doc[i + s - 2] when that position exists.
    const bool inside = i + s >= 2 && i + s - 2 < doc.size();
    w.slots[s] = inside ? doc[i + s - 2] : std::string(pad);
  }
  const std::string joint = " " + std::string(separator) + " ";
  w.rendered = w.slots[0];
  for (std::size_t s = 1; s < kWindowSlots; ++s) w.rendered += joint + w.slots[s];
  return w;
}

void windowize_corpus(std::span<const SentenceRecord> records, const StopwordList& stopwords,
                      const WindowOptions& options, const std::function<void(const WindowedInput&)>& sink) {
  std::unordered_set<std::string_view> finished;
  std::size_t begin = 0;
  while (begin < records.size()) {
    const std::string& doc_id = records[begin].doc_id;
    if (finished.contains(doc_id))
      throw CorpusError("document '" + doc_id + "' appears in more than one block; group records by document");
    std::size_t end = begin;
    std::vector<std::string> sentences;
    while (end < records.size() && records[end].doc_id == doc_id) {
      if (records[end].sent_index != end - begin)
        throw CorpusError("document '" + doc_id + "' is not ordered by sent_index at record " + std::to_string(end));
      sentences.push_back(options.clean ? strip_stopwords(records[end].text, stopwords) : records[end].text);
      ++end;
    }
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      ContextWindow w = build_window(sentences, i, options.pad, options.separator);
      sink(WindowedInput{doc_id, i, std::move(w.rendered)});
    }
    finished.insert(doc_id);
    begin = end;
  }
}

std::vector<WindowedInput> windowize_corpus(std::span<const SentenceRecord> records, const StopwordList& stopwords,
                                            const WindowOptions& options) {
  std::vector<WindowedInput> out;
  out.reserve(records.size());
  windowize_corpus(records, stopwords, options, [&](const WindowedInput& w) { out.push_back(w); });
  return out;
}

std::string encode_windowed(const WindowedInput& w) {
  const nlohmann::ordered_json obj = {{"doc_id", w.doc_id}, {"sent_index", w.sent_index}, {"input", w.input}};
  return obj.dump() + "\n";
}

}  // namespace rolegraph
