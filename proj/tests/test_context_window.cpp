#include "rolegraph/context_window.hpp"
#include "rolegraph/error.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>

using namespace rolegraph;
using namespace rolegraph::testing;

namespace {

std::size_t count_occurrences(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (std::size_t at = s.find(needle); at != std::string::npos; at = s.find(needle, at + needle.size())) ++n;
  return n;
}

std::size_t pad_slots(const ContextWindow& w, std::string_view pad) {
  return static_cast<std::size_t>(std::count(w.slots.begin(), w.slots.end(), std::string(pad)));
}

std::vector<SentenceRecord> random_corpus(Rng& rng, std::size_t docs) {
  static const char* words[] = {"the", "court", "held", "a", "appeal", "is", "dismissed", "an", "order", "of"};
  std::vector<SentenceRecord> out;
  for (std::size_t d = 0; d < docs; ++d) {
    const std::size_t len = rng.index(1, 9);
    for (std::size_t s = 0; s < len; ++s) {
      std::string text;
      const std::size_t words_in = rng.index(0, 6);
      for (std::size_t w = 0; w < words_in; ++w) text += std::string(w ? " " : "") + words[rng.index(0, 9)];
      out.push_back({"doc" + std::to_string(d), s, text, std::nullopt});
    }
  }
  return out;
}

}  // namespace

TEST_SUITE("context_window") {

TEST_CASE("strip_stopwords examples") {
  const auto sw = StopwordList::english();
  CHECK(strip_stopwords("The court dismissed the appeal", sw) == "court dismissed appeal");
  CHECK(strip_stopwords("a an the", sw) == "");
  CHECK(strip_stopwords("Court held: the order stands.", sw) == "Court held: order stands.");
  CHECK(strip_stopwords("  spaced\tapart \n words  ", sw) == "spaced apart words");
  CHECK(strip_stopwords("(The) \"an\" court", sw) == "court");
  CHECK(strip_stopwords("", sw) == "");
  CHECK(strip_stopwords("Don't stop", sw) == "stop");
}

TEST_CASE("bundled stopword list") {
  const auto sw = StopwordList::english();
  CHECK(sw.size() == 179);
  for (const char* w : {"a", "an", "the", "of", "wouldn't"}) CHECK(sw.contains(w));
  CHECK_FALSE(sw.contains("court"));
}

TEST_CASE("stopword list validation") {
  CHECK_THROWS_AS(StopwordList::parse("# only a comment\n\n"), FormatError);
  CHECK_THROWS_AS(StopwordList::parse("The\n"), FormatError);
  CHECK_THROWS_AS(StopwordList({"two words"}), FormatError);
  const auto custom = StopwordList::parse("# legal\nhereby\n  whereas  \n");
  CHECK(custom.size() == 2);
  CHECK(strip_stopwords("It is hereby ordered, whereas.", custom) == "It is ordered,");
}

TEST_CASE("strip_stopwords is idempotent") {
  Rng rng(12);
  const auto sw = StopwordList::english();
  for (const auto& rec : random_corpus(rng, 30)) {
    const auto once = strip_stopwords(rec.text, sw);
    CHECK(strip_stopwords(once, sw) == once);
    CHECK((once.empty() || (once.front() != ' ' && once.back() != ' ')));
  }
}

TEST_CASE("build_window on a three-sentence document") {
  const std::vector<std::string> doc{"s0", "s1", "s2"};
  const auto w0 = build_window(doc, 0);
  CHECK(w0.slots == std::array<std::string, 5>{"<pad>", "<pad>", "s0", "s1", "s2"});
  CHECK(w0.rendered == "<pad> </s> <pad> </s> s0 </s> s1 </s> s2");
  const auto w1 = build_window(doc, 1);
  CHECK(w1.slots == std::array<std::string, 5>{"<pad>", "s0", "s1", "s2", "<pad>"});
  const auto w2 = build_window(doc, 2);
  CHECK(w2.slots == std::array<std::string, 5>{"s0", "s1", "s2", "<pad>", "<pad>"});
  CHECK(w2.rendered == "s0 </s> s1 </s> s2 </s> <pad> </s> <pad>");
}

TEST_CASE("build_window edge cases") {
  const std::vector<std::string> single{"only"};
  CHECK(build_window(single, 0).slots == std::array<std::string, 5>{"<pad>", "<pad>", "only", "<pad>", "<pad>"});
  const std::vector<std::string> five{"s0", "s1", "s2", "s3", "s4"};
  const auto mid = build_window(five, 2);
  CHECK(mid.slots == std::array<std::string, 5>{"s0", "s1", "s2", "s3", "s4"});
  CHECK(pad_slots(mid, "<pad>") == 0);
  CHECK_THROWS_AS(build_window(five, 5), DimensionError);
  CHECK_THROWS_AS(build_window(std::vector<std::string>{}, 0), DimensionError);
  const auto custom = build_window(single, 0, "[PAD]", "[SEP]");
  CHECK(custom.rendered == "[PAD] [SEP] [PAD] [SEP] only [SEP] [PAD] [SEP] [PAD]");
}

TEST_CASE("pad counts and separators follow the boundary formula") {
  for (std::size_t len = 1; len <= 8; ++len) {
    std::vector<std::string> doc;
    for (std::size_t i = 0; i < len; ++i) doc.push_back("s" + std::to_string(i));
    for (std::size_t i = 0; i < len; ++i) {
      const auto w = build_window(doc, i);
      const std::size_t before = i < 2 ? 2 - i : 0;
      const std::size_t after = len - 1 - i < 2 ? 2 - (len - 1 - i) : 0;
      CHECK(pad_slots(w, "<pad>") == before + after);
      CHECK(count_occurrences(w.rendered, "</s>") == 4);
      CHECK(w.slots[2] == doc[i]);
    }
  }
}

TEST_CASE("windowize_corpus preserves count and order") {
  Rng rng(13);
  const auto sw = StopwordList::english();
  for (int trial = 0; trial < 10; ++trial) {
    const auto corpus = random_corpus(rng, rng.index(0, 6));
    const auto windows = windowize_corpus(corpus, sw);
    REQUIRE(windows.size() == corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      CHECK(windows[i].doc_id == corpus[i].doc_id);
      CHECK(windows[i].sent_index == corpus[i].sent_index);
    }
  }
  CHECK(windowize_corpus(std::vector<SentenceRecord>{}, sw).empty());
}

TEST_CASE("windowize_corpus: all-stopword sentence keeps its slot") {
  const std::vector<SentenceRecord> recs{{"d", 0, "The appeal", {}}, {"d", 1, "a an the", {}}, {"d", 2, "Dismissed.", {}}};
  const auto w = windowize_corpus(recs, StopwordList::english());
  REQUIRE(w.size() == 3);
  CHECK(w[0].input == "<pad> </s> <pad> </s> appeal </s>  </s> Dismissed.");
  CHECK(w[1].input == "<pad> </s> appeal </s>  </s> Dismissed. </s> <pad>");
  WindowOptions raw;
  raw.clean = false;
  CHECK(windowize_corpus(recs, StopwordList::english(), raw)[1].input ==
        "<pad> </s> The appeal </s> a an the </s> Dismissed. </s> <pad>");
}

TEST_CASE("windows never cross documents and edits stay local") {
  Rng rng(14);
  const auto sw = StopwordList::english();
  WindowOptions opts;
  opts.clean = false;
  for (int trial = 0; trial < 10; ++trial) {
    const auto corpus = random_corpus(rng, 4);
    const auto base = windowize_corpus(corpus, sw, opts);
    const std::size_t j = rng.index(0, corpus.size() - 1);
    auto edited = corpus;
    edited[j].text = "EDITED";
    const auto after = windowize_corpus(edited, sw, opts);
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const bool same_doc = corpus[i].doc_id == corpus[j].doc_id;
      const auto dist = corpus[i].sent_index > corpus[j].sent_index ? corpus[i].sent_index - corpus[j].sent_index
                                                                    : corpus[j].sent_index - corpus[i].sent_index;
      if (!same_doc || dist > 2) CHECK(after[i].input == base[i].input);
      else CHECK(after[i].input != base[i].input);
    }
  }
}

TEST_CASE("windowize_corpus ordering errors") {
  const auto sw = StopwordList::english();
  const std::vector<SentenceRecord> swapped{{"d", 1, "b", {}}, {"d", 0, "a", {}}};
  CHECK_THROWS_AS(windowize_corpus(swapped, sw), CorpusError);
  const std::vector<SentenceRecord> split_doc{{"d", 0, "a", {}}, {"e", 0, "b", {}}, {"d", 1, "c", {}}};
  CHECK_THROWS_AS(windowize_corpus(split_doc, sw), CorpusError);
}

TEST_CASE("windowed JSONL line") {
  CHECK(encode_windowed({"d1", 3, "a </s> b"}) == R"({"doc_id":"d1","sent_index":3,"input":"a </s> b"})"
                                                  "\n");
}

}  // TEST_SUITE
