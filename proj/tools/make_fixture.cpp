// Writes the bundled synthetic fixture: three judgments of twenty sentences
// each, covering all 13 roles, with 16-dimensional embeddings drawn around one
// centroid per role. Output is fully determined by the seed.
//
//   rolegraph_make_fixture <outdir> [seed]

#include "rolegraph/corpus_io.hpp"

#include <json.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <random>
#include <string>
#include <vector>

namespace {

constexpr std::size_t kDocs = 3;
constexpr std::size_t kSentencesPerDoc = 20;
constexpr std::size_t kDims = 16;
constexpr double kNoise = 0.3;
constexpr double kDocShift = 0.05;

// Fixed mapping from generator output so the fixture does not depend on the
// standard library's distribution implementations.
class Gaussian {
 public:
  explicit Gaussian(std::uint64_t seed) : rng_(seed) {}

  double uniform() { return (static_cast<double>(rng_() >> 11) + 0.5) * 0x1.0p-53; }

  double next() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

 private:
  std::mt19937_64 rng_;
};

const std::array<std::array<const char*, 2>, rolegraph::kNumRoles> kTemplates = {{
    {"In the Supreme Court of the land, civil appellate jurisdiction, case {d}.",
     "Before the bench of the court, judgment delivered in the matter of {d}."},
    {"The appellant was employed at the mill when the dispute in {d} arose.",
     "On the night of the incident the respondent entered the premises."},
    {"The High Court had dismissed the writ petition filed in {d}.",
     "The trial court convicted the accused and the sentence was confirmed on appeal."},
    {"The question for consideration is whether the notice was valid.",
     "The issue before us is whether the statute applies to {d}."},
    {"Counsel for the appellant argued that the order was without jurisdiction.",
     "It was contended on behalf of the petitioner that the evidence was unreliable."},
    {"The respondent submitted that the appeal was barred by limitation.",
     "Learned counsel for the State argued that the findings were correct."},
    {"We have carefully examined the evidence on record in {d}.",
     "The testimony of the witnesses is consistent with the documents produced."},
    {"Section 302 of the Penal Code provides the punishment for murder.",
     "Article 14 of the Constitution guarantees equality before the law."},
    {"This Court in an earlier decision held that such notice is mandatory, and we agree.",
     "The principle laid down in the earlier ruling squarely applies to {d}."},
    {"The decision cited by the respondent is distinguishable on its facts.",
     "The judgment relied upon by counsel does not apply to the present case."},
    {"Since the notice was not served, the proceedings stand vitiated.",
     "Therefore the conviction cannot be sustained on this evidence."},
    {"The appeal is allowed and the order of the High Court is set aside.",
     "Appeal dismissed with costs in {d}."},
    {"Heard counsel for the parties.",
     "List the matter after two weeks."},
}};

std::string render(const char* tmpl, const std::string& doc) {
  std::string s = tmpl;
  if (auto at = s.find("{d}"); at != std::string::npos) s.replace(at, 3, doc);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2 || argc > 3) {
    std::cerr << "usage: rolegraph_make_fixture <outdir> [seed]\n";
    return 1;
  }
  const std::filesystem::path outdir = argv[1];
  const std::uint64_t seed = argc == 3 ? std::stoull(argv[2]) : 20230601ULL;
  std::filesystem::create_directories(outdir);
  Gaussian gauss(seed);

  std::array<std::array<double, kDims>, rolegraph::kNumRoles> centroids{};
  for (auto& c : centroids) {
    double norm = 0.0;
    for (auto& v : c) {
      v = gauss.next();
      norm += v * v;
    }
    for (auto& v : c) v /= std::sqrt(norm);
  }

  std::string corpus;
  std::vector<float> emb;
  nlohmann::ordered_json partition = nlohmann::ordered_json::object();
  for (std::size_t d = 0; d < kDocs; ++d) {
    const std::string doc = "judgment-" + std::to_string(d + 1);
    partition[doc] = d + 1 < kDocs ? "train" : "eval";
    std::array<double, kDims> shift{};
    for (auto& v : shift) v = kDocShift * gauss.next();
    for (std::size_t s = 0; s < kSentencesPerDoc; ++s) {
      const std::size_t code = s * rolegraph::kNumRoles / kSentencesPerDoc;
      const auto label = rolegraph::role_from_code(static_cast<int>(code));
      const char* tmpl = kTemplates[code][(s + d) % 2];
      nlohmann::ordered_json rec = {{"doc_id", doc},
                                    {"sent_index", s},
                                    {"text", render(tmpl, doc)},
                                    {"label", std::string(rolegraph::role_name(label))}};
      corpus += rec.dump() + "\n";
      for (std::size_t k = 0; k < kDims; ++k)
        emb.push_back(static_cast<float>(centroids[code][k] + shift[k] + kNoise * gauss.next()));
    }
  }

  rolegraph::write_file(outdir / "corpus.jsonl", corpus);
  rolegraph::write_file(outdir / "partition.json", partition.dump(2) + "\n");
  rolegraph::write_embeddings(rolegraph::EmbeddingMatrix(kDocs * kSentencesPerDoc, kDims, std::move(emb)),
                              outdir / "embeddings.emb");
  std::cout << "wrote " << kDocs * kSentencesPerDoc << " sentences to " << outdir.string() << "\n";
  return 0;
}
