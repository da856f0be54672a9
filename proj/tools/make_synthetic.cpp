// Generates the bundled synthetic chest X-ray corpus: a seeded, quota-exact
// mix of normal and abnormal findings sentences, plus a feature file for the
// nearest-neighbor baseline. Regenerating with the same arguments is
// byte-identical.
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rrg/corpus.hpp"
#include "rrg/labeler.hpp"
#include "rrg/rand.hpp"

namespace {

struct Pooled {
  const char* text;
  int weight;
};

// Every entry must label as a normal sentence under the default lexicon;
// main() verifies that before writing anything.
const std::vector<Pooled> kNormalPool = {
    {"The lungs are clear", 30},
    {"No pneumothorax or pleural effusion", 25},
    {"The cardiac silhouette is normal in size and configuration", 20},
    {"Heart size is normal", 12},
    {"No acute cardiopulmonary abnormality", 12},
    {"The mediastinum is unremarkable", 8},
    {"Osseous structures are intact", 8},
    {"No focal consolidation", 7},
    {"No pleural effusion", 6},
    {"Lungs are well expanded without focal consolidation", 5},
    {"No evidence of pneumothorax", 5},
    {"The heart is normal", 5},
    {"No acute osseous abnormality", 4},
    {"Degenerative changes of the thoracic spine", 4},
    {"The trachea is midline", 3},
    {"Visualized bony structures are intact", 3},
};

// Every entry must yield at least one positive disease.
const std::vector<Pooled> kAbnormalPool = {
    {"There is a large pleural effusion", 10},
    {"The cardiac silhouette is enlarged", 10},
    {"There is a right lower lobe consolidation", 8},
    {"Patchy opacities in both lungs", 8},
    {"Diffuse pulmonary edema is present", 6},
    {"There is a left sided pneumothorax", 6},
    {"There is atelectasis at the left base", 6},
    {"There is cardiomegaly", 5},
    {"A calcified nodule is seen in the right upper lobe", 4},
    {"There is pleural thickening", 3},
    {"An endotracheal tube is in place", 3},
    {"Acute displaced fracture of the left seventh rib", 3},
};

std::size_t weighted_pick(const std::vector<Pooled>& pool, rrg::SplitMix64& rng) {
  std::int64_t total = 0;
  for (const Pooled& p : pool) total += p.weight;
  std::int64_t ticket = static_cast<std::int64_t>(rng.bounded(total));
  for (std::size_t i = 0; i < pool.size(); ++i) {
    ticket -= pool[i].weight;
    if (ticket < 0) return i;
  }
  return pool.size() - 1;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Write the bundled synthetic corpus and feature file"};
  std::string corpus_path = "data/synthetic_corpus.jsonl";
  std::string features_path = "data/synthetic_features.csv";
  int reports = 240;
  int train_reports = 140;
  double normal_frac = 0.76;
  std::uint64_t seed = 20200417;
  int feature_dim = 16;
  app.add_option("--corpus", corpus_path, "Output corpus jsonl path");
  app.add_option("--features", features_path, "Output features csv path");
  app.add_option("--reports", reports, "Total report count");
  app.add_option("--train", train_reports, "Train report count");
  app.add_option("--normal-frac", normal_frac, "Corpus-wide normal sentence fraction");
  app.add_option("--seed", seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);

  const rrg::Lexicon& lexicon = rrg::default_lexicon();
  for (const Pooled& p : kNormalPool) {
    if (!rrg::sentence_is_normal(rrg::tokenize(p.text, {}), lexicon)) {
      std::cerr << "normal pool sentence labels abnormal: " << p.text << "\n";
      return 1;
    }
  }
  for (const Pooled& p : kAbnormalPool) {
    if (rrg::sentence_is_normal(rrg::tokenize(p.text, {}), lexicon)) {
      std::cerr << "abnormal pool sentence labels normal: " << p.text << "\n";
      return 1;
    }
  }

  // Sentence counts per report first, so the abnormal quota can be spread
  // over the exact corpus-wide sentence total.
  rrg::SplitMix64 layout(seed);
  std::vector<int> sentence_counts(reports);
  std::size_t total_sentences = 0;
  for (int i = 0; i < reports; ++i) {
    sentence_counts[i] = 2 + static_cast<int>(layout.bounded(4));  // 2..5
    total_sentences += static_cast<std::size_t>(sentence_counts[i]);
  }
  const std::size_t abnormal_quota = static_cast<std::size_t>(
      std::llround((1.0 - normal_frac) * static_cast<double>(total_sentences)));

  std::vector<std::pair<int, int>> slots;  // (report, slot)
  slots.reserve(total_sentences);
  for (int i = 0; i < reports; ++i)
    for (int s = 0; s < sentence_counts[i]; ++s) slots.emplace_back(i, s);
  rrg::deterministic_shuffle(slots, layout);

  std::vector<std::vector<bool>> abnormal(reports);
  for (int i = 0; i < reports; ++i) abnormal[i].assign(sentence_counts[i], false);
  for (std::size_t k = 0; k < abnormal_quota; ++k)
    abnormal[slots[k].first][slots[k].second] = true;

  std::ofstream corpus_out(corpus_path);
  std::ofstream features_out(features_path);
  if (!corpus_out || !features_out) {
    std::cerr << "cannot open output files\n";
    return 1;
  }
  features_out << "study_id";
  for (int d = 0; d < feature_dim; ++d) features_out << ",v" << d;
  features_out << "\n";
  features_out.precision(17);

  for (int i = 0; i < reports; ++i) {
    bool is_train = i < train_reports;
    char id[32];
    std::snprintf(id, sizeof(id), "syn-%s-%04d", is_train ? "tr" : "te", i);
    rrg::SplitMix64 rng = rrg::study_stream(seed, id);

    std::string text;
    for (int s = 0; s < sentence_counts[i]; ++s) {
      const std::vector<Pooled>& pool = abnormal[i][s] ? kAbnormalPool : kNormalPool;
      if (!text.empty()) text.push_back(' ');
      text += pool[weighted_pick(pool, rng)].text;
      text.push_back('.');
    }
    corpus_out << "{\"study_id\": \"" << id << "\", \"split\": \""
               << (is_train ? "train" : "test") << "\", \"text\": \""
               << json_escape(text) << "\"}\n";

    double norm2 = 0.0;
    std::vector<double> feature(feature_dim);
    for (double& v : feature) {
      v = static_cast<double>(rng.bounded(2000)) / 1000.0 - 1.0;
      norm2 += v * v;
    }
    features_out << id;
    for (double v : feature) features_out << ',' << (norm2 > 0 ? v / std::sqrt(norm2) : 0.0);
    features_out << "\n";
  }

  std::cout << "wrote " << reports << " reports (" << train_reports << " train), "
            << total_sentences << " sentences, " << abnormal_quota
            << " abnormal by quota\n";
  return 0;
}
