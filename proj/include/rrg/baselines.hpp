#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "rrg/corpus.hpp"
#include "rrg/labeler.hpp"

namespace rrg {

// One generated report per Test study. Regeneration from the same corpus,
// seed and parameters is byte-identical.
struct GeneratedSet {
  std::string system_name;
  std::map<std::string, std::string> outputs;  // study_id -> report text
  std::uint64_t seed = 0;
  std::map<std::string, std::string> provenance;  // generator parameters
};

// Image stand-in for the nearest-neighbor baseline.
struct FeatureVector {
  std::string study_id;
  std::vector<double> values;
};

using FeatureMap = std::map<std::string, std::vector<double>>;

struct GrayImage {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;  // row-major intensities in [0, 1]

  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

// Stock constant report built from the most common no-finding sentences.
inline constexpr const char* kDefaultConstantReport =
    "The cardiac silhouette is normal in size and configuration. "
    "The lungs are clear. No pneumothorax or pleural effusion.";

// Picks one Train report per Test study, uniformly, from a per-study stream
// derived from (seed, study_id).
GeneratedSet gen_random(const Corpus& corpus, std::uint64_t seed);

// Emits the same text for every Test study.
GeneratedSet gen_constant(const Corpus& corpus,
                          const std::string& report_text = kDefaultConstantReport);

// The k most frequent normal Train sentences (ties lexicographic), joined in
// frequency order with periods, e.g. "lungs are clear. heart is normal."
std::string build_constant_from_corpus(const Corpus& corpus, const Lexicon& lexicon,
                                       int k);

// Emits the report of the Train study with the smallest Euclidean feature
// distance; ties go to the lexicographically smallest study_id.
GeneratedSet gen_nearest_neighbor(const Corpus& corpus, const FeatureMap& features);

// The n most frequent Train sentences, shuffled per study, period-joined.
GeneratedSet gen_top_sentences(const Corpus& corpus, int n, std::uint64_t seed);

// The n most frequent Train words, shuffled per study, space-joined.
GeneratedSet gen_top_words(const Corpus& corpus, int n, std::uint64_t seed);

// Average-pools to side x side, flattens row-major, L2-normalizes. An
// all-zero image maps to the zero vector.
FeatureVector extract_features(const GrayImage& image, int side = 32);

// CSV with header "study_id,v0,...,v{d-1}"; the header fixes the dimension.
FeatureMap load_features_csv(const std::filesystem::path& path);
void save_features_csv(const std::filesystem::path& path, const FeatureMap& features);

}  // namespace rrg
