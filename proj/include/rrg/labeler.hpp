#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rrg/corpus.hpp"

namespace rrg {

// The 14 observations, in the fixed order used by every LabelVector.
inline constexpr std::array<std::string_view, 14> kDiseases = {
    "No Finding",      "Enlarged Cardiomediastinum",
    "Cardiomegaly",    "Lung Opacity",
    "Lung Lesion",     "Edema",
    "Consolidation",   "Pneumonia",
    "Atelectasis",     "Pneumothorax",
    "Pleural Effusion", "Pleural Other",
    "Fracture",        "Support Devices"};

inline constexpr std::size_t kNumDiseases = kDiseases.size();
inline constexpr std::size_t kNoFindingIndex = 0;

enum class DiseaseLabel { Positive, Negative, Uncertain, NotMentioned };

std::string_view to_string(DiseaseLabel l);
DiseaseLabel disease_label_from_string(std::string_view s);
std::optional<std::size_t> disease_index(std::string_view name);

struct LabelVector {
  std::array<DiseaseLabel, kNumDiseases> labels{};  // order: kDiseases
  LabelVector() { labels.fill(DiseaseLabel::NotMentioned); }
};

// Sentence-scope rule base. Mention phrases are plain disease mentions whose
// polarity is decided by the cue rules; negative/uncertain patterns assert
// their polarity directly (e.g. "cardiac silhouette is normal" is a direct
// negative for Cardiomegaly — no cue precedes the mention there).
struct Lexicon {
  struct DiseaseRules {
    std::vector<TokenSeq> mention_phrases;
    std::vector<TokenSeq> negative_patterns;   // '!' lines in the file
    std::vector<TokenSeq> uncertain_patterns;  // '?' lines in the file
  };
  std::vector<TokenSeq> negation_cues;
  std::vector<TokenSeq> uncertainty_cues;
  std::vector<std::string> reset_cues;  // contrastive conjunctions, single tokens
  std::array<DiseaseRules, kNumDiseases> diseases;  // index 0 (No Finding) stays empty
};

// Built-in rule base (same content as the shipped lexicon data file).
const Lexicon& default_lexicon();

// Parses the lexicon file format:
//   [negation] / [uncertainty] / [reset]  — one cue per line
//   [disease] <canonical name>            — one phrase per line; optional
//       leading "!" (direct negative) or "?" (direct uncertain) marker.
// '#' starts a comment; blank lines are ignored. "No Finding" may not be
// given rules: it is derived from the other thirteen.
Lexicon parse_lexicon(std::string_view text);
Lexicon load_lexicon(const std::filesystem::path& path);

// Labels one sentence. A mention is Negative when a negation cue occurs
// earlier in the sentence with no reset cue between them, Uncertain when an
// uncertainty cue does (negation checked first), Positive otherwise. Direct
// patterns carry their own polarity. Scope never crosses the sentence.
std::array<DiseaseLabel, kNumDiseases> label_sentence(const TokenSeq& sentence,
                                                      const Lexicon& lexicon);

// Whole-report labels: per disease the strongest sentence-level result wins
// (Positive > Uncertain > Negative > NotMentioned). "No Finding" is Positive
// iff no other disease is Positive or Uncertain, Negative otherwise.
LabelVector label_report(const Report& report, const Lexicon& lexicon);

// True when the sentence mentions no disease positively or uncertainly
// ("No Finding" itself is ignored: it is positive exactly on such sentences).
bool sentence_is_normal(const TokenSeq& sentence, const Lexicon& lexicon);

// Fraction of sentences over the whole corpus (both splits) that are normal.
double normal_sentence_fraction(const Corpus& corpus, const Lexicon& lexicon);

enum class UncertainPolicy { UncertainAsPositive, UncertainAsNegative };

using BinaryVector = std::array<int, kNumDiseases>;
using ScoreVector = std::array<double, kNumDiseases>;

BinaryVector binarize(const LabelVector& v,
                      UncertainPolicy policy = UncertainPolicy::UncertainAsPositive);

// Per-disease accuracy over reports, then the unweighted mean of the 14.
double accuracy_macro(const std::vector<BinaryVector>& pred,
                      const std::vector<BinaryVector>& gold);
std::array<double, kNumDiseases> accuracy_per_disease(
    const std::vector<BinaryVector>& pred, const std::vector<BinaryVector>& gold);

struct AucReport {
  double macro = 0.0;
  // Diseases whose gold column is single-class are excluded from the macro
  // mean (no value here) and reported in warnings instead of being imputed.
  std::array<std::optional<double>, kNumDiseases> per_disease;
  std::vector<std::string> warnings;
};

// Mann-Whitney rank AUC per disease, ties counting one half.
AucReport auc_macro(const std::vector<ScoreVector>& scores,
                    const std::vector<BinaryVector>& gold);

}  // namespace rrg
