#include "rrg/labeler.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rrg/errors.hpp"

namespace rrg {

namespace {

// Keep in sync with data/lexicon.txt (a unit test enforces equality).
constexpr const char* kDefaultLexicon = R"lex(# Chest X-ray rule base: mention phrases per observation plus shared cue
# lists. Phrases are matched as contiguous token sequences inside a single
# sentence (lowercase, punctuation-free). Lines starting with "!" assert a
# direct negative finding, "?" a direct uncertain one; all other phrase
# lines are plain mentions whose polarity is decided by the cue rules.

[negation]
no
not
without
clear of
free of
negative for
absence of
absent
no evidence of
resolution of

[uncertainty]
may
might
possible
possibly
probable
probably
suspected
suspicious for
cannot exclude
could be
could represent
may represent
suggestive of
concerning for
questionable
borderline

[reset]
but
however

[disease] Enlarged Cardiomediastinum
enlarged cardiomediastinum
cardiomediastinal enlargement
widened mediastinum
mediastinal widening
widening of the mediastinum
! mediastinum is unremarkable
! mediastinal contour is normal
! mediastinal contours are normal
! cardiomediastinal silhouette is normal
! cardiomediastinal silhouette is within normal limits

[disease] Cardiomegaly
cardiomegaly
enlarged heart
heart is enlarged
cardiac enlargement
cardiac silhouette is enlarged
enlarged cardiac silhouette
heart size is enlarged
! heart is normal
! heart size is normal
! cardiac silhouette is normal
! normal heart size
! heart size within normal limits
! cardiac silhouette within normal limits

[disease] Lung Opacity
opacity
opacities
opacification
airspace disease
air space disease
infiltrate
infiltrates
! lungs are clear
! lungs are grossly clear

[disease] Lung Lesion
nodule
nodules
lung mass
pulmonary mass
nodular density
nodular densities
! lungs are clear

[disease] Edema
edema
vascular congestion
pulmonary congestion
! lungs are clear

[disease] Consolidation
consolidation
consolidations
consolidative changes
! lungs are clear

[disease] Pneumonia
pneumonia
infectious process
airspace infection
! lungs are clear

[disease] Atelectasis
atelectasis
atelectatic changes
volume loss
lobar collapse

[disease] Pneumothorax
pneumothorax
pneumothoraces

[disease] Pleural Effusion
pleural effusion
pleural effusions
effusion
effusions
pleural fluid

[disease] Pleural Other
pleural thickening
pleural scarring
pleural plaque
pleural plaques
fibrothorax

[disease] Fracture
fracture
fractures
! osseous structures are intact
! bony structures are intact

[disease] Support Devices
endotracheal tube
tracheostomy tube
chest tube
catheter
catheters
pacemaker
picc line
central line
sternotomy wires
surgical clips
support device
support devices
)lex";

std::string trim_copy(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

TokenSeq phrase_tokens(std::string_view phrase) {
  return tokenize(phrase, TokenizerConfig{});
}

// All start positions where `phrase` occurs as a contiguous run in `tokens`.
void find_matches(const TokenSeq& tokens, const TokenSeq& phrase,
                  std::vector<std::pair<std::size_t, std::size_t>>& out) {
  if (phrase.empty() || phrase.size() > tokens.size()) return;
  for (std::size_t i = 0; i + phrase.size() <= tokens.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < phrase.size(); ++k) {
      if (tokens[i + k] != phrase[k]) {
        hit = false;
        break;
      }
    }
    if (hit) out.emplace_back(i, i + phrase.size());
  }
}

// True when some cue ends at or before `pos` with no reset cue in between.
bool cue_governs(const TokenSeq& tokens, const std::vector<TokenSeq>& cues,
                 const std::vector<std::string>& resets, std::size_t pos) {
  std::vector<std::pair<std::size_t, std::size_t>> hits;
  for (const TokenSeq& cue : cues) find_matches(tokens, cue, hits);
  for (const auto& [begin, end] : hits) {
    if (end > pos) continue;
    bool blocked = false;
    for (std::size_t i = end; i < pos && !blocked; ++i)
      for (const std::string& reset : resets)
        if (tokens[i] == reset) {
          blocked = true;
          break;
        }
    if (!blocked) return true;
  }
  return false;
}

DiseaseLabel stronger(DiseaseLabel a, DiseaseLabel b) {
  auto rank = [](DiseaseLabel l) {
    switch (l) {
      case DiseaseLabel::Positive: return 3;
      case DiseaseLabel::Uncertain: return 2;
      case DiseaseLabel::Negative: return 1;
      case DiseaseLabel::NotMentioned: return 0;
    }
    return 0;
  };
  return rank(a) >= rank(b) ? a : b;
}

TokenSeq lowercase_tokens(const TokenSeq& tokens) {
  TokenSeq out = tokens;
  for (std::string& t : out)
    for (char& c : t) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

}  // namespace

std::string_view to_string(DiseaseLabel l) {
  switch (l) {
    case DiseaseLabel::Positive: return "positive";
    case DiseaseLabel::Negative: return "negative";
    case DiseaseLabel::Uncertain: return "uncertain";
    case DiseaseLabel::NotMentioned: return "not_mentioned";
  }
  return "not_mentioned";
}

DiseaseLabel disease_label_from_string(std::string_view s) {
  if (s == "positive") return DiseaseLabel::Positive;
  if (s == "negative") return DiseaseLabel::Negative;
  if (s == "uncertain") return DiseaseLabel::Uncertain;
  if (s == "not_mentioned") return DiseaseLabel::NotMentioned;
  throw Error("unknown disease label \"" + std::string(s) + "\"");
}

std::optional<std::size_t> disease_index(std::string_view name) {
  for (std::size_t i = 0; i < kNumDiseases; ++i)
    if (kDiseases[i] == name) return i;
  return std::nullopt;
}

Lexicon parse_lexicon(std::string_view text) {
  Lexicon lex;
  enum class Section { None, Negation, Uncertainty, Reset, Disease };
  Section section = Section::None;
  std::size_t disease = 0;
  std::size_t lineno = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim_copy(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line[0] == '[') {
      std::size_t close = line.find(']');
      if (close == std::string::npos)
        throw BadLexiconFile("line " + std::to_string(lineno) + ": unterminated section");
      std::string head = trim_copy(line.substr(1, close - 1));
      std::string rest = trim_copy(line.substr(close + 1));
      if (head == "negation") section = Section::Negation;
      else if (head == "uncertainty") section = Section::Uncertainty;
      else if (head == "reset") section = Section::Reset;
      else if (head == "disease") {
        auto idx = disease_index(rest);
        if (!idx)
          throw BadLexiconFile("line " + std::to_string(lineno) +
                               ": unknown disease \"" + rest + "\"");
        if (*idx == kNoFindingIndex)
          throw BadLexiconFile("line " + std::to_string(lineno) +
                               ": \"No Finding\" is derived, it takes no rules");
        section = Section::Disease;
        disease = *idx;
      } else {
        throw BadLexiconFile("line " + std::to_string(lineno) +
                             ": unknown section \"" + head + "\"");
      }
      continue;
    }

    char marker = 0;
    if (line[0] == '!' || line[0] == '?') {
      marker = line[0];
      line = trim_copy(line.substr(1));
    }
    TokenSeq phrase = phrase_tokens(line);
    if (phrase.empty())
      throw BadLexiconFile("line " + std::to_string(lineno) + ": empty phrase");
    switch (section) {
      case Section::Negation: lex.negation_cues.push_back(std::move(phrase)); break;
      case Section::Uncertainty: lex.uncertainty_cues.push_back(std::move(phrase)); break;
      case Section::Reset:
        if (phrase.size() != 1)
          throw BadLexiconFile("line " + std::to_string(lineno) +
                               ": reset cues are single tokens");
        lex.reset_cues.push_back(phrase[0]);
        break;
      case Section::Disease: {
        auto& rules = lex.diseases[disease];
        if (marker == '!') rules.negative_patterns.push_back(std::move(phrase));
        else if (marker == '?') rules.uncertain_patterns.push_back(std::move(phrase));
        else rules.mention_phrases.push_back(std::move(phrase));
        break;
      }
      case Section::None:
        throw BadLexiconFile("line " + std::to_string(lineno) +
                             ": phrase outside any section");
    }
  }

  bool any = false;
  for (const auto& rules : lex.diseases)
    any = any || !rules.mention_phrases.empty() || !rules.negative_patterns.empty() ||
          !rules.uncertain_patterns.empty();
  if (!any) throw EmptyLexicon("lexicon defines no disease rules");

  // Negation and uncertainty cue lists must not overlap.
  for (const TokenSeq& n : lex.negation_cues)
    for (const TokenSeq& u : lex.uncertainty_cues)
      if (n == u)
        throw BadLexiconFile("cue \"" + join_tokens(n) +
                             "\" appears in both negation and uncertainty lists");
  return lex;
}

Lexicon load_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UnreadableFile("cannot open lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str());
}

const Lexicon& default_lexicon() {
  static const Lexicon lex = parse_lexicon(kDefaultLexicon);
  return lex;
}

std::array<DiseaseLabel, kNumDiseases> label_sentence(const TokenSeq& sentence,
                                                      const Lexicon& lexicon) {
  std::array<DiseaseLabel, kNumDiseases> out;
  out.fill(DiseaseLabel::NotMentioned);
  TokenSeq tokens = lowercase_tokens(sentence);

  for (std::size_t d = 1; d < kNumDiseases; ++d) {
    const auto& rules = lexicon.diseases[d];
    std::vector<std::pair<std::size_t, std::size_t>> hits;

    for (const TokenSeq& phrase : rules.mention_phrases) {
      hits.clear();
      find_matches(tokens, phrase, hits);
      for (const auto& [begin, end] : hits) {
        DiseaseLabel label = DiseaseLabel::Positive;
        if (cue_governs(tokens, lexicon.negation_cues, lexicon.reset_cues, begin))
          label = DiseaseLabel::Negative;
        else if (cue_governs(tokens, lexicon.uncertainty_cues, lexicon.reset_cues, begin))
          label = DiseaseLabel::Uncertain;
        out[d] = stronger(out[d], label);
      }
    }
    for (const TokenSeq& pattern : rules.negative_patterns) {
      hits.clear();
      find_matches(tokens, pattern, hits);
      if (!hits.empty()) out[d] = stronger(out[d], DiseaseLabel::Negative);
    }
    for (const TokenSeq& pattern : rules.uncertain_patterns) {
      hits.clear();
      find_matches(tokens, pattern, hits);
      if (!hits.empty()) out[d] = stronger(out[d], DiseaseLabel::Uncertain);
    }
  }
  return out;
}

LabelVector label_report(const Report& report, const Lexicon& lexicon) {
  bool any = false;
  for (const auto& rules : lexicon.diseases)
    any = any || !rules.mention_phrases.empty() || !rules.negative_patterns.empty() ||
          !rules.uncertain_patterns.empty();
  if (!any) throw EmptyLexicon("lexicon has no rules");

  LabelVector v;
  for (const TokenSeq& sentence : report.sentences) {
    auto labels = label_sentence(sentence, lexicon);
    for (std::size_t d = 1; d < kNumDiseases; ++d)
      v.labels[d] = stronger(v.labels[d], labels[d]);
  }
  bool abnormal = false;
  for (std::size_t d = 1; d < kNumDiseases; ++d)
    abnormal = abnormal || v.labels[d] == DiseaseLabel::Positive ||
               v.labels[d] == DiseaseLabel::Uncertain;
  v.labels[kNoFindingIndex] =
      abnormal ? DiseaseLabel::Negative : DiseaseLabel::Positive;
  return v;
}

bool sentence_is_normal(const TokenSeq& sentence, const Lexicon& lexicon) {
  auto labels = label_sentence(sentence, lexicon);
  for (std::size_t d = 1; d < kNumDiseases; ++d)
    if (labels[d] == DiseaseLabel::Positive || labels[d] == DiseaseLabel::Uncertain)
      return false;
  return true;
}

double normal_sentence_fraction(const Corpus& corpus, const Lexicon& lexicon) {
  std::int64_t total = 0, normal = 0;
  for (const auto& [id, report] : corpus.reports) {
    for (const TokenSeq& sentence : report.sentences) {
      ++total;
      if (sentence_is_normal(sentence, lexicon)) ++normal;
    }
  }
  if (total == 0) throw EmptyCorpus("corpus contains no sentences");
  return static_cast<double>(normal) / static_cast<double>(total);
}

BinaryVector binarize(const LabelVector& v, UncertainPolicy policy) {
  BinaryVector out{};
  for (std::size_t d = 0; d < kNumDiseases; ++d) {
    switch (v.labels[d]) {
      case DiseaseLabel::Positive: out[d] = 1; break;
      case DiseaseLabel::Uncertain:
        out[d] = policy == UncertainPolicy::UncertainAsPositive ? 1 : 0;
        break;
      default: out[d] = 0; break;
    }
  }
  return out;
}

namespace {

void check_label_lists(std::size_t pred, std::size_t gold) {
  if (pred == 0 || gold == 0) throw EmptyInput("label lists must be non-empty");
  if (pred != gold)
    throw LengthMismatch(std::to_string(pred) + " predictions vs " +
                         std::to_string(gold) + " gold vectors");
}

}  // namespace

std::array<double, kNumDiseases> accuracy_per_disease(
    const std::vector<BinaryVector>& pred, const std::vector<BinaryVector>& gold) {
  check_label_lists(pred.size(), gold.size());
  std::array<double, kNumDiseases> acc{};
  for (std::size_t d = 0; d < kNumDiseases; ++d) {
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
      correct += pred[i][d] == gold[i][d] ? 1 : 0;
    acc[d] = static_cast<double>(correct) / static_cast<double>(pred.size());
  }
  return acc;
}

double accuracy_macro(const std::vector<BinaryVector>& pred,
                      const std::vector<BinaryVector>& gold) {
  auto acc = accuracy_per_disease(pred, gold);
  double sum = 0.0;
  for (double a : acc) sum += a;
  return sum / static_cast<double>(kNumDiseases);
}

AucReport auc_macro(const std::vector<ScoreVector>& scores,
                    const std::vector<BinaryVector>& gold) {
  check_label_lists(scores.size(), gold.size());
  AucReport report;
  double sum = 0.0;
  std::size_t included = 0;

  for (std::size_t d = 0; d < kNumDiseases; ++d) {
    std::vector<std::pair<double, int>> column;
    column.reserve(scores.size());
    std::int64_t positives = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      column.emplace_back(scores[i][d], gold[i][d]);
      positives += gold[i][d] ? 1 : 0;
    }
    std::int64_t negatives = static_cast<std::int64_t>(column.size()) - positives;
    if (positives == 0 || negatives == 0) {
      report.warnings.push_back(std::string(kDiseases[d]) +
                                ": single-class gold column, excluded from macro AUC");
      continue;
    }
    // Midrank form of the Mann-Whitney statistic (ties contribute 1/2).
    std::sort(column.begin(), column.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double pos_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < column.size()) {
      std::size_t j = i;
      while (j < column.size() && column[j].first == column[i].first) ++j;
      double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
      for (std::size_t k = i; k < j; ++k)
        if (column[k].second) pos_rank_sum += midrank;
      i = j;
    }
    double p = static_cast<double>(positives), n = static_cast<double>(negatives);
    double auc = (pos_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
    report.per_disease[d] = auc;
    sum += auc;
    ++included;
  }

  if (included == 0)
    throw AllDiseasesDegenerate("every disease has a single-class gold column");
  report.macro = sum / static_cast<double>(included);
  return report;
}

}  // namespace rrg
