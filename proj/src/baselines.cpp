#include "rrg/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "rrg/errors.hpp"
#include "rrg/rand.hpp"

namespace rrg {

namespace {

std::vector<std::string> require_split(const Corpus& corpus, Split s) {
  std::vector<std::string> ids = corpus.ids(s);
  if (ids.empty())
    throw EmptySplit(std::string(to_string(s)) + " split is empty");
  return ids;
}

// Frequency-ranked entries, count descending then key ascending. The key
// order of the input map already gives the lexicographic tie-break.
std::vector<std::pair<std::string, std::int64_t>> ranked(
    const std::map<std::string, std::int64_t>& freq) {
  std::vector<std::pair<std::string, std::int64_t>> entries(freq.begin(), freq.end());
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return entries;
}

std::string join_sentences(const std::vector<std::string>& sentences) {
  std::string out;
  for (const std::string& s : sentences) {
    if (!out.empty()) out.push_back(' ');
    out += s;
    out.push_back('.');
  }
  return out;
}

}  // namespace

GeneratedSet gen_random(const Corpus& corpus, std::uint64_t seed) {
  std::vector<std::string> train = require_split(corpus, Split::Train);
  std::vector<std::string> test = require_split(corpus, Split::Test);

  GeneratedSet set;
  set.system_name = "Random";
  set.seed = seed;
  set.provenance["baseline"] = "random";
  set.provenance["seed"] = std::to_string(seed);
  for (const std::string& id : test) {
    SplitMix64 rng = study_stream(seed, id);
    const std::string& pick = train[rng.bounded(train.size())];
    set.outputs[id] = corpus.reports.at(pick).raw_text;
  }
  return set;
}

GeneratedSet gen_constant(const Corpus& corpus, const std::string& report_text) {
  if (report_text.empty()) throw EmptyReportText("constant report text is empty");
  std::vector<std::string> test = require_split(corpus, Split::Test);

  GeneratedSet set;
  set.system_name = "Constant";
  set.provenance["baseline"] = "constant";
  set.provenance["text"] = report_text;
  for (const std::string& id : test) set.outputs[id] = report_text;
  return set;
}

std::string build_constant_from_corpus(const Corpus& corpus, const Lexicon& lexicon,
                                       int k) {
  if (corpus.count(Split::Train) == 0) throw EmptySplit("train split is empty");
  if (k < 1) throw NotEnoughNormalSentences("k must be positive");

  std::vector<std::string> normal;
  for (const auto& [sentence, count] : ranked(corpus.sentence_freq)) {
    TokenSeq tokens = tokenize(sentence, corpus.tokenizer);
    if (sentence_is_normal(tokens, lexicon)) normal.push_back(sentence);
    if (static_cast<int>(normal.size()) == k) break;
  }
  if (static_cast<int>(normal.size()) < k)
    throw NotEnoughNormalSentences("only " + std::to_string(normal.size()) +
                                   " normal sentences, need " + std::to_string(k));
  return join_sentences(normal);
}

GeneratedSet gen_nearest_neighbor(const Corpus& corpus, const FeatureMap& features) {
  std::vector<std::string> train = require_split(corpus, Split::Train);
  std::vector<std::string> test = require_split(corpus, Split::Test);

  std::size_t dim = 0;
  auto feature_of = [&](const std::string& id) -> const std::vector<double>& {
    auto it = features.find(id);
    if (it == features.end()) throw MissingFeatures("no features for study \"" + id + "\"");
    if (dim == 0) dim = it->second.size();
    if (it->second.size() != dim)
      throw DimensionMismatch("study \"" + id + "\" has dimension " +
                              std::to_string(it->second.size()) + ", expected " +
                              std::to_string(dim));
    return it->second;
  };
  for (const std::string& id : train) feature_of(id);

  GeneratedSet set;
  set.system_name = "Nearest-neighbor";
  set.provenance["baseline"] = "nn";
  set.provenance["dimension"] = std::to_string(dim);
  for (const std::string& id : test) {
    const std::vector<double>& probe = feature_of(id);
    const std::string* best = &train.front();
    double best_dist = std::numeric_limits<double>::infinity();
    for (const std::string& candidate : train) {  // sorted: ties keep smallest id
      const std::vector<double>& f = features.at(candidate);
      double dist = 0.0;
      for (std::size_t i = 0; i < dim; ++i) {
        double d = probe[i] - f[i];
        dist += d * d;
      }
      if (dist < best_dist) {
        best_dist = dist;
        best = &candidate;
      }
    }
    set.outputs[id] = corpus.reports.at(*best).raw_text;
  }
  return set;
}

GeneratedSet gen_top_sentences(const Corpus& corpus, int n, std::uint64_t seed) {
  require_split(corpus, Split::Train);
  std::vector<std::string> test = require_split(corpus, Split::Test);

  auto entries = ranked(corpus.sentence_freq);
  if (static_cast<int>(entries.size()) < n || n < 1)
    throw NotEnoughSentences("train split has " + std::to_string(entries.size()) +
                             " distinct sentences, need " + std::to_string(n));
  std::vector<std::string> top;
  top.reserve(n);
  for (int i = 0; i < n; ++i) top.push_back(entries[i].first);

  GeneratedSet set;
  set.system_name = "Top-sentences-" + std::to_string(n);
  set.seed = seed;
  set.provenance["baseline"] = "top-sentences";
  set.provenance["n"] = std::to_string(n);
  set.provenance["seed"] = std::to_string(seed);
  for (const std::string& id : test) {
    std::vector<std::string> shuffled = top;
    SplitMix64 rng = study_stream(seed, id);
    deterministic_shuffle(shuffled, rng);
    set.outputs[id] = join_sentences(shuffled);
  }
  return set;
}

GeneratedSet gen_top_words(const Corpus& corpus, int n, std::uint64_t seed) {
  require_split(corpus, Split::Train);
  std::vector<std::string> test = require_split(corpus, Split::Test);

  auto entries = ranked(corpus.word_freq);
  if (static_cast<int>(entries.size()) < n || n < 1)
    throw NotEnoughWords("train vocabulary has " + std::to_string(entries.size()) +
                         " words, need " + std::to_string(n));
  std::vector<std::string> top;
  top.reserve(n);
  for (int i = 0; i < n; ++i) top.push_back(entries[i].first);

  GeneratedSet set;
  set.system_name = "Top-words-" + std::to_string(n);
  set.seed = seed;
  set.provenance["baseline"] = "top-words";
  set.provenance["n"] = std::to_string(n);
  set.provenance["seed"] = std::to_string(seed);
  for (const std::string& id : test) {
    std::vector<std::string> shuffled = top;
    SplitMix64 rng = study_stream(seed, id);
    deterministic_shuffle(shuffled, rng);
    set.outputs[id] = join_tokens(shuffled);
  }
  return set;
}

FeatureVector extract_features(const GrayImage& image, int side) {
  if (image.rows == 0 || image.cols == 0 ||
      image.values.size() != image.rows * image.cols)
    throw EmptyImage("image is empty or inconsistently sized");
  if (side < 1) throw EmptyImage("pooling side must be positive");

  std::size_t s = static_cast<std::size_t>(side);
  FeatureVector out;
  out.values.assign(s * s, 0.0);
  for (std::size_t br = 0; br < s; ++br) {
    // Bin boundaries by floor(i * dim / side); a bin never ends up empty
    // because the end is clamped to at least one row/column past the start.
    std::size_t r0 = br * image.rows / s;
    std::size_t r1 = std::max((br + 1) * image.rows / s, r0 + 1);
    r1 = std::min(r1, image.rows);
    r0 = std::min(r0, image.rows - 1);
    for (std::size_t bc = 0; bc < s; ++bc) {
      std::size_t c0 = bc * image.cols / s;
      std::size_t c1 = std::max((bc + 1) * image.cols / s, c0 + 1);
      c1 = std::min(c1, image.cols);
      c0 = std::min(c0, image.cols - 1);
      double sum = 0.0;
      for (std::size_t r = r0; r < r1; ++r)
        for (std::size_t c = c0; c < c1; ++c) sum += image.at(r, c);
      out.values[br * s + bc] =
          sum / (static_cast<double>(r1 - r0) * static_cast<double>(c1 - c0));
    }
  }
  double norm2 = 0.0;
  for (double v : out.values) norm2 += v * v;
  if (norm2 > 0.0) {
    double inv = 1.0 / std::sqrt(norm2);
    for (double& v : out.values) v *= inv;
  }
  return out;
}

FeatureMap load_features_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UnreadableFile("cannot open features " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw UnreadableFile("empty feature file " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();

  std::size_t dim = 0;
  {
    std::stringstream header(line);
    std::string cell;
    bool first = true;
    while (std::getline(header, cell, ',')) {
      if (first) {
        if (cell != "study_id")
          throw UnreadableFile(path.string() + ": header must start with study_id");
        first = false;
      } else {
        ++dim;
      }
    }
    if (dim == 0) throw UnreadableFile(path.string() + ": header declares no dimensions");
  }

  FeatureMap features;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    if (!std::getline(row, cell, ','))
      throw UnreadableFile(path.string() + " line " + std::to_string(lineno));
    std::string id = cell;
    std::vector<double> values;
    values.reserve(dim);
    while (std::getline(row, cell, ',')) {
      double v = std::stod(cell);
      if (!std::isfinite(v))
        throw UnreadableFile(path.string() + " line " + std::to_string(lineno) +
                             ": non-finite feature value for \"" + id + "\"");
      values.push_back(v);
    }
    if (values.size() != dim)
      throw DimensionMismatch(path.string() + " line " + std::to_string(lineno) +
                              ": expected " + std::to_string(dim) + " values, got " +
                              std::to_string(values.size()));
    features[std::move(id)] = std::move(values);
  }
  return features;
}

void save_features_csv(const std::filesystem::path& path, const FeatureMap& features) {
  std::ofstream out(path);
  if (!out) throw UnreadableFile("cannot write " + path.string());
  std::size_t dim = features.empty() ? 0 : features.begin()->second.size();
  out << "study_id";
  for (std::size_t i = 0; i < dim; ++i) out << ",v" << i;
  out << "\n";
  out.precision(17);
  for (const auto& [id, values] : features) {
    out << id;
    for (double v : values) out << ',' << v;
    out << "\n";
  }
}

}  // namespace rrg
