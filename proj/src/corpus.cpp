#include "rrg/corpus.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rrg/errors.hpp"

namespace rrg {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

}  // namespace

std::string_view to_string(Split s) {
  return s == Split::Train ? "train" : "test";
}

Split split_from_string(std::string_view s) {
  if (s == "train") return Split::Train;
  if (s == "test") return Split::Test;
  throw MissingField("split must be \"train\" or \"test\", got \"" +
                     std::string(s) + "\"");
}

TokenSeq tokenize(std::string_view text, const TokenizerConfig& config) {
  TokenSeq out;
  std::string cur;
  auto flush = [&] {
    if (cur.empty()) return;
    if (config.keep_deid_token || cur != "xxxx") out.push_back(cur);
    cur.clear();
  };
  for (char raw : text) {
    char c = raw;
    if (config.lowercase) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (is_word_char(c)) {
      cur.push_back(c);
    } else {
      flush();
      if (!config.strip_punct && !is_space(c)) out.emplace_back(1, c);
    }
  }
  flush();
  return out;
}

namespace {

// Sentences with a flag for whether a terminal period was present, so the
// punctuation-keeping tokenizer never invents one for trailing fragments.
std::vector<std::pair<std::string, bool>> split_sentences_marked(
    std::string_view text) {
  std::vector<std::pair<std::string, bool>> out;
  std::string cur;
  for (char c : text) {
    if (c == '.') {
      std::string t = trim(cur);
      if (!t.empty()) out.emplace_back(std::move(t), true);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  std::string t = trim(cur);
  if (!t.empty()) out.emplace_back(std::move(t), false);
  return out;
}

}  // namespace

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  for (auto& [sentence, terminated] : split_sentences_marked(text))
    out.push_back(std::move(sentence));
  return out;
}

Report make_report(std::string study_id, Split split, std::string raw_text,
                   const TokenizerConfig& config) {
  Report r;
  r.study_id = std::move(study_id);
  r.split = split;
  r.raw_text = std::move(raw_text);
  for (const auto& [sentence, terminated] : split_sentences_marked(r.raw_text)) {
    TokenSeq toks = tokenize(sentence, config);
    if (!config.strip_punct && terminated) toks.push_back(".");
    if (toks.empty()) continue;
    r.tokens.insert(r.tokens.end(), toks.begin(), toks.end());
    r.sentences.push_back(std::move(toks));
  }
  return r;
}

std::vector<std::string> Corpus::ids(Split s) const {
  std::vector<std::string> out;
  for (const auto& [id, report] : reports)
    if (report.split == s) out.push_back(id);
  return out;
}

std::size_t Corpus::count(Split s) const {
  std::size_t n = 0;
  for (const auto& [id, report] : reports) n += report.split == s ? 1 : 0;
  return n;
}

namespace {

struct RawRecord {
  std::string study_id;
  std::string split;
  std::string text;
  std::optional<std::string> features;
};

RawRecord parse_jsonl_record(const std::string& line, std::size_t lineno) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error& e) {
    throw UnreadableFile("line " + std::to_string(lineno) + ": " + e.what());
  }
  RawRecord rec;
  for (const char* key : {"study_id", "split", "text"}) {
    if (!j.contains(key) || !j[key].is_string())
      throw MissingField("line " + std::to_string(lineno) +
                         ": missing string field \"" + key + "\"");
  }
  rec.study_id = j["study_id"].get<std::string>();
  rec.split = j["split"].get<std::string>();
  rec.text = j["text"].get<std::string>();
  if (j.contains("features")) rec.features = j["features"].get<std::string>();
  return rec;
}

RawRecord parse_tsv_record(const std::string& line, std::size_t lineno) {
  std::size_t t1 = line.find('\t');
  std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
  if (t1 == std::string::npos || t2 == std::string::npos)
    throw MissingField("line " + std::to_string(lineno) +
                       ": expected study_id<TAB>split<TAB>text");
  RawRecord rec;
  rec.study_id = line.substr(0, t1);
  rec.split = line.substr(t1 + 1, t2 - t1 - 1);
  rec.text = line.substr(t2 + 1);
  if (rec.study_id.empty())
    throw MissingField("line " + std::to_string(lineno) + ": empty study_id");
  return rec;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const TokenizerConfig& config) {
  std::ifstream in(path);
  if (!in) throw UnreadableFile("cannot open " + path.string());

  Corpus corpus;
  corpus.tokenizer = config;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    RawRecord rec = format == CorpusFormat::JsonLines
                        ? parse_jsonl_record(line, lineno)
                        : parse_tsv_record(line, lineno);
    Split split = split_from_string(rec.split);
    if (corpus.reports.count(rec.study_id))
      throw DuplicateStudyId("line " + std::to_string(lineno) +
                             ": duplicate study_id \"" + rec.study_id + "\"");
    Report r = make_report(rec.study_id, split, rec.text, config);
    r.features_path = rec.features;
    corpus.reports.emplace(r.study_id, std::move(r));
  }
  if (corpus.reports.empty()) throw EmptyCorpus("no records in " + path.string());

  // A corpus without Train reports still loads (labeling-only workflows);
  // its tables stay empty and the baselines reject it instead.
  for (const auto& [id, report] : corpus.reports) {
    if (report.split != Split::Train) continue;
    for (const std::string& tok : report.tokens) ++corpus.word_freq[tok];
    for (const TokenSeq& sentence : report.sentences)
      ++corpus.sentence_freq[join_tokens(sentence)];
  }
  return corpus;
}

std::pair<std::map<std::string, std::int64_t>, std::map<std::string, std::int64_t>>
frequency_tables(const Corpus& corpus) {
  std::map<std::string, std::int64_t> word_freq;
  std::map<std::string, std::int64_t> sentence_freq;
  bool any_train = false;
  for (const auto& [id, report] : corpus.reports) {
    if (report.split != Split::Train) continue;
    any_train = true;
    for (const std::string& tok : report.tokens) ++word_freq[tok];
    for (const TokenSeq& sentence : report.sentences)
      ++sentence_freq[join_tokens(sentence)];
  }
  if (!any_train) throw EmptyTrainSplit("corpus has no train reports");
  return {std::move(word_freq), std::move(sentence_freq)};
}

std::string join_tokens(const TokenSeq& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

}  // namespace rrg
