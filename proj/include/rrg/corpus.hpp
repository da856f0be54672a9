#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rrg {

using TokenSeq = std::vector<std::string>;

enum class Split { Train, Test };

std::string_view to_string(Split s);
Split split_from_string(std::string_view s);  // "train" | "test"

// Tokenization knobs. Immutable once a corpus is loaded; recorded in every
// score table so reproduction mismatches are diagnosable.
struct TokenizerConfig {
  bool lowercase = true;
  // true: punctuation characters act as separators and are dropped
  //       (sentence-terminal periods survive only as sentence delimiters).
  // false: punctuation characters are emitted as standalone tokens, and each
  //       period-terminated sentence contributes a "." token.
  bool strip_punct = true;
  bool keep_deid_token = true;  // keep the dataset's "xxxx" de-id token

  bool operator==(const TokenizerConfig&) const = default;
};

struct Report {
  std::string study_id;
  Split split = Split::Train;
  std::string raw_text;
  std::vector<TokenSeq> sentences;  // per-sentence token sequences
  TokenSeq tokens;                  // concatenation of sentences, in order
  std::optional<std::string> features_path;  // optional per-record pointer
};

struct Corpus {
  TokenizerConfig tokenizer;
  std::map<std::string, Report> reports;  // keyed by study_id (sorted)
  // Frequency tables over the Train split only; Test text never leaks in.
  std::map<std::string, std::int64_t> word_freq;
  std::map<std::string, std::int64_t> sentence_freq;  // key: tokens re-joined with ' '

  std::vector<std::string> ids(Split s) const;
  std::size_t count(Split s) const;
};

enum class CorpusFormat { JsonLines, Tsv };

// Flat tokenization of a single string (no sentence logic).
TokenSeq tokenize(std::string_view text, const TokenizerConfig& config = {});

// Splits on sentence-terminal periods, trims whitespace, drops empties.
// Radiology findings are short declaratives; no abbreviation handling.
std::vector<std::string> split_sentences(std::string_view text);

// Builds a Report: split into sentences, tokenize each, concatenate.
Report make_report(std::string study_id, Split split, std::string raw_text,
                   const TokenizerConfig& config);

// Loads a corpus file and builds the frequency tables from Train reports.
// JsonLines records: {"study_id": str, "split": "train"|"test", "text": str,
// "features": optional str}. Tsv lines: study_id<TAB>split<TAB>text.
Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const TokenizerConfig& config = {});

// Recomputes (word_freq, sentence_freq) over the Train split. Empty reports
// are retained in the corpus but contribute nothing here.
std::pair<std::map<std::string, std::int64_t>, std::map<std::string, std::int64_t>>
frequency_tables(const Corpus& corpus);

std::string join_tokens(const TokenSeq& tokens);

}  // namespace rrg
