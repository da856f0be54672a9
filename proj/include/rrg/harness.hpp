#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rrg/baselines.hpp"
#include "rrg/corpus.hpp"
#include "rrg/labeler.hpp"

namespace rrg {

enum class TableFormat { Markdown, Csv, Json };

std::string_view to_string(TableFormat f);
TableFormat table_format_from_string(std::string_view s);

struct MetricParams {
  double beta = 1.2;   // ROUGE-L F weight
  double sigma = 6.0;  // CIDEr-D length penalty

  bool operator==(const MetricParams&) const = default;
};

struct BaselineSpec {
  std::string kind;  // random | constant | nn | top-sentences | top-words
  std::string name;  // optional row-name override
  std::uint64_t seed = 0;
  // top-sentences / top-words count; for constant, n > 0 rebuilds the text
  // from the n most common normal train sentences
  int n = 0;
  std::string constant_text;  // constant; empty selects the built-in default
  std::string features_path;  // nn

  bool operator==(const BaselineSpec&) const = default;
};

struct BenchmarkConfig {
  std::string corpus_path;
  CorpusFormat corpus_format = CorpusFormat::JsonLines;
  TokenizerConfig tokenizer;
  MetricParams metrics;
  std::string lexicon_path;  // empty selects the built-in lexicon
  UncertainPolicy uncertain = UncertainPolicy::UncertainAsPositive;
  TableFormat output_format = TableFormat::Markdown;
  bool reference_rows = false;
  std::vector<BaselineSpec> baselines;

  bool operator==(const BenchmarkConfig&) const = default;
};

// Key/value config text with [section] headers; baselines keep file order
// (row order follows it). parse(serialize(c)) == c.
BenchmarkConfig parse_config(std::string_view text);
BenchmarkConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const BenchmarkConfig& config);

struct ScoreRow {
  std::string system;
  std::optional<double> b1, b2, b3, b4, b, rouge_l, cider_d, accuracy, auc;
  std::vector<std::string> warnings;
  bool computed = true;  // false for published reference rows
};

struct ScoreTable {
  std::vector<ScoreRow> rows;            // computed, in config order
  std::vector<ScoreRow> reference_rows;  // published constants, if requested
  std::string config_snapshot;           // effective config, replayable
  std::vector<std::string> notes;        // e.g. environment seed override
};

// Generates, scores and labels every configured baseline against the Test
// split. Errors from any stage are rethrown with the system named; a table
// is only returned when every row completed. The RRGBENCH_SEED environment
// variable, when set, overrides all baseline seeds and is recorded.
ScoreTable run_benchmark(const BenchmarkConfig& config);

// 3-decimal cells, "-" for absent, column order B-1 B-2 B-3 B-4 B R-L C-D
// Acc AUC. The config snapshot rides along in every format.
std::string render_table(const ScoreTable& table, TableFormat format);

struct CorpusStats {
  std::size_t reports = 0;
  std::size_t train_reports = 0;
  std::size_t test_reports = 0;
  std::size_t vocabulary = 0;        // distinct Train words
  std::size_t sentences = 0;         // sentence instances, whole corpus
  double normal_fraction = 0.0;      // over the whole corpus
  std::vector<std::pair<std::string, std::int64_t>> top_sentences;  // top 20
};

CorpusStats corpus_report(const Corpus& corpus, const Lexicon& lexicon);

// Decimal-correct fixed rounding used for all rendered cells: 0.28875 must
// render as "0.289" even though the nearest double sits just below it.
std::string format_cell(std::optional<double> value);

}  // namespace rrg
