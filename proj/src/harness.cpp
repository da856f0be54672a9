#include "rrg/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rrg/errors.hpp"
#include "rrg/metrics.hpp"
#include "rrg/published.hpp"

namespace rrg {

namespace {

std::string trim_copy(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string double_text(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

bool parse_bool(const std::string& value, std::size_t lineno) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw BadConfig("line " + std::to_string(lineno) + ": expected true/false, got \"" +
                  value + "\"");
}

double parse_double(const std::string& value, std::size_t lineno) {
  try {
    std::size_t used = 0;
    double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw BadConfig("line " + std::to_string(lineno) + ": bad number \"" + value + "\"");
  }
}

std::uint64_t parse_u64(const std::string& value, std::size_t lineno) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc{} || ptr != value.data() + value.size())
    throw BadConfig("line " + std::to_string(lineno) + ": bad integer \"" + value + "\"");
  return v;
}

}  // namespace

std::string_view to_string(TableFormat f) {
  switch (f) {
    case TableFormat::Markdown: return "markdown";
    case TableFormat::Csv: return "csv";
    case TableFormat::Json: return "json";
  }
  return "markdown";
}

TableFormat table_format_from_string(std::string_view s) {
  if (s == "markdown") return TableFormat::Markdown;
  if (s == "csv") return TableFormat::Csv;
  if (s == "json") return TableFormat::Json;
  throw BadConfig("unknown table format \"" + std::string(s) + "\"");
}

BenchmarkConfig parse_config(std::string_view text) {
  BenchmarkConfig config;
  std::istringstream in{std::string(text)};
  std::string raw, section;
  std::size_t lineno = 0;
  BaselineSpec* baseline = nullptr;

  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = trim_copy(raw);
    if (line.empty() || line[0] == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']')
        throw BadConfig("line " + std::to_string(lineno) + ": unterminated section");
      section = trim_copy(line.substr(1, line.size() - 2));
      baseline = nullptr;
      if (section.rfind("baseline.", 0) == 0) {
        BaselineSpec spec;
        spec.kind = section.substr(9);
        if (spec.kind != "random" && spec.kind != "constant" && spec.kind != "nn" &&
            spec.kind != "top-sentences" && spec.kind != "top-words")
          throw BadConfig("line " + std::to_string(lineno) + ": unknown baseline \"" +
                          spec.kind + "\"");
        config.baselines.push_back(std::move(spec));
        baseline = &config.baselines.back();
      } else if (section != "corpus" && section != "tokenizer" && section != "metrics" &&
                 section != "labeler" && section != "output") {
        throw BadConfig("line " + std::to_string(lineno) + ": unknown section [" +
                        section + "]");
      }
      continue;
    }

    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw BadConfig("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim_copy(line.substr(0, eq));
    std::string value = trim_copy(line.substr(eq + 1));

    if (baseline != nullptr) {
      if (key == "name") baseline->name = value;
      else if (key == "seed") baseline->seed = parse_u64(value, lineno);
      else if (key == "n") baseline->n = static_cast<int>(parse_u64(value, lineno));
      else if (key == "text") baseline->constant_text = value;
      else if (key == "features") baseline->features_path = value;
      else
        throw BadConfig("line " + std::to_string(lineno) + ": unknown baseline key \"" +
                        key + "\"");
    } else if (section == "corpus") {
      if (key == "path") config.corpus_path = value;
      else if (key == "format") {
        if (value == "jsonl") config.corpus_format = CorpusFormat::JsonLines;
        else if (value == "tsv") config.corpus_format = CorpusFormat::Tsv;
        else throw BadConfig("line " + std::to_string(lineno) + ": format is jsonl or tsv");
      } else
        throw BadConfig("line " + std::to_string(lineno) + ": unknown corpus key \"" +
                        key + "\"");
    } else if (section == "tokenizer") {
      if (key == "lowercase") config.tokenizer.lowercase = parse_bool(value, lineno);
      else if (key == "strip_punct") config.tokenizer.strip_punct = parse_bool(value, lineno);
      else if (key == "keep_deid") config.tokenizer.keep_deid_token = parse_bool(value, lineno);
      else
        throw BadConfig("line " + std::to_string(lineno) + ": unknown tokenizer key \"" +
                        key + "\"");
    } else if (section == "metrics") {
      if (key == "beta") config.metrics.beta = parse_double(value, lineno);
      else if (key == "sigma") config.metrics.sigma = parse_double(value, lineno);
      else
        throw BadConfig("line " + std::to_string(lineno) + ": unknown metrics key \"" +
                        key + "\"");
    } else if (section == "labeler") {
      if (key == "lexicon") config.lexicon_path = value;
      else if (key == "uncertain") {
        if (value == "pos") config.uncertain = UncertainPolicy::UncertainAsPositive;
        else if (value == "neg") config.uncertain = UncertainPolicy::UncertainAsNegative;
        else throw BadConfig("line " + std::to_string(lineno) + ": uncertain is pos or neg");
      } else
        throw BadConfig("line " + std::to_string(lineno) + ": unknown labeler key \"" +
                        key + "\"");
    } else if (section == "output") {
      if (key == "format") config.output_format = table_format_from_string(value);
      else if (key == "reference_rows") config.reference_rows = parse_bool(value, lineno);
      else
        throw BadConfig("line " + std::to_string(lineno) + ": unknown output key \"" +
                        key + "\"");
    } else {
      throw BadConfig("line " + std::to_string(lineno) + ": key outside any section");
    }
  }
  if (config.corpus_path.empty()) throw BadConfig("missing [corpus] path");
  if (config.baselines.empty()) throw BadConfig("no [baseline.*] sections");
  return config;
}

BenchmarkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw UnreadableFile("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const BenchmarkConfig& config) {
  std::ostringstream out;
  out << "[corpus]\n";
  out << "path = " << config.corpus_path << "\n";
  out << "format = "
      << (config.corpus_format == CorpusFormat::JsonLines ? "jsonl" : "tsv") << "\n";
  out << "\n[tokenizer]\n";
  out << "lowercase = " << (config.tokenizer.lowercase ? "true" : "false") << "\n";
  out << "strip_punct = " << (config.tokenizer.strip_punct ? "true" : "false") << "\n";
  out << "keep_deid = " << (config.tokenizer.keep_deid_token ? "true" : "false") << "\n";
  out << "\n[metrics]\n";
  out << "beta = " << double_text(config.metrics.beta) << "\n";
  out << "sigma = " << double_text(config.metrics.sigma) << "\n";
  out << "\n[labeler]\n";
  out << "lexicon = " << config.lexicon_path << "\n";
  out << "uncertain = "
      << (config.uncertain == UncertainPolicy::UncertainAsPositive ? "pos" : "neg") << "\n";
  out << "\n[output]\n";
  out << "format = " << to_string(config.output_format) << "\n";
  out << "reference_rows = " << (config.reference_rows ? "true" : "false") << "\n";
  for (const BaselineSpec& spec : config.baselines) {
    out << "\n[baseline." << spec.kind << "]\n";
    if (!spec.name.empty()) out << "name = " << spec.name << "\n";
    if (spec.kind == "random" || spec.kind == "top-sentences" || spec.kind == "top-words")
      out << "seed = " << spec.seed << "\n";
    if (spec.kind == "top-sentences" || spec.kind == "top-words")
      out << "n = " << spec.n << "\n";
    if (spec.kind == "constant" && spec.n > 0) out << "n = " << spec.n << "\n";
    if (spec.kind == "constant" && !spec.constant_text.empty())
      out << "text = " << spec.constant_text << "\n";
    if (spec.kind == "nn") out << "features = " << spec.features_path << "\n";
  }
  return out.str();
}

namespace {

GeneratedSet dispatch_baseline(const Corpus& corpus, const Lexicon& lexicon,
                               const BaselineSpec& spec) {
  if (spec.kind == "random") return gen_random(corpus, spec.seed);
  if (spec.kind == "constant") {
    // precedence: rebuild from the corpus when n is set, else explicit
    // text, else the stock report
    if (spec.n > 0)
      return gen_constant(corpus, build_constant_from_corpus(corpus, lexicon, spec.n));
    return gen_constant(corpus, spec.constant_text.empty() ? kDefaultConstantReport
                                                           : spec.constant_text);
  }
  if (spec.kind == "nn")
    return gen_nearest_neighbor(corpus, load_features_csv(spec.features_path));
  if (spec.kind == "top-sentences") return gen_top_sentences(corpus, spec.n, spec.seed);
  if (spec.kind == "top-words") return gen_top_words(corpus, spec.n, spec.seed);
  throw BadConfig("unknown baseline kind \"" + spec.kind + "\"");
}

ScoreRow published_to_row(const PublishedRow& pub) {
  ScoreRow row;
  row.system = pub.name + " (not computed)";
  row.computed = false;
  row.b1 = pub.bleu[0];
  row.b2 = pub.bleu[1];
  row.b3 = pub.bleu[2];
  row.b4 = pub.bleu[3];
  row.b = pub.b;
  row.rouge_l = pub.rouge_l;
  row.cider_d = pub.cider_d;
  row.accuracy = pub.accuracy;
  row.auc = pub.auc;
  return row;
}

}  // namespace

ScoreTable run_benchmark(const BenchmarkConfig& config) {
  BenchmarkConfig effective = config;
  ScoreTable table;
  if (const char* env = std::getenv("RRGBENCH_SEED")) {
    std::uint64_t seed = parse_u64(env, 0);
    for (BaselineSpec& spec : effective.baselines) spec.seed = seed;
    table.notes.push_back("all baseline seeds overridden by RRGBENCH_SEED=" +
                          std::string(env));
  }
  table.config_snapshot = serialize_config(effective);

  Corpus corpus =
      load_corpus(effective.corpus_path, effective.corpus_format, effective.tokenizer);
  const Lexicon lexicon = effective.lexicon_path.empty()
                              ? default_lexicon()
                              : load_lexicon(effective.lexicon_path);

  // References come from the Test split only; Train text is never scored as
  // a reference.
  std::vector<std::string> test_ids = corpus.ids(Split::Test);
  if (test_ids.empty()) throw EmptySplit("test split is empty");
  std::vector<TokenSeq> references;
  std::vector<BinaryVector> gold;
  references.reserve(test_ids.size());
  for (const std::string& id : test_ids) {
    const Report& report = corpus.reports.at(id);
    references.push_back(report.tokens);
    gold.push_back(binarize(label_report(report, lexicon), effective.uncertain));
  }

  for (const BaselineSpec& spec : effective.baselines) {
    try {
      GeneratedSet set = dispatch_baseline(corpus, lexicon, spec);
      if (set.outputs.size() != test_ids.size())
        throw Error("generated set does not cover the test split");
      std::vector<TokenSeq> candidates;
      std::vector<BinaryVector> pred;
      std::vector<ScoreVector> pred_scores;
      candidates.reserve(test_ids.size());
      for (const std::string& id : test_ids) {
        auto it = set.outputs.find(id);
        if (it == set.outputs.end())
          throw Error("generated set misses test study \"" + id + "\"");
        Report gen = make_report(id, Split::Test, it->second, effective.tokenizer);
        candidates.push_back(gen.tokens);
        BinaryVector bv = binarize(label_report(gen, lexicon), effective.uncertain);
        ScoreVector sv{};
        for (std::size_t d = 0; d < kNumDiseases; ++d) sv[d] = bv[d];
        pred.push_back(bv);
        pred_scores.push_back(sv);
      }

      BleuScore bs = bleu(candidates, references);
      RougeLScore rs = rouge_l(candidates, references, effective.metrics.beta);
      CiderScore cs = cider_d(candidates, references, effective.metrics.sigma);

      ScoreRow row;
      row.system = spec.name.empty() ? set.system_name : spec.name;
      row.b1 = bs.per_n[0];
      row.b2 = bs.per_n[1];
      row.b3 = bs.per_n[2];
      row.b4 = bs.per_n[3];
      row.b = bs.mean_b;
      row.rouge_l = rs.f;
      row.cider_d = cs.value;
      row.accuracy = accuracy_macro(pred, gold);
      try {
        AucReport auc = auc_macro(pred_scores, gold);
        row.auc = auc.macro;
        row.warnings = auc.warnings;
      } catch (const AllDiseasesDegenerate&) {
        // gold labels carry one class everywhere: AUC has no defined value,
        // the cell stays absent instead of aborting the table
        row.warnings.push_back(
            "macro AUC undefined: every disease has a single-class gold column");
      }
      table.rows.push_back(std::move(row));
    } catch (const Error& e) {
      throw Error("baseline \"" + spec.kind + "\": " + e.what());
    }
  }

  if (effective.reference_rows)
    for (const PublishedRow& pub : published_reference_rows())
      table.reference_rows.push_back(published_to_row(pub));
  return table;
}

std::string format_cell(std::optional<double> value) {
  if (!value) return "-";
  long long scaled = std::llround(*value * 1000.0);
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string frac = std::to_string(scaled % 1000);
  frac.insert(0, 3 - frac.size(), '0');
  return (negative ? "-" : "") + std::to_string(scaled / 1000) + "." + frac;
}

namespace {

const char* const kColumns[] = {"B-1", "B-2", "B-3", "B-4", "B",
                                "R-L", "C-D", "Acc", "AUC"};

std::array<std::optional<double>, 9> row_cells(const ScoreRow& row) {
  return {row.b1, row.b2,      row.b3,      row.b4,       row.b,
          row.rouge_l, row.cider_d, row.accuracy, row.auc};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string render_markdown(const ScoreTable& table) {
  std::ostringstream out;
  out << "| Model |";
  for (const char* col : kColumns) out << ' ' << col << " |";
  out << "\n|---|";
  for (std::size_t i = 0; i < 9; ++i) out << "---|";
  out << "\n";
  auto emit = [&](const ScoreRow& row) {
    out << "| " << row.system << " |";
    for (const auto& cell : row_cells(row)) out << ' ' << format_cell(cell) << " |";
    out << "\n";
  };
  for (const ScoreRow& row : table.reference_rows) emit(row);
  for (const ScoreRow& row : table.rows) emit(row);

  bool any_warning = false;
  for (const ScoreRow& row : table.rows) any_warning = any_warning || !row.warnings.empty();
  if (any_warning) {
    out << "\nWarnings:\n";
    for (const ScoreRow& row : table.rows)
      for (const std::string& w : row.warnings) out << "- " << row.system << ": " << w << "\n";
  }
  if (!table.notes.empty()) {
    out << "\nNotes:\n";
    for (const std::string& n : table.notes) out << "- " << n << "\n";
  }
  out << "\nConfig:\n\n";
  std::istringstream cfg(table.config_snapshot);
  std::string line;
  while (std::getline(cfg, line)) out << "    " << line << "\n";
  return out.str();
}

std::string render_csv(const ScoreTable& table) {
  std::ostringstream out;
  out << "system";
  for (const char* col : kColumns) out << ',' << col;
  out << ",warnings\n";
  auto emit = [&](const ScoreRow& row) {
    out << csv_escape(row.system);
    for (const auto& cell : row_cells(row)) out << ',' << format_cell(cell);
    std::string joined;
    for (const std::string& w : row.warnings) {
      if (!joined.empty()) joined += "; ";
      joined += w;
    }
    out << ',' << csv_escape(joined) << "\n";
  };
  for (const ScoreRow& row : table.reference_rows) emit(row);
  for (const ScoreRow& row : table.rows) emit(row);
  for (const std::string& n : table.notes) out << "# note: " << n << "\n";
  std::istringstream cfg(table.config_snapshot);
  std::string line;
  while (std::getline(cfg, line)) out << "# config: " << line << "\n";
  return out.str();
}

std::string render_json(const ScoreTable& table) {
  nlohmann::ordered_json doc;
  doc["columns"] = kColumns;
  auto row_json = [](const ScoreRow& row) {
    nlohmann::ordered_json j;
    j["system"] = row.system;
    j["computed"] = row.computed;
    auto cells = row_cells(row);
    for (std::size_t i = 0; i < 9; ++i) {
      if (cells[i])
        j[kColumns[i]] = static_cast<double>(std::llround(*cells[i] * 1000.0)) / 1000.0;
      else
        j[kColumns[i]] = nullptr;
    }
    j["warnings"] = row.warnings;
    return j;
  };
  doc["reference_rows"] = nlohmann::ordered_json::array();
  for (const ScoreRow& row : table.reference_rows)
    doc["reference_rows"].push_back(row_json(row));
  doc["rows"] = nlohmann::ordered_json::array();
  for (const ScoreRow& row : table.rows) doc["rows"].push_back(row_json(row));
  doc["notes"] = table.notes;
  doc["config"] = table.config_snapshot;
  return doc.dump(2) + "\n";
}

}  // namespace

std::string render_table(const ScoreTable& table, TableFormat format) {
  switch (format) {
    case TableFormat::Markdown: return render_markdown(table);
    case TableFormat::Csv: return render_csv(table);
    case TableFormat::Json: return render_json(table);
  }
  return render_markdown(table);
}

CorpusStats corpus_report(const Corpus& corpus, const Lexicon& lexicon) {
  if (corpus.reports.empty()) throw EmptyCorpus("corpus has no reports");
  CorpusStats stats;
  stats.reports = corpus.reports.size();
  stats.train_reports = corpus.count(Split::Train);
  stats.test_reports = corpus.count(Split::Test);
  stats.vocabulary = corpus.word_freq.size();
  for (const auto& [id, report] : corpus.reports)
    stats.sentences += report.sentences.size();
  stats.normal_fraction = normal_sentence_fraction(corpus, lexicon);

  std::vector<std::pair<std::string, std::int64_t>> entries(corpus.sentence_freq.begin(),
                                                            corpus.sentence_freq.end());
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (entries.size() > 20) entries.resize(20);
  stats.top_sentences = std::move(entries);
  return stats;
}

}  // namespace rrg
