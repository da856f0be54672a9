// Command-line front end: corpus stats, metric scoring, labeling, label
// evaluation, baseline generation and the full benchmark table.
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "rrg/baselines.hpp"
#include "rrg/corpus.hpp"
#include "rrg/errors.hpp"
#include "rrg/harness.hpp"
#include "rrg/labeler.hpp"
#include "rrg/metrics.hpp"
#include "rrg/published.hpp"

namespace {

rrg::CorpusFormat format_of(const std::string& name) {
  if (name == "jsonl") return rrg::CorpusFormat::JsonLines;
  if (name == "tsv") return rrg::CorpusFormat::Tsv;
  throw rrg::BadConfig("unknown corpus format \"" + name + "\"");
}

rrg::Lexicon lexicon_of(const std::string& path) {
  return path.empty() ? rrg::default_lexicon() : rrg::load_lexicon(path);
}

// JSON-lines of {"study_id": ..., "text": ...}; extra fields are ignored so
// corpus files work as reference inputs too.
std::map<std::string, std::string> load_text_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rrg::UnreadableFile("cannot open " + path);
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("study_id") || !j.contains("text"))
      throw rrg::MissingField(path + " line " + std::to_string(lineno) +
                              ": expected {\"study_id\", \"text\"}");
    out[j["study_id"].get<std::string>()] = j["text"].get<std::string>();
  }
  if (out.empty()) throw rrg::EmptyInput(path + " holds no records");
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw rrg::UnreadableFile("cannot write " + out_path);
  out << text;
}

int cmd_stats(const std::string& path, const std::string& format,
              const std::string& lexicon_path, std::size_t top) {
  auto corpus = rrg::load_corpus(path, format_of(format));
  auto stats = rrg::corpus_report(corpus, lexicon_of(lexicon_path));
  std::cout << "reports            " << stats.reports << " (" << stats.train_reports
            << " train, " << stats.test_reports << " test)\n";
  std::cout << "vocabulary         " << stats.vocabulary << "\n";
  std::cout << "sentences          " << stats.sentences << "\n";
  std::cout << "normal fraction    " << rrg::format_cell(stats.normal_fraction) << "\n";
  std::cout << "top sentences\n";
  for (std::size_t i = 0; i < stats.top_sentences.size() && i < top; ++i)
    std::cout << "  " << stats.top_sentences[i].second << "  "
              << stats.top_sentences[i].first << "\n";
  return 0;
}

int cmd_score(const std::string& cand_path, const std::string& ref_path,
              const std::string& metrics, double beta, double sigma,
              bool keep_punctuation, bool as_json) {
  rrg::TokenizerConfig tok;
  tok.strip_punct = !keep_punctuation;
  auto cand_map = load_text_map(cand_path);
  auto ref_map = load_text_map(ref_path);

  std::vector<rrg::TokenSeq> candidates, references;
  for (const auto& [id, text] : cand_map) {
    auto it = ref_map.find(id);
    if (it == ref_map.end())
      throw rrg::LengthMismatch("no reference for study \"" + id + "\"");
    candidates.push_back(rrg::make_report(id, rrg::Split::Test, text, tok).tokens);
    references.push_back(
        rrg::make_report(id, rrg::Split::Test, it->second, tok).tokens);
  }

  bool want_bleu = metrics.find("bleu") != std::string::npos;
  bool want_rouge = metrics.find("rouge") != std::string::npos;
  bool want_cider = metrics.find("cider") != std::string::npos;
  nlohmann::ordered_json doc;
  doc["pairs"] = candidates.size();
  std::ostringstream text;
  text << "pairs           " << candidates.size() << "\n";
  if (want_bleu) {
    auto s = rrg::bleu(candidates, references);
    for (int n = 0; n < 4; ++n) {
      doc["bleu"][std::string("b") + char('1' + n)] = s.per_n[n];
      text << "BLEU-" << n + 1 << "          " << rrg::format_cell(s.per_n[n]) << "\n";
    }
    doc["bleu"]["mean_b"] = s.mean_b;
    doc["bleu"]["brevity_penalty"] = s.brevity_penalty;
    text << "B (mean 1..4)   " << rrg::format_cell(s.mean_b) << "\n";
    text << "brevity penalty " << rrg::format_cell(s.brevity_penalty) << "\n";
  }
  if (want_rouge) {
    auto s = rrg::rouge_l(candidates, references, beta);
    doc["rouge_l"] = {{"precision", s.precision}, {"recall", s.recall}, {"f", s.f},
                      {"beta", s.beta}};
    text << "ROUGE-L P       " << rrg::format_cell(s.precision) << "\n";
    text << "ROUGE-L R       " << rrg::format_cell(s.recall) << "\n";
    text << "ROUGE-L F       " << rrg::format_cell(s.f) << "\n";
  }
  if (want_cider) {
    auto s = rrg::cider_d(candidates, references, sigma);
    doc["cider_d"]["per_n"] = s.per_n;
    doc["cider_d"]["value"] = s.value;
    text << "CIDEr-D         " << rrg::format_cell(s.value) << "\n";
  }
  if (as_json)
    std::cout << doc.dump(2) << "\n";
  else
    std::cout << text.str();
  return 0;
}

int cmd_label(const std::string& corpus_path, const std::string& format,
              const std::string& lexicon_path, const std::string& uncertain) {
  auto corpus = rrg::load_corpus(corpus_path, format_of(format));
  rrg::Lexicon lexicon = lexicon_of(lexicon_path);
  rrg::UncertainPolicy policy = uncertain == "neg"
                                    ? rrg::UncertainPolicy::UncertainAsNegative
                                    : rrg::UncertainPolicy::UncertainAsPositive;
  for (const auto& [id, report] : corpus.reports) {
    rrg::LabelVector v = rrg::label_report(report, lexicon);
    rrg::BinaryVector b = rrg::binarize(v, policy);
    nlohmann::ordered_json j;
    j["study_id"] = id;
    j["split"] = std::string(rrg::to_string(report.split));
    nlohmann::ordered_json labels;
    for (std::size_t d = 0; d < rrg::kNumDiseases; ++d)
      labels[std::string(rrg::kDiseases[d])] = std::string(rrg::to_string(v.labels[d]));
    j["labels"] = labels;
    j["binary"] = b;
    std::cout << j.dump() << "\n";
  }
  return 0;
}

std::vector<std::pair<std::string, rrg::LabelVector>> load_label_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rrg::UnreadableFile("cannot open " + path);
  std::vector<std::pair<std::string, rrg::LabelVector>> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.contains("study_id") || !j.contains("labels"))
      throw rrg::MissingField(path + " line " + std::to_string(lineno) +
                              ": expected {\"study_id\", \"labels\"}");
    rrg::LabelVector v;
    for (std::size_t d = 0; d < rrg::kNumDiseases; ++d) {
      std::string name(rrg::kDiseases[d]);
      if (!j["labels"].contains(name))
        throw rrg::MissingField(path + " line " + std::to_string(lineno) +
                                ": missing disease \"" + name + "\"");
      v.labels[d] = rrg::disease_label_from_string(j["labels"][name].get<std::string>());
    }
    out.emplace_back(j["study_id"].get<std::string>(), v);
  }
  if (out.empty()) throw rrg::EmptyInput(path + " holds no records");
  return out;
}

int cmd_eval_labels(const std::string& pred_path, const std::string& gold_path,
                    const std::string& uncertain) {
  rrg::UncertainPolicy policy = uncertain == "neg"
                                    ? rrg::UncertainPolicy::UncertainAsNegative
                                    : rrg::UncertainPolicy::UncertainAsPositive;
  auto pred_records = load_label_file(pred_path);
  std::map<std::string, rrg::LabelVector> gold_by_id;
  for (auto& [id, v] : load_label_file(gold_path)) gold_by_id.emplace(id, v);

  std::vector<rrg::BinaryVector> pred, gold;
  std::vector<rrg::ScoreVector> scores;
  for (const auto& [id, v] : pred_records) {
    auto it = gold_by_id.find(id);
    if (it == gold_by_id.end())
      throw rrg::LengthMismatch("no gold labels for study \"" + id + "\"");
    pred.push_back(rrg::binarize(v, policy));
    gold.push_back(rrg::binarize(it->second, policy));
    rrg::ScoreVector s{};
    for (std::size_t d = 0; d < rrg::kNumDiseases; ++d) s[d] = pred.back()[d];
    scores.push_back(s);
  }

  auto acc = rrg::accuracy_per_disease(pred, gold);
  auto auc = rrg::auc_macro(scores, gold);
  std::cout << "disease                        accuracy  auc\n";
  for (std::size_t d = 0; d < rrg::kNumDiseases; ++d) {
    std::string name(rrg::kDiseases[d]);
    name.resize(30, ' ');
    std::cout << name << " " << rrg::format_cell(acc[d]) << "     "
              << rrg::format_cell(auc.per_disease[d]) << "\n";
  }
  std::cout << "macro accuracy  " << rrg::format_cell(rrg::accuracy_macro(pred, gold))
            << "\n";
  std::cout << "macro auc       " << rrg::format_cell(auc.macro) << "\n";
  for (const std::string& w : auc.warnings) std::cout << "warning: " << w << "\n";
  return 0;
}

int cmd_generate(const std::string& corpus_path, const std::string& format,
                 const std::string& baseline, int n, std::uint64_t seed,
                 const std::string& constant_file, const std::string& features_path,
                 const std::string& lexicon_path, int build_k) {
  auto corpus = rrg::load_corpus(corpus_path, format_of(format));
  rrg::GeneratedSet set;
  if (baseline == "random") {
    set = rrg::gen_random(corpus, seed);
  } else if (baseline == "constant") {
    std::string text = rrg::kDefaultConstantReport;
    if (build_k > 0) {
      text = rrg::build_constant_from_corpus(corpus, lexicon_of(lexicon_path), build_k);
    } else if (!constant_file.empty()) {
      std::ifstream in(constant_file);
      if (!in) throw rrg::UnreadableFile("cannot open " + constant_file);
      std::ostringstream buf;
      buf << in.rdbuf();
      text = buf.str();
      while (!text.empty() && (text.back() == '\n' || text.back() == '\r'))
        text.pop_back();
    }
    set = rrg::gen_constant(corpus, text);
  } else if (baseline == "nn") {
    set = rrg::gen_nearest_neighbor(corpus, rrg::load_features_csv(features_path));
  } else if (baseline == "top-sentences") {
    set = rrg::gen_top_sentences(corpus, n, seed);
  } else if (baseline == "top-words") {
    set = rrg::gen_top_words(corpus, n, seed);
  } else {
    throw rrg::BadConfig("unknown baseline \"" + baseline + "\"");
  }
  for (const auto& [id, text] : set.outputs) {
    nlohmann::ordered_json j;
    j["study_id"] = id;
    j["text"] = text;
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_path,
                  const std::string& format_override) {
  rrg::BenchmarkConfig config = rrg::load_config(config_path);
  rrg::TableFormat format = format_override.empty()
                                ? config.output_format
                                : rrg::table_format_from_string(format_override);
  rrg::ScoreTable table = rrg::run_benchmark(config);
  emit(rrg::render_table(table, format), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chest X-ray report generation benchmark"};
  app.require_subcommand(1);

  // corpus stats <path>
  auto* corpus_cmd = app.add_subcommand("corpus", "Corpus utilities");
  corpus_cmd->require_subcommand(1);
  auto* stats = corpus_cmd->add_subcommand("stats", "Print corpus statistics");
  std::string stats_path, stats_format = "jsonl", stats_lexicon;
  std::size_t stats_top = 20;
  stats->add_option("path", stats_path, "Corpus file")->required();
  stats->add_option("--format", stats_format, "jsonl or tsv");
  stats->add_option("--lexicon", stats_lexicon, "Lexicon file (default built-in)");
  stats->add_option("--top", stats_top, "How many top sentences to print");

  auto* score = app.add_subcommand("score", "Score candidates against references");
  std::string score_cand, score_ref, score_metrics = "bleu,rouge,cider";
  double score_beta = 1.2, score_sigma = 6.0;
  bool score_keep_punct = false, score_json = false;
  score->add_option("--candidates", score_cand, "JSON-lines {study_id, text}")->required();
  score->add_option("--references", score_ref, "JSON-lines {study_id, text}")->required();
  score->add_option("--metrics", score_metrics, "Comma list of bleu,rouge,cider");
  score->add_option("--beta", score_beta, "ROUGE-L beta");
  score->add_option("--sigma", score_sigma, "CIDEr-D length penalty sigma");
  score->add_flag("--keep-punctuation", score_keep_punct,
                  "Keep punctuation (and sentence periods) as tokens");
  score->add_flag("--json", score_json, "Emit JSON instead of aligned text");

  auto* label = app.add_subcommand("label", "Label every report in a corpus");
  std::string label_corpus, label_format = "jsonl", label_lexicon,
              label_uncertain = "pos";
  label->add_option("corpus", label_corpus, "Corpus file")->required();
  label->add_option("--format", label_format, "jsonl or tsv");
  label->add_option("--lexicon", label_lexicon, "Lexicon file (default built-in)");
  label->add_option("--uncertain", label_uncertain, "pos or neg")
      ->check(CLI::IsMember({"pos", "neg"}));

  auto* eval = app.add_subcommand("eval-labels", "Accuracy/AUC of predicted labels");
  std::string eval_pred, eval_gold, eval_uncertain = "pos";
  eval->add_option("--pred", eval_pred, "Predicted label jsonl")->required();
  eval->add_option("--gold", eval_gold, "Gold label jsonl")->required();
  eval->add_option("--uncertain", eval_uncertain, "pos or neg")
      ->check(CLI::IsMember({"pos", "neg"}));

  auto* gen = app.add_subcommand("generate", "Run one baseline generator");
  std::string gen_corpus, gen_format = "jsonl", gen_baseline, gen_constant_file,
              gen_features, gen_lexicon;
  int gen_n = 0, gen_build_k = 0;
  std::uint64_t gen_seed = 0;
  gen->add_option("corpus", gen_corpus, "Corpus file")->required();
  gen->add_option("--format", gen_format, "jsonl or tsv");
  gen->add_option("--baseline", gen_baseline,
                  "random|constant|nn|top-sentences|top-words")
      ->required()
      ->check(CLI::IsMember({"random", "constant", "nn", "top-sentences", "top-words"}));
  gen->add_option("--n", gen_n, "Top-sentences/top-words count");
  gen->add_option("--seed", gen_seed, "Generator seed");
  gen->add_option("--constant-file", gen_constant_file, "File holding the constant text");
  gen->add_option("--build-constant-k", gen_build_k,
                  "Build the constant from the k most common normal train sentences");
  gen->add_option("--features", gen_features, "Feature csv for nn");
  gen->add_option("--lexicon", gen_lexicon, "Lexicon for --build-constant-k");

  auto* bench = app.add_subcommand("benchmark", "Run the configured benchmark");
  std::string bench_config, bench_out, bench_format;
  bench->add_option("--config", bench_config, "Benchmark config file")->required();
  bench->add_option("--out", bench_out, "Output file (default stdout)");
  bench->add_option("--format", bench_format, "markdown|csv|json (overrides config)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (stats->parsed())
      return cmd_stats(stats_path, stats_format, stats_lexicon, stats_top);
    if (score->parsed())
      return cmd_score(score_cand, score_ref, score_metrics, score_beta, score_sigma,
                       score_keep_punct, score_json);
    if (label->parsed())
      return cmd_label(label_corpus, label_format, label_lexicon, label_uncertain);
    if (eval->parsed()) return cmd_eval_labels(eval_pred, eval_gold, eval_uncertain);
    if (gen->parsed())
      return cmd_generate(gen_corpus, gen_format, gen_baseline, gen_n, gen_seed,
                          gen_constant_file, gen_features, gen_lexicon, gen_build_k);
    if (bench->parsed()) return cmd_benchmark(bench_config, bench_out, bench_format);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
