#include "rrg/harness.hpp"
#include <filesystem>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "rrg/errors.hpp"

namespace {

const std::string kFixture =
    std::string(RRG_SOURCE_DIR) + "/data/fixtures/mini_corpus.jsonl";
const std::string kFeatures =
    std::string(RRG_SOURCE_DIR) + "/data/fixtures/mini_features.csv";

rrg::BenchmarkConfig mini_config() {
  rrg::BenchmarkConfig config;
  config.corpus_path = kFixture;
  rrg::BaselineSpec constant;
  constant.kind = "constant";
  rrg::BaselineSpec random;
  random.kind = "random";
  random.seed = 7;
  config.baselines = {constant, random};
  return config;
}

}  // namespace

TEST_CASE("config serialize/parse round trip") {
  rrg::BenchmarkConfig config;
  config.corpus_path = "corpus.jsonl";
  config.corpus_format = rrg::CorpusFormat::Tsv;
  config.tokenizer.strip_punct = false;
  config.metrics.beta = 1.25;
  config.metrics.sigma = 4.0;
  config.lexicon_path = "lex.txt";
  config.uncertain = rrg::UncertainPolicy::UncertainAsNegative;
  config.output_format = rrg::TableFormat::Json;
  config.reference_rows = true;

  rrg::BaselineSpec random;
  random.kind = "random";
  random.seed = 42;
  rrg::BaselineSpec constant;
  constant.kind = "constant";
  constant.constant_text = "All clear.";
  rrg::BaselineSpec nn;
  nn.kind = "nn";
  nn.features_path = "f.csv";
  rrg::BaselineSpec tops;
  tops.kind = "top-sentences";
  tops.name = "TS";
  tops.seed = 3;
  tops.n = 100;
  rrg::BaselineSpec topw;
  topw.kind = "top-words";
  topw.seed = 3;
  topw.n = 50;
  config.baselines = {random, constant, nn, tops, topw};

  std::string text = rrg::serialize_config(config);
  rrg::BenchmarkConfig parsed = rrg::parse_config(text);
  CHECK(parsed == config);
  CHECK(rrg::serialize_config(parsed) == text);
}

TEST_CASE("config parse errors") {
  CHECK_THROWS_AS(rrg::parse_config("[corpus]\npath = x\n"), rrg::BadConfig);  // no baselines
  CHECK_THROWS_AS(rrg::parse_config("[baseline.sota]\n"), rrg::BadConfig);
  CHECK_THROWS_AS(rrg::parse_config("[corpus]\nwhat = x\n"), rrg::BadConfig);
  CHECK_THROWS_AS(rrg::parse_config("key = 1\n"), rrg::BadConfig);
  CHECK_THROWS_AS(rrg::parse_config("[metrics]\nbeta = soup\n"), rrg::BadConfig);
}

TEST_CASE("format_cell decimal rounding") {
  CHECK(rrg::format_cell(0.28875) == "0.289");  // not 0.288
  CHECK(rrg::format_cell(std::nullopt) == "-");
  CHECK(rrg::format_cell(0.5) == "0.500");
  CHECK(rrg::format_cell(1.0) == "1.000");
  CHECK(rrg::format_cell(0.0) == "0.000");
  CHECK(rrg::format_cell(1.4899999) == "1.490");
}

TEST_CASE("run_benchmark produces one row per configured baseline in order") {
  auto table = rrg::run_benchmark(mini_config());
  REQUIRE(table.rows.size() == 2);
  CHECK(table.rows[0].system == "Constant");
  CHECK(table.rows[1].system == "Random");
  for (const auto& row : table.rows) {
    for (const auto& cell : {row.b1, row.b2, row.b3, row.b4, row.b, row.rouge_l}) {
      REQUIRE(cell.has_value());
      CHECK(*cell >= 0.0);
      CHECK(*cell <= 1.0);
    }
    CHECK(*row.cider_d >= 0.0);
    CHECK(*row.cider_d <= 10.0);
    CHECK(*row.accuracy >= 0.0);
    CHECK(*row.accuracy <= 1.0);
  }
  CHECK(table.config_snapshot == rrg::serialize_config(mini_config()));
}

TEST_CASE("run_benchmark constant identity when references equal the constant") {
  std::string path = "/tmp/rrg_identity_corpus.jsonl";
  {
    std::ofstream out(path);
    out << "{\"study_id\": \"tr1\", \"split\": \"train\", \"text\": \"Anything.\"}\n";
    for (int i = 0; i < 3; ++i)
      out << "{\"study_id\": \"te" << i << "\", \"split\": \"test\", \"text\": \""
          << rrg::kDefaultConstantReport << "\"}\n";
  }
  rrg::BenchmarkConfig config;
  config.corpus_path = path;
  rrg::BaselineSpec constant;
  constant.kind = "constant";
  config.baselines = {constant};
  auto table = rrg::run_benchmark(config);
  REQUIRE(table.rows.size() == 1);
  CHECK(*table.rows[0].b1 == doctest::Approx(1.0));
  CHECK(*table.rows[0].b4 == doctest::Approx(1.0));
  CHECK(*table.rows[0].b == doctest::Approx(1.0));
  CHECK(*table.rows[0].rouge_l == doctest::Approx(1.0));
  std::remove(path.c_str());
}

TEST_CASE("constant baseline rebuilt from the corpus via config n") {
  rrg::BenchmarkConfig config;
  config.corpus_path = kFixture;
  rrg::BaselineSpec constant;
  constant.kind = "constant";
  constant.n = 1;  // top normal train sentence: "the lungs are clear."
  config.baselines = {constant};
  auto table = rrg::run_benchmark(config);
  REQUIRE(table.rows.size() == 1);
  // test study s07 is exactly that sentence, so the metrics see overlap
  CHECK(*table.rows[0].b1 > 0.0);

  // round trip keeps the rebuild parameter
  auto parsed = rrg::parse_config(rrg::serialize_config(config));
  CHECK(parsed == config);
}

TEST_CASE("row values do not depend on baseline order") {
  rrg::BenchmarkConfig forward = mini_config();
  rrg::BenchmarkConfig backward = mini_config();
  std::swap(backward.baselines[0], backward.baselines[1]);
  auto a = rrg::run_benchmark(forward);
  auto b = rrg::run_benchmark(backward);
  REQUIRE(a.rows.size() == 2);
  REQUIRE(b.rows.size() == 2);
  CHECK(a.rows[0].system == b.rows[1].system);
  CHECK(*a.rows[0].b1 == *b.rows[1].b1);
  CHECK(*a.rows[0].cider_d == *b.rows[1].cider_d);
  CHECK(*a.rows[1].auc == *b.rows[0].auc);
}

TEST_CASE("benchmark output is byte-identical across runs") {
  for (rrg::TableFormat format : {rrg::TableFormat::Markdown, rrg::TableFormat::Csv,
                                  rrg::TableFormat::Json}) {
    auto first = rrg::render_table(rrg::run_benchmark(mini_config()), format);
    auto second = rrg::render_table(rrg::run_benchmark(mini_config()), format);
    CHECK(first == second);
  }
}

TEST_CASE("nn baseline through the harness") {
  rrg::BenchmarkConfig config;
  config.corpus_path = kFixture;
  rrg::BaselineSpec nn;
  nn.kind = "nn";
  nn.features_path = kFeatures;
  config.baselines = {nn};
  auto table = rrg::run_benchmark(config);
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0].system == "Nearest-neighbor");

  // errors are rethrown with the offending system named
  config.baselines[0].features_path = "/nonexistent.csv";
  try {
    rrg::run_benchmark(config);
    CHECK(false);
  } catch (const rrg::Error& e) {
    CHECK(std::string(e.what()).find("nn") != std::string::npos);
  }
}

TEST_CASE("reference rows are marked and not computed") {
  rrg::BenchmarkConfig config = mini_config();
  config.reference_rows = true;
  auto table = rrg::run_benchmark(config);
  REQUIRE(table.reference_rows.size() == 6);
  CHECK(table.reference_rows[0].system == "Liu et al. (not computed)");
  CHECK_FALSE(table.reference_rows[0].computed);
  CHECK_FALSE(table.reference_rows[0].auc.has_value());

  std::string md = rrg::render_table(table, rrg::TableFormat::Markdown);
  CHECK(md.find("| Liu et al. (not computed) | 0.369 |") != std::string::npos);
  CHECK(md.find("| Xue et al. (not computed) | 0.477 | 0.332 | 0.243 | 0.189 | 0.310 "
                "| 0.380 | - | - | - |") != std::string::npos);
}

TEST_CASE("a table of reference rows only renders the published constants") {
  rrg::ScoreTable table;
  rrg::BenchmarkConfig config = mini_config();
  config.reference_rows = true;
  table = rrg::run_benchmark(config);
  table.rows.clear();  // display-only table
  std::string md = rrg::render_table(table, rrg::TableFormat::Markdown);
  CHECK(md.find("| KERP (not computed) | 0.482 |") != std::string::npos);
  CHECK(md.find("| Constant |") == std::string::npos);
}

TEST_CASE("render formats") {
  auto table = rrg::run_benchmark(mini_config());
  std::string md = rrg::render_table(table, rrg::TableFormat::Markdown);
  CHECK(md.find("| Model | B-1 | B-2 | B-3 | B-4 | B | R-L | C-D | Acc | AUC |") !=
        std::string::npos);
  CHECK(md.find("Config:") != std::string::npos);

  std::string csv = rrg::render_table(table, rrg::TableFormat::Csv);
  CHECK(csv.rfind("system,B-1,B-2,B-3,B-4,B,R-L,C-D,Acc,AUC,warnings\n", 0) == 0);

  std::string js = rrg::render_table(table, rrg::TableFormat::Json);
  auto doc = nlohmann::json::parse(js);
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["system"] == "Constant");
  CHECK(doc["config"] == table.config_snapshot);
}

TEST_CASE("environment seed override is applied and recorded") {
  setenv("RRGBENCH_SEED", "99", 1);
  rrg::BenchmarkConfig config = mini_config();
  config.baselines[1].seed = 1;  // would differ without the override
  auto with_override = rrg::run_benchmark(config);
  unsetenv("RRGBENCH_SEED");

  rrg::BenchmarkConfig plain = mini_config();
  plain.baselines[1].seed = 99;
  auto expected = rrg::run_benchmark(plain);
  CHECK(*with_override.rows[1].b1 == *expected.rows[1].b1);
  REQUIRE(with_override.notes.size() == 1);
  CHECK(with_override.notes[0].find("RRGBENCH_SEED") != std::string::npos);
  CHECK(with_override.config_snapshot.find("seed = 99") != std::string::npos);
}

TEST_CASE("tables replay from their embedded config snapshot") {
  auto table = rrg::run_benchmark(mini_config());
  auto replayed = rrg::run_benchmark(rrg::parse_config(table.config_snapshot));
  CHECK(rrg::render_table(replayed, rrg::TableFormat::Markdown) ==
        rrg::render_table(table, rrg::TableFormat::Markdown));
  CHECK(replayed.config_snapshot == table.config_snapshot);
}

TEST_CASE("golden run on the bundled mini corpus") {
  // Frozen from the first verified build and reviewed by hand. Paths in the
  // golden config are repo-relative, so resolve from the source tree.
  unsetenv("RRGBENCH_SEED");
  auto slurp = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  std::string here = std::filesystem::current_path().string();
  std::filesystem::current_path(RRG_SOURCE_DIR);
  auto config = rrg::load_config("data/golden/mini_config.ini");
  auto table = rrg::run_benchmark(config);
  std::string md = rrg::render_table(table, rrg::TableFormat::Markdown);
  std::string js = rrg::render_table(table, rrg::TableFormat::Json);
  std::string want_md = slurp("data/golden/mini_table.md");
  std::string want_js = slurp("data/golden/mini_table.json");
  std::filesystem::current_path(here);
  CHECK(md == want_md);
  CHECK(js == want_js);
}

TEST_CASE("corpus_report on the bundled fixture") {
  auto corpus = rrg::load_corpus(kFixture, rrg::CorpusFormat::JsonLines);
  auto stats = rrg::corpus_report(corpus, rrg::default_lexicon());
  CHECK(stats.reports == 10);
  CHECK(stats.train_reports == 6);
  CHECK(stats.test_reports == 4);
  CHECK(stats.vocabulary == 17);
  CHECK(stats.sentences == 13);
  // abnormal sentences: the two effusions and the enlarged silhouette
  CHECK(stats.normal_fraction == doctest::Approx(10.0 / 13.0));
  REQUIRE(!stats.top_sentences.empty());
  CHECK(stats.top_sentences[0].first == "the lungs are clear");
  CHECK(stats.top_sentences[0].second == 3);
}
