#include "rrg/metrics.hpp"

#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "rrg/errors.hpp"
#include "rrg/rand.hpp"

using rrg::TokenSeq;

namespace {

TokenSeq toks(std::initializer_list<const char*> words) {
  TokenSeq out;
  for (const char* w : words) out.emplace_back(w);
  return out;
}

// Random token sequence over a small alphabet; repeats are frequent on
// purpose so clipping paths get exercised.
TokenSeq random_tokens(rrg::SplitMix64& rng, std::size_t max_len) {
  static const char* kAlphabet[] = {"a", "b", "c", "d", "e", "f"};
  TokenSeq out;
  std::size_t len = rng.bounded(max_len + 1);
  for (std::size_t i = 0; i < len; ++i)
    out.emplace_back(kAlphabet[rng.bounded(6)]);
  return out;
}

}  // namespace

TEST_CASE("ngram_counts basics") {
  auto counts = rrg::ngram_counts(toks({"a", "b", "a", "b"}), 2);
  CHECK(counts.counts.size() == 2);
  CHECK(counts.counts.at(toks({"a", "b"})) == 2);
  CHECK(counts.counts.at(toks({"b", "a"})) == 1);

  CHECK(rrg::ngram_counts(toks({"a"}), 2).counts.empty());
  CHECK_THROWS_AS(rrg::ngram_counts(toks({"a"}), 0), rrg::InvalidN);
  CHECK_THROWS_AS(rrg::ngram_counts(toks({"a"}), 5), rrg::InvalidN);
}

TEST_CASE("ngram_counts hand-enumerated trigrams") {
  // the lungs are clear the lungs are expanded -> six windows
  auto counts =
      rrg::ngram_counts(toks({"the", "lungs", "are", "clear", "the", "lungs", "are",
                              "expanded"}),
                        3);
  CHECK(counts.counts.size() == 5);
  CHECK(counts.counts.at(toks({"the", "lungs", "are"})) == 2);
  CHECK(counts.counts.at(toks({"lungs", "are", "clear"})) == 1);
  CHECK(counts.counts.at(toks({"are", "clear", "the"})) == 1);
  CHECK(counts.counts.at(toks({"clear", "the", "lungs"})) == 1);
  CHECK(counts.counts.at(toks({"lungs", "are", "expanded"})) == 1);
}

TEST_CASE("bleu identity and disjoint pairs") {
  std::vector<TokenSeq> cands = {toks({"a", "b", "c"}), toks({"d", "e"})};
  auto identity = rrg::bleu(cands, cands);
  for (double p : identity.per_n) CHECK(p == doctest::Approx(1.0));
  CHECK(identity.mean_b == doctest::Approx(1.0));

  auto disjoint = rrg::bleu({toks({"a", "b", "c"})}, {toks({"d", "e", "f"})});
  for (double p : disjoint.per_n) CHECK(p == 0.0);
  CHECK(disjoint.mean_b == 0.0);
}

TEST_CASE("bleu brevity penalty example") {
  // p1 = 1, BP = exp(1 - 6/3) = 1/e
  auto score = rrg::bleu({toks({"the", "cat", "sat"})},
                         {toks({"the", "cat", "sat", "on", "the", "mat"})});
  CHECK(score.precisions[0] == doctest::Approx(1.0));
  CHECK(score.brevity_penalty == doctest::Approx(std::exp(-1.0)));
  CHECK(score.per_n[0] == doctest::Approx(std::exp(-1.0)));
  CHECK(score.per_n[1] == doctest::Approx(std::exp(-1.0)));  // p2 = 2/2
  CHECK(score.per_n[2] == doctest::Approx(std::exp(-1.0)));  // p3 = 1/1
  // no 4-grams attempted: vacuously perfect, so BLEU-4 keeps the BP value
  CHECK(score.per_n[3] == doctest::Approx(std::exp(-1.0)));
}

TEST_CASE("bleu mean_b matches the published B convention") {
  // Liu et al.: mean(0.369, 0.246, 0.171, 0.115) = 0.225
  CHECK((0.369 + 0.246 + 0.171 + 0.115) / 4.0 == doctest::Approx(0.225).epsilon(0.005));
  // Constant: mean(0.455, 0.312, 0.223, 0.165) = 0.289
  CHECK((0.455 + 0.312 + 0.223 + 0.165) / 4.0 == doctest::Approx(0.289).epsilon(0.005));
  // and bleu() applies exactly that mean
  auto score = rrg::bleu({toks({"a", "b", "c", "d", "e"})},
                         {toks({"a", "b", "c", "x", "y"})});
  CHECK(score.mean_b ==
        doctest::Approx((score.per_n[0] + score.per_n[1] + score.per_n[2] +
                         score.per_n[3]) /
                        4.0));
}

TEST_CASE("bleu zeroing: a missing k-gram zeroes every order from k") {
  // shared unigrams and bigrams, but no shared trigram
  auto score = rrg::bleu({toks({"a", "b", "x", "a", "b"})},
                         {toks({"a", "b", "y", "b", "a"})});
  CHECK(score.precisions[0] > 0.0);
  CHECK(score.precisions[1] > 0.0);
  CHECK(score.precisions[2] == 0.0);
  CHECK(score.per_n[0] > 0.0);
  CHECK(score.per_n[1] > 0.0);
  CHECK(score.per_n[2] == 0.0);
  CHECK(score.per_n[3] == 0.0);
}

TEST_CASE("bleu input validation") {
  std::vector<TokenSeq> one = {toks({"a"})};
  std::vector<TokenSeq> two = {toks({"a"}), toks({"b"})};
  CHECK_THROWS_AS(rrg::bleu({}, {}), rrg::EmptyInput);
  CHECK_THROWS_AS(rrg::bleu(one, two), rrg::LengthMismatch);
}

TEST_CASE("bleu precisions match brute-force clipped counting") {
  rrg::SplitMix64 rng(2024);
  for (int round = 0; round < 200; ++round) {
    std::size_t pairs = 1 + rng.bounded(4);
    std::vector<TokenSeq> cands, refs;
    for (std::size_t i = 0; i < pairs; ++i) {
      cands.push_back(random_tokens(rng, 8));
      refs.push_back(random_tokens(rng, 8));
    }
    auto score = rrg::bleu(cands, refs);
    for (int n = 1; n <= 4; ++n) {
      double expected = oracle::corpus_precision(cands, refs, n);
      CHECK(score.precisions[n - 1] == doctest::Approx(expected).epsilon(1e-12));
    }
    for (int n = 1; n <= 4; ++n) {
      double expected = oracle::corpus_bleu(cands, refs, n);
      CHECK(score.per_n[n - 1] == doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("bleu per_n non-increasing when precisions are") {
  rrg::SplitMix64 rng(7);
  int kept = 0;
  while (kept < 100) {
    TokenSeq cand = random_tokens(rng, 10);
    TokenSeq ref = random_tokens(rng, 10);
    if (cand.empty() || ref.empty()) continue;
    std::vector<TokenSeq> cands = {cand}, refs = {ref};
    bool monotone = true;
    double prev = 2.0;
    for (int n = 1; n <= 4; ++n) {
      double p = oracle::corpus_precision(cands, refs, n);
      monotone = monotone && p <= prev;
      prev = p;
    }
    if (!monotone) continue;  // generator guarantee via rejection
    ++kept;
    auto score = rrg::bleu(cands, refs);
    for (int n = 1; n < 4; ++n)
      CHECK(score.per_n[n] <= score.per_n[n - 1] + 1e-12);
  }
}

TEST_CASE("lcs_length basics and oracle equivalence") {
  TokenSeq x = toks({"p", "q", "r"});
  CHECK(rrg::lcs_length(x, x) == 3);
  CHECK(rrg::lcs_length(toks({"a", "b", "c"}), toks({"d", "e"})) == 0);
  CHECK(rrg::lcs_length(toks({"the", "cat", "sat"}),
                        toks({"the", "cat", "on", "the", "mat"})) == 2);

  rrg::SplitMix64 rng(99);
  for (int round = 0; round < 300; ++round) {
    TokenSeq a = random_tokens(rng, 8);
    TokenSeq b = random_tokens(rng, 8);
    CHECK(rrg::lcs_length(a, b) == oracle::exhaustive_lcs(a, b));
  }
}

TEST_CASE("rouge_l identity, derived value, empty pair") {
  std::vector<TokenSeq> cands = {toks({"a", "b"}), toks({"c", "d", "e"})};
  CHECK(rrg::rouge_l(cands, cands).f == doctest::Approx(1.0));

  // P = 2/3, R = 2/5, beta = 1.2 -> F = 2.44*P*R / (R + 1.44*P)
  auto pair = rrg::rouge_l_pair(toks({"the", "cat", "sat"}),
                                toks({"the", "cat", "on", "the", "mat"}));
  CHECK(pair.precision == doctest::Approx(2.0 / 3.0));
  CHECK(pair.recall == doctest::Approx(2.0 / 5.0));
  double expected = 2.44 * (2.0 / 3.0) * (2.0 / 5.0) / (2.0 / 5.0 + 1.44 * 2.0 / 3.0);
  CHECK(pair.f == doctest::Approx(expected));
  CHECK(pair.f == doctest::Approx(0.4785).epsilon(1e-4));

  // an empty side zeroes that pair, not the corpus
  auto score = rrg::rouge_l({toks({"a"}), TokenSeq{}}, {toks({"a"}), toks({"b"})});
  CHECK(score.f == doctest::Approx(0.5));
  CHECK_THROWS_AS(rrg::rouge_l({}, {}), rrg::EmptyInput);
  CHECK_THROWS_AS(rrg::rouge_l({toks({"a"})}, {toks({"a"}), toks({"b"})}),
                  rrg::LengthMismatch);
}

TEST_CASE("cider_d trivial zero and degenerate corpora") {
  // disjoint pair scores zero in any corpus
  std::vector<TokenSeq> cands = {toks({"a", "b"}), toks({"x", "y"})};
  std::vector<TokenSeq> refs = {toks({"a", "b"}), toks({"p", "q"})};
  auto score = rrg::cider_d(cands, refs);
  CHECK(score.value > 0.0);
  auto disjoint_only = rrg::cider_d({toks({"x", "y"})}, {toks({"p", "q"})});
  CHECK(disjoint_only.value == 0.0);

  // identical references make every idf log(N/N) = 0: score collapses to 0
  std::vector<TokenSeq> same = {toks({"x", "y"}), toks({"x", "y"}), toks({"x", "y"})};
  CHECK(rrg::cider_d(same, same).value == 0.0);
}

TEST_CASE("cider_d hand-computed unigram corpus") {
  // pairs ([a],[a]) ([b],[b]) ([a],[c]); idf = log 3 everywhere; only n=1
  // is populated, so exact pair scores are 2.5, 2.5, 0.
  std::vector<TokenSeq> cands = {toks({"a"}), toks({"b"}), toks({"a"})};
  std::vector<TokenSeq> refs = {toks({"a"}), toks({"b"}), toks({"c"})};
  auto score = rrg::cider_d(cands, refs);
  CHECK(score.value == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(score.per_n[0] == doctest::Approx(10.0 * 2.0 / 3.0).epsilon(1e-12));
  CHECK(score.per_n[1] == 0.0);
}

TEST_CASE("cider_d hand-computed bigram corpus") {
  // ([a,b],[a,b]) ([a,c],[c,a]) ([b,c],[b,c])
  // unigram idf = log(3/2) for a, b, c; bigram idf = log 3, all distinct.
  // pair 1: cos=1 at n=1 and n=2 -> 10*(1+1)/4 = 5
  // pair 2: unigram sets match (cos 1), bigrams differ (cos 0) -> 2.5
  // pair 3: same as pair 1 -> 5
  std::vector<TokenSeq> cands = {toks({"a", "b"}), toks({"a", "c"}), toks({"b", "c"})};
  std::vector<TokenSeq> refs = {toks({"a", "b"}), toks({"c", "a"}), toks({"b", "c"})};
  auto score = rrg::cider_d(cands, refs);
  CHECK(score.value == doctest::Approx((5.0 + 2.5 + 5.0) / 3.0).epsilon(1e-12));
}

TEST_CASE("cider_d hand-computed clipping and length penalty") {
  // pair 1: cand [a,a,b] vs ref [a,b], idf = log 2 for every seen gram and
  // for the unseen (a,a) bigram (document frequency clamps at 1).
  //   n=1: clipped dot = 2w^2, norms w*sqrt(5) and w*sqrt(2) -> cos 2/sqrt(10)
  //   n=2: cos = 1/sqrt(2); n=3,4: reference side empty -> 0
  //   penalty = exp(-1/72)
  // pair 2: [d] vs [d] -> 2.5 exactly.
  std::vector<TokenSeq> cands = {toks({"a", "a", "b"}), toks({"d"})};
  std::vector<TokenSeq> refs = {toks({"a", "b"}), toks({"d"})};
  double pair1 = 10.0 / 4.0 * (2.0 / std::sqrt(10.0) + 1.0 / std::sqrt(2.0)) *
                 std::exp(-1.0 / 72.0);
  auto score = rrg::cider_d(cands, refs);
  CHECK(score.value == doctest::Approx((pair1 + 2.5) / 2.0).epsilon(1e-12));
}

TEST_CASE("metric ranges, identity and permutation invariance") {
  rrg::SplitMix64 rng(123456);
  for (int round = 0; round < 120; ++round) {
    std::size_t pairs = 2 + rng.bounded(6);
    std::vector<TokenSeq> cands, refs;
    for (std::size_t i = 0; i < pairs; ++i) {
      cands.push_back(random_tokens(rng, 10));
      refs.push_back(random_tokens(rng, 10));
    }
    auto bs = rrg::bleu(cands, refs);
    for (double p : bs.per_n) {
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
    auto rs = rrg::rouge_l(cands, refs);
    CHECK(rs.f >= 0.0);
    CHECK(rs.f <= 1.0);
    auto cs = rrg::cider_d(cands, refs);
    CHECK(cs.value >= 0.0);
    CHECK(cs.value <= 10.0);

    // permutation invariance: rotate the pair order
    std::vector<TokenSeq> cands2(cands.begin() + 1, cands.end());
    cands2.push_back(cands.front());
    std::vector<TokenSeq> refs2(refs.begin() + 1, refs.end());
    refs2.push_back(refs.front());
    auto bs2 = rrg::bleu(cands2, refs2);
    auto rs2 = rrg::rouge_l(cands2, refs2);
    auto cs2 = rrg::cider_d(cands2, refs2);
    for (int n = 0; n < 4; ++n)
      CHECK(std::fabs(bs.per_n[n] - bs2.per_n[n]) <= 1e-12);
    CHECK(std::fabs(rs.f - rs2.f) <= 1e-12);
    CHECK(std::fabs(cs.value - cs2.value) <= 1e-12);
  }
}
