#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "rrg/corpus.hpp"

namespace rrg {

// Shared n-gram statistics for BLEU / CIDEr-D.
struct NGramCounts {
  int n = 1;
  std::map<TokenSeq, std::int64_t> counts;
};

// Sliding-window counts; |tokens| < n yields empty counts. 1 <= n <= 4.
NGramCounts ngram_counts(const TokenSeq& tokens, int n);

struct BleuScore {
  std::array<double, 4> per_n{};  // cumulative BLEU-1..4, each in [0,1]
  double mean_b = 0.0;            // arithmetic mean of per_n (the "B" column)
  double brevity_penalty = 1.0;
  std::array<double, 4> precisions{};  // corpus modified precisions p_1..p_4
};

// Corpus-level BLEU with clipped modified precision and brevity penalty,
// no smoothing: a zero precision at order k zeroes per_n[k..] (raw zeros
// are kept; a smoothed Top-words-style system could not reach B-4 = 0.000).
// Orders with no attempted n-grams anywhere are vacuously perfect, so
// identity corpora of short reports still score per_n = 1 everywhere.
// One reference per candidate.
BleuScore bleu(const std::vector<TokenSeq>& candidates,
               const std::vector<TokenSeq>& references, int max_n = 4);

// Longest common subsequence length, O(|a|*|b|) dynamic programming.
std::int64_t lcs_length(const TokenSeq& a, const TokenSeq& b);

struct RougeLScore {
  double precision = 0.0;  // corpus values are means of the per-pair values
  double recall = 0.0;
  double f = 0.0;
  double beta = 1.2;
};

// Per-pair ROUGE-L; the f/precision/recall relation holds exactly here.
RougeLScore rouge_l_pair(const TokenSeq& candidate, const TokenSeq& reference,
                         double beta = 1.2);

// Corpus ROUGE-L: arithmetic mean of per-pair F (and of per-pair P and R).
// A pair with an empty candidate or reference scores 0.
RougeLScore rouge_l(const std::vector<TokenSeq>& candidates,
                    const std::vector<TokenSeq>& references, double beta = 1.2);

struct CiderScore {
  std::array<double, 4> per_n{};  // corpus mean of per-pair, per-order values
  double value = 0.0;             // mean of per_n; in [0, 10]
};

// CIDEr-D: TF-IDF n-gram vectors (IDF over the reference set, document
// frequency clamped to >= 1), candidate counts clipped against the reference
// in the numerator, Gaussian length penalty exp(-(|c|-|r|)^2 / (2 sigma^2)),
// scaled by 10. A zero TF-IDF vector on either side gives cosine 0 for that
// order. Note a corpus whose references are all identical scores 0: every
// document frequency equals N, so all IDF weights vanish.
CiderScore cider_d(const std::vector<TokenSeq>& candidates,
                   const std::vector<TokenSeq>& references, double sigma = 6.0);

}  // namespace rrg
