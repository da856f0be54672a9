#include "rrg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "rrg/errors.hpp"

namespace rrg {

namespace {

constexpr char kSep = '\x1e';  // tokens never contain whitespace or controls

// Joined-string n-gram keys; cheaper than vector<string> keys in hot loops.
using GramMap = std::unordered_map<std::string, std::int64_t>;

GramMap gram_counts(const TokenSeq& tokens, int n) {
  GramMap out;
  if (static_cast<int>(tokens.size()) < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key;
    for (int k = 0; k < n; ++k) {
      if (k) key.push_back(kSep);
      key += tokens[i + k];
    }
    ++out[key];
  }
  return out;
}

void check_parallel(const std::vector<TokenSeq>& candidates,
                    const std::vector<TokenSeq>& references) {
  if (candidates.empty() || references.empty())
    throw EmptyInput("candidate/reference lists must be non-empty");
  if (candidates.size() != references.size())
    throw LengthMismatch(std::to_string(candidates.size()) + " candidates vs " +
                         std::to_string(references.size()) + " references");
}

}  // namespace

NGramCounts ngram_counts(const TokenSeq& tokens, int n) {
  if (n < 1 || n > 4) throw InvalidN("n must be in 1..4, got " + std::to_string(n));
  NGramCounts out;
  out.n = n;
  if (static_cast<int>(tokens.size()) < n) return out;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    auto begin = tokens.begin() + static_cast<std::ptrdiff_t>(i);
    TokenSeq gram(begin, begin + n);
    ++out.counts[std::move(gram)];
  }
  return out;
}

BleuScore bleu(const std::vector<TokenSeq>& candidates,
               const std::vector<TokenSeq>& references, int max_n) {
  if (max_n < 1 || max_n > 4) throw InvalidN("max_n must be in 1..4");
  check_parallel(candidates, references);

  std::array<std::int64_t, 4> clipped{}, total{};
  std::int64_t cand_len = 0, ref_len = 0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    cand_len += static_cast<std::int64_t>(candidates[i].size());
    ref_len += static_cast<std::int64_t>(references[i].size());
    for (int n = 1; n <= max_n; ++n) {
      GramMap cand = gram_counts(candidates[i], n);
      GramMap ref = gram_counts(references[i], n);
      for (const auto& [gram, count] : cand) {
        total[n - 1] += count;
        auto it = ref.find(gram);
        if (it != ref.end()) clipped[n - 1] += std::min(count, it->second);
      }
    }
  }

  BleuScore score;
  // Brevity penalty over corpus totals; candidate length clamped to >= 1 so
  // the all-empty-candidates edge stays finite (precisions are 0 there anyway).
  score.brevity_penalty =
      cand_len < ref_len
          ? std::exp(1.0 - static_cast<double>(ref_len) /
                               static_cast<double>(std::max<std::int64_t>(cand_len, 1)))
          : 1.0;
  // An order with no attempted n-grams (every candidate shorter than n) is
  // vacuously perfect: nothing was attempted, nothing was wrong. This keeps
  // per_n = 1 on identity corpora of short reports; a zero precision at a
  // populated order still zeroes everything from that order on.
  for (int n = 1; n <= max_n; ++n)
    score.precisions[n - 1] =
        total[n - 1] > 0
            ? static_cast<double>(clipped[n - 1]) / static_cast<double>(total[n - 1])
            : 1.0;

  double log_sum = 0.0;
  bool zeroed = false;
  for (int n = 1; n <= max_n; ++n) {
    double p = score.precisions[n - 1];
    if (p <= 0.0) zeroed = true;
    if (!zeroed) log_sum += std::log(p);
    score.per_n[n - 1] = zeroed ? 0.0 : score.brevity_penalty * std::exp(log_sum / n);
  }
  double sum = 0.0;
  for (int n = 1; n <= max_n; ++n) sum += score.per_n[n - 1];
  score.mean_b = sum / max_n;
  return score;
}

std::int64_t lcs_length(const TokenSeq& a, const TokenSeq& b) {
  if (a.empty() || b.empty()) return 0;
  // Two rolling rows keep memory at O(|b|).
  std::vector<std::int64_t> prev(b.size() + 1, 0), cur(b.size() + 1, 0);
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      cur[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1
                                    : std::max(prev[j], cur[j - 1]);
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

RougeLScore rouge_l_pair(const TokenSeq& candidate, const TokenSeq& reference,
                         double beta) {
  RougeLScore s;
  s.beta = beta;
  if (candidate.empty() || reference.empty()) return s;
  double lcs = static_cast<double>(lcs_length(candidate, reference));
  s.precision = lcs / static_cast<double>(candidate.size());
  s.recall = lcs / static_cast<double>(reference.size());
  if (s.precision + s.recall > 0.0) {
    double b2 = beta * beta;
    s.f = (1.0 + b2) * s.precision * s.recall / (s.recall + b2 * s.precision);
  }
  return s;
}

RougeLScore rouge_l(const std::vector<TokenSeq>& candidates,
                    const std::vector<TokenSeq>& references, double beta) {
  check_parallel(candidates, references);
  RougeLScore total;
  total.beta = beta;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    RougeLScore pair = rouge_l_pair(candidates[i], references[i], beta);
    total.precision += pair.precision;
    total.recall += pair.recall;
    total.f += pair.f;
  }
  double n = static_cast<double>(candidates.size());
  total.precision /= n;
  total.recall /= n;
  total.f /= n;
  return total;
}

CiderScore cider_d(const std::vector<TokenSeq>& candidates,
                   const std::vector<TokenSeq>& references, double sigma) {
  check_parallel(candidates, references);
  const double num_docs = static_cast<double>(references.size());
  const double log_n = std::log(num_docs);

  // Document frequencies over the reference set, per order.
  std::array<GramMap, 4> df;
  for (const TokenSeq& ref : references) {
    for (int n = 1; n <= 4; ++n) {
      for (const auto& [gram, count] : gram_counts(ref, n)) ++df[n - 1][gram];
    }
  }
  auto idf = [&](int n, const std::string& gram) {
    auto it = df[n - 1].find(gram);
    double d = it == df[n - 1].end() ? 1.0 : std::max<double>(1.0, static_cast<double>(it->second));
    return log_n - std::log(d);
  };

  CiderScore score;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const TokenSeq& cand = candidates[i];
    const TokenSeq& ref = references[i];
    double delta = static_cast<double>(cand.size()) - static_cast<double>(ref.size());
    double penalty = std::exp(-(delta * delta) / (2.0 * sigma * sigma));
    for (int n = 1; n <= 4; ++n) {
      GramMap cand_counts = gram_counts(cand, n);
      GramMap ref_counts = gram_counts(ref, n);
      double dot = 0.0, cand_norm2 = 0.0, ref_norm2 = 0.0;
      for (const auto& [gram, count] : cand_counts) {
        double w = idf(n, gram);
        double cv = static_cast<double>(count) * w;
        cand_norm2 += cv * cv;
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) {
          double rv = static_cast<double>(it->second) * w;
          dot += std::min(cv, rv) * rv;  // clipped candidate count
        }
      }
      for (const auto& [gram, count] : ref_counts) {
        double rv = static_cast<double>(count) * idf(n, gram);
        ref_norm2 += rv * rv;
      }
      double cos = 0.0;
      if (cand_norm2 > 0.0 && ref_norm2 > 0.0)
        cos = dot / (std::sqrt(cand_norm2) * std::sqrt(ref_norm2));
      score.per_n[n - 1] += cos * penalty * 10.0;
    }
  }
  double sum = 0.0;
  for (double& v : score.per_n) {
    v /= num_docs;
    sum += v;
  }
  score.value = sum / 4.0;
  return score;
}

}  // namespace rrg
