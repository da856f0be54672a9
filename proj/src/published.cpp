#include "rrg/published.hpp"

namespace rrg {

namespace {

constexpr std::optional<double> kAbsent = std::nullopt;

}  // namespace

const std::vector<PublishedRow>& published_reference_rows() {
  static const std::vector<PublishedRow> rows = {
      {"Liu et al.", {0.369, 0.246, 0.171, 0.115}, 0.225, 0.359, 1.490, 0.916, kAbsent},
      {"TieNet", {0.330, 0.194, 0.124, 0.081}, 0.182, 0.311, 1.335, 0.902, kAbsent},
      {"KERP", {0.482, 0.325, 0.226, 0.162}, 0.298, 0.339, 0.280, kAbsent, kAbsent},
      {"Xue et al.", {0.477, 0.332, 0.243, 0.189}, 0.310, 0.380, kAbsent, kAbsent, kAbsent},
      {"CNN-LSTM", {0.379, 0.239, 0.164, 0.117}, 0.225, 0.338, 0.284, 0.912, 0.505},
      {"CNN-LSTM-att", {0.361, 0.226, 0.152, 0.106}, 0.211, 0.314, 0.187, 0.918, 0.508},
  };
  return rows;
}

const PublishedRow& published_constant_row() {
  static const PublishedRow row = {
      "Constant", {0.455, 0.312, 0.223, 0.165}, 0.289, 0.357, 0.293, 0.915, 0.500};
  return row;
}

const PublishedRow& published_random_row() {
  static const PublishedRow row = {
      "Random", {0.362, 0.197, 0.117, 0.075}, 0.188, 0.264, 0.112, 0.894, 0.508};
  return row;
}

const PublishedRow& published_nearest_neighbor_row() {
  static const PublishedRow row = {
      "Nearest-neighbor", {0.383, 0.220, 0.142, 0.100}, 0.211, 0.288, 0.230, 0.903, 0.518};
  return row;
}

const PublishedRow& published_top_sentences_row() {
  static const PublishedRow row = {
      "Top-sentences-100", {0.347, 0.211, 0.138, 0.096}, 0.198, 0.281, 0.166, 0.911, 0.498};
  return row;
}

const PublishedRow& published_top_words_row() {
  static const PublishedRow row = {
      "Top-words-50", {0.375, 0.102, 0.019, 0.000}, 0.124, 0.224, 0.075, 0.835, 0.509};
  return row;
}

const PublishedRow& published_liu_row() { return published_reference_rows()[0]; }

}  // namespace rrg
