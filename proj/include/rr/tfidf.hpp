#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rr/corpus.hpp"

namespace rr {

// Lowercased maximal runs of Unicode letters and digits.
std::vector<std::string> tokenize(std::string_view text);

struct NgramRange {
  int min_n = 1;
  int max_n = 3;
  bool operator==(const NgramRange&) const = default;
};

// Space-joined n-grams of `tokens` for n in [range.min_n, range.max_n].
std::vector<std::string> ngrams(std::span<const std::string> tokens, NgramRange range);

struct SparseVector {
  std::vector<std::pair<std::uint32_t, double>> entries;  // strictly increasing index

  bool empty() const noexcept { return entries.empty(); }
  double squared_norm() const;
  bool operator==(const SparseVector&) const = default;
};

// N-gram vocabulary with per-term sentence frequencies. Terms are indexed
// densely in lexicographic order.
class Vocabulary {
 public:
  Vocabulary() = default;
  Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> document_frequency,
             std::size_t n_train_sentences, NgramRange range, std::size_t min_df);

  std::size_t size() const noexcept { return terms_.size(); }
  std::optional<std::uint32_t> index_of(std::string_view term) const;
  const std::string& term(std::size_t i) const { return terms_[i]; }
  std::size_t document_frequency(std::size_t i) const { return df_[i]; }
  // ln((1 + N) / (1 + df)) + 1
  double idf(std::size_t i) const { return idf_[i]; }
  std::size_t n_train_sentences() const noexcept { return n_train_; }
  NgramRange ngram_range() const noexcept { return range_; }
  std::size_t min_df() const noexcept { return min_df_; }
  const std::vector<std::string>& terms() const noexcept { return terms_; }
  const std::vector<std::size_t>& document_frequencies() const noexcept { return df_; }

 private:
  std::vector<std::string> terms_;
  std::vector<std::size_t> df_;
  std::vector<double> idf_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::size_t n_train_ = 0;
  NgramRange range_;
  std::size_t min_df_ = 1;
};

// Throws TrainingError when `train` is empty or yields no n-grams.
Vocabulary fit_vocabulary(std::span<const std::string> train, NgramRange range = {},
                          std::size_t min_df = 1);
Vocabulary fit_vocabulary(std::span<const SentenceRecord> train, NgramRange range = {},
                          std::size_t min_df = 1);

// tf * idf over in-vocabulary n-grams, L2-normalized; zero vector when no
// n-gram is known.
SparseVector vectorize(std::string_view text, const Vocabulary& vocab);

}  // namespace rr
