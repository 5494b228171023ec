#include "rr/tfidf.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "rr/error.hpp"
#include "rr/text.hpp"

namespace rr {

std::vector<std::string> tokenize(std::string_view text) { return text::word_tokens(text); }

std::vector<std::string> ngrams(std::span<const std::string> tokens, NgramRange range) {
  std::vector<std::string> out;
  for (int n = range.min_n; n <= range.max_n; ++n) {
    const auto len = static_cast<std::size_t>(n);
    if (tokens.size() < len) break;
    for (std::size_t i = 0; i + len <= tokens.size(); ++i) {
      std::string gram = tokens[i];
      for (std::size_t k = 1; k < len; ++k) {
        gram += ' ';
        gram += tokens[i + k];
      }
      out.push_back(std::move(gram));
    }
  }
  return out;
}

double SparseVector::squared_norm() const {
  double s = 0.0;
  for (const auto& [_, v] : entries) s += v * v;
  return s;
}

Vocabulary::Vocabulary(std::vector<std::string> terms, std::vector<std::size_t> df,
                       std::size_t n_train, NgramRange range, std::size_t min_df)
    : terms_(std::move(terms)), df_(std::move(df)), n_train_(n_train), range_(range),
      min_df_(min_df) {
  if (terms_.size() != df_.size()) throw Error("vocabulary: terms/df size mismatch");
  if (!std::is_sorted(terms_.begin(), terms_.end()))
    throw Error("vocabulary: terms must be lexicographically sorted");
  idf_.reserve(terms_.size());
  index_.reserve(terms_.size());
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    idf_.push_back(std::log((1.0 + static_cast<double>(n_train_)) /
                            (1.0 + static_cast<double>(df_[i]))) +
                   1.0);
    if (!index_.emplace(terms_[i], static_cast<std::uint32_t>(i)).second)
      throw Error("vocabulary: duplicate term '" + terms_[i] + "'");
  }
}

std::optional<std::uint32_t> Vocabulary::index_of(std::string_view term) const {
  auto it = index_.find(std::string(term));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Vocabulary fit_vocabulary(std::span<const std::string> train, NgramRange range, std::size_t min_df) {
  if (train.empty()) throw TrainingError("cannot fit a vocabulary on an empty training set");
  if (range.min_n < 1 || range.max_n < range.min_n) throw TrainingError("invalid n-gram range");
  std::map<std::string, std::size_t> df;
  for (const auto& sentence : train) {
    const auto tokens = tokenize(sentence);
    auto grams = ngrams(tokens, range);
    std::sort(grams.begin(), grams.end());
    grams.erase(std::unique(grams.begin(), grams.end()), grams.end());
    for (auto& g : grams) ++df[std::move(g)];
  }
  std::vector<std::string> terms;
  std::vector<std::size_t> counts;
  for (auto& [term, count] : df) {
    if (count < min_df) continue;
    terms.push_back(term);
    counts.push_back(count);
  }
  if (terms.empty()) throw TrainingError("vocabulary is empty (no n-gram reaches min_df)");
  return Vocabulary(std::move(terms), std::move(counts), train.size(), range, min_df);
}

Vocabulary fit_vocabulary(std::span<const SentenceRecord> train, NgramRange range, std::size_t min_df) {
  std::vector<std::string> texts;
  texts.reserve(train.size());
  for (const auto& r : train) texts.push_back(r.text);
  return fit_vocabulary(std::span<const std::string>(texts), range, min_df);
}

SparseVector vectorize(std::string_view text, const Vocabulary& vocab) {
  const auto tokens = tokenize(text);
  std::map<std::uint32_t, std::size_t> tf;
  for (const auto& g : ngrams(tokens, vocab.ngram_range())) {
    if (auto idx = vocab.index_of(g)) ++tf[*idx];
  }
  SparseVector v;
  v.entries.reserve(tf.size());
  double sq = 0.0;
  for (const auto& [idx, count] : tf) {
    const double w = static_cast<double>(count) * vocab.idf(idx);
    v.entries.emplace_back(idx, w);
    sq += w * w;
  }
  if (sq > 0.0) {
    const double norm = std::sqrt(sq);
    for (auto& [_, w] : v.entries) w /= norm;
  }
  return v;
}

}  // namespace rr
