#pragma once

#include <cstddef>
#include <span>

#include "rr/corpus.hpp"

namespace rr {

// Binary confusion counts with Facts as the positive class.
struct ConfusionCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t n_sentences = 0;

  bool operator==(const ConfusionCounts&) const = default;
};

struct Metrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const Metrics&) const = default;
};

// Throws Error on length mismatch or empty input.
ConfusionCounts confusion(std::span<const MetaLabel> predicted, std::span<const MetaLabel> gold);

// Zero-denominator convention: a ratio with an empty denominator is 0, and
// F1 is 0 when P + R = 0.
Metrics prf1(const ConfusionCounts& counts);

}  // namespace rr
