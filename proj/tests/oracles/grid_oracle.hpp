#pragma once

// Exhaustive train-all, pick-max selection over a grid, built directly on
// the trainer and the naive F1.

#include <span>
#include <vector>

#include "oracles/confusion_oracle.hpp"
#include "rr/svm.hpp"

namespace rr::oracle {

struct GridPick {
  SvmHyperparams chosen;
  double f1 = -1.0;
};

inline GridPick exhaustive_grid(std::span<const SentenceRecord> train, std::span<const SentenceRecord> validation,
                                const std::vector<SvmHyperparams>& grid) {
  const Vocabulary vocab = fit_vocabulary(train);
  std::vector<SparseVector> X, V;
  std::vector<MetaLabel> y, gold;
  for (const auto& r : train) {
    X.push_back(vectorize(r.text, vocab));
    y.push_back(*r.meta_label);
  }
  for (const auto& r : validation) {
    V.push_back(vectorize(r.text, vocab));
    gold.push_back(*r.meta_label);
  }
  std::vector<double> scores;
  for (const auto& h : grid) {
    const LinearModel m = train_linear_svm(X, y, h, vocab.size());
    std::vector<MetaLabel> pred;
    for (const auto& v : V) pred.push_back(m.decision_value(v) > 0 ? MetaLabel::Facts : MetaLabel::NonFacts);
    scores.push_back(naive_f1(count_naively(pred, gold)));
  }
  GridPick pick;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool better = scores[i] > pick.f1 || (scores[i] == pick.f1 && grid[i].C < pick.chosen.C);
    if (better) pick = {grid[i], scores[i]};
  }
  return pick;
}

}  // namespace rr::oracle
