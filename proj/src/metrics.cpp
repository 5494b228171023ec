#include "rr/metrics.hpp"

#include <string>

#include "rr/error.hpp"

namespace rr {

ConfusionCounts confusion(std::span<const MetaLabel> predicted, std::span<const MetaLabel> gold) {
  if (predicted.size() != gold.size())
    throw Error("confusion: " + std::to_string(predicted.size()) + " predictions for " +
                std::to_string(gold.size()) + " gold labels");
  if (gold.empty()) throw Error("confusion: empty evaluation set");
  ConfusionCounts c;
  c.n_sentences = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const bool pred_pos = predicted[i] == MetaLabel::Facts;
    const bool gold_pos = gold[i] == MetaLabel::Facts;
    if (pred_pos && gold_pos)
      ++c.tp;
    else if (pred_pos)
      ++c.fp;
    else if (gold_pos)
      ++c.fn;
    else
      ++c.tn;
  }
  return c;
}

Metrics prf1(const ConfusionCounts& c) {
  Metrics m;
  const auto tp = static_cast<double>(c.tp);
  if (c.tp + c.fp > 0) m.precision = tp / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) m.recall = tp / static_cast<double>(c.tp + c.fn);
  if (m.precision + m.recall > 0) m.f1 = 2 * m.precision * m.recall / (m.precision + m.recall);
  return m;
}

}  // namespace rr
