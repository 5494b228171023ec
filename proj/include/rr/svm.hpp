#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rr/corpus.hpp"
#include "rr/tfidf.hpp"

namespace rr {

enum class ClassWeight { Uniform, Balanced };

std::string_view to_string(ClassWeight w);
ClassWeight parse_class_weight(std::string_view name);

struct SvmHyperparams {
  double C = 1.0;
  ClassWeight class_weight = ClassWeight::Uniform;
  std::size_t max_iterations = 1000;
  double tolerance = 1e-4;

  bool operator==(const SvmHyperparams&) const = default;
};

struct SvmGridSpec {
  std::vector<double> C = {0.01, 0.1, 1, 10, 100};
  std::vector<ClassWeight> class_weight = {ClassWeight::Uniform, ClassWeight::Balanced};
  std::vector<std::size_t> max_iterations = {1000, 10000};
  double tolerance = 1e-4;

  // Cartesian product, C outermost then class weight then iterations.
  std::vector<SvmHyperparams> expand() const;
  bool operator==(const SvmGridSpec&) const = default;
};

struct TrainingInfo {
  std::size_t epochs = 0;
  bool converged = false;
  double primal_objective = 0.0;
  // 0.5 * |w~|^2 - sum(alpha) after each epoch; non-increasing.
  std::vector<double> dual_objective_history;
};

// Linear classifier over TF-IDF features. The vocabulary is attached once
// the model is bound to text (grid_search, model files).
struct LinearModel {
  std::shared_ptr<const Vocabulary> vocabulary;
  std::vector<double> weights;
  double bias = 0.0;
  SvmHyperparams hyperparams;
  TrainingInfo info;

  double decision_value(const SparseVector& x) const;
};

struct Prediction {
  MetaLabel label = MetaLabel::NonFacts;
  double margin = 0.0;
};

// Per-example weight under the hyperparams' class weighting:
// 1 (uniform) or n_total / (2 n_class) (balanced).
double class_weight_for(MetaLabel label, std::span<const MetaLabel> y, ClassWeight scheme);

// Primal objective with the bias folded into the regularizer:
//   0.5 (|w|^2 + b^2) + C sum_i cw(y_i) max(0, 1 - y_i (w.x_i + b)).
double svm_primal_objective(std::span<const SparseVector> X, std::span<const MetaLabel> y,
                            const SvmHyperparams& h, std::span<const double> weights, double bias);

// Dual coordinate descent for the L2-regularized hinge loss, cyclic order.
// The bias is learned as the weight of an implicit always-1 feature. Stops
// when the relative duality gap drops below h.tolerance or after
// h.max_iterations epochs. Throws TrainingError on empty or single-class
// input.
LinearModel train_linear_svm(std::span<const SparseVector> X, std::span<const MetaLabel> y,
                             const SvmHyperparams& h, std::size_t dimension);

// Facts iff margin > 0.
Prediction predict(const LinearModel& model, const SparseVector& x);
Prediction predict_text(const LinearModel& model, std::string_view text);

struct GridTrial {
  SvmHyperparams hyperparams;
  bool ok = false;
  double validation_f1 = 0.0;
  std::string error;
};

struct GridSearchResult {
  LinearModel model;
  SvmHyperparams chosen;
  double validation_f1 = 0.0;
  std::vector<GridTrial> trials;
};

struct FeatureOptions {
  NgramRange ngram_range;
  std::size_t min_df = 1;
  bool operator==(const FeatureOptions&) const = default;
};

// Trains one model per combination on `train` and keeps the best validation
// F1 (ties: smaller C, then grid order). Failed combinations are skipped
// with a warning; throws TrainingError if all fail.
GridSearchResult grid_search(std::span<const SentenceRecord> train,
                             std::span<const SentenceRecord> validation,
                             std::span<const SvmHyperparams> grid, const FeatureOptions& features = {});

// Versioned JSON model artifact: vocabulary, df table, weights, bias and
// hyperparams. Doubles are written in shortest round-trip form.
std::string model_to_json(const LinearModel& model);
LinearModel model_from_json(std::string_view json);
void save_model(const std::filesystem::path& path, const LinearModel& model);
LinearModel load_model(const std::filesystem::path& path);

}  // namespace rr
