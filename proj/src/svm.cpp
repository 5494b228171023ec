#include "rr/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "rr/error.hpp"
#include "rr/metrics.hpp"
#include "rr/text.hpp"

namespace rr {

std::string_view to_string(ClassWeight w) { return w == ClassWeight::Uniform ? "uniform" : "balanced"; }

ClassWeight parse_class_weight(std::string_view name) {
  if (name == "uniform") return ClassWeight::Uniform;
  if (name == "balanced") return ClassWeight::Balanced;
  throw ConfigError("class_weight must be uniform or balanced, got '" + std::string(name) + "'");
}

std::vector<SvmHyperparams> SvmGridSpec::expand() const {
  std::vector<SvmHyperparams> grid;
  for (double c : C)
    for (ClassWeight w : class_weight)
      for (std::size_t it : max_iterations) grid.push_back(SvmHyperparams{c, w, it, tolerance});
  return grid;
}

double LinearModel::decision_value(const SparseVector& x) const {
  double v = bias;
  for (const auto& [i, xi] : x.entries) {
    if (i < weights.size()) v += weights[i] * xi;
  }
  return v;
}

namespace {

inline double sign_of(MetaLabel l) { return l == MetaLabel::Facts ? 1.0 : -1.0; }

inline double dot(std::span<const double> w, const SparseVector& x) {
  double s = 0.0;
  for (const auto& [i, xi] : x.entries) s += w[i] * xi;
  return s;
}

double squared(std::span<const double> w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return s;
}

}  // namespace

double class_weight_for(MetaLabel label, std::span<const MetaLabel> y, ClassWeight scheme) {
  if (scheme == ClassWeight::Uniform) return 1.0;
  const auto n_class = static_cast<double>(std::count(y.begin(), y.end(), label));
  if (n_class == 0) return 1.0;
  return static_cast<double>(y.size()) / (2.0 * n_class);
}

double svm_primal_objective(std::span<const SparseVector> X, std::span<const MetaLabel> y,
                            const SvmHyperparams& h, std::span<const double> weights, double bias) {
  const double cw_pos = class_weight_for(MetaLabel::Facts, y, h.class_weight);
  const double cw_neg = class_weight_for(MetaLabel::NonFacts, y, h.class_weight);
  double loss = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const double yi = sign_of(y[i]);
    const double margin = yi * (dot(weights, X[i]) + bias);
    const double cw = y[i] == MetaLabel::Facts ? cw_pos : cw_neg;
    loss += cw * std::max(0.0, 1.0 - margin);
  }
  return 0.5 * (squared(weights) + bias * bias) + h.C * loss;
}

LinearModel train_linear_svm(std::span<const SparseVector> X, std::span<const MetaLabel> y,
                             const SvmHyperparams& h, std::size_t dimension) {
  if (X.size() != y.size())
    throw TrainingError("train_linear_svm: " + std::to_string(X.size()) + " vectors, " +
                        std::to_string(y.size()) + " labels");
  if (X.empty()) throw TrainingError("train_linear_svm: empty training set");
  const auto n_pos = std::count(y.begin(), y.end(), MetaLabel::Facts);
  if (n_pos == 0 || n_pos == static_cast<long>(y.size()))
    throw TrainingError("train_linear_svm: training data contains a single class");
  if (!(h.C > 0) || h.max_iterations == 0 || !(h.tolerance > 0))
    throw TrainingError("train_linear_svm: invalid hyperparameters");
  for (const auto& x : X) {
    if (!x.entries.empty() && x.entries.back().first >= dimension)
      throw TrainingError("train_linear_svm: feature index out of range");
  }

  const std::size_t n = X.size();
  const double cw_pos = class_weight_for(MetaLabel::Facts, y, h.class_weight);
  const double cw_neg = class_weight_for(MetaLabel::NonFacts, y, h.class_weight);

  std::vector<double> upper(n), diag(n), alpha(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    upper[i] = h.C * (y[i] == MetaLabel::Facts ? cw_pos : cw_neg);
    diag[i] = X[i].squared_norm() + 1.0;  // implicit bias feature
  }

  LinearModel model;
  model.weights.assign(dimension, 0.0);
  model.hyperparams = h;
  std::vector<double>& w = model.weights;
  double& b = model.bias;
  double alpha_sum = 0.0;

  for (std::size_t epoch = 0; epoch < h.max_iterations; ++epoch) {
    for (std::size_t i = 0; i < n; ++i) {
      const double yi = sign_of(y[i]);
      const double grad = yi * (dot(w, X[i]) + b) - 1.0;
      double projected = grad;
      if (alpha[i] == 0.0)
        projected = std::min(grad, 0.0);
      else if (alpha[i] == upper[i])
        projected = std::max(grad, 0.0);
      if (projected == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - grad / diag[i], 0.0, upper[i]);
      const double step = (alpha[i] - old) * yi;
      if (step == 0.0) continue;
      alpha_sum += alpha[i] - old;
      for (const auto& [j, xj] : X[i].entries) w[j] += step * xj;
      b += step;
    }
    ++model.info.epochs;

    const double reg = 0.5 * (squared(w) + b * b);
    const double dual = reg - alpha_sum;
    model.info.dual_objective_history.push_back(dual);
    const double primal = svm_primal_objective(X, y, h, w, b);
    model.info.primal_objective = primal;
    // duality gap: primal - (sum(alpha) - reg) = primal + dual
    const double gap = primal + dual;
    if (gap <= h.tolerance * std::max(primal, std::numeric_limits<double>::min())) {
      model.info.converged = true;
      break;
    }
  }
  return model;
}

Prediction predict(const LinearModel& model, const SparseVector& x) {
  const double margin = model.decision_value(x);
  return Prediction{margin > 0.0 ? MetaLabel::Facts : MetaLabel::NonFacts, margin};
}

Prediction predict_text(const LinearModel& model, std::string_view text) {
  if (!model.vocabulary) throw Error("predict_text: model has no vocabulary");
  return predict(model, vectorize(text, *model.vocabulary));
}

GridSearchResult grid_search(std::span<const SentenceRecord> train,
                             std::span<const SentenceRecord> validation,
                             std::span<const SvmHyperparams> grid, const FeatureOptions& features) {
  if (grid.empty()) throw TrainingError("grid_search: empty grid");
  auto vocab = std::make_shared<const Vocabulary>(
      fit_vocabulary(train, features.ngram_range, features.min_df));

  auto labels_of = [](std::span<const SentenceRecord> records) {
    std::vector<MetaLabel> y;
    y.reserve(records.size());
    for (const auto& r : records) {
      if (!r.meta_label)
        throw TrainingError("grid_search: sentence " + r.doc_id + "/" +
                            std::to_string(r.sent_index) + " has no meta label");
      y.push_back(*r.meta_label);
    }
    return y;
  };
  auto vectors_of = [&](std::span<const SentenceRecord> records) {
    std::vector<SparseVector> X;
    X.reserve(records.size());
    for (const auto& r : records) X.push_back(vectorize(r.text, *vocab));
    return X;
  };
  const auto y_train = labels_of(train);
  const auto y_val = labels_of(validation);
  const auto X_train = vectors_of(train);
  const auto X_val = vectors_of(validation);

  GridSearchResult result;
  bool have_best = false;
  for (const auto& h : grid) {
    GridTrial trial{h, false, 0.0, {}};
    try {
      LinearModel model = train_linear_svm(X_train, y_train, h, vocab->size());
      double f1 = 0.0;
      if (!X_val.empty()) {
        std::vector<MetaLabel> pred;
        pred.reserve(X_val.size());
        for (const auto& x : X_val) pred.push_back(predict(model, x).label);
        f1 = prf1(confusion(pred, y_val)).f1;
      }
      trial.ok = true;
      trial.validation_f1 = f1;
      const bool better = !have_best || f1 > result.validation_f1 ||
                          (f1 == result.validation_f1 && h.C < result.chosen.C);
      if (better) {
        model.vocabulary = vocab;
        result.model = std::move(model);
        result.chosen = h;
        result.validation_f1 = f1;
        have_best = true;
      }
    } catch (const TrainingError& e) {
      trial.error = e.what();
      spdlog::warn("grid_search: C={} class_weight={} max_iterations={} skipped: {}", h.C,
                   to_string(h.class_weight), h.max_iterations, e.what());
    }
    result.trials.push_back(std::move(trial));
  }
  if (!have_best) throw TrainingError("grid_search: every combination failed");
  return result;
}

std::string model_to_json(const LinearModel& model) {
  if (!model.vocabulary) throw Error("model_to_json: model has no vocabulary");
  const Vocabulary& v = *model.vocabulary;
  nlohmann::ordered_json j;
  j["format"] = "rr-linear-model";
  j["version"] = 1;
  j["ngram_range"] = {v.ngram_range().min_n, v.ngram_range().max_n};
  j["min_df"] = v.min_df();
  j["n_train_sentences"] = v.n_train_sentences();
  j["terms"] = v.terms();
  j["df"] = v.document_frequencies();
  nlohmann::ordered_json weights = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < model.weights.size(); ++i) {
    if (model.weights[i] != 0.0) weights.push_back({i, model.weights[i]});
  }
  j["dimension"] = model.weights.size();
  j["weights"] = std::move(weights);
  j["bias"] = model.bias;
  j["hyperparams"] = {{"C", model.hyperparams.C},
                      {"class_weight", to_string(model.hyperparams.class_weight)},
                      {"max_iterations", model.hyperparams.max_iterations},
                      {"tolerance", model.hyperparams.tolerance}};
  j["training"] = {{"epochs", model.info.epochs},
                   {"converged", model.info.converged},
                   {"primal_objective", model.info.primal_objective}};
  return j.dump();
}

LinearModel model_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    if (j.at("format") != "rr-linear-model") throw Error("not a model file");
    if (j.at("version") != 1) throw Error("unsupported model version");
    const NgramRange range{j.at("ngram_range").at(0).get<int>(), j.at("ngram_range").at(1).get<int>()};
    LinearModel model;
    model.vocabulary = std::make_shared<const Vocabulary>(
        j.at("terms").get<std::vector<std::string>>(), j.at("df").get<std::vector<std::size_t>>(),
        j.at("n_train_sentences").get<std::size_t>(), range, j.at("min_df").get<std::size_t>());
    model.weights.assign(j.at("dimension").get<std::size_t>(), 0.0);
    for (const auto& entry : j.at("weights")) {
      const auto i = entry.at(0).get<std::size_t>();
      if (i >= model.weights.size()) throw Error("weight index out of range");
      model.weights[i] = entry.at(1).get<double>();
    }
    model.bias = j.at("bias").get<double>();
    const auto& h = j.at("hyperparams");
    model.hyperparams = SvmHyperparams{h.at("C").get<double>(),
                                       parse_class_weight(h.at("class_weight").get<std::string>()),
                                       h.at("max_iterations").get<std::size_t>(),
                                       h.at("tolerance").get<double>()};
    const auto& t = j.at("training");
    model.info.epochs = t.at("epochs").get<std::size_t>();
    model.info.converged = t.at("converged").get<bool>();
    model.info.primal_objective = t.at("primal_objective").get<double>();
    return model;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const LinearModel& model) {
  text::write_file(path, model_to_json(model));
}

LinearModel load_model(const std::filesystem::path& path) {
  return model_from_json(text::read_file(path));
}

}  // namespace rr
