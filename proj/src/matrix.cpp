#include "rr/matrix.hpp"

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

#include <spdlog/spdlog.h>

#include "rr/error.hpp"
#include "rr/text.hpp"

namespace fs = std::filesystem;

namespace rr {

Pool::Pool(std::vector<DatasetId> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (members_.empty()) throw ConfigError("a pool needs at least one dataset");
}

Pool Pool::parse(std::string_view name) {
  std::vector<DatasetId> members;
  for (const auto& part : text::split(name, '+')) {
    const DatasetId d = parse_dataset_or_throw(text::trim(part));
    if (std::find(members.begin(), members.end(), d) != members.end())
      throw ConfigError("pool '" + std::string(name) + "' repeats " + std::string(to_string(d)));
    members.push_back(d);
  }
  return Pool(std::move(members));
}

bool Pool::contains(DatasetId d) const {
  return std::find(members_.begin(), members_.end(), d) != members_.end();
}

std::string Pool::name() const {
  std::string out;
  for (DatasetId d : members_) {
    if (!out.empty()) out += '+';
    out += to_string(d);
  }
  return out;
}

std::vector<Pool> enumerate_pools(std::span<const DatasetId> datasets) {
  std::vector<DatasetId> ids(datasets.begin(), datasets.end());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  if (ids.empty()) throw ConfigError("enumerate_pools: no datasets");
  std::vector<Pool> pools;
  const std::size_t n = ids.size();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<DatasetId> members;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) members.push_back(ids[i]);
    }
    pools.emplace_back(std::move(members));
  }
  std::sort(pools.begin(), pools.end());
  return pools;
}

SvmBackend::SvmBackend(std::string id, SvmGridSpec grid, FeatureOptions features)
    : id_(std::move(id)), grid_(std::move(grid)), features_(features) {}

CellOutput SvmBackend::run(const CellInput& input, const fs::path& work_dir) const {
  const auto grid = grid_.expand();
  GridSearchResult search = grid_search(input.train, input.validation, grid, features_);
  CellOutput out;
  for (const auto& [target, records] : input.test) {
    auto& rows = out.predictions[target];
    rows.reserve(records.size());
    for (const auto& r : records) {
      const Prediction p = predict_text(search.model, r.text);
      rows.push_back(PredictionRow{r.doc_id, r.sent_index, p.label, p.margin});
    }
  }
  out.details["chosen"] = {{"C", search.chosen.C},
                           {"class_weight", to_string(search.chosen.class_weight)},
                           {"max_iterations", search.chosen.max_iterations}};
  out.details["validation_f1"] = search.validation_f1;
  out.details["epochs"] = search.model.info.epochs;
  out.details["vocabulary_size"] = search.model.vocabulary->size();
  if (!work_dir.empty()) {
    const fs::path model_path = work_dir / "model.json";
    save_model(model_path, search.model);
    out.details["model_path"] = model_path.string();
  }
  return out;
}

ExternalBackend::ExternalBackend(BackendRegistration registration) : reg_(std::move(registration)) {}

CellOutput ExternalBackend::run(const CellInput& input, const fs::path& work_dir) const {
  if (work_dir.empty()) throw BackendError("external backend " + reg_.backend_id + " needs a work dir");
  const std::string job_base = reg_.backend_id + "/" + input.pool.name();

  const fs::path train_dir = work_dir / "train";
  fs::create_directories(train_dir);
  JobManifest train;
  train.job_id = job_base + "/train";
  train.mode = JobMode::Train;
  train.train_path = train_dir / "train.jsonl";
  train.validation_path = train_dir / "validation.jsonl";
  train.output_path = train_dir / "model";
  train.config = reg_.config;
  write_job_data(train.train_path, input.train, true);
  write_job_data(train.validation_path, input.validation, true);
  invoke_backend(reg_, write_job_manifest(train, train_dir));

  CellOutput out;
  out.details["model_path"] = train.output_path.string();
  for (const auto& [target, records] : input.test) {
    const fs::path dir = work_dir / ("predict-" + std::string(to_string(target)));
    fs::create_directories(dir);
    JobManifest job;
    job.job_id = job_base + "/predict-" + std::string(to_string(target));
    job.mode = JobMode::Predict;
    job.predict_path = dir / "predict.jsonl";
    job.output_path = dir / "predictions.jsonl";
    job.model_path = train.output_path;
    job.config = reg_.config;
    write_job_data(job.predict_path, records, false);
    out.predictions[target] = invoke_backend(reg_, write_job_manifest(job, dir)).predictions;
  }
  return out;
}

const CellResult* TransferMatrix::find(std::string_view backend, const Pool& pool,
                                       DatasetId target) const {
  for (const auto& c : cells) {
    if (c.backend == backend && c.pool == pool && c.target == target) return &c;
  }
  return nullptr;
}

std::size_t TransferMatrix::failed_cells() const {
  return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.ok; }));
}

bool TransferMatrix::complete() const {
  if (cells.size() != backends.size() * pools.size() * targets.size()) return false;
  for (const auto& p : pools)
    for (const auto& b : backends)
      for (DatasetId t : targets)
        if (const CellResult* c = find(b, p, t); !c || !c->ok) return false;
  return true;
}

namespace {

std::vector<SentenceRecord> concat_fold(std::span<const Corpus> corpora, const Pool& pool,
                                        const SplitAssignment& assignment, Fold fold) {
  std::vector<SentenceRecord> out;
  for (DatasetId d : pool.members()) {
    for (const auto& c : corpora) {
      if (c.dataset() != d) continue;
      auto part = materialize_fold(c, assignment, fold);
      out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
  }
  return out;
}

std::string prediction_audit_jsonl(const std::vector<SentenceRecord>& gold,
                                   const std::vector<PredictionRow>& rows) {
  std::map<SentenceKey, const PredictionRow*> by_key;
  for (const auto& r : rows) by_key[{r.doc_id, r.sent_index}] = &r;
  std::string out;
  for (const auto& g : gold) {
    const PredictionRow* p = by_key.at({g.doc_id, g.sent_index});
    nlohmann::ordered_json j;
    j["dataset"] = to_string(g.dataset);
    j["doc_id"] = g.doc_id;
    j["sent_index"] = g.sent_index;
    j["gold"] = to_string(*g.meta_label);
    j["predicted"] = to_string(p->predicted);
    j["score"] = p->score;
    out += j.dump();
    out += '\n';
  }
  return out;
}

struct Job {
  std::size_t backend;
  std::size_t pool;
};

}  // namespace

TransferMatrix run_transfer_matrix(std::span<const Corpus> corpora, const SplitAssignment& assignment,
                                   std::span<const std::shared_ptr<const Backend>> backends,
                                   const MatrixOptions& options) {
  if (corpora.empty()) throw ConfigError("run_transfer_matrix: no corpora");
  if (backends.empty()) throw ConfigError("run_transfer_matrix: no backends");

  std::vector<DatasetId> present;
  for (const auto& c : corpora) {
    if (std::find(present.begin(), present.end(), c.dataset()) != present.end())
      throw ConfigError("run_transfer_matrix: dataset " + std::string(to_string(c.dataset())) +
                        " given twice");
    present.push_back(c.dataset());
    for (const auto& doc : c.documents()) {
      for (const auto& s : doc.sentences)
        if (!s.meta_label)
          throw ConfigError("run_transfer_matrix: corpus " + std::string(to_string(c.dataset())) +
                            " is not recast");
    }
  }
  std::sort(present.begin(), present.end());

  TransferMatrix matrix;
  for (const auto& b : backends) {
    if (std::find(matrix.backends.begin(), matrix.backends.end(), b->id()) != matrix.backends.end())
      throw ConfigError("duplicate backend id '" + b->id() + "'");
    matrix.backends.push_back(b->id());
  }
  matrix.pools = options.pools.empty() ? enumerate_pools(present) : options.pools;
  std::sort(matrix.pools.begin(), matrix.pools.end());
  matrix.targets = options.targets.empty() ? present : options.targets;
  std::sort(matrix.targets.begin(), matrix.targets.end());
  auto is_present = [&](DatasetId d) {
    return std::find(present.begin(), present.end(), d) != present.end();
  };
  for (const auto& p : matrix.pools)
    for (DatasetId d : p.members())
      if (!is_present(d)) throw ConfigError("pool " + p.name() + " references a missing corpus");
  for (DatasetId t : matrix.targets)
    if (!is_present(t)) throw ConfigError("target " + std::string(to_string(t)) + " has no corpus");

  std::map<DatasetId, std::vector<SentenceRecord>> test_folds;
  for (DatasetId t : matrix.targets) test_folds[t] = concat_fold(corpora, Pool({t}), assignment, Fold::Test);

  fs::path jobs_root;
  bool temp_jobs = false;
  if (options.run_dir) {
    jobs_root = *options.run_dir / "jobs";
  } else {
    static std::atomic<unsigned> counter{0};
    jobs_root = fs::temp_directory_path() /
                ("rr-jobs-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    temp_jobs = true;
  }

  std::vector<Job> jobs;
  for (std::size_t p = 0; p < matrix.pools.size(); ++p)
    for (std::size_t b = 0; b < backends.size(); ++b) jobs.push_back({b, p});

  std::vector<std::vector<CellResult>> results(jobs.size());
  std::vector<nlohmann::json> details(jobs.size());
  std::mutex registry_mutex;
  std::atomic<std::size_t> next{0};

  auto worker = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= jobs.size()) return;
      const Backend& backend = *backends[jobs[k].backend];
      const Pool& pool = matrix.pools[jobs[k].pool];

      CellInput input;
      input.pool = pool;
      input.train = concat_fold(corpora, pool, assignment, Fold::Train);
      input.validation = concat_fold(corpora, pool, assignment, Fold::Validation);
      input.test = test_folds;

      fs::path work_dir;
      if (options.run_dir || backend.needs_work_dir()) work_dir = jobs_root / backend.id() / pool.name();
      std::vector<CellResult>& cells = results[k];
      try {
        if (!work_dir.empty()) fs::create_directories(work_dir);
        CellOutput out = backend.run(input, work_dir);
        for (DatasetId t : matrix.targets) {
          const auto& gold = test_folds.at(t);
          const auto& rows = out.predictions.at(t);
          std::map<SentenceKey, MetaLabel> predicted;
          for (const auto& r : rows) predicted[{r.doc_id, r.sent_index}] = r.predicted;
          std::vector<MetaLabel> pred, truth;
          for (const auto& g : gold) {
            auto it = predicted.find({g.doc_id, g.sent_index});
            if (it == predicted.end())
              throw ProtocolError("no prediction for " + g.doc_id + "/" + std::to_string(g.sent_index));
            pred.push_back(it->second);
            truth.push_back(*g.meta_label);
          }
          CellResult cell{backend.id(), pool, t, true, {}, {}, {}};
          if (!gold.empty()) {
            cell.counts = confusion(pred, truth);
            cell.metrics = prf1(cell.counts);
          }
          cells.push_back(std::move(cell));
          if (options.run_dir) {
            const fs::path audit = *options.run_dir / "predictions" / backend.id() / pool.name() /
                                   (std::string(to_string(t)) + ".jsonl");
            const std::string body = prediction_audit_jsonl(gold, rows);
            std::lock_guard lock(registry_mutex);
            text::write_file(audit, body);
          }
        }
        // Registry paths are stored relative to the run directory.
        if (options.run_dir && out.details.contains("model_path"))
          out.details["model_path"] =
              fs::path(out.details["model_path"].get<std::string>()).lexically_relative(*options.run_dir).string();
        details[k] = std::move(out.details);
      } catch (const std::exception& e) {
        spdlog::error("cell {} / {} failed: {}", backend.id(), pool.name(), e.what());
        cells.clear();
        for (DatasetId t : matrix.targets) cells.push_back(CellResult{backend.id(), pool, t, false, e.what(), {}, {}});
        details[k] = {{"error", e.what()}};
      }
      spdlog::info("cell {} / {} done", backend.id(), pool.name());
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.parallelism, jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }

  for (auto& r : results)
    for (auto& c : r) matrix.cells.push_back(std::move(c));

  nlohmann::json cell_details = nlohmann::json::object();
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    cell_details[matrix.backends[jobs[k].backend] + "|" + matrix.pools[jobs[k].pool].name()] = details[k];
  }
  matrix.metadata["seed"] = assignment.seed;
  matrix.metadata["ratios"] = {assignment.ratios.train, assignment.ratios.validation,
                               assignment.ratios.test};
  matrix.metadata["validation_policy"] = "pooled";
  matrix.metadata["average_policy"] = "mean over all targets, in-domain included";
  matrix.metadata["cells"] = std::move(cell_details);

  if (temp_jobs) {
    std::error_code ec;
    fs::remove_all(jobs_root, ec);
  }
  if (options.run_dir) {
    text::write_file(*options.run_dir / "metrics.json", matrix_to_json(matrix).dump(2) + "\n");
  }
  return matrix;
}

nlohmann::json matrix_to_json(const TransferMatrix& m) {
  nlohmann::ordered_json j;
  j["format"] = "rr-transfer-matrix";
  j["version"] = 1;
  j["backends"] = m.backends;
  nlohmann::ordered_json pools = nlohmann::ordered_json::array();
  for (const auto& p : m.pools) pools.push_back(p.name());
  j["pools"] = pools;
  nlohmann::ordered_json targets = nlohmann::ordered_json::array();
  for (DatasetId t : m.targets) targets.push_back(to_string(t));
  j["targets"] = targets;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (const auto& c : m.cells) {
    nlohmann::ordered_json cj;
    cj["pool"] = c.pool.name();
    cj["backend"] = c.backend;
    cj["target"] = to_string(c.target);
    cj["status"] = c.ok ? "ok" : "failed";
    if (!c.ok) cj["error"] = c.error;
    cj["tp"] = c.counts.tp;
    cj["fp"] = c.counts.fp;
    cj["fn"] = c.counts.fn;
    cj["tn"] = c.counts.tn;
    cj["n_sentences"] = c.counts.n_sentences;
    cj["precision"] = c.metrics.precision;
    cj["recall"] = c.metrics.recall;
    cj["f1"] = c.metrics.f1;
    cells.push_back(std::move(cj));
  }
  j["cells"] = std::move(cells);
  j["metadata"] = m.metadata;
  return nlohmann::json::parse(j.dump());
}

TransferMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    if (j.at("format") != "rr-transfer-matrix") throw Error("not a transfer matrix");
    TransferMatrix m;
    m.backends = j.at("backends").get<std::vector<std::string>>();
    for (const auto& p : j.at("pools")) m.pools.push_back(Pool::parse(p.get<std::string>()));
    for (const auto& t : j.at("targets")) m.targets.push_back(parse_dataset_or_throw(t.get<std::string>()));
    for (const auto& cj : j.at("cells")) {
      CellResult c;
      c.pool = Pool::parse(cj.at("pool").get<std::string>());
      c.backend = cj.at("backend").get<std::string>();
      c.target = parse_dataset_or_throw(cj.at("target").get<std::string>());
      c.ok = cj.at("status") == "ok";
      if (cj.contains("error")) c.error = cj["error"].get<std::string>();
      c.counts = ConfusionCounts{cj.at("tp").get<std::size_t>(), cj.at("fp").get<std::size_t>(),
                                 cj.at("fn").get<std::size_t>(), cj.at("tn").get<std::size_t>(),
                                 cj.at("n_sentences").get<std::size_t>()};
      c.metrics = Metrics{cj.at("precision").get<double>(), cj.at("recall").get<double>(),
                          cj.at("f1").get<double>()};
      m.cells.push_back(std::move(c));
    }
    if (j.contains("metadata")) m.metadata = j["metadata"];
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed metrics file: ") + e.what());
  }
}

}  // namespace rr
