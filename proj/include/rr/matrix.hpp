#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rr/backend.hpp"
#include "rr/corpus.hpp"
#include "rr/metrics.hpp"
#include "rr/splitter.hpp"
#include "rr/svm.hpp"

namespace rr {

// Non-empty set of datasets whose training folds are concatenated.
class Pool {
 public:
  Pool() = default;
  explicit Pool(std::vector<DatasetId> members);
  static Pool parse(std::string_view name);  // "BVA+CB"

  const std::vector<DatasetId>& members() const noexcept { return members_; }
  bool contains(DatasetId d) const;
  std::string name() const;

  // Canonical order: by size, then member-wise in BVA < CB < ISC order.
  auto operator<=>(const Pool& other) const {
    if (members_.size() != other.members_.size()) return members_.size() <=> other.members_.size();
    return members_ <=> other.members_;
  }
  bool operator==(const Pool&) const = default;

 private:
  std::vector<DatasetId> members_;
};

// All non-empty subsets in canonical order. Throws ConfigError when empty.
std::vector<Pool> enumerate_pools(std::span<const DatasetId> datasets);

struct CellInput {
  Pool pool;
  std::vector<SentenceRecord> train;
  std::vector<SentenceRecord> validation;
  std::map<DatasetId, std::vector<SentenceRecord>> test;  // one per target
};

struct CellOutput {
  std::map<DatasetId, std::vector<PredictionRow>> predictions;
  nlohmann::json details = nlohmann::json::object();
};

// A model family. run() trains on the pool and predicts every target's test
// fold; it may throw to signal a failed cell.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual const std::string& id() const = 0;
  // work_dir is empty when nothing needs persisting and the backend does not
  // require scratch space.
  virtual CellOutput run(const CellInput& input, const std::filesystem::path& work_dir) const = 0;
  virtual bool needs_work_dir() const { return false; }
};

class SvmBackend final : public Backend {
 public:
  SvmBackend(std::string id, SvmGridSpec grid, FeatureOptions features = {});
  const std::string& id() const override { return id_; }
  CellOutput run(const CellInput& input, const std::filesystem::path& work_dir) const override;

 private:
  std::string id_;
  SvmGridSpec grid_;
  FeatureOptions features_;
};

// Runs the model family as a subprocess through the job protocol.
class ExternalBackend final : public Backend {
 public:
  explicit ExternalBackend(BackendRegistration registration);
  const std::string& id() const override { return reg_.backend_id; }
  CellOutput run(const CellInput& input, const std::filesystem::path& work_dir) const override;
  bool needs_work_dir() const override { return true; }

 private:
  BackendRegistration reg_;
};

struct CellResult {
  std::string backend;
  Pool pool;
  DatasetId target = DatasetId::BVA;
  bool ok = false;
  std::string error;
  ConfusionCounts counts;
  Metrics metrics;

  bool operator==(const CellResult&) const = default;
};

struct TransferMatrix {
  std::vector<std::string> backends;
  std::vector<Pool> pools;
  std::vector<DatasetId> targets;
  std::vector<CellResult> cells;  // pool-major, then backend, then target
  nlohmann::json metadata = nlohmann::json::object();

  const CellResult* find(std::string_view backend, const Pool& pool, DatasetId target) const;
  std::size_t failed_cells() const;
  // Every requested cell is present and succeeded.
  bool complete() const;
};

struct MatrixOptions {
  std::vector<Pool> pools;           // empty: every pool over the corpora's datasets
  std::vector<DatasetId> targets;    // empty: every dataset present
  std::size_t parallelism = 1;
  std::optional<std::filesystem::path> run_dir;  // predictions/jobs/metrics persisted here
};

// For each backend x pool: trains on the pool's concatenated Train folds,
// selects with the concatenated Validation folds, and predicts the Test
// fold of every target. Failed cells are recorded and the run continues.
TransferMatrix run_transfer_matrix(std::span<const Corpus> corpora, const SplitAssignment& assignment,
                                   std::span<const std::shared_ptr<const Backend>> backends,
                                   const MatrixOptions& options = {});

nlohmann::json matrix_to_json(const TransferMatrix& matrix);
TransferMatrix matrix_from_json(const nlohmann::json& j);

enum class ReportFormat { TableText, Csv };
ReportFormat parse_report_format(std::string_view name);

// Rows are pools, column groups targets, sub-columns backends, followed by
// per-row averages over all targets (in-domain included). F1 uses two
// decimals; in-domain cells carry '*', failed cells read FAIL.
std::string render_report(const TransferMatrix& matrix, ReportFormat format);

}  // namespace rr
