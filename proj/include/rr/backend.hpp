#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rr/corpus.hpp"

namespace rr {

inline constexpr int kProtocolVersion = 1;

enum class JobMode { Train, Predict };

std::string_view to_string(JobMode mode);

// One backend job. Train jobs read train/validation data and must create
// the model artifact at output_path. Predict jobs read predict data plus the
// artifact at model_path and write a prediction file to output_path.
struct JobManifest {
  std::string job_id;
  JobMode mode = JobMode::Train;
  int protocol_version = kProtocolVersion;
  std::filesystem::path train_path;
  std::filesystem::path validation_path;
  std::filesystem::path predict_path;
  std::filesystem::path output_path;
  std::filesystem::path model_path;
  nlohmann::json config = nlohmann::json::object();
};

struct BackendRegistration {
  std::string backend_id;
  std::vector<std::string> command;  // argv prefix; "--manifest <path>" is appended
  double timeout_seconds = 3600;
  std::map<std::string, std::string> env;
  nlohmann::json config = nlohmann::json::object();
};

// Labeled files carry the full interchange record; unlabeled ones only
// dataset, doc_id, sent_index and text.
void write_job_data(const std::filesystem::path& path, std::span<const SentenceRecord> records,
                    bool labeled);
std::vector<SentenceRecord> read_job_data(const std::filesystem::path& path);

// Validates that the paths required by the job's mode exist (ProtocolError
// otherwise) and writes <dir>/manifest.json. Returns the manifest path.
std::filesystem::path write_job_manifest(const JobManifest& job, const std::filesystem::path& dir);
JobManifest read_job_manifest(const std::filesystem::path& path);

struct SentenceKey {
  std::string doc_id;
  std::size_t sent_index = 0;
  auto operator<=>(const SentenceKey&) const = default;
};

struct PredictionRow {
  std::string doc_id;
  std::size_t sent_index = 0;
  MetaLabel predicted = MetaLabel::NonFacts;
  double score = 0.0;
  bool operator==(const PredictionRow&) const = default;
};

// Prediction file: JSON Lines {doc_id, sent_index, predicted, score}.
std::string predictions_to_jsonl(std::span<const PredictionRow> rows);
void write_predictions(const std::filesystem::path& path, std::span<const PredictionRow> rows);

// Parses a prediction file and checks it covers `requested` exactly once
// per sentence. A missing score reads as 0.0. Throws ProtocolError naming
// the offending (doc_id, sent_index).
std::vector<PredictionRow> parse_predictions(std::string_view jsonl,
                                             std::span<const SentenceKey> requested);
std::vector<PredictionRow> parse_predictions(const std::filesystem::path& file,
                                             std::span<const SentenceKey> requested);

struct InvocationResult {
  std::filesystem::path output_path;
  std::filesystem::path stdout_path;
  std::filesystem::path stderr_path;
  std::vector<PredictionRow> predictions;  // predict jobs only
};

// Runs `<command> --manifest <path>` with stdout/stderr captured next to the
// manifest. Success requires exit code 0 and a well-formed output: the model
// artifact for train jobs, a complete prediction file for predict jobs.
// Throws BackendError (exit status, timeout, launch failure) or
// ProtocolError (malformed output).
InvocationResult invoke_backend(const BackendRegistration& reg,
                                const std::filesystem::path& manifest_path);

}  // namespace rr
