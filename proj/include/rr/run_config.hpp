#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "rr/backend.hpp"
#include "rr/corpus.hpp"
#include "rr/splitter.hpp"
#include "rr/svm.hpp"

namespace rr {

struct BackendSpec {
  std::string id;
  std::string kind = "svm";  // "svm" (in-process) or "external"
  BackendRegistration registration;  // external only
};

// Everything a matrix run depends on. Serialized verbatim (with absolute
// paths) into every run directory, so a run can be repeated from its
// snapshot alone.
struct RunConfig {
  int version = 1;
  std::string seed = std::string(kDefaultSeed);
  SplitRatios ratios;
  std::map<DatasetId, std::filesystem::path> datasets;
  std::optional<std::filesystem::path> mapping;
  bool strict_mapping = false;
  std::optional<std::filesystem::path> section_rules;
  SvmGridSpec grid;
  FeatureOptions features;
  std::vector<BackendSpec> backends{BackendSpec{"svm", "svm", {}}};
  std::vector<std::string> pools;  // empty: all
  std::size_t parallelism = 1;
  std::filesystem::path output_dir = "runs/latest";
};

nlohmann::json svm_options_to_json(const SvmGridSpec& grid, const FeatureOptions& features);
void svm_options_from_json(const nlohmann::json& j, SvmGridSpec& grid, FeatureOptions& features);

// Relative paths are resolved against base_dir. A bare external command
// name is looked up next to the running executable, then on PATH.
RunConfig run_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir);
nlohmann::json run_config_to_json(const RunConfig& config);
RunConfig load_run_config(const std::filesystem::path& path);

// Environment overrides: RRH_SEED, RRH_PARALLELISM, RRH_OUT, RRH_DATASETS,
// RRH_BACKENDS.
inline constexpr std::string_view kEnvPrefix = "RRH_";

std::filesystem::path executable_dir();

}  // namespace rr
