#include "rr/run_config.hpp"

#include <unistd.h>

#include <cstdlib>

#include "rr/error.hpp"
#include "rr/text.hpp"

namespace fs = std::filesystem;

namespace rr {

fs::path executable_dir() {
  std::error_code ec;
  const fs::path self = fs::read_symlink("/proc/self/exe", ec);
  return ec ? fs::current_path() : self.parent_path();
}

nlohmann::json svm_options_to_json(const SvmGridSpec& grid, const FeatureOptions& features) {
  nlohmann::json cw = nlohmann::json::array();
  for (auto w : grid.class_weight) cw.push_back(to_string(w));
  return {{"C", grid.C},
          {"class_weight", cw},
          {"max_iterations", grid.max_iterations},
          {"tolerance", grid.tolerance},
          {"min_df", features.min_df},
          {"ngram_range", {features.ngram_range.min_n, features.ngram_range.max_n}}};
}

void svm_options_from_json(const nlohmann::json& j, SvmGridSpec& grid, FeatureOptions& features) {
  if (j.contains("C")) grid.C = j["C"].get<std::vector<double>>();
  if (j.contains("class_weight")) {
    grid.class_weight.clear();
    for (const auto& w : j["class_weight"]) grid.class_weight.push_back(parse_class_weight(w.get<std::string>()));
  }
  if (j.contains("max_iterations")) grid.max_iterations = j["max_iterations"].get<std::vector<std::size_t>>();
  if (j.contains("tolerance")) grid.tolerance = j["tolerance"].get<double>();
  if (j.contains("min_df")) features.min_df = j["min_df"].get<std::size_t>();
  if (j.contains("ngram_range"))
    features.ngram_range = NgramRange{j["ngram_range"].at(0).get<int>(), j["ngram_range"].at(1).get<int>()};
  if (grid.C.empty() || grid.class_weight.empty() || grid.max_iterations.empty())
    throw ConfigError("svm grid: every axis needs at least one value");
  for (double c : grid.C)
    if (!(c > 0)) throw ConfigError("svm grid: C must be positive");
}

namespace {

fs::path resolve(const fs::path& p, const fs::path& base) {
  if (p.empty() || p.is_absolute()) return p;
  return fs::weakly_canonical(base / p);
}

std::string resolve_command(const std::string& cmd, const fs::path& base) {
  if (cmd.find('/') != std::string::npos) return resolve(cmd, base).string();
  const fs::path sibling = executable_dir() / cmd;
  if (fs::exists(sibling)) return sibling.string();
  return cmd;  // left to PATH lookup
}

}  // namespace

RunConfig run_config_from_json(const nlohmann::json& j, const fs::path& base) {
  try {
    RunConfig c;
    c.version = j.value("version", 1);
    if (c.version != 1) throw ConfigError("unsupported run config version " + std::to_string(c.version));
    c.seed = j.value("seed", c.seed);
    if (j.contains("ratios")) {
      const auto r = j["ratios"].get<std::vector<double>>();
      if (r.size() != 3) throw ConfigError("ratios needs three values");
      c.ratios = SplitRatios{r[0], r[1], r[2]};
    }
    if (j.contains("datasets")) {
      for (const auto& [name, value] : j["datasets"].items()) {
        const std::string path = value.is_string() ? value.get<std::string>() : value.at("path").get<std::string>();
        c.datasets[parse_dataset_or_throw(name)] = resolve(path, base);
      }
    }
    if (j.contains("mapping") && !j["mapping"].is_null()) c.mapping = resolve(j["mapping"].get<std::string>(), base);
    c.strict_mapping = j.value("strict_mapping", false);
    if (j.contains("section_rules") && !j["section_rules"].is_null())
      c.section_rules = resolve(j["section_rules"].get<std::string>(), base);
    if (j.contains("svm")) svm_options_from_json(j["svm"], c.grid, c.features);
    if (j.contains("backends")) {
      c.backends.clear();
      for (const auto& b : j["backends"]) {
        BackendSpec spec;
        spec.id = b.at("id").get<std::string>();
        spec.kind = b.value("kind", b.contains("command") ? "external" : "svm");
        if (spec.kind == "external") {
          auto& reg = spec.registration;
          reg.backend_id = spec.id;
          if (b.at("command").is_string())
            reg.command = {b["command"].get<std::string>()};
          else
            reg.command = b["command"].get<std::vector<std::string>>();
          if (reg.command.empty()) throw ConfigError("backend " + spec.id + ": empty command");
          reg.command[0] = resolve_command(reg.command[0], base);
          reg.timeout_seconds = b.value("timeout_seconds", reg.timeout_seconds);
          if (b.contains("env")) reg.env = b["env"].get<std::map<std::string, std::string>>();
          if (b.contains("config")) reg.config = b["config"];
        } else if (spec.kind != "svm") {
          throw ConfigError("backend " + spec.id + ": unknown kind '" + spec.kind + "'");
        }
        c.backends.push_back(std::move(spec));
      }
    }
    if (j.contains("pools")) c.pools = j["pools"].get<std::vector<std::string>>();
    c.parallelism = j.value("parallelism", std::size_t{1});
    if (c.parallelism == 0) throw ConfigError("parallelism must be positive");
    if (j.contains("output_dir")) c.output_dir = resolve(j["output_dir"].get<std::string>(), base);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("run config: ") + e.what());
  }
}

nlohmann::json run_config_to_json(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["version"] = c.version;
  j["seed"] = c.seed;
  j["ratios"] = {c.ratios.train, c.ratios.validation, c.ratios.test};
  nlohmann::ordered_json datasets = nlohmann::ordered_json::object();
  for (const auto& [id, path] : c.datasets) datasets[std::string(to_string(id))] = path.string();
  j["datasets"] = datasets;
  j["mapping"] = c.mapping ? nlohmann::ordered_json(c.mapping->string()) : nlohmann::ordered_json(nullptr);
  j["strict_mapping"] = c.strict_mapping;
  j["section_rules"] =
      c.section_rules ? nlohmann::ordered_json(c.section_rules->string()) : nlohmann::ordered_json(nullptr);
  j["svm"] = svm_options_to_json(c.grid, c.features);
  nlohmann::ordered_json backends = nlohmann::ordered_json::array();
  for (const auto& b : c.backends) {
    nlohmann::ordered_json bj;
    bj["id"] = b.id;
    bj["kind"] = b.kind;
    if (b.kind == "external") {
      bj["command"] = b.registration.command;
      bj["timeout_seconds"] = b.registration.timeout_seconds;
      bj["env"] = b.registration.env;
      bj["config"] = b.registration.config;
    }
    backends.push_back(std::move(bj));
  }
  j["backends"] = backends;
  j["pools"] = c.pools;
  j["parallelism"] = c.parallelism;
  j["output_dir"] = c.output_dir.string();
  return nlohmann::json::parse(j.dump());
}

RunConfig load_run_config(const fs::path& path) {
  if (!fs::exists(path)) throw ConfigError("config not found: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return run_config_from_json(j, fs::absolute(path).parent_path());
}

}  // namespace rr
