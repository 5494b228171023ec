#include "rr/backend.hpp"

#include <fcntl.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <set>
#include <thread>

#include "rr/error.hpp"
#include "rr/text.hpp"

extern char** environ;

namespace fs = std::filesystem;

namespace rr {

std::string_view to_string(JobMode mode) { return mode == JobMode::Train ? "train" : "predict"; }

void write_job_data(const fs::path& path, std::span<const SentenceRecord> records, bool labeled) {
  std::string out;
  for (const auto& r : records) {
    out += labeled ? sentence_to_json_line(r) : sentence_to_unlabeled_json_line(r);
    out += '\n';
  }
  text::write_file(path, out);
}

std::vector<SentenceRecord> read_job_data(const fs::path& path) {
  std::vector<SentenceRecord> records;
  for (const auto& line : text::split(text::read_file(path), '\n')) {
    if (text::trim(line).empty()) continue;
    records.push_back(sentence_from_json_line(line));
  }
  return records;
}

fs::path write_job_manifest(const JobManifest& job, const fs::path& dir) {
  auto require = [&](const fs::path& p, const char* what) {
    if (p.empty() || !fs::exists(p))
      throw ProtocolError("job " + job.job_id + ": " + what + " '" + p.string() + "' does not exist");
  };
  if (job.mode == JobMode::Train) {
    require(job.train_path, "train_path");
    require(job.validation_path, "validation_path");
  } else {
    require(job.predict_path, "predict_path");
    require(job.model_path, "model_path");
  }
  if (job.output_path.empty()) throw ProtocolError("job " + job.job_id + ": output_path unset");

  nlohmann::ordered_json j;
  j["job_id"] = job.job_id;
  j["mode"] = to_string(job.mode);
  j["protocol_version"] = job.protocol_version;
  j["train_path"] = job.train_path.string();
  j["validation_path"] = job.validation_path.string();
  j["predict_path"] = job.predict_path.string();
  j["output_path"] = job.output_path.string();
  j["model_path"] = job.model_path.string();
  j["config"] = job.config;
  const fs::path path = dir / "manifest.json";
  try {
    text::write_file(path, j.dump(2) + "\n");
  } catch (const Error& e) {
    throw Error("cannot write manifest: " + std::string(e.what()));
  }
  return path;
}

JobManifest read_job_manifest(const fs::path& path) {
  try {
    const auto j = nlohmann::json::parse(text::read_file(path));
    JobManifest job;
    job.job_id = j.at("job_id").get<std::string>();
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "train")
      job.mode = JobMode::Train;
    else if (mode == "predict")
      job.mode = JobMode::Predict;
    else
      throw ProtocolError("unknown mode '" + mode + "'");
    job.protocol_version = j.at("protocol_version").get<int>();
    if (job.protocol_version != kProtocolVersion)
      throw ProtocolError("unsupported protocol_version " + std::to_string(job.protocol_version));
    auto opt_path = [&](const char* key) {
      return j.contains(key) ? fs::path(j[key].get<std::string>()) : fs::path();
    };
    job.train_path = opt_path("train_path");
    job.validation_path = opt_path("validation_path");
    job.predict_path = opt_path("predict_path");
    job.output_path = opt_path("output_path");
    job.model_path = opt_path("model_path");
    if (j.contains("config")) job.config = j["config"];
    return job;
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError("malformed manifest " + path.string() + ": " + e.what());
  }
}

std::string predictions_to_jsonl(std::span<const PredictionRow> rows) {
  std::string out;
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["doc_id"] = r.doc_id;
    j["sent_index"] = r.sent_index;
    j["predicted"] = to_string(r.predicted);
    j["score"] = r.score;
    out += j.dump();
    out += '\n';
  }
  return out;
}

void write_predictions(const fs::path& path, std::span<const PredictionRow> rows) {
  text::write_file(path, predictions_to_jsonl(rows));
}

namespace {
std::string key_name(const std::string& doc_id, std::size_t sent_index) {
  return "(" + doc_id + ", " + std::to_string(sent_index) + ")";
}
}  // namespace

std::vector<PredictionRow> parse_predictions(std::string_view jsonl,
                                             std::span<const SentenceKey> requested) {
  const std::set<SentenceKey> wanted(requested.begin(), requested.end());
  std::set<SentenceKey> seen;
  std::vector<PredictionRow> rows;
  std::size_t line_no = 0;
  for (const auto& line : text::split(jsonl, '\n')) {
    ++line_no;
    if (text::trim(line).empty()) continue;
    PredictionRow row;
    try {
      const auto j = nlohmann::json::parse(line);
      row.doc_id = j.at("doc_id").get<std::string>();
      row.sent_index = j.at("sent_index").get<std::size_t>();
      const auto label = j.at("predicted").get<std::string>();
      const auto parsed = parse_meta_label(label);
      if (!parsed) throw ProtocolError("predicted must be Facts or NonFacts, got '" + label + "'");
      row.predicted = *parsed;
      if (auto it = j.find("score"); it != j.end() && !it->is_null()) row.score = it->get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError("prediction line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ProtocolError& e) {
      throw ProtocolError("prediction line " + std::to_string(line_no) + ": " + e.what());
    }
    const SentenceKey key{row.doc_id, row.sent_index};
    if (!wanted.contains(key))
      throw ProtocolError("prediction for unrequested sentence " + key_name(row.doc_id, row.sent_index));
    if (!seen.insert(key).second)
      throw ProtocolError("duplicate prediction for " + key_name(row.doc_id, row.sent_index));
    rows.push_back(std::move(row));
  }
  if (seen.size() != wanted.size()) {
    std::string missing;
    std::size_t listed = 0;
    for (const auto& k : wanted) {
      if (seen.contains(k)) continue;
      if (listed++ < 10) missing += (missing.empty() ? "" : ", ") + key_name(k.doc_id, k.sent_index);
    }
    throw ProtocolError("missing predictions for " + std::to_string(wanted.size() - seen.size()) +
                        " sentence(s): " + missing);
  }
  return rows;
}

std::vector<PredictionRow> parse_predictions(const fs::path& file,
                                             std::span<const SentenceKey> requested) {
  if (!fs::exists(file)) throw ProtocolError("prediction file missing: " + file.string());
  return parse_predictions(std::string_view(text::read_file(file)), requested);
}

namespace {

struct Fd {
  int fd = -1;
  explicit Fd(int f) : fd(f) {}
  Fd(const Fd&) = delete;
  Fd& operator=(const Fd&) = delete;
  ~Fd() {
    if (fd >= 0) ::close(fd);
  }
};

std::string tail(const fs::path& path, std::size_t max_bytes = 4000) {
  if (!fs::exists(path)) return {};
  std::string s = text::read_file(path);
  if (s.size() > max_bytes) s = s.substr(s.size() - max_bytes);
  return s;
}

}  // namespace

InvocationResult invoke_backend(const BackendRegistration& reg, const fs::path& manifest_path) {
  if (reg.command.empty()) throw BackendError("backend " + reg.backend_id + ": empty command");
  const JobManifest job = read_job_manifest(manifest_path);
  const fs::path dir = manifest_path.parent_path();

  InvocationResult result;
  result.output_path = job.output_path;
  result.stdout_path = dir / "stdout.log";
  result.stderr_path = dir / "stderr.log";
  std::error_code ec;
  fs::remove(job.output_path, ec);

  // Everything the child needs is prepared before fork.
  std::vector<std::string> args = reg.command;
  args.push_back("--manifest");
  args.push_back(manifest_path.string());
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  argv.push_back(nullptr);

  std::map<std::string, std::string> env_map;
  for (char** e = environ; e && *e; ++e) {
    std::string_view kv(*e);
    const auto eq = kv.find('=');
    if (eq != std::string_view::npos) env_map[std::string(kv.substr(0, eq))] = std::string(kv.substr(eq + 1));
  }
  for (const auto& [k, v] : reg.env) env_map[k] = v;
  std::vector<std::string> env_strings;
  for (const auto& [k, v] : env_map) env_strings.push_back(k + "=" + v);
  std::vector<char*> envp;
  for (auto& s : env_strings) envp.push_back(s.data());
  envp.push_back(nullptr);

  Fd out(::open(result.stdout_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
  Fd err(::open(result.stderr_path.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644));
  if (out.fd < 0 || err.fd < 0) throw BackendError("cannot create log files in " + dir.string());

  const pid_t pid = ::fork();
  if (pid < 0) throw BackendError("fork failed for backend " + reg.backend_id);
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(out.fd, STDOUT_FILENO);
    ::dup2(err.fd, STDERR_FILENO);
    ::execvpe(argv[0], argv.data(), envp.data());
    static constexpr char kMsg[] = "exec failed\n";
    [[maybe_unused]] auto n = ::write(STDERR_FILENO, kMsg, sizeof kMsg - 1);
    ::_exit(127);
  }

  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration<double>(reg.timeout_seconds);
  int status = 0;
  auto delay = std::chrono::milliseconds(1);
  while (true) {
    const pid_t r = ::waitpid(pid, &status, WNOHANG);
    if (r == pid) break;
    if (r < 0) throw BackendError("waitpid failed for backend " + reg.backend_id);
    if (std::chrono::steady_clock::now() >= deadline) {
      ::kill(-pid, SIGKILL);
      ::kill(pid, SIGKILL);
      ::waitpid(pid, &status, 0);
      throw BackendError("backend " + reg.backend_id + " timed out after " +
                             std::to_string(reg.timeout_seconds) + "s",
                         tail(result.stderr_path));
    }
    std::this_thread::sleep_for(delay);
    delay = std::min(delay * 2, std::chrono::milliseconds(50));
  }

  if (!WIFEXITED(status) || WEXITSTATUS(status) != 0) {
    const std::string how = WIFEXITED(status) ? "exited with status " + std::to_string(WEXITSTATUS(status))
                                              : "terminated by signal " + std::to_string(WTERMSIG(status));
    const std::string captured = tail(result.stderr_path);
    throw BackendError("backend " + reg.backend_id + " " + how +
                           (captured.empty() ? "" : ": " + text::trim_copy(captured)),
                       captured);
  }

  if (!fs::exists(job.output_path))
    throw ProtocolError("backend " + reg.backend_id + " produced no output at " +
                        job.output_path.string());
  if (job.mode == JobMode::Predict) {
    std::vector<SentenceKey> requested;
    for (const auto& r : read_job_data(job.predict_path)) requested.push_back({r.doc_id, r.sent_index});
    result.predictions = parse_predictions(job.output_path, requested);
  }
  return result;
}

}  // namespace rr
