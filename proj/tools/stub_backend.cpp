// Majority-class backend speaking the job protocol. Used to exercise the
// subprocess path end to end.
#include <cstring>
#include <iostream>

#include "rr/backend.hpp"
#include "rr/text.hpp"

int main(int argc, char** argv) {
  if (argc != 3 || std::strcmp(argv[1], "--manifest") != 0) {
    std::cerr << "usage: rr-stub-backend --manifest <path>\n";
    return 64;
  }
  try {
    const rr::JobManifest job = rr::read_job_manifest(argv[2]);
    if (job.mode == rr::JobMode::Train) {
      std::size_t facts = 0, total = 0;
      for (const auto& r : rr::read_job_data(job.train_path)) {
        if (!r.meta_label) throw std::runtime_error("train record without meta_label");
        facts += *r.meta_label == rr::MetaLabel::Facts;
        ++total;
      }
      const auto majority = 2 * facts > total ? rr::MetaLabel::Facts : rr::MetaLabel::NonFacts;
      nlohmann::json model{{"majority", std::string(rr::to_string(majority))}};
      rr::text::write_file(job.output_path, model.dump() + "\n");
      std::cout << "majority " << rr::to_string(majority) << " (" << facts << "/" << total << " Facts)\n";
    } else {
      const auto model = nlohmann::json::parse(rr::text::read_file(job.model_path));
      const auto label = rr::parse_meta_label(model.at("majority").get<std::string>()).value();
      std::vector<rr::PredictionRow> rows;
      for (const auto& r : rr::read_job_data(job.predict_path)) rows.push_back({r.doc_id, r.sent_index, label, 0.0});
      rr::write_predictions(job.output_path, rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "rr-stub-backend: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
