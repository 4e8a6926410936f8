#pragma once

// JSONL persistence: input datasets and per-example result records.

#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtt/engine.hpp"
#include "rtt/errors.hpp"
#include "rtt/text.hpp"

namespace rtt {

inline constexpr int kRecordSchemaVersion = 1;

struct ExampleMetrics {
  double jaccard = 0.0;
  double encoder_similarity = 0.0;
  double bleu = 0.0;
  double percent_perturbed = 0.0;

  friend bool operator==(const ExampleMetrics&, const ExampleMetrics&) = default;
};

struct ResultRecord {
  int schema_version = kRecordSchemaVersion;
  std::string recipe;
  bool rtt_enabled = false;
  AttackOutcome outcome;
  std::optional<ExampleMetrics> metrics;  // successes only

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

// ---------------------------------------------------------------------------
// Dataset: one {"id":..., "text":..., "label":0|1} object per line.

inline LabeledExample parse_example(const std::string& line, std::size_t lineno) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("dataset row is not a JSON object", lineno);
  LabeledExample ex;
  if (!j.contains("id")) throw FormatError("dataset row is missing 'id'", lineno);
  if (j["id"].is_string()) {
    ex.id = j["id"].get<std::string>();
  } else if (j["id"].is_number_integer()) {
    ex.id = std::to_string(j["id"].get<long long>());
  } else {
    throw FormatError("dataset 'id' must be a string or integer", lineno);
  }
  if (!j.contains("text") || !j["text"].is_string()) throw FormatError("dataset row is missing 'text'", lineno);
  ex.text = j["text"].get<std::string>();
  if (!j.contains("label") || !j["label"].is_number_integer()) {
    throw FormatError("dataset row is missing integer 'label'", lineno);
  }
  ex.label = j["label"].get<int>();
  if (ex.label != 0 && ex.label != 1) throw FormatError("dataset label must be 0 or 1", lineno);
  return ex;
}

inline std::vector<LabeledExample> load_dataset(std::istream& in) {
  std::vector<LabeledExample> out;
  std::set<std::string> ids;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto ex = parse_example(line, lineno);
    if (!ids.insert(ex.id).second) throw FormatError("duplicate example id '" + ex.id + "'", lineno);
    out.push_back(std::move(ex));
  }
  return out;
}

inline std::vector<LabeledExample> load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset: " + path.string());
  return load_dataset(in);
}

// ---------------------------------------------------------------------------
// Result records

namespace detail {

using ojson = nlohmann::ordered_json;

inline ojson prediction_to_json(const Prediction& p) {
  return ojson{{"label", p.label}, {"confidence", p.confidence}, {"probs", p.probs}};
}

inline Prediction prediction_from_json(const nlohmann::json& j) {
  Prediction p;
  p.label = j.at("label").get<int>();
  p.confidence = j.at("confidence").get<double>();
  p.probs = j.at("probs").get<std::vector<double>>();
  return p;
}

}  // namespace detail

inline std::string serialize_record(const ResultRecord& r) {
  using detail::ojson;
  const auto& o = r.outcome;
  ojson j;
  j["schema_version"] = r.schema_version;
  j["recipe"] = r.recipe;
  j["rtt"] = r.rtt_enabled;
  j["id"] = o.example_id;
  j["label"] = o.label;
  j["status"] = std::string(to_string(o.status));
  j["original_text"] = o.original_text;
  j["adversarial_text"] = o.adversarial_text ? ojson(*o.adversarial_text) : ojson(nullptr);
  j["orig_prediction"] = detail::prediction_to_json(o.orig_prediction);
  j["adv_prediction"] = o.adv_prediction ? detail::prediction_to_json(*o.adv_prediction) : ojson(nullptr);
  ojson log = ojson::array();
  for (const auto& p : o.perturbations) {
    log.push_back(ojson{{"position", p.position}, {"old", p.old_word}, {"new", p.new_word}});
  }
  j["perturbations"] = std::move(log);
  j["queries"] = o.queries;
  j["error"] = o.error ? ojson(*o.error) : ojson(nullptr);
  if (r.metrics) {
    j["metrics"] = ojson{{"jaccard", r.metrics->jaccard},
                         {"encoder_similarity", r.metrics->encoder_similarity},
                         {"bleu", r.metrics->bleu},
                         {"percent_perturbed", r.metrics->percent_perturbed}};
  } else {
    j["metrics"] = nullptr;
  }
  return j.dump();
}

inline ResultRecord parse_record(const std::string& line, std::size_t lineno = 0) {
  auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw FormatError("result record is not a JSON object", lineno);
  try {
    ResultRecord r;
    r.schema_version = j.at("schema_version").get<int>();
    if (r.schema_version != kRecordSchemaVersion) {
      throw FormatError("unsupported result schema version " + std::to_string(r.schema_version), lineno);
    }
    r.recipe = j.at("recipe").get<std::string>();
    r.rtt_enabled = j.at("rtt").get<bool>();
    auto& o = r.outcome;
    o.example_id = j.at("id").get<std::string>();
    o.label = j.at("label").get<int>();
    o.status = parse_status(j.at("status").get<std::string>());
    o.original_text = j.at("original_text").get<std::string>();
    if (!j.at("adversarial_text").is_null()) o.adversarial_text = j["adversarial_text"].get<std::string>();
    o.orig_prediction = detail::prediction_from_json(j.at("orig_prediction"));
    if (!j.at("adv_prediction").is_null()) o.adv_prediction = detail::prediction_from_json(j["adv_prediction"]);
    for (const auto& p : j.at("perturbations")) {
      o.perturbations.push_back(
          {p.at("position").get<std::size_t>(), p.at("old").get<std::string>(), p.at("new").get<std::string>()});
    }
    o.queries = j.at("queries").get<std::size_t>();
    if (!j.at("error").is_null()) o.error = j["error"].get<std::string>();
    if (!j.at("metrics").is_null()) {
      const auto& m = j["metrics"];
      r.metrics = ExampleMetrics{m.at("jaccard").get<double>(), m.at("encoder_similarity").get<double>(),
                                 m.at("bleu").get<double>(), m.at("percent_perturbed").get<double>()};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("malformed result record: ") + e.what(), lineno);
  }
}

inline void write_records(const std::filesystem::path& path, const std::vector<ResultRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write results file: " + path.string());
  for (const auto& r : records) out << serialize_record(r) << '\n';
  if (!out) throw IoError("failed writing results file: " + path.string());
}

inline std::vector<ResultRecord> read_records(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open results file: " + path.string());
  std::vector<ResultRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(parse_record(line, lineno));
  }
  return out;
}

}  // namespace rtt
