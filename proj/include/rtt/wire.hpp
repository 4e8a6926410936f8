#pragma once

// JSON bodies of the model-server protocol:
//
//   POST /v1/classify  {"texts":[...]}                     -> {"predictions":[{"label":int,"probs":[...]}]}
//   POST /v1/translate {"texts":[...],"src":..,"tgt":..}   -> {"texts":[...]}
//   POST /v1/encode    {"texts":[...]}                     -> {"vectors":[[...]]}
//
// Errors come back as non-200 with {"error": text}. Parsers throw SchemaError
// on anything that does not match, including a count mismatch with the request.

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "rtt/backends.hpp"
#include "rtt/errors.hpp"

namespace rtt::wire {

using nlohmann::json;

inline constexpr const char* kClassifyPath = "/v1/classify";
inline constexpr const char* kTranslatePath = "/v1/translate";
inline constexpr const char* kEncodePath = "/v1/encode";

inline json texts_json(std::span<const std::string> texts) {
  return json::array_t(texts.begin(), texts.end());
}

inline json classify_request(std::span<const std::string> texts) {
  return {{"texts", texts_json(texts)}};
}

inline json translate_request(std::span<const std::string> texts, const LanguageId& src,
                              const LanguageId& tgt) {
  return {{"texts", texts_json(texts)}, {"src", src.code()}, {"tgt", tgt.code()}};
}

inline json encode_request(std::span<const std::string> texts) {
  return {{"texts", texts_json(texts)}};
}

namespace detail {

inline const json& require_array(const json& body, const char* field, std::size_t expected) {
  if (!body.is_object() || !body.contains(field) || !body[field].is_array()) {
    throw SchemaError(std::string("response is missing array field '") + field + "'");
  }
  const auto& arr = body[field];
  if (arr.size() != expected) {
    throw SchemaError(std::string("response field '") + field + "' has " +
                      std::to_string(arr.size()) + " entries, expected " + std::to_string(expected));
  }
  return arr;
}

inline std::vector<double> require_reals(const json& arr, const char* what) {
  if (!arr.is_array()) throw SchemaError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(arr.size());
  for (const auto& x : arr) {
    if (!x.is_number()) throw SchemaError(std::string(what) + " must be an array of numbers");
    double v = x.get<double>();
    if (!std::isfinite(v)) throw SchemaError(std::string(what) + " contains a non-finite value");
    out.push_back(v);
  }
  return out;
}

}  // namespace detail

inline Prediction parse_prediction(const json& j) {
  if (!j.is_object()) throw SchemaError("prediction must be an object");
  if (!j.contains("label") || !j["label"].is_number_integer()) {
    throw SchemaError("prediction is missing integer 'label'");
  }
  if (!j.contains("probs")) throw SchemaError("prediction is missing 'probs'");
  auto probs = detail::require_reals(j["probs"], "probs");
  if (probs.empty()) throw SchemaError("probs must not be empty");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || p > 1.0) throw SchemaError("probability outside [0,1]");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) throw SchemaError("probs do not sum to 1");
  int label = j["label"].get<int>();
  if (label < 0 || static_cast<std::size_t>(label) >= probs.size()) {
    throw SchemaError("label outside the probability vector");
  }
  Prediction p;
  p.label = label;
  p.confidence = probs[label];
  p.probs = std::move(probs);
  return p;
}

inline json prediction_json(const Prediction& p) { return {{"label", p.label}, {"probs", p.probs}}; }

inline std::vector<Prediction> parse_classify_response(const json& body, std::size_t expected) {
  const auto& arr = detail::require_array(body, "predictions", expected);
  std::vector<Prediction> out;
  out.reserve(arr.size());
  for (const auto& p : arr) out.push_back(parse_prediction(p));
  return out;
}

inline std::vector<std::string> parse_translate_response(const json& body, std::size_t expected) {
  const auto& arr = detail::require_array(body, "texts", expected);
  std::vector<std::string> out;
  out.reserve(arr.size());
  for (const auto& t : arr) {
    if (!t.is_string()) throw SchemaError("translated texts must be strings");
    out.push_back(t.get<std::string>());
  }
  return out;
}

inline std::vector<Vector> parse_encode_response(const json& body, std::size_t expected) {
  const auto& arr = detail::require_array(body, "vectors", expected);
  std::vector<Vector> out;
  out.reserve(arr.size());
  for (const auto& v : arr) out.push_back(detail::require_reals(v, "vector"));
  if (!out.empty()) {
    for (const auto& v : out) {
      if (v.size() != out.front().size()) throw SchemaError("vectors have differing dimensions");
    }
  }
  return out;
}

// Request-side parsers, used by the stub servers in tests and by any
// in-process implementation of the protocol.
inline std::vector<std::string> parse_texts_request(const json& body) {
  if (!body.is_object() || !body.contains("texts") || !body["texts"].is_array()) {
    throw SchemaError("request is missing array field 'texts'");
  }
  std::vector<std::string> out;
  for (const auto& t : body["texts"]) {
    if (!t.is_string()) throw SchemaError("request texts must be strings");
    out.push_back(t.get<std::string>());
  }
  return out;
}

inline json error_json(const std::string& message) { return {{"error", message}}; }

}  // namespace rtt::wire
