#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "rtt/rtt.hpp"

#ifndef RTT_FIXTURE_DIR
#error "RTT_FIXTURE_DIR must point at data/fixtures"
#endif

namespace testing_support {

inline std::string fixture_dir() { return RTT_FIXTURE_DIR; }
inline std::filesystem::path fixture(const std::string& name) { return std::filesystem::path(RTT_FIXTURE_DIR) / name; }

inline const rtt::ResourceSet& fixture_resources() {
  static const rtt::ResourceSet rs = rtt::load_resource_set(fixture("manifest.txt"));
  return rs;
}

inline const std::vector<rtt::LabeledExample>& fixture_corpus() {
  static const auto corpus = rtt::load_dataset(fixture("corpus.jsonl"));
  return corpus;
}

inline std::vector<rtt::LanguageId> langs(std::initializer_list<const char*> codes) {
  std::vector<rtt::LanguageId> out;
  for (auto c : codes) out.emplace_back(c);
  return out;
}

inline std::vector<rtt::LanguageId> fixture_langs() { return langs({"es", "de", "fr"}); }

// Single-token-to-phrase tables for en<->code, given as (from, to) pairs.
inline rtt::PhraseTable table(std::initializer_list<std::pair<const char*, const char*>> rows) {
  rtt::PhraseTable t;
  for (auto [a, b] : rows) t[rtt::detail::split_ws(rtt::to_lower(a))] = b;
  return t;
}

inline rtt::BackendSuite suite(std::map<std::string, double> lexicon, rtt::TranslationTables tables = {}) {
  rtt::BackendSuite s;
  s.victim = std::make_shared<rtt::LexiconClassifier>(std::move(lexicon));
  s.translator = std::make_shared<rtt::TableTranslator>(std::move(tables));
  s.encoder = std::make_shared<rtt::HashedEncoder>();
  return s;
}

// Classifier that records every batch it sees.
class RecordingClassifier final : public rtt::Classifier {
 public:
  explicit RecordingClassifier(std::shared_ptr<const rtt::Classifier> inner) : inner_(std::move(inner)) {}
  std::vector<rtt::Prediction> classify(std::span<const std::string> texts) const override {
    calls_.emplace_back(texts.begin(), texts.end());
    return inner_->classify(texts);
  }
  std::size_t texts_seen() const {
    std::size_t n = 0;
    for (const auto& c : calls_) n += c.size();
    return n;
  }
  const std::vector<std::vector<std::string>>& calls() const { return calls_; }

 private:
  std::shared_ptr<const rtt::Classifier> inner_;
  mutable std::vector<std::vector<std::string>> calls_;
};

// Backend that always fails with the given error type.
template <typename E>
class FailingClassifier final : public rtt::Classifier {
 public:
  std::vector<rtt::Prediction> classify(std::span<const std::string>) const override { throw E("injected"); }
};

}  // namespace testing_support
