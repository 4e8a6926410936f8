#pragma once

// Candidate filters: pre-transformation checks, recipe constraints and the
// round-trip translation check that keeps only translation-robust candidates.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "rtt/backends.hpp"
#include "rtt/errors.hpp"
#include "rtt/resources.hpp"
#include "rtt/text.hpp"

namespace rtt {

struct ConstraintSet {
  bool use_pos = false;
  std::optional<double> min_sentence_sim;     // angular similarity, [-1, 1]
  std::optional<std::size_t> max_edit_distance;
  std::optional<double> max_perturbed_fraction;  // [0, 1]
  bool stopwords_immutable = true;
  bool repeat_immutable = true;

  void validate() const {
    if (min_sentence_sim && (*min_sentence_sim < -1.0 || *min_sentence_sim > 1.0)) {
      throw ConfigError("sentence similarity threshold must lie in [-1, 1]");
    }
    if (max_perturbed_fraction && (*max_perturbed_fraction < 0.0 || *max_perturbed_fraction > 1.0)) {
      throw ConfigError("perturbed fraction bound must lie in [0, 1]");
    }
  }

  friend bool operator==(const ConstraintSet&, const ConstraintSet&) = default;
};

// Stopword and repeat-modification checks for position `index`.
inline bool check_pre(const Sentence& s, std::size_t index, const std::unordered_set<std::string>& stopwords,
                      const std::set<std::size_t>& modified, const ConstraintSet& cs = {}) {
  if (cs.stopwords_immutable && stopwords.count(to_lower(s[index]))) return false;
  if (cs.repeat_immutable && modified.count(index)) return false;
  return true;
}

// Same part of speech, or a noun/verb pair. Unknown words are OTHER, which
// only matches OTHER.
inline bool check_pos(std::string_view orig_word, std::string_view cand_word,
                      const std::map<std::string, std::set<PosTag>>& lexicon) {
  static const std::set<PosTag> kOther{PosTag::kOther};
  auto tags = [&](std::string_view w) -> const std::set<PosTag>& {
    auto it = lexicon.find(to_lower(w));
    return it == lexicon.end() || it->second.empty() ? kOther : it->second;
  };
  const auto& a = tags(orig_word);
  const auto& b = tags(cand_word);
  for (PosTag t : a) {
    if (b.count(t)) return true;
  }
  auto has = [](const std::set<PosTag>& s, PosTag t) { return s.count(t) != 0; };
  return (has(a, PosTag::kNoun) && has(b, PosTag::kVerb)) ||
         (has(a, PosTag::kVerb) && has(b, PosTag::kNoun));
}

// 1 - arccos(cos)/pi, so orthogonal encodings score 0.5.
inline double angular_similarity(std::span<const double> a, std::span<const double> b) {
  return 1.0 - std::acos(cosine(a, b)) / std::numbers::pi;
}

struct ScoredCheck {
  double score = 0.0;
  bool passed = false;
};

inline ScoredCheck check_sentence_similarity(const Sentence& orig, const Sentence& cand,
                                             const Encoder& encoder, double threshold) {
  std::vector<std::string> texts{orig.text(), cand.text()};
  auto vecs = encoder.encode(texts);
  if (vecs.size() != 2) throw SchemaError("encoder returned wrong number of vectors");
  double score = angular_similarity(vecs[0], vecs[1]);
  return {score, score >= threshold};
}

// Character (byte) level Levenshtein distance.
inline std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[b.size()];
}

struct EditDistanceCheck {
  std::size_t distance = 0;
  bool passed = false;
};

inline EditDistanceCheck check_edit_distance(std::string_view orig_text, std::string_view cand_text,
                                             std::size_t max_dist) {
  auto d = levenshtein(orig_text, cand_text);
  return {d, d <= max_dist};
}

struct LanguageResult {
  LanguageId language;
  std::string round_tripped;
  Prediction prediction;
  bool passed = false;

  friend bool operator==(const LanguageResult&, const LanguageResult&) = default;
};

struct RttVerdict {
  std::vector<LanguageResult> language_results;
  bool passed = false;

  friend bool operator==(const RttVerdict&, const RttVerdict&) = default;
};

// A language passes when the round-tripped candidate is still classified
// away from orig_label. The verdict passes only if every language does.
inline RttVerdict check_rtt(const Sentence& cand, int orig_label, std::span<const LanguageId> seen_langs,
                            const Classifier& victim, const Translator& translator) {
  if (seen_langs.empty()) throw ConfigError("round-trip check needs at least one language");
  const std::string text = cand.text();
  std::vector<std::string> back;
  back.reserve(seen_langs.size());
  for (const auto& lang : seen_langs) {
    try {
      back.push_back(round_trip(text, lang, translator));
    } catch (const BackendError&) {
      rethrow_backend_error("round trip via " + lang.code());
    }
  }
  std::vector<Prediction> preds;
  try {
    preds = victim.classify(back);
  } catch (const BackendError&) {
    rethrow_backend_error("classifying round trips");
  }
  if (preds.size() != back.size()) throw SchemaError("classifier returned wrong number of predictions");

  RttVerdict v;
  v.passed = true;
  for (std::size_t i = 0; i < seen_langs.size(); ++i) {
    bool ok = preds[i].label != orig_label;
    v.passed = v.passed && ok;
    v.language_results.push_back({seen_langs[i], std::move(back[i]), std::move(preds[i]), ok});
  }
  return v;
}

}  // namespace rtt
