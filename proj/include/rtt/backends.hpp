#pragma once

// Model capabilities the attack talks to (victim classifier, translator,
// sentence encoder) plus deterministic built-in implementations backed by the
// flat-file resources. Remote implementations live in rtt/remote.hpp.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtt/errors.hpp"
#include "rtt/resources.hpp"
#include "rtt/text.hpp"

namespace rtt {

struct Prediction {
  int label = 0;
  double confidence = 0.0;
  std::vector<double> probs;

  double prob(int cls) const {
    return cls >= 0 && static_cast<std::size_t>(cls) < probs.size() ? probs[cls] : 0.0;
  }

  // Label is the argmax; exact ties go to the higher class index, which for
  // binary sentiment makes p_pos == 0.5 positive.
  static Prediction from_probs(std::vector<double> probs) {
    if (probs.empty()) throw InputError("prediction needs at least one class probability");
    std::size_t best = 0;
    for (std::size_t i = 1; i < probs.size(); ++i) {
      if (probs[i] >= probs[best]) best = i;
    }
    Prediction p;
    p.label = static_cast<int>(best);
    p.confidence = probs[best];
    p.probs = std::move(probs);
    return p;
  }

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

class LanguageId {
 public:
  LanguageId() = default;
  explicit LanguageId(std::string code) : code_(std::move(code)) {
    if (code_.size() != 2 || !std::islower(static_cast<unsigned char>(code_[0])) ||
        !std::islower(static_cast<unsigned char>(code_[1]))) {
      throw ConfigError("language code must be two lowercase letters: '" + code_ + "'");
    }
  }
  const std::string& code() const noexcept { return code_; }

  friend auto operator<=>(const LanguageId&, const LanguageId&) = default;

 private:
  std::string code_;
};

inline const LanguageId& english() {
  static const LanguageId en("en");
  return en;
}

class Classifier {
 public:
  virtual ~Classifier() = default;
  // One prediction per text, in input order.
  virtual std::vector<Prediction> classify(std::span<const std::string> texts) const = 0;
};

class Translator {
 public:
  virtual ~Translator() = default;
  virtual std::vector<std::string> translate(std::span<const std::string> texts,
                                             const LanguageId& src,
                                             const LanguageId& tgt) const = 0;
};

class Encoder {
 public:
  virtual ~Encoder() = default;
  // Unit vectors, or the zero vector for texts with nothing to encode.
  virtual std::vector<Vector> encode(std::span<const std::string> texts) const = 0;
};

struct BackendSuite {
  std::shared_ptr<const Classifier> victim;
  std::shared_ptr<const Translator> translator;
  std::shared_ptr<const Encoder> encoder;
};

inline Prediction classify_one(const Classifier& c, const std::string& text) {
  auto out = c.classify(std::span<const std::string>(&text, 1));
  if (out.size() != 1) throw SchemaError("classifier returned wrong number of predictions");
  return out.front();
}

inline std::vector<std::string> round_trip(std::span<const std::string> texts, const LanguageId& lang,
                                           const Translator& translator) {
  auto there = translator.translate(texts, english(), lang);
  return translator.translate(there, lang, english());
}

inline std::string round_trip(const std::string& text, const LanguageId& lang,
                              const Translator& translator) {
  auto out = round_trip(std::span<const std::string>(&text, 1), lang, translator);
  if (out.size() != 1) throw SchemaError("translator returned wrong number of texts");
  return out.front();
}

// ---------------------------------------------------------------------------
// Vector helpers

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Cosine clamped to [-1, 1]; 0 whenever either side is the zero vector.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  double na = norm(a);
  double nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

// ---------------------------------------------------------------------------
// Built-ins

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Bag-of-words logistic sentiment model over the lexicon weights.
class LexiconClassifier final : public Classifier {
 public:
  explicit LexiconClassifier(std::map<std::string, double> lexicon) : lexicon_(std::move(lexicon)) {}

  double score(std::string_view text) const {
    double s = 0.0;
    for (const auto& tok : tokenize(text)) {
      auto it = lexicon_.find(to_lower(tok));
      if (it != lexicon_.end()) s += it->second;
    }
    return s;
  }

  std::vector<Prediction> classify(std::span<const std::string> texts) const override {
    std::vector<Prediction> out;
    out.reserve(texts.size());
    for (const auto& t : texts) {
      double p = logistic(score(t));
      out.push_back(Prediction::from_probs({1.0 - p, p}));
    }
    return out;
  }

 private:
  std::map<std::string, double> lexicon_;
};

inline std::vector<Prediction> lexicon_classify(std::span<const std::string> texts,
                                                const std::map<std::string, double>& lexicon) {
  return LexiconClassifier(lexicon).classify(texts);
}

// Longest-match phrase substitution, one table per direction. A phrase only
// matches across whitespace, never across punctuation glue.
class TableTranslator final : public Translator {
 public:
  explicit TableTranslator(TranslationTables tables) : tables_(std::move(tables)) {
    for (const auto& [dir, table] : tables_) {
      std::size_t longest = 0;
      for (const auto& [src, tgt] : table) longest = std::max(longest, src.size());
      max_len_[dir] = longest;
    }
  }

  bool supports(const LanguageId& src, const LanguageId& tgt) const {
    return tables_.count({src.code(), tgt.code()}) != 0;
  }

  std::vector<LanguageId> languages() const {
    std::vector<LanguageId> out;
    for (const auto& [dir, table] : tables_) {
      if (dir.first == english().code() && tables_.count({dir.second, dir.first})) {
        out.emplace_back(dir.second);
      }
    }
    return out;
  }

  std::vector<std::string> translate(std::span<const std::string> texts, const LanguageId& src,
                                     const LanguageId& tgt) const override {
    auto it = tables_.find({src.code(), tgt.code()});
    if (it == tables_.end()) {
      throw CapabilityError("no translation table for " + src.code() + "->" + tgt.code());
    }
    std::size_t max_len = max_len_.at(it->first);
    std::vector<std::string> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(translate_one(t, it->second, max_len));
    return out;
  }

 private:
  static bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](char c) { return is_space(c); });
  }

  static std::string translate_one(std::string_view text, const PhraseTable& table,
                                   std::size_t max_len) {
    auto s = tokenize(text);
    const auto& toks = s.tokens();
    const auto& seps = s.separators();
    std::string out = seps.front();
    std::vector<std::string> key;
    std::size_t i = 0;
    while (i < toks.size()) {
      std::size_t matched = 0;
      const std::string* target = nullptr;
      key.clear();
      for (std::size_t len = 1; len <= max_len && i + len <= toks.size(); ++len) {
        if (len > 1 && !is_blank(seps[i + len - 1])) break;
        key.push_back(to_lower(toks[i + len - 1]));
        auto hit = table.find(key);
        if (hit != table.end()) {
          matched = len;
          target = &hit->second;
        }
      }
      if (matched == 0) {
        out += toks[i];
        out += seps[i + 1];
        ++i;
      } else {
        out += *target;
        out += seps[i + matched];
        i += matched;
      }
    }
    return out;
  }

  TranslationTables tables_;
  std::map<std::pair<std::string, std::string>, std::size_t> max_len_;
};

inline std::vector<std::string> table_translate(std::span<const std::string> texts,
                                                const LanguageId& src, const LanguageId& tgt,
                                                const TranslationTables& tables) {
  return TableTranslator(tables).translate(texts, src, tgt);
}

// 32-bit FNV-1a.
inline std::uint32_t fnv1a(std::string_view bytes) {
  std::uint32_t h = 2166136261u;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 16777619u;
  }
  return h;
}

// Signed feature hashing of lowercased tokens into 256 buckets, L2-normalised.
// Bit 0 of the token hash picks the sign (set = negative), bits 1..8 the bucket.
class HashedEncoder final : public Encoder {
 public:
  static constexpr std::size_t kDimension = 256;

  static Vector encode_text(std::string_view text) {
    Vector v(kDimension, 0.0);
    for (const auto& tok : tokenize(text)) {
      std::uint32_t h = fnv1a(to_lower(tok));
      double sign = (h & 1u) ? -1.0 : 1.0;
      v[(h >> 1) & 0xFFu] += sign;
    }
    double n = norm(v);
    if (n > 0.0) {
      for (double& x : v) x /= n;
    }
    return v;
  }

  std::vector<Vector> encode(std::span<const std::string> texts) const override {
    std::vector<Vector> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(encode_text(t));
    return out;
  }
};

inline std::vector<Vector> hashed_encode(std::span<const std::string> texts) {
  return HashedEncoder().encode(texts);
}

inline BackendSuite make_builtin_backends(const ResourceSet& resources) {
  BackendSuite suite;
  suite.victim = std::make_shared<LexiconClassifier>(resources.bundle.sentiment_lexicon);
  suite.translator = std::make_shared<TableTranslator>(resources.translations);
  suite.encoder = std::make_shared<HashedEncoder>();
  return suite;
}

}  // namespace rtt
