#pragma once

// Attack quality and robustness measures.

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtt/backends.hpp"
#include "rtt/engine.hpp"
#include "rtt/errors.hpp"
#include "rtt/text.hpp"

namespace rtt {

// ---------------------------------------------------------------------------
// Round-trip robustness

struct RobustnessReport {
  std::size_t n = 0;  // examples evaluated
  std::size_t m = 0;  // languages
  // Per evaluated example, the languages whose round trip undid the attack.
  std::vector<std::vector<LanguageId>> flip_matrix;
  std::vector<std::string> example_ids;
  // y_at_k[k-1] is the fraction of examples defeated by at least k languages.
  std::vector<double> y_at_k;
  std::size_t backend_failures = 0;
};

// Fraction of rows with at least k defeats, for k = 1..m. Empty input gives
// all zeros.
inline std::vector<double> at_least_k_fractions(std::span<const std::size_t> defeats_per_example,
                                                std::size_t m) {
  std::vector<double> y(m, 0.0);
  if (defeats_per_example.empty()) return y;
  for (std::size_t k = 1; k <= m; ++k) {
    auto hits = std::count_if(defeats_per_example.begin(), defeats_per_example.end(),
                              [k](std::size_t d) { return d >= k; });
    y[k - 1] = static_cast<double>(hits) / static_cast<double>(defeats_per_example.size());
  }
  return y;
}

// A language defeats an adversarial example when the prediction on its round
// trip differs from the prediction on the adversarial text itself.
inline RobustnessReport at_least_k_nonrobust(std::span<const AttackOutcome> outcomes,
                                             std::span<const LanguageId> langs, const Classifier& victim,
                                             const Translator& translator) {
  if (langs.empty()) throw ConfigError("robustness evaluation needs at least one language");
  RobustnessReport r;
  r.m = langs.size();
  std::vector<std::size_t> defeats;
  for (const auto& o : outcomes) {
    if (!o.succeeded() || !o.adversarial_text || !o.adv_prediction) {
      throw InputError("robustness evaluation expects successful outcomes only (" + o.example_id + ")");
    }
    try {
      std::vector<std::string> back;
      back.reserve(langs.size());
      for (const auto& lang : langs) back.push_back(round_trip(*o.adversarial_text, lang, translator));
      auto preds = victim.classify(back);
      if (preds.size() != back.size()) throw SchemaError("classifier returned wrong number of predictions");
      std::vector<LanguageId> defeated;
      for (std::size_t i = 0; i < langs.size(); ++i) {
        if (preds[i].label != o.adv_prediction->label) defeated.push_back(langs[i]);
      }
      defeats.push_back(defeated.size());
      r.flip_matrix.push_back(std::move(defeated));
      r.example_ids.push_back(o.example_id);
    } catch (const BackendError&) {
      ++r.backend_failures;
    }
  }
  r.n = r.flip_matrix.size();
  r.y_at_k = at_least_k_fractions(defeats, r.m);
  return r;
}

// ---------------------------------------------------------------------------
// Rates

inline std::size_t count_status(std::span<const AttackOutcome> outcomes, AttackStatus s) {
  return static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [s](const auto& o) { return o.status == s; }));
}

// Successes over successes + failures. Skipped and errored examples are
// excluded from the denominator.
inline std::optional<double> success_rate(std::span<const AttackOutcome> outcomes) {
  std::size_t wins = count_status(outcomes, AttackStatus::kSuccess);
  std::size_t attempted = wins + count_status(outcomes, AttackStatus::kFailed);
  if (attempted == 0) return std::nullopt;
  return 100.0 * static_cast<double>(wins) / static_cast<double>(attempted);
}

inline std::optional<double> relative_success_rate(std::size_t nmt_successes, std::size_t plain_successes) {
  if (plain_successes == 0) return std::nullopt;
  return 100.0 * static_cast<double>(nmt_successes) / static_cast<double>(plain_successes);
}

inline std::optional<double> relative_success_rate(std::span<const AttackOutcome> nmt,
                                                   std::span<const AttackOutcome> plain) {
  auto ids = [](std::span<const AttackOutcome> v) {
    std::multiset<std::string> s;
    for (const auto& o : v) s.insert(o.example_id);
    return s;
  };
  if (ids(nmt) != ids(plain)) throw InputError("outcome lists cover different example ids");
  return relative_success_rate(count_status(nmt, AttackStatus::kSuccess),
                               count_status(plain, AttackStatus::kSuccess));
}

// ---------------------------------------------------------------------------
// Similarity

namespace detail {

inline std::set<std::string> normalized_token_set(std::string_view text) {
  std::set<std::string> out;
  for (const auto& tok : tokenize(text)) {
    std::string w;
    for (char c : tok) {
      if (!is_punct(c)) w += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    if (!w.empty()) out.insert(std::move(w));
  }
  return out;
}

}  // namespace detail

inline double jaccard(std::string_view a, std::string_view b) {
  auto sa = detail::normalized_token_set(a);
  auto sb = detail::normalized_token_set(b);
  if (sa.empty() && sb.empty()) return 1.0;
  std::size_t inter = 0;
  for (const auto& w : sa) inter += sb.count(w);
  std::size_t uni = sa.size() + sb.size() - inter;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

// Sentence BLEU-4 with the original as the single reference. Clipped n-gram
// precisions; for n >= 2 a zero match count is smoothed to 1/(total+1).
inline double bleu(std::string_view reference, std::string_view candidate) {
  const auto ref = tokenize(reference).tokens();
  const auto hyp = tokenize(candidate).tokens();
  if (hyp.empty()) return 0.0;

  auto ngrams = [](const std::vector<std::string>& toks, std::size_t n) {
    std::map<std::vector<std::string>, std::size_t> counts;
    for (std::size_t i = 0; i + n <= toks.size(); ++i) {
      ++counts[std::vector<std::string>(toks.begin() + i, toks.begin() + i + n)];
    }
    return counts;
  };

  double log_sum = 0.0;
  for (std::size_t n = 1; n <= 4; ++n) {
    auto h = ngrams(hyp, n);
    auto r = ngrams(ref, n);
    std::size_t total = hyp.size() >= n ? hyp.size() - n + 1 : 0;
    std::size_t matched = 0;
    for (const auto& [g, c] : h) {
      auto it = r.find(g);
      if (it != r.end()) matched += std::min(c, it->second);
    }
    double p;
    if (matched > 0) {
      p = static_cast<double>(matched) / static_cast<double>(total);
    } else if (n == 1) {
      return 0.0;
    } else {
      p = 1.0 / static_cast<double>(total + 1);
    }
    log_sum += std::log(p);
  }
  double bp = hyp.size() > ref.size()
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref.size()) / static_cast<double>(hyp.size()));
  return bp * std::exp(log_sum / 4.0);
}

inline double percent_perturbed(const AttackOutcome& o) {
  auto n = tokenize(o.original_text).size();
  if (n == 0) throw InputError("cannot compute perturbed fraction of an empty original");
  return 100.0 * static_cast<double>(o.perturbations.size()) / static_cast<double>(n);
}

// Raw cosine of the two encodings.
inline double encoder_similarity(std::string_view a, std::string_view b, const Encoder& encoder) {
  std::vector<std::string> texts{std::string(a), std::string(b)};
  auto v = encoder.encode(texts);
  if (v.size() != 2) throw SchemaError("encoder returned wrong number of vectors");
  return cosine(v[0], v[1]);
}

}  // namespace rtt
