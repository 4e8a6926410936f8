#pragma once

// Word importance ranking (the first phase of the greedy attack).

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "rtt/backends.hpp"
#include "rtt/errors.hpp"
#include "rtt/text.hpp"

namespace rtt {

struct ImportanceRanking {
  std::vector<double> scores;       // one per token; 0 for ineligible tokens
  std::vector<std::size_t> order;   // eligible positions, most important first

  friend bool operator==(const ImportanceRanking&, const ImportanceRanking&) = default;
};

// Placeholder substituted for a word when measuring its saliency.
inline constexpr const char* kUnknownToken = "unk";

namespace detail {

inline std::vector<std::size_t> all_positions(const Sentence& s) {
  std::vector<std::size_t> v(s.size());
  std::iota(v.begin(), v.end(), std::size_t{0});
  return v;
}

inline ImportanceRanking make_ranking(std::size_t n, std::span<const std::size_t> eligible,
                                      const std::vector<double>& eligible_scores) {
  ImportanceRanking r;
  r.scores.assign(n, 0.0);
  for (std::size_t j = 0; j < eligible.size(); ++j) r.scores[eligible[j]] = eligible_scores[j];
  r.order.assign(eligible.begin(), eligible.end());
  std::sort(r.order.begin(), r.order.end());
  std::stable_sort(r.order.begin(), r.order.end(),
                   [&](std::size_t a, std::size_t b) { return r.scores[a] > r.scores[b]; });
  return r;
}

// One batched query; failures name the token positions being ranked.
inline std::vector<Prediction> classify_with_context(const Classifier& victim, std::span<const std::string> texts,
                                                     const char* what, std::span<const std::size_t> positions) {
  try {
    return victim.classify(texts);
  } catch (const BackendError&) {
    std::string ctx = std::string(what) + " of token positions [";
    for (std::size_t j = 0; j < positions.size(); ++j) ctx += (j ? "," : "") + std::to_string(positions[j]);
    rethrow_backend_error(ctx + "]");
  }
}

}  // namespace detail

// Importance of w_i is the drop in p_label when w_i (and its trailing
// separator) is deleted. When the deletion changes the predicted class, the
// gain of that new class is added on top.
inline ImportanceRanking rank_by_deletion(const Sentence& s, const Classifier& victim, int label,
                                          std::span<const std::size_t> eligible) {
  std::vector<std::string> texts;
  texts.reserve(eligible.size() + 1);
  texts.push_back(s.text());
  for (std::size_t i : eligible) texts.push_back(s.without_word(i).text());
  auto preds = detail::classify_with_context(victim, texts, "deletion ranking", eligible);
  if (preds.size() != texts.size()) throw SchemaError("classifier returned wrong number of predictions");

  const Prediction& base = preds.front();
  std::vector<double> scores(eligible.size());
  for (std::size_t j = 0; j < eligible.size(); ++j) {
    const Prediction& del = preds[j + 1];
    double score = base.prob(label) - del.prob(label);
    if (del.label != base.label) score += del.prob(del.label) - base.prob(del.label);
    scores[j] = score;
  }
  return detail::make_ranking(s.size(), eligible, scores);
}

inline ImportanceRanking rank_by_deletion(const Sentence& s, const Classifier& victim, int label) {
  auto all = detail::all_positions(s);
  return rank_by_deletion(s, victim, label, all);
}

// Proposes replacement words for position i of the sentence.
using CandidateFn = std::function<std::vector<std::string>(const Sentence&, std::size_t)>;

// Probability weighted word saliency: softmax over the "unk" saliencies,
// weighted by the best single-swap drop in p_label.
inline ImportanceRanking rank_by_weighted_saliency(const Sentence& s, const Classifier& victim,
                                                   int label, const CandidateFn& candidates,
                                                   std::span<const std::size_t> eligible) {
  std::vector<std::string> texts;
  texts.push_back(s.text());
  for (std::size_t i : eligible) texts.push_back(s.with_word(i, kUnknownToken).text());
  std::vector<std::vector<std::string>> swaps(eligible.size());
  std::vector<std::size_t> swap_offset(eligible.size());
  for (std::size_t j = 0; j < eligible.size(); ++j) {
    swaps[j] = candidates(s, eligible[j]);
    swap_offset[j] = texts.size();
    for (const auto& r : swaps[j]) texts.push_back(s.with_word(eligible[j], r).text());
  }
  auto preds = detail::classify_with_context(victim, texts, "saliency ranking", eligible);
  if (preds.size() != texts.size()) throw SchemaError("classifier returned wrong number of predictions");

  const double p0 = preds.front().prob(label);
  std::vector<double> saliency(eligible.size());
  std::vector<double> gain(eligible.size(), 0.0);
  for (std::size_t j = 0; j < eligible.size(); ++j) {
    saliency[j] = p0 - preds[j + 1].prob(label);
    if (!swaps[j].empty()) {
      double best = -std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < swaps[j].size(); ++c) {
        best = std::max(best, p0 - preds[swap_offset[j] + c].prob(label));
      }
      gain[j] = best;
    }
  }

  std::vector<double> scores(eligible.size(), 0.0);
  if (!eligible.empty()) {
    double mx = *std::max_element(saliency.begin(), saliency.end());
    double z = 0.0;
    for (double x : saliency) z += std::exp(x - mx);
    for (std::size_t j = 0; j < eligible.size(); ++j) {
      scores[j] = std::exp(saliency[j] - mx) / z * gain[j];
    }
  }
  return detail::make_ranking(s.size(), eligible, scores);
}

inline ImportanceRanking rank_by_weighted_saliency(const Sentence& s, const Classifier& victim,
                                                   int label, const CandidateFn& candidates) {
  auto all = detail::all_positions(s);
  return rank_by_weighted_saliency(s, victim, label, candidates, all);
}

}  // namespace rtt
