#pragma once

// Greedy word-swap attack with an optional round-trip translation filter.
//
// Words are visited in importance order. For each word the recipe proposes
// candidates; a candidate that flips the victim survives only if (when the
// round-trip filter is on) it still flips after a round trip through every
// seen language and it satisfies the recipe constraints. The most similar
// survivor is committed and the attack ends. When no candidate survives, the
// non-flipping candidate that lowers the true-class probability most is
// committed instead and the search moves to the next word.

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rtt/backends.hpp"
#include "rtt/constraints.hpp"
#include "rtt/errors.hpp"
#include "rtt/importance.hpp"
#include "rtt/resources.hpp"
#include "rtt/text.hpp"
#include "rtt/transform.hpp"

namespace rtt {

enum class ImportanceMethod { kDeletion, kWeightedSaliency };

struct AttackRecipe {
  std::string name;
  ImportanceMethod importance = ImportanceMethod::kDeletion;
  TransformSpec transform;
  ConstraintSet constraints;
  std::size_t replacement_limit = 40;

  void validate() const {
    if (replacement_limit < 1) throw ConfigError("replacement limit must be at least 1");
    constraints.validate();
  }
};

inline constexpr std::size_t kDefaultReplacementLimit = 40;

inline const std::vector<std::string>& recipe_names() {
  static const std::vector<std::string> names{"textfooler", "textbugger", "pwws", "deepwordbug"};
  return names;
}

inline AttackRecipe make_recipe(std::string_view name, std::size_t limit = kDefaultReplacementLimit) {
  AttackRecipe r;
  r.name = std::string(name);
  r.replacement_limit = limit;
  if (name == "textfooler") {
    r.importance = ImportanceMethod::kDeletion;
    r.transform.use_embeddings = true;
    r.transform.min_embedding_cos = 0.5;
    r.constraints.use_pos = true;
    r.constraints.min_sentence_sim = 0.5;
  } else if (name == "textbugger") {
    r.importance = ImportanceMethod::kDeletion;
    r.transform.use_embeddings = true;
    r.transform.char_mechanisms = {CharMechanism::kInsert, CharMechanism::kDelete,
                                   CharMechanism::kAdjacentSwap, CharMechanism::kHomoglyph};
    r.constraints.min_sentence_sim = 0.84;
  } else if (name == "pwws") {
    r.importance = ImportanceMethod::kWeightedSaliency;
    r.transform.use_synonym_table = true;
  } else if (name == "deepwordbug") {
    r.importance = ImportanceMethod::kDeletion;
    r.transform.char_mechanisms = {CharMechanism::kInsert, CharMechanism::kDelete,
                                   CharMechanism::kAdjacentSwap, CharMechanism::kRandomSub};
    r.constraints.max_edit_distance = 30;
  } else {
    throw ConfigError("unknown recipe '" + std::string(name) +
                      "' (expected textfooler, textbugger, pwws or deepwordbug)");
  }
  r.validate();
  return r;
}

struct AttackConfig {
  std::vector<LanguageId> seen_langs;
  bool rtt_enabled = false;
  std::uint64_t seed = 0;
  std::optional<std::size_t> query_budget;  // victim texts classified

  void validate() const {
    if (rtt_enabled && seen_langs.empty()) {
      throw ConfigError("round-trip filtering needs at least one seen language");
    }
  }
};

enum class AttackStatus { kSuccess, kFailed, kSkipped, kError };

inline std::string_view to_string(AttackStatus s) {
  switch (s) {
    case AttackStatus::kSuccess: return "success";
    case AttackStatus::kFailed: return "failed";
    case AttackStatus::kSkipped: return "skipped";
    case AttackStatus::kError: return "error";
  }
  return "error";
}

inline AttackStatus parse_status(std::string_view s) {
  if (s == "success") return AttackStatus::kSuccess;
  if (s == "failed") return AttackStatus::kFailed;
  if (s == "skipped") return AttackStatus::kSkipped;
  if (s == "error") return AttackStatus::kError;
  throw FormatError("unknown attack status '" + std::string(s) + "'");
}

struct Perturbation {
  std::size_t position = 0;
  std::string old_word;
  std::string new_word;

  friend bool operator==(const Perturbation&, const Perturbation&) = default;
};

struct AttackOutcome {
  std::string example_id;
  int label = 0;
  AttackStatus status = AttackStatus::kFailed;
  std::string original_text;
  std::optional<std::string> adversarial_text;
  Prediction orig_prediction;
  std::optional<Prediction> adv_prediction;
  std::vector<Perturbation> perturbations;
  std::size_t queries = 0;
  std::optional<std::string> error;

  bool succeeded() const noexcept { return status == AttackStatus::kSuccess; }

  friend bool operator==(const AttackOutcome&, const AttackOutcome&) = default;
};

// Index of the survivor with the highest angular similarity to `orig`; the
// earliest one wins ties.
inline std::size_t select_best(std::span<const Sentence> survivors, const Sentence& orig,
                               const Encoder& encoder) {
  if (survivors.empty()) throw InputError("no viable candidate to select from");
  std::vector<std::string> texts;
  texts.reserve(survivors.size() + 1);
  texts.push_back(orig.text());
  for (const auto& s : survivors) texts.push_back(s.text());
  auto vecs = encoder.encode(texts);
  if (vecs.size() != texts.size()) throw SchemaError("encoder returned wrong number of vectors");
  std::size_t best = 0;
  double best_score = angular_similarity(vecs[0], vecs[1]);
  for (std::size_t i = 1; i < survivors.size(); ++i) {
    double sc = angular_similarity(vecs[0], vecs[i + 1]);
    if (sc > best_score) {
      best = i;
      best_score = sc;
    }
  }
  return best;
}

namespace detail {

struct BudgetExhausted {};

// Counts classified texts and refuses batches that would exceed the budget.
class CountingClassifier final : public Classifier {
 public:
  CountingClassifier(const Classifier& inner, std::optional<std::size_t> budget)
      : inner_(inner), budget_(budget) {}

  std::vector<Prediction> classify(std::span<const std::string> texts) const override {
    if (budget_ && count_ + texts.size() > *budget_) throw BudgetExhausted{};
    count_ += texts.size();
    auto out = inner_.classify(texts);
    if (out.size() != texts.size()) throw SchemaError("classifier returned wrong number of predictions");
    return out;
  }

  std::size_t count() const noexcept { return count_; }

 private:
  const Classifier& inner_;
  std::optional<std::size_t> budget_;
  mutable std::size_t count_ = 0;
};

}  // namespace detail

class AttackEngine {
 public:
  AttackEngine(AttackRecipe recipe, AttackConfig config, BackendSuite backends, const ResourceBundle& bundle,
               const EmbeddingStore& embeddings)
      : recipe_(std::move(recipe)),
        config_(std::move(config)),
        backends_(std::move(backends)),
        bundle_(bundle),
        embeddings_(embeddings) {
    recipe_.validate();
    config_.validate();
    if (!backends_.victim || !backends_.encoder || (config_.rtt_enabled && !backends_.translator)) {
      throw ConfigError("attack needs a victim, an encoder and (for round-trip filtering) a translator");
    }
  }

  AttackEngine(AttackRecipe recipe, AttackConfig config, BackendSuite backends, const ResourceSet& resources)
      : AttackEngine(std::move(recipe), std::move(config), std::move(backends), resources.bundle,
                     resources.embeddings) {}

  const AttackRecipe& recipe() const noexcept { return recipe_; }
  const AttackConfig& config() const noexcept { return config_; }

  AttackOutcome attack(const LabeledExample& example) const {
    AttackOutcome out;
    out.example_id = example.id;
    out.label = example.label;
    out.original_text = example.text;
    detail::CountingClassifier victim(*backends_.victim, config_.query_budget);
    try {
      run(example, victim, out);
    } catch (const detail::BudgetExhausted&) {
      out.status = AttackStatus::kFailed;
      out.adversarial_text.reset();
      out.adv_prediction.reset();
    } catch (const BackendError& e) {
      out.status = AttackStatus::kError;
      out.error = e.what();
      out.adversarial_text.reset();
      out.adv_prediction.reset();
    }
    out.queries = victim.count();
    return out;
  }

  // Outcomes in input order; a failing example never affects the others.
  std::vector<AttackOutcome> attack_corpus(std::span<const LabeledExample> examples) const {
    std::vector<AttackOutcome> outcomes;
    outcomes.reserve(examples.size());
    for (const auto& ex : examples) outcomes.push_back(attack(ex));
    return outcomes;
  }

  std::vector<std::string> candidates_for(const Sentence& s, std::size_t index) const {
    return generate_candidates(s, index, recipe_.transform, recipe_.replacement_limit, bundle_, embeddings_,
                               config_.seed)
        .candidates;
  }

  // Recipe constraints for replacing position `index` of `orig` with the word
  // at the same position in `cand`. `already_modified` counts earlier commits.
  bool passes_constraints(const Sentence& orig, const Sentence& cand, std::size_t index,
                          std::size_t already_modified, double angular_sim) const {
    const auto& cs = recipe_.constraints;
    if (cs.use_pos && !check_pos(orig[index], cand[index], bundle_.pos_lexicon)) return false;
    if (cs.min_sentence_sim && angular_sim < *cs.min_sentence_sim) return false;
    if (cs.max_edit_distance && !check_edit_distance(orig.text(), cand.text(), *cs.max_edit_distance).passed) {
      return false;
    }
    if (cs.max_perturbed_fraction && !orig.empty() &&
        static_cast<double>(already_modified + 1) / static_cast<double>(orig.size()) >
            *cs.max_perturbed_fraction) {
      return false;
    }
    return true;
  }

 private:
  void run(const LabeledExample& example, const Classifier& victim, AttackOutcome& out) const {
    const Sentence orig = tokenize(example.text);
    const int label = example.label;
    out.orig_prediction = classify_one(victim, orig.text());
    if (out.orig_prediction.label != label) {
      out.status = AttackStatus::kSkipped;
      return;
    }

    std::vector<std::size_t> eligible;
    for (std::size_t i = 0; i < orig.size(); ++i) {
      if (check_pre(orig, i, bundle_.stopwords, {}, recipe_.constraints)) eligible.push_back(i);
    }
    ImportanceRanking ranking =
        recipe_.importance == ImportanceMethod::kDeletion
            ? rank_by_deletion(orig, victim, label, eligible)
            : rank_by_weighted_saliency(
                  orig, victim, label,
                  [this](const Sentence& s, std::size_t i) { return candidates_for(s, i); }, eligible);

    Sentence current = orig;
    double current_p = out.orig_prediction.prob(label);
    std::set<std::size_t> modified;

    for (std::size_t idx : ranking.order) {
      if (!check_pre(current, idx, bundle_.stopwords, modified, recipe_.constraints)) continue;
      auto words = candidates_for(current, idx);
      if (words.empty()) continue;

      std::vector<Sentence> cands;
      std::vector<std::string> texts;
      cands.reserve(words.size() + 1);
      texts.reserve(words.size() + 1);
      for (auto& w : words) {
        cands.push_back(current.with_word(idx, std::move(w)));
        texts.push_back(cands.back().text());
      }
      auto preds = victim.classify(texts);

      texts.insert(texts.begin(), orig.text());
      auto vecs = backends_.encoder->encode(texts);
      if (vecs.size() != texts.size()) throw SchemaError("encoder returned wrong number of vectors");

      std::vector<std::size_t> flipping;
      std::vector<std::size_t> progress;
      for (std::size_t j = 0; j < cands.size(); ++j) {
        double sim = angular_similarity(vecs[0], vecs[j + 1]);
        bool flips = preds[j].label != label;
        if (flips && config_.rtt_enabled &&
            !check_rtt(cands[j], label, config_.seen_langs, victim, *backends_.translator).passed) {
          continue;
        }
        if (!passes_constraints(orig, cands[j], idx, modified.size(), sim)) continue;
        (flips ? flipping : progress).push_back(j);
      }

      if (!flipping.empty()) {
        std::vector<Sentence> survivors;
        for (std::size_t j : flipping) survivors.push_back(cands[j]);
        std::size_t pick = flipping[select_best(survivors, orig, *backends_.encoder)];
        out.perturbations.push_back({idx, current[idx], cands[pick][idx]});
        out.status = AttackStatus::kSuccess;
        out.adversarial_text = cands[pick].text();
        out.adv_prediction = preds[pick];
        return;
      }

      std::optional<std::size_t> best;
      for (std::size_t j : progress) {
        if (!best || preds[j].prob(label) < preds[*best].prob(label)) best = j;
      }
      if (best && preds[*best].prob(label) < current_p) {
        out.perturbations.push_back({idx, current[idx], cands[*best][idx]});
        modified.insert(idx);
        current = cands[*best];
        current_p = preds[*best].prob(label);
      }
    }
    out.status = AttackStatus::kFailed;
  }

  AttackRecipe recipe_;
  AttackConfig config_;
  BackendSuite backends_;
  const ResourceBundle& bundle_;
  const EmbeddingStore& embeddings_;
};

inline AttackOutcome attack(const LabeledExample& example, const AttackRecipe& recipe, const AttackConfig& config,
                            const BackendSuite& backends, const ResourceSet& resources) {
  return AttackEngine(recipe, config, backends, resources).attack(example);
}

inline std::vector<AttackOutcome> attack_corpus(std::span<const LabeledExample> examples,
                                                const AttackRecipe& recipe, const AttackConfig& config,
                                                const BackendSuite& backends, const ResourceSet& resources) {
  return AttackEngine(recipe, config, backends, resources).attack_corpus(examples);
}

}  // namespace rtt
