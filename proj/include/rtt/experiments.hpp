#pragma once

// Experiment drivers: paired attack runs with summaries, round-trip
// robustness curves, unseen-language ablation and replacement-limit sweeps.
// Each driver returns plain rows; the write_* helpers turn them into CSV.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtt/backends.hpp"
#include "rtt/engine.hpp"
#include "rtt/errors.hpp"
#include "rtt/metrics.hpp"
#include "rtt/records.hpp"
#include "rtt/resources.hpp"

namespace rtt {

struct ExperimentContext {
  const ResourceSet& resources;
  BackendSuite backends;
  std::uint64_t seed = 0;
  std::optional<std::size_t> query_budget;
};

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_real(*x) : ""; }

inline std::string join_langs(std::span<const LanguageId> langs, char sep = ',') {
  std::string out;
  for (std::size_t i = 0; i < langs.size(); ++i) {
    if (i) out += sep;
    out += langs[i].code();
  }
  return out;
}

inline std::vector<LanguageId> parse_langs(std::string_view csv) {
  std::vector<LanguageId> out;
  std::size_t start = 0;
  while (start <= csv.size()) {
    auto comma = csv.find(',', start);
    auto piece = csv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    if (!piece.empty()) out.emplace_back(std::string(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (out[i] == out[j]) throw ConfigError("language listed twice: " + out[i].code());
    }
  }
  return out;
}

inline std::vector<ResultRecord> make_records(std::span<const AttackOutcome> outcomes, const AttackRecipe& recipe,
                                              bool rtt_enabled, const Encoder& encoder) {
  std::vector<ResultRecord> out;
  out.reserve(outcomes.size());
  for (const auto& o : outcomes) {
    ResultRecord r;
    r.recipe = recipe.name;
    r.rtt_enabled = rtt_enabled;
    r.outcome = o;
    if (o.succeeded() && o.adversarial_text) {
      ExampleMetrics m;
      m.jaccard = jaccard(o.original_text, *o.adversarial_text);
      m.encoder_similarity = encoder_similarity(o.original_text, *o.adversarial_text, encoder);
      m.bleu = bleu(o.original_text, *o.adversarial_text);
      m.percent_perturbed = percent_perturbed(o);
      r.metrics = m;
    }
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Paired attack run (round-trip filter on and off)

struct ArmSummary {
  std::string arm;  // "rtt_on" or "rtt_off"
  std::size_t examples = 0;
  std::size_t successes = 0;
  std::size_t failures = 0;
  std::size_t skipped = 0;
  std::size_t errors = 0;
  std::optional<double> success_rate;
  std::optional<double> relative_success_rate;
  std::optional<double> mean_jaccard;
  std::optional<double> mean_encoder_similarity;
  std::optional<double> mean_bleu;
  std::optional<double> mean_percent_perturbed;
};

struct AttackExperimentResult {
  std::vector<AttackOutcome> rtt_on;
  std::vector<AttackOutcome> rtt_off;
  std::vector<ResultRecord> rtt_on_records;
  std::vector<ResultRecord> rtt_off_records;
  std::vector<ArmSummary> summary;  // rtt_on first

  bool any_backend_error() const {
    return count_status(rtt_on, AttackStatus::kError) + count_status(rtt_off, AttackStatus::kError) > 0;
  }
};

inline ArmSummary summarize_arm(std::string arm, std::span<const AttackOutcome> outcomes,
                                std::span<const ResultRecord> records, std::optional<double> relative) {
  ArmSummary s;
  s.arm = std::move(arm);
  s.examples = outcomes.size();
  s.successes = count_status(outcomes, AttackStatus::kSuccess);
  s.failures = count_status(outcomes, AttackStatus::kFailed);
  s.skipped = count_status(outcomes, AttackStatus::kSkipped);
  s.errors = count_status(outcomes, AttackStatus::kError);
  s.success_rate = success_rate(outcomes);
  s.relative_success_rate = relative;
  std::size_t n = 0;
  double j = 0, e = 0, b = 0, p = 0;
  for (const auto& r : records) {
    if (!r.metrics) continue;
    ++n;
    j += r.metrics->jaccard;
    e += r.metrics->encoder_similarity;
    b += r.metrics->bleu;
    p += r.metrics->percent_perturbed;
  }
  if (n) {
    double d = static_cast<double>(n);
    s.mean_jaccard = j / d;
    s.mean_encoder_similarity = e / d;
    s.mean_bleu = b / d;
    s.mean_percent_perturbed = p / d;
  }
  return s;
}

inline AttackExperimentResult run_attack_experiment(std::span<const LabeledExample> examples,
                                                    const AttackRecipe& recipe,
                                                    std::span<const LanguageId> seen_langs,
                                                    const ExperimentContext& ctx) {
  AttackConfig on;
  on.seen_langs.assign(seen_langs.begin(), seen_langs.end());
  on.rtt_enabled = true;
  on.seed = ctx.seed;
  on.query_budget = ctx.query_budget;
  AttackConfig off = on;
  off.rtt_enabled = false;

  AttackExperimentResult res;
  res.rtt_on = AttackEngine(recipe, on, ctx.backends, ctx.resources).attack_corpus(examples);
  res.rtt_off = AttackEngine(recipe, off, ctx.backends, ctx.resources).attack_corpus(examples);
  res.rtt_on_records = make_records(res.rtt_on, recipe, true, *ctx.backends.encoder);
  res.rtt_off_records = make_records(res.rtt_off, recipe, false, *ctx.backends.encoder);
  auto rel = relative_success_rate(res.rtt_on, res.rtt_off);
  auto self = relative_success_rate(res.rtt_off, res.rtt_off);
  res.summary.push_back(summarize_arm("rtt_on", res.rtt_on, res.rtt_on_records, rel));
  res.summary.push_back(summarize_arm("rtt_off", res.rtt_off, res.rtt_off_records, self));
  return res;
}

inline std::string summary_csv(std::span<const ArmSummary> rows) {
  std::string out =
      "arm,examples,successes,failures,skipped,errors,success_rate,relative_success_rate,"
      "mean_jaccard,mean_encoder_similarity,mean_bleu,mean_percent_perturbed\n";
  for (const auto& s : rows) {
    out += s.arm + ',' + std::to_string(s.examples) + ',' + std::to_string(s.successes) + ',' +
           std::to_string(s.failures) + ',' + std::to_string(s.skipped) + ',' + std::to_string(s.errors) + ',' +
           format_optional(s.success_rate) + ',' + format_optional(s.relative_success_rate) + ',' +
           format_optional(s.mean_jaccard) + ',' + format_optional(s.mean_encoder_similarity) + ',' +
           format_optional(s.mean_bleu) + ',' + format_optional(s.mean_percent_perturbed) + '\n';
  }
  return out;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << content;
  if (!out) throw IoError("failed writing " + path.string());
}

// ---------------------------------------------------------------------------
// Round-trip robustness curve

struct RobustnessRow {
  std::string recipe;
  std::size_t k = 0;
  double y = 0.0;
};

inline std::vector<RobustnessRow> robustness_rows(const std::string& recipe, const RobustnessReport& report) {
  std::vector<RobustnessRow> rows;
  if (report.n == 0) return rows;
  for (std::size_t k = 1; k <= report.m; ++k) rows.push_back({recipe, k, report.y_at_k[k - 1]});
  return rows;
}

// Evaluates the successful records of a results file, grouped by recipe in
// first-appearance order.
inline std::vector<RobustnessRow> run_rtt_robustness_eval(std::span<const ResultRecord> records,
                                                          std::span<const LanguageId> eval_langs,
                                                          const BackendSuite& backends,
                                                          std::size_t* backend_failures = nullptr) {
  std::vector<std::string> recipes;
  for (const auto& r : records) {
    if (std::find(recipes.begin(), recipes.end(), r.recipe) == recipes.end()) recipes.push_back(r.recipe);
  }
  std::vector<RobustnessRow> rows;
  for (const auto& name : recipes) {
    std::vector<AttackOutcome> wins;
    for (const auto& r : records) {
      if (r.recipe == name && r.outcome.succeeded()) wins.push_back(r.outcome);
    }
    auto report = at_least_k_nonrobust(wins, eval_langs, *backends.victim, *backends.translator);
    if (backend_failures) *backend_failures += report.backend_failures;
    for (auto& row : robustness_rows(name, report)) rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string robustness_csv(std::span<const RobustnessRow> rows) {
  std::string out = "recipe,k,y\n";
  for (const auto& r : rows) out += r.recipe + ',' + std::to_string(r.k) + ',' + format_real(r.y) + '\n';
  return out;
}

// ---------------------------------------------------------------------------
// Unseen-language ablation

struct AblationRow {
  std::vector<LanguageId> seen;
  LanguageId unseen;
  std::optional<double> rate_with;     // % of filtered-arm successes still adversarial via `unseen`
  std::optional<double> rate_without;  // same for the unfiltered arm
};

// Percentage of successes whose round trip through `lang` is still classified
// away from the ground truth. Absent when there are no successes.
inline std::optional<double> surviving_rate(std::span<const AttackOutcome> outcomes, const LanguageId& lang,
                                            const BackendSuite& backends) {
  std::vector<std::string> back;
  std::vector<int> labels;
  for (const auto& o : outcomes) {
    if (!o.succeeded() || !o.adversarial_text) continue;
    back.push_back(round_trip(*o.adversarial_text, lang, *backends.translator));
    labels.push_back(o.label);
  }
  if (back.empty()) return std::nullopt;
  auto preds = backends.victim->classify(back);
  std::size_t kept = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) kept += preds[i].label != labels[i];
  return 100.0 * static_cast<double>(kept) / static_cast<double>(back.size());
}

// Leave-one-out over `langs`: the filtered arm sees all languages but one.
inline std::vector<AblationRow> run_unseen_ablation(std::span<const LabeledExample> examples,
                                                    const AttackRecipe& recipe, std::span<const LanguageId> langs,
                                                    const ExperimentContext& ctx) {
  if (langs.size() < 3) throw ConfigError("unseen-language ablation needs at least 3 languages");
  AttackConfig off;
  off.seed = ctx.seed;
  off.query_budget = ctx.query_budget;
  auto plain = AttackEngine(recipe, off, ctx.backends, ctx.resources).attack_corpus(examples);

  std::vector<AblationRow> rows;
  for (std::size_t held = 0; held < langs.size(); ++held) {
    AblationRow row;
    row.unseen = langs[held];
    for (std::size_t i = 0; i < langs.size(); ++i) {
      if (i != held) row.seen.push_back(langs[i]);
    }
    AttackConfig on = off;
    on.rtt_enabled = true;
    on.seen_langs = row.seen;
    auto filtered = AttackEngine(recipe, on, ctx.backends, ctx.resources).attack_corpus(examples);
    row.rate_with = surviving_rate(filtered, row.unseen, ctx.backends);
    row.rate_without = surviving_rate(plain, row.unseen, ctx.backends);
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string ablation_csv(std::span<const AblationRow> rows) {
  std::string out = "seen,unseen,rate_with,rate_without\n";
  for (const auto& r : rows) {
    out += join_langs(r.seen, '+') + ',' + r.unseen.code() + ',' + format_optional(r.rate_with) + ',' +
           format_optional(r.rate_without) + '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Replacement-limit sweep

struct SweepRow {
  std::size_t limit = 0;
  std::size_t robust_successes = 0;
};

inline std::vector<SweepRow> run_replacement_sweep(std::span<const LabeledExample> examples,
                                                   std::string_view recipe_name, std::vector<std::size_t> limits,
                                                   std::span<const LanguageId> seen_langs,
                                                   const ExperimentContext& ctx) {
  if (limits.empty()) throw ConfigError("sweep needs at least one replacement limit");
  std::sort(limits.begin(), limits.end());
  limits.erase(std::unique(limits.begin(), limits.end()), limits.end());
  AttackConfig on;
  on.seen_langs.assign(seen_langs.begin(), seen_langs.end());
  on.rtt_enabled = true;
  on.seed = ctx.seed;
  on.query_budget = ctx.query_budget;
  std::vector<SweepRow> rows;
  for (std::size_t limit : limits) {
    auto outcomes = AttackEngine(make_recipe(recipe_name, limit), on, ctx.backends, ctx.resources)
                        .attack_corpus(examples);
    rows.push_back({limit, count_status(outcomes, AttackStatus::kSuccess)});
  }
  return rows;
}

inline std::string sweep_csv(std::span<const SweepRow> rows) {
  std::string out = "limit,robust_successes\n";
  for (const auto& r : rows) out += std::to_string(r.limit) + ',' + std::to_string(r.robust_successes) + '\n';
  return out;
}

}  // namespace rtt
