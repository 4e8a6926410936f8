// Acceptance suite: one PASS/FAIL line per primary criterion. Exit status is
// nonzero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>

#include "rtt/rtt.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

#ifndef RTT_CLI_PATH
#error "RTT_CLI_PATH must name the rtt_attack binary"
#endif

namespace {

namespace fs = std::filesystem;
using namespace testing_support;

// Tolerances. Every criterion is exact except the runtime ceiling.
constexpr double kExact = 0.0;
constexpr double kMaxRuntimeSeconds = 60.0;
constexpr double kMinPlainY1 = 0.5;
constexpr std::size_t kRandomMatrices = 1000;
const std::vector<std::size_t> kSweepLimits{1, 5, 10, 20, 40};

bool same(double a, double b, double tol = kExact) { return std::abs(a - b) <= tol; }

struct Result {
  bool ok = true;
  std::string detail;

  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
};

const rtt::ResourceSet& rs() { return fixture_resources(); }
const std::vector<rtt::LabeledExample>& corpus() { return fixture_corpus(); }
const oracle::FixtureWorld& world() {
  static const oracle::FixtureWorld w(fixture_dir());
  return w;
}

rtt::ExperimentContext context(std::optional<std::size_t> budget = std::nullopt) {
  return {rs(), rtt::make_builtin_backends(rs()), 0, budget};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

// ---------------------------------------------------------------------------

Result ac1_rtt_guarantee() {
  Result r;
  auto t0 = std::chrono::steady_clock::now();
  auto ctx = context();
  auto langs = fixture_langs();
  std::size_t checked = 0;
  for (const auto& name : rtt::recipe_names()) {
    auto res = rtt::run_attack_experiment(corpus(), rtt::make_recipe(name), langs, ctx);
    for (const auto& o : res.rtt_on) {
      if (!o.succeeded()) continue;
      ++checked;
      auto v = rtt::check_rtt(rtt::tokenize(*o.adversarial_text), o.label, langs, *ctx.backends.victim,
                              *ctx.backends.translator);
      if (!v.passed) r.fail(name + " " + o.example_id + " fails check_rtt");
      for (const auto& l : langs) {
        if (world().round_trip_label(*o.adversarial_text, l.code()) == o.label) {
          r.fail(name + " " + o.example_id + " reverts via " + l.code() + " (oracle)");
        }
      }
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (checked == 0) r.fail("no rtt-enabled successes to verify");
  if (secs >= kMaxRuntimeSeconds) r.fail("runtime " + fmt(secs) + " s");
  if (r.ok) r.detail = std::to_string(checked) + " successes re-verified, " + fmt(secs) + " s";
  return r;
}

Result ac2_degradation() {
  Result r;
  auto ctx = context();
  auto langs = fixture_langs();
  auto res = rtt::run_attack_experiment(corpus(), rtt::make_recipe("textfooler"), langs, ctx);

  auto y1 = [&](const std::vector<rtt::AttackOutcome>& outs) {
    std::vector<rtt::AttackOutcome> wins;
    for (const auto& o : outs)
      if (o.succeeded()) wins.push_back(o);
    return std::pair{rtt::at_least_k_nonrobust(wins, langs, *ctx.backends.victim, *ctx.backends.translator), wins};
  };
  auto [plain, plain_wins] = y1(res.rtt_off);
  auto [filtered, filtered_wins] = y1(res.rtt_on);

  // Brute force: round-trip every plain success through every language.
  std::size_t defeated = 0;
  for (const auto& o : plain_wins) {
    int adv = world().label(*o.adversarial_text);
    bool any = false;
    for (const auto& l : langs) any = any || world().round_trip_label(*o.adversarial_text, l.code()) != adv;
    defeated += any;
  }
  if (plain_wins.empty()) {
    r.fail("no plain successes");
    return r;
  }
  double oracle_y1 = static_cast<double>(defeated) / static_cast<double>(plain_wins.size());
  double lib_y1 = plain.y_at_k.at(0);
  if (!same(lib_y1, oracle_y1)) r.fail("plain Y(1) " + fmt(lib_y1) + " != oracle " + fmt(oracle_y1));
  if (oracle_y1 < kMinPlainY1) r.fail("plain Y(1) " + fmt(oracle_y1) + " below " + fmt(kMinPlainY1));
  double on_y1 = filtered.y_at_k.at(0);
  if (!same(on_y1, 0.0)) r.fail("rtt-enabled Y(1) " + fmt(on_y1));
  if (r.ok) {
    r.detail = "plain Y(1) " + fmt(lib_y1) + " = oracle " + std::to_string(defeated) + "/" +
               std::to_string(plain_wins.size()) + ", rtt-enabled Y(1) " + fmt(on_y1);
  }
  return r;
}

Result ac3_monotonicity() {
  Result r;
  std::mt19937_64 rng(20261015);
  for (std::size_t t = 0; t < kRandomMatrices && r.ok; ++t) {
    std::size_t m = 1 + rng() % 8, n = rng() % 40;
    std::vector<std::size_t> defeats;
    std::vector<std::set<int>> sets;
    for (std::size_t i = 0; i < n; ++i) {
      std::set<int> s;
      for (std::size_t l = 0; l < m; ++l)
        if (rng() % 3 == 0) s.insert(static_cast<int>(l));
      defeats.push_back(s.size());
      sets.push_back(std::move(s));
    }
    auto y = rtt::at_least_k_fractions(defeats, m);
    if (y != oracle::y_at_k(sets, static_cast<int>(m))) r.fail("matrix " + std::to_string(t) + " disagrees with oracle");
    for (std::size_t k = 1; k < m; ++k)
      if (y[k] > y[k - 1]) r.fail("matrix " + std::to_string(t) + " increases at k=" + std::to_string(k + 1));
  }
  if (r.ok) r.detail = std::to_string(kRandomMatrices) + " random matrices";
  return r;
}

// Exhaustive family: every sentence of 1..4 words over a five-word
// vocabulary, each word with at most three table synonyms.
Result ac4_greedy_optimality() {
  Result r;
  const std::map<std::string, double> lex{{"good", 2.0}, {"fine", 1.0},  {"nice", 1.5}, {"awful", -2.0},
                                          {"poor", -1.0}, {"dull", -1.5}, {"grim", -0.5}};
  const std::map<std::string, std::vector<std::string>> syn{{"good", {"poor", "awful", "fine"}},
                                                            {"nice", {"dull", "grim"}},
                                                            {"fine", {"poor", "nice", "grim"}},
                                                            {"plot", {"film"}},
                                                            {"film", {"plot", "awful"}}};
  const std::vector<std::string> vocab{"good", "nice", "fine", "plot", "film"};
  // es undoes "awful"; "dull" and "poor" survive.
  const oracle::Table there{{"awful", "awful_es"}}, back{{"awful_es", "good"}};

  rtt::ResourceBundle bundle;
  bundle.synonym_table = syn;
  rtt::TranslationTables tables{{{"en", "es"}, table({{"awful", "awful_es"}})},
                                {{"es", "en"}, table({{"awful_es", "good"}})}};
  auto backends = suite(lex, tables);
  rtt::EmbeddingStore no_embeddings;

  std::vector<std::string> sentences;
  std::function<void(std::string, int)> grow = [&](std::string s, int left) {
    if (!s.empty()) sentences.push_back(s);
    if (left == 0) return;
    for (const auto& w : vocab) grow(s.empty() ? w : s + " " + w, left - 1);
  };
  grow("", 4);

  std::size_t instances = 0, successes = 0;
  for (std::optional<double> sim : {std::optional<double>{}, std::optional<double>{0.6}}) {
    for (bool rtt_on : {false, true}) {
      rtt::AttackRecipe recipe;
      recipe.name = "family";
      recipe.transform.use_synonym_table = true;
      recipe.constraints.min_sentence_sim = sim;
      rtt::AttackConfig cfg;
      cfg.rtt_enabled = rtt_on;
      cfg.seen_langs = langs({"es"});
      rtt::AttackEngine engine(recipe, cfg, backends, bundle, no_embeddings);
      for (const auto& text : sentences) {
        int label = oracle::lexicon_label(oracle::words(text), lex);
        auto out = engine.attack({"f", text, label});
        ++instances;
        if (!out.succeeded()) continue;
        ++successes;
        // State before the final commit.
        auto words = oracle::words(text);
        for (std::size_t i = 0; i + 1 < out.perturbations.size(); ++i)
          words[out.perturbations[i].position] = out.perturbations[i].new_word;
        std::size_t idx = out.perturbations.back().position;
        std::optional<std::string> best;
        double best_sim = -1;
        auto it = syn.find(words[idx]);
        for (const auto& c : it == syn.end() ? std::vector<std::string>{} : it->second) {
          if (c == words[idx]) continue;
          auto w = words;
          w[idx] = c;
          std::string cand;
          for (const auto& x : w) cand += (cand.empty() ? "" : " ") + x;
          if (oracle::lexicon_label(w, lex) == label) continue;
          if (rtt_on && oracle::lexicon_label(oracle::round_trip_words(cand, there, back), lex) == label) continue;
          double a = oracle::text_angular(text, cand);
          if (sim && a < *sim) continue;
          if (!best || a > best_sim) {
            best = cand;
            best_sim = a;
          }
        }
        if (!best) {
          r.fail("'" + text + "': oracle finds no viable candidate");
        } else if (*best != *out.adversarial_text) {
          r.fail("'" + text + "': engine committed '" + *out.adversarial_text + "', oracle argmax '" + *best + "'");
        }
      }
    }
  }
  if (successes == 0) r.fail("family produced no successes");
  if (r.ok) r.detail = std::to_string(instances) + " instances, " + std::to_string(successes) + " commits checked";
  return r;
}

Result ac5_metrics() {
  Result r;
  auto expect = [&](const std::string& what, double got, double want) {
    if (!same(got, want)) r.fail(what + " = " + fmt(got) + ", expected " + fmt(want));
  };
  expect("jaccard identity", rtt::jaccard("a good movie", "a good movie"), 1.0);
  expect("jaccard disjoint", rtt::jaccard("good movie", "awful plot"), 0.0);
  expect("jaccard 2-of-4", rtt::jaccard("a good movie", "a good film"), 0.5);
  expect("bleu identity", rtt::bleu("the good movie was long", "the good movie was long"), 1.0);
  expect("levenshtein", static_cast<double>(rtt::levenshtein("kitten", "sitting")), 3.0);
  rtt::AttackOutcome o;
  o.original_text = "one two three four five six seven eight nine ten";
  o.perturbations = {{0, "one", "1"}, {4, "five", "5"}};
  expect("percent_perturbed", rtt::percent_perturbed(o), 20.0);
  auto rel = rtt::relative_success_rate(707, 1000);
  if (!rel) r.fail("relative_success_rate absent");
  else expect("relative_success_rate(707,1000)", *rel, 70.7);
  if (r.ok) r.detail = "7 metric values exact";
  return r;
}

Result ac6_subset() {
  Result r;
  std::size_t pairs = 0;
  for (std::optional<std::size_t> budget : {std::optional<std::size_t>{}, std::optional<std::size_t>{60}}) {
    auto ctx = context(budget);
    for (const auto& name : rtt::recipe_names()) {
      auto res = rtt::run_attack_experiment(corpus(), rtt::make_recipe(name), fixture_langs(), ctx);
      for (std::size_t i = 0; i < corpus().size(); ++i) {
        if (res.rtt_on[i].succeeded()) {
          ++pairs;
          if (!res.rtt_off[i].succeeded()) {
            r.fail(name + " " + corpus()[i].id + " succeeds only with the filter");
          }
        }
      }
    }
  }
  if (r.ok) r.detail = std::to_string(pairs) + " filtered successes, all contained in the plain arm";
  return r;
}

Result ac7_unseen_direction() {
  Result r;
  auto ctx = context();
  auto langs = fixture_langs();
  std::string summary;
  for (const auto& name : rtt::recipe_names()) {
    auto recipe = rtt::make_recipe(name);
    auto rows = rtt::run_unseen_ablation(corpus(), recipe, langs, ctx);
    if (rows.size() != 3) {
      r.fail(name + ": expected 3 splits");
      continue;
    }
    rtt::AttackConfig off;
    auto plain = rtt::AttackEngine(recipe, off, ctx.backends, rs()).attack_corpus(corpus());
    for (const auto& row : rows) {
      rtt::AttackConfig on;
      on.rtt_enabled = true;
      on.seen_langs = row.seen;
      auto filtered = rtt::AttackEngine(recipe, on, ctx.backends, rs()).attack_corpus(corpus());
      auto oracle_rate = [&](const std::vector<rtt::AttackOutcome>& outs) -> std::optional<double> {
        std::size_t wins = 0, kept = 0;
        for (const auto& o : outs) {
          if (!o.succeeded()) continue;
          ++wins;
          kept += world().round_trip_label(*o.adversarial_text, row.unseen.code()) != o.label;
        }
        if (!wins) return std::nullopt;
        return 100.0 * static_cast<double>(kept) / static_cast<double>(wins);
      };
      auto w = oracle_rate(filtered), wo = oracle_rate(plain);
      std::string split = name + "/" + row.unseen.code();
      if (!w || !wo || !row.rate_with || !row.rate_without) {
        r.fail(split + ": rate absent");
        continue;
      }
      if (!same(*row.rate_with, *w) || !same(*row.rate_without, *wo)) {
        r.fail(split + ": rates differ from oracle");
      }
      if (*row.rate_with < *row.rate_without) {
        r.fail(split + ": rate_with " + fmt(*row.rate_with) + " < rate_without " + fmt(*row.rate_without));
      }
      if (name == "textfooler") summary += " " + row.unseen.code() + " " + fmt(*w) + ">=" + fmt(*wo);
    }
  }
  if (r.ok) r.detail = "12 splits match oracle; textfooler" + summary;
  return r;
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(RTT_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Result ac8_determinism() {
  Result r;
  auto dir = fs::temp_directory_path() / ("rtt_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string data = fixture("corpus.jsonl").string();
  std::size_t compared = 0;
  for (std::string run : {"a", "b"}) {
    auto d = dir / run;
    fs::create_directories(d);
    auto p = [&](const char* f) { return (d / f).string(); };
    std::vector<std::string> cmds{
        "attack --dataset " + data + " --recipe textbugger --seed 11 --out " + p("att.jsonl"),
        "attack --dataset " + data + " --recipe deepwordbug --seed 11 --rtt off --out " + p("dwb.jsonl"),
        "eval-rtt --results " + p("dwb.jsonl") + " --out " + p("eval.csv"),
        "ablate-unseen --dataset " + data + " --recipe pwws --seed 11 --out " + p("abl.csv"),
        "sweep --dataset " + data + " --recipe textfooler --seed 11 --out " + p("sweep.csv"),
    };
    for (const auto& c : cmds) {
      if (int code = run_cli(c); code != 0) r.fail("exit " + std::to_string(code) + ": " + c);
    }
  }
  for (const auto& entry : fs::directory_iterator(dir / "a")) {
    auto other = dir / "b" / entry.path().filename();
    ++compared;
    if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
      r.fail(entry.path().filename().string() + " differs between runs");
    }
  }
  fs::remove_all(dir);
  if (compared < 8) r.fail("only " + std::to_string(compared) + " output files produced");
  if (r.ok) r.detail = std::to_string(compared) + " output files byte-identical";
  return r;
}

Result ac9_sweep() {
  Result r;
  auto ctx = context();
  std::string summary;
  for (const auto& name : rtt::recipe_names()) {
    auto rows = rtt::run_replacement_sweep(corpus(), name, kSweepLimits, fixture_langs(), ctx);
    std::string counts;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      counts += (i ? "," : "") + std::to_string(rows[i].robust_successes);
      if (i && rows[i].robust_successes < rows[i - 1].robust_successes) {
        r.fail(name + " drops at limit " + std::to_string(rows[i].limit));
      }
    }
    if (rows.size() != kSweepLimits.size()) r.fail(name + ": wrong row count");
    summary += " " + name + "[" + counts + "]";
  }
  if (r.ok) r.detail = "non-decreasing:" + summary;
  return r;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Result()>>> criteria{
      {"AC1 rtt guarantee", ac1_rtt_guarantee},
      {"AC2 degradation mechanism", ac2_degradation},
      {"AC3 Y(k) monotonicity", ac3_monotonicity},
      {"AC4 greedy-step optimality", ac4_greedy_optimality},
      {"AC5 metric correctness", ac5_metrics},
      {"AC6 subset property", ac6_subset},
      {"AC7 unseen-language direction", ac7_unseen_direction},
      {"AC8 determinism", ac8_determinism},
      {"AC9 sweep monotonicity", ac9_sweep},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Result res;
    try {
      res = fn();
    } catch (const std::exception& e) {
      res.fail(std::string("exception: ") + e.what());
    }
    std::printf("%s %s: %s\n", res.ok ? "PASS" : "FAIL", name, res.detail.c_str());
    failed += !res.ok;
  }
  std::fflush(stdout);
  return failed == 0 ? 0 : 1;
}
