// Command-line front end for the round-trip robust attack library.
//
//   rtt_attack attack        paired attack run (filter on/off), JSONL + summary CSV
//   rtt_attack eval-rtt      at-least-k round-trip robustness curve of a results file
//   rtt_attack ablate-unseen leave-one-language-out ablation
//   rtt_attack sweep         robust successes per replacement limit
//
// Exit codes: 0 success, 1 configuration/input error, 2 backend failure.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rtt/remote.hpp"
#include "rtt/rtt.hpp"

#ifndef RTT_DEFAULT_RESOURCES
#define RTT_DEFAULT_RESOURCES "data/fixtures/manifest.txt"
#endif

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBackend = 2;

struct BackendOptions {
  std::string backend = "builtin";
  std::string endpoint;
  int timeout_ms = 30000;
  std::string resources = RTT_DEFAULT_RESOURCES;
  std::uint64_t seed = 0;
  std::string langs = "es,de,fr";
  std::optional<std::size_t> budget;
};

void add_backend_options(CLI::App* cmd, BackendOptions& o) {
  cmd->add_option("--langs", o.langs, "Comma-separated language codes")->capture_default_str();
  cmd->add_option("--backend", o.backend, "Model backend")
      ->check(CLI::IsMember({"builtin", "remote"}))
      ->capture_default_str();
  cmd->add_option("--endpoint", o.endpoint, "Model server URL (overridden by RTT_ATTACK_ENDPOINT)");
  cmd->add_option("--timeout-ms", o.timeout_ms, "Remote call timeout")->capture_default_str();
  cmd->add_option("--resources", o.resources, "Resource manifest")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Seed for character perturbations")->capture_default_str();
  cmd->add_option("--budget", o.budget, "Victim query budget per example");
}

rtt::BackendSuite make_backends(const BackendOptions& o, const rtt::ResourceSet& resources) {
  if (o.backend == "builtin") return rtt::make_builtin_backends(resources);
  std::string url = o.endpoint;
  if (const char* env = std::getenv("RTT_ATTACK_ENDPOINT"); env && *env) url = env;
  if (url.empty()) throw rtt::ConfigError("--backend remote needs --endpoint or RTT_ATTACK_ENDPOINT");
  rtt::RemoteEndpoint ep;
  ep.url = url;
  ep.timeout_ms = o.timeout_ms;
  return rtt::make_remote_backends(ep);
}

std::filesystem::path sibling(const std::filesystem::path& out, const std::string& suffix) {
  auto p = out;
  p.replace_extension();
  p += suffix;
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Round-trip translation robust adversarial attacks"};
  app.require_subcommand(1);

  BackendOptions attack_be;
  std::string attack_dataset, attack_recipe, attack_rtt = "on", attack_out;
  std::size_t attack_limit = rtt::kDefaultReplacementLimit;
  auto* attack = app.add_subcommand("attack", "Run the attack with and without the round-trip filter");
  attack->add_option("--dataset", attack_dataset, "JSONL dataset")->required();
  attack->add_option("--recipe", attack_recipe, "Attack recipe")
      ->required()
      ->check(CLI::IsMember(rtt::recipe_names()));
  attack->add_option("--rtt", attack_rtt, "Which arm goes to --out")
      ->check(CLI::IsMember({"on", "off"}))
      ->capture_default_str();
  attack->add_option("--limit", attack_limit, "Replacement generation limit")->capture_default_str();
  attack->add_option("--out", attack_out, "Results JSONL for the selected arm")->required();
  add_backend_options(attack, attack_be);

  BackendOptions eval_be;
  std::string eval_results, eval_out;
  auto* eval = app.add_subcommand("eval-rtt", "At-least-k round-trip robustness of attack results");
  eval->add_option("--results", eval_results, "Results JSONL")->required();
  eval->add_option("--out", eval_out, "Output CSV")->required();
  add_backend_options(eval, eval_be);

  BackendOptions abl_be;
  std::string abl_dataset, abl_recipe = "textfooler", abl_out;
  std::size_t abl_limit = rtt::kDefaultReplacementLimit;
  auto* ablate = app.add_subcommand("ablate-unseen", "Leave-one-language-out ablation");
  ablate->add_option("--dataset", abl_dataset, "JSONL dataset")->required();
  ablate->add_option("--recipe", abl_recipe, "Attack recipe")
      ->check(CLI::IsMember(rtt::recipe_names()))
      ->capture_default_str();
  ablate->add_option("--limit", abl_limit, "Replacement generation limit")->capture_default_str();
  ablate->add_option("--out", abl_out, "Output CSV")->required();
  add_backend_options(ablate, abl_be);

  BackendOptions sweep_be;
  std::string sweep_dataset, sweep_recipe = "textfooler", sweep_limits = "1,5,10,20,40", sweep_out;
  auto* sweep = app.add_subcommand("sweep", "Robust successes per replacement limit");
  sweep->add_option("--dataset", sweep_dataset, "JSONL dataset")->required();
  sweep->add_option("--recipe", sweep_recipe, "Attack recipe")
      ->check(CLI::IsMember(rtt::recipe_names()))
      ->capture_default_str();
  sweep->add_option("--limits", sweep_limits, "Comma-separated limits")->capture_default_str();
  sweep->add_option("--out", sweep_out, "Output CSV")->required();
  add_backend_options(sweep, sweep_be);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*attack) {
      auto resources = rtt::load_resource_set(attack_be.resources);
      auto backends = make_backends(attack_be, resources);
      auto langs = rtt::parse_langs(attack_be.langs);
      auto examples = rtt::load_dataset(attack_dataset);
      auto recipe = rtt::make_recipe(attack_recipe, attack_limit);
      rtt::ExperimentContext ctx{resources, backends, attack_be.seed, attack_be.budget};
      auto res = rtt::run_attack_experiment(examples, recipe, langs, ctx);
      bool on = attack_rtt == "on";
      rtt::write_records(attack_out, on ? res.rtt_on_records : res.rtt_off_records);
      rtt::write_records(sibling(attack_out, on ? ".rtt_off.jsonl" : ".rtt_on.jsonl"),
                         on ? res.rtt_off_records : res.rtt_on_records);
      auto csv = rtt::summary_csv(res.summary);
      rtt::write_text_file(sibling(attack_out, ".summary.csv"), csv);
      std::cout << csv;
      if (res.any_backend_error()) {
        std::cerr << "some examples failed with backend errors; see the error field in the results\n";
        return kExitBackend;
      }
    } else if (*eval) {
      auto resources = rtt::load_resource_set(eval_be.resources);
      auto backends = make_backends(eval_be, resources);
      auto langs = rtt::parse_langs(eval_be.langs);
      auto records = rtt::read_records(eval_results);
      std::size_t failures = 0;
      auto rows = rtt::run_rtt_robustness_eval(records, langs, backends, &failures);
      auto csv = rtt::robustness_csv(rows);
      rtt::write_text_file(eval_out, csv);
      std::cout << csv;
      if (failures) {
        std::cerr << failures << " examples excluded after backend failures\n";
        return kExitBackend;
      }
    } else if (*ablate) {
      auto resources = rtt::load_resource_set(abl_be.resources);
      auto backends = make_backends(abl_be, resources);
      auto langs = rtt::parse_langs(abl_be.langs);
      auto examples = rtt::load_dataset(abl_dataset);
      rtt::ExperimentContext ctx{resources, backends, abl_be.seed, abl_be.budget};
      auto rows = rtt::run_unseen_ablation(examples, rtt::make_recipe(abl_recipe, abl_limit), langs, ctx);
      auto csv = rtt::ablation_csv(rows);
      rtt::write_text_file(abl_out, csv);
      std::cout << csv;
    } else if (*sweep) {
      auto resources = rtt::load_resource_set(sweep_be.resources);
      auto backends = make_backends(sweep_be, resources);
      auto langs = rtt::parse_langs(sweep_be.langs);
      auto examples = rtt::load_dataset(sweep_dataset);
      std::vector<std::size_t> limits;
      for (const auto& piece : rtt::detail::split(sweep_limits, ',')) {
        auto v = rtt::detail::parse_real(piece);
        if (!v || *v < 1 || *v != static_cast<double>(static_cast<std::size_t>(*v))) {
          throw rtt::ConfigError("invalid replacement limit '" + piece + "'");
        }
        limits.push_back(static_cast<std::size_t>(*v));
      }
      rtt::ExperimentContext ctx{resources, backends, sweep_be.seed, sweep_be.budget};
      auto rows = rtt::run_replacement_sweep(examples, sweep_recipe, limits, langs, ctx);
      auto csv = rtt::sweep_csv(rows);
      rtt::write_text_file(sweep_out, csv);
      std::cout << csv;
    }
  } catch (const rtt::BackendError& e) {
    std::cerr << "backend error: " << e.what() << '\n';
    return kExitBackend;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitOk;
}
