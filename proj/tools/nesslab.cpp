// Experiment runner for the reservoir-driven Maxwellian-gas laboratory.
//
// Subcommands: ness, evolve, dsmc, entropy, validate. Each takes an optional
// JSON config plus overrides; the effective config is echoed into the output
// directory for provenance. Exit codes: 0 success, 1 assertion or acceptance
// failure, 2 configuration error.

#include <cstdio>
#include <exception>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ness/config.hpp"
#include "ness/errors.hpp"
#include "ness/run.hpp"

namespace {

struct CliOptions {
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::vector<std::string> overrides;
};

int run(const std::string& experiment, const CliOptions& opt) {
  nlohmann::json raw;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw ness::ConfigError("cannot open config file " + opt.config_path);
    try {
      in >> raw;
    } catch (const nlohmann::json::parse_error& e) {
      throw ness::ConfigError("config parse error: " + std::string(e.what()));
    }
  } else {
    raw = nlohmann::json::object();
  }

  if (raw.contains("experiment")) {
    if (raw.at("experiment") != experiment) {
      throw ness::ConfigError("config experiment \"" +
                              raw.at("experiment").get<std::string>() +
                              "\" does not match subcommand \"" + experiment + "\"");
    }
  }
  raw["experiment"] = experiment;
  if (opt.seed_set) raw["seed"] = opt.seed;
  if (!opt.out_dir.empty()) raw["out"] = opt.out_dir;
  for (const auto& kv : opt.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw ness::ConfigError("--set expects key.path=value, got \"" + kv + "\"");
    }
    ness::apply_override(raw, kv.substr(0, eq), kv.substr(eq + 1));
  }

  const ness::RunConfig cfg = ness::parse_config(raw);
  return ness::run_experiment(cfg);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nesslab: steady states, relaxation rates and entropy production\n"
               "of a spatially uniform Maxwellian-collision gas coupled to thermal\n"
               "reservoirs"};
  app.require_subcommand(1);

  CliOptions opt;
  std::string chosen;
  const std::pair<const char*, const char*> kSubcommands[] = {
      {"ness", "solve the steady state by contractive fixed-point iteration"},
      {"evolve", "integrate in time and fit decay rates against theory"},
      {"dsmc", "particle Monte Carlo oracle with replica statistics"},
      {"entropy", "entropy-production ledger for jump reservoirs"},
      {"validate", "run the acceptance suite and print the criterion table"}};
  for (const auto& [name, blurb] : kSubcommands) {
    auto* sub = app.add_subcommand(name, blurb);
    sub->add_option("--config", opt.config_path, "JSON config file");
    sub->add_option("--seed", opt.seed, "random seed (64-bit)")
        ->each([&](const std::string&) { opt.seed_set = true; });
    sub->add_option("--out", opt.out_dir, "output directory");
    sub->add_option("--set", opt.overrides, "override a config key, e.g. --set gamma=0.4")
        ->take_all();
    sub->callback([&chosen, name] { chosen = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // command-line misuse is a config error
  }

  try {
    return run(chosen, opt);
  } catch (const ness::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const ness::DomainError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
