// Command-line front end: validate, fig2, fig3, fig4, sweep.
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "secnoma/experiments.hpp"

namespace ex = secnoma::experiments;

namespace {

constexpr int kExitValidationFailure = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<unsigned> workers;
  std::string out;
  std::string mode;
};

std::string keys_help() {
  std::string text = "Config file keys (key = value, '#' comments):\n";
  for (const auto& [key, help] : ex::config_keys()) {
    text += "  " + key + std::string(key.size() < 16 ? 16 - key.size() : 1, ' ') + help + "\n";
  }
  return text;
}

ex::ExperimentConfig build_config(const Options& o) {
  ex::ExperimentConfig c = o.config_path.empty() ? ex::parse_config("") : ex::load_config(o.config_path);
  if (o.seed) c.master_seed = *o.seed;
  if (o.trials) c.n_trials = *o.trials;
  if (o.workers) c.workers = *o.workers;
  if (!o.out.empty()) c.output_path = o.out;
  if (o.mode == "annulus") c.mode.kind = secnoma::SamplingModeKind::kPaperGeometry;
  if (o.mode == "analytic") c.mode.kind = secnoma::SamplingModeKind::kAnalyticMatched;
  c.validate();
  return c;
}

ex::CommandResult run(const std::string& command, const ex::ExperimentConfig& c) {
  if (command == "validate") return ex::cmd_validate(c);
  if (command == "fig2") return ex::cmd_fig2(c);
  if (command == "fig3") return ex::cmd_fig3(c);
  if (command == "fig4") return ex::cmd_fig4(c);
  return ex::cmd_sweep(c);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secrecy outage probability of cooperative NOMA pairs: analytic vs Monte Carlo"};
  app.footer(keys_help());
  app.require_subcommand(1);

  Options opts;
  const std::pair<const char*, const char*> commands[] = {
      {"validate", "analytic-vs-Monte-Carlo table; exit 1 if any row fails"},
      {"fig2", "SOP versus r_p for two eavesdropper densities"},
      {"fig3", "SOP versus P_BS: secure coop, coop without eavesdroppers, non-coop"},
      {"fig4", "weak-user SOP versus P_C for several beta"},
      {"sweep", "generic sweep of one config field (sweep_* keys)"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opts.config_path, "config file")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "master seed");
    sub->add_option("--trials", opts.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    sub->add_option("--workers", opts.workers, "worker threads (0 = all cores)");
    sub->add_option("--out", opts.out, "CSV output path (default: stdout)");
    sub->add_option("--mode", opts.mode, "sampling mode")->check(CLI::IsMember({"annulus", "analytic"}));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  std::uint64_t shown = 0;
  secnoma::analytic::set_diagnostic_handler([&shown](std::string_view where, double raw) {
    if (shown++ < 5) std::cerr << "diagnostic: " << where << " raw CDF " << raw << " clamped\n";
  });

  ex::ExperimentConfig config;
  try {
    config = build_config(opts);
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  }

  ex::CommandResult result;
  try {
    result = run(command, config);
  } catch (const ex::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const secnoma::analytic::PreconditionError& e) {
    std::cerr << "precondition: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidationFailure;
  }

  if (config.output_path.empty()) {
    ex::write_csv(std::cout, result.table, config);
  } else {
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) {
      std::cerr << "cannot write " << config.output_path << '\n';
      return kExitUsage;
    }
    ex::write_csv(out, result.table, config);
    if (command == "validate") ex::write_pretty(std::cout, result.table);
  }
  const auto diagnostics = secnoma::analytic::diagnostic_count();
  if (diagnostics > 0) {
    std::cerr << diagnostics << " CDF value(s) outside [-1e-6, 1 + 1e-6] were clamped\n";
  }
  if (result.exit_code != 0) std::cerr << command << ": at least one check failed\n";
  return result.exit_code;
}
