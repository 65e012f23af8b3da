// Command-line runner for the gluing expansions, the period quadrature
// oracle, the Mumford-form densities, and the randomized law suites.
// Reports are deterministic JSON (or a text rendering of the same data);
// exit codes: 0 all comparisons pass, 1 a comparison failed, 2 bad config.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "superperiod/harness.hpp"

using namespace superperiod;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  bool no_timestamp = false;
  int jobs = 0;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "JSON scenario configuration file");
  cmd->add_option("--out", opts.out_path, "write the report to this path (default: stdout)");
  cmd->add_option("--format", opts.format, "report format: json | text")
      ->check(CLI::IsMember({"json", "text"}));
  cmd->add_flag("--no-timestamp", opts.no_timestamp,
                "suppress the timestamp/timing fields (byte-stable reports)");
  cmd->add_option("--jobs", opts.jobs, "parallelism for independent scenario items");
}

ScenarioConfig load_config(const CommonOpts& opts, const std::string& mode,
                           const std::string& suite = "") {
  json j = json::object();
  if (!opts.config_path.empty()) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config file: " + opts.config_path);
    try {
      in >> j;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("config parse error: ") + e.what());
    }
  }
  auto cfg = ScenarioConfig::from_json(j, mode);
  if (opts.jobs > 0) cfg.jobs = opts.jobs;
  if (!suite.empty()) cfg.suite = suite;
  if (cfg.mode == "suite" && cfg.suite.empty()) throw ConfigError("suite mode needs a suite name");
  return cfg;
}

int emit(Report& rep, const CommonOpts& opts) {
  json j = rep.finalize(!opts.no_timestamp);
  std::string payload = opts.format == "text" ? Report::render_text(j) : j.dump(2) + "\n";
  if (opts.out_path.empty()) {
    std::cout << payload;
  } else {
    std::ofstream out(opts.out_path, std::ios::binary);
    if (!out) {
      std::cerr << "error: cannot write report to " << opts.out_path << "\n";
      return 2;
    }
    out << payload;
  }
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"superperiod: separating-node gluing expansions, superperiod matrices,\n"
               "hyperelliptic period quadrature, and Mumford-form densities"};
  app.require_subcommand(1);

  struct Sub {
    const char* name;
    const char* help;
    const char* mode;
    void (*runner)(const ScenarioConfig&, Report&);
  };
  static const Sub subs[] = {
      {"expand-even", "classical separating-node gluing: basis and period matrix in q", "even",
       run_even_scenario},
      {"expand-super", "(+,+) super gluing: basis, superperiod matrix, canonical pullback",
       "plus_plus", run_super_scenario},
      {"expand-mm", "(-,-) gluing: constrained module, Laurent periods, Berezinian comparison",
       "minus_minus", run_minus_minus_scenario},
      {"periods", "numerical period matrix of a six-point branch configuration", "oracle",
       run_periods_scenario},
      {"mumford", "genus-1/2 Mumford densities, pushforward data, measure polar term",
       "hyperelliptic", run_hyperelliptic_scenario},
      {"oracle-compare", "quadrature vs expansion on the glued family with error ratios",
       "oracle", run_oracle_compare_scenario},
      {"probe-log", "logarithmic degeneration probe for merging branch points", "oracle",
       run_probe_scenario},
  };

  CommonOpts opts[8];
  int idx = 0;
  int rc = -1;
  for (const auto& sub : subs) {
    auto* cmd = app.add_subcommand(sub.name, sub.help);
    add_common(cmd, opts[idx]);
    auto* o = &opts[idx];
    const Sub* s = &sub;
    cmd->callback([o, s, &rc]() {
      auto cfg = load_config(*o, s->mode);
      Report rep(cfg);
      s->runner(cfg, rep);
      rc = emit(rep, *o);
    });
    ++idx;
  }

  static std::string suite_name;
  auto* suite_cmd = app.add_subcommand("suite", "randomized law suites: grassmann | elliptic");
  suite_cmd->add_option("name", suite_name, "suite name")->required();
  add_common(suite_cmd, opts[7]);
  suite_cmd->callback([&]() {
    auto cfg = load_config(opts[7], "suite", suite_name);
    Report rep(cfg);
    run_suite_scenario(cfg, rep);
    rc = emit(rep, opts[7]);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc < 0 ? 2 : rc;
}
