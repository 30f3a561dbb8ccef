// rdv: experiment runner for blind multichannel rendezvous.
//
//   rdv ettr   --config exp.json [--seed S] [--runs R] [--out-dir DIR]
//   rdv learn  --preset fig3 --out-dir results/
//   rdv oracle --config exp.json
//   rdv preset table1            # print a built-in config
//
// The output directory defaults to $RDV_OUT_DIR, then "results".

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "rdv/error.h"
#include "rdv/experiment.h"

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string preset;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> runs;
  std::optional<unsigned> workers;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  auto* config = cmd->add_option("--config", opts.config_path, "JSON experiment file");
  auto* preset = cmd->add_option("--preset", opts.preset,
                                 "built-in experiment (table1, fig1, fig2, fig3)");
  config->excludes(preset);
  cmd->add_option("--seed", opts.seed, "override the config seed");
  cmd->add_option("--runs", opts.runs, "override the number of runs")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--workers", opts.workers, "worker threads (0 = all cores)");
  cmd->add_option("--out-dir", opts.out_dir, "directory for CSV output");
}

rdv::ExperimentConfig resolve_config(const CommonOptions& opts) {
  rdv::ExperimentConfig config;
  if (!opts.preset.empty()) {
    const auto text = rdv::preset_json(opts.preset);
    if (!text) throw rdv::ConfigError("", "unknown preset '" + opts.preset + "'");
    config = rdv::parse_config(*text);
  } else if (!opts.config_path.empty()) {
    config = rdv::load_config(opts.config_path);
  } else {
    throw rdv::ConfigError("", "one of --config or --preset is required");
  }
  if (opts.seed) config.seed = *opts.seed;
  if (opts.runs) config.runs = *opts.runs;
  if (opts.workers) config.workers = *opts.workers;
  return config;
}

fs::path output_dir(const CommonOptions& opts) {
  if (!opts.out_dir.empty()) return opts.out_dir;
  if (const char* env = std::getenv("RDV_OUT_DIR"); env && *env) return env;
  return "results";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blind multichannel rendezvous experiments"};
  app.require_subcommand(1);

  CommonOptions ettr_opts;
  auto* ettr = app.add_subcommand("ettr", "ETTR of fixed blind policies (Monte Carlo + exact)");
  add_common(ettr, ettr_opts);

  CommonOptions learn_opts;
  auto* learn = app.add_subcommand("learn", "Exp3 learning trajectories and ETTR vs time");
  add_common(learn, learn_opts);

  CommonOptions oracle_opts;
  auto* oracle = app.add_subcommand("oracle", "exact ETTRs: iid, frozen and Markov solve");
  add_common(oracle, oracle_opts);

  std::string preset_name;
  auto* preset = app.add_subcommand("preset", "print a built-in experiment config");
  preset->add_option("name", preset_name, "preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*preset) {
      const auto text = rdv::preset_json(preset_name);
      if (!text) {
        std::cerr << "unknown preset '" << preset_name << "'; available:";
        for (auto name : rdv::preset_names()) std::cerr << " " << name;
        std::cerr << "\n";
        return 2;
      }
      std::cout << *text << "\n";
      return 0;
    }

    if (*ettr) {
      const auto config = resolve_config(ettr_opts);
      const fs::path dir = output_dir(ettr_opts);
      const auto report = rdv::cmd_ettr(config);
      rdv::write_csv_atomic(dir / "ettr.csv", report.table);
      std::cout << report.summary << "wrote " << (dir / "ettr.csv").string() << "\n";
    } else if (*learn) {
      const auto config = resolve_config(learn_opts);
      const fs::path dir = output_dir(learn_opts);
      const auto report = rdv::cmd_learn(config);
      for (std::size_t s = 0; s < report.per_setting.size(); ++s) {
        const std::string stem = "learn_s" + std::to_string(s);
        rdv::write_csv_atomic(dir / (stem + "_trajectory.csv"),
                              report.per_setting[s].trajectory);
        rdv::write_csv_atomic(dir / (stem + "_ettr_vs_time.csv"),
                              report.per_setting[s].ettr_vs_time);
      }
      rdv::write_csv_atomic(dir / "learn_settings.csv", report.settings);
      std::cout << report.summary << "wrote " << report.per_setting.size()
                << " setting(s) to " << dir.string() << "\n";
    } else if (*oracle) {
      const auto config = resolve_config(oracle_opts);
      const fs::path dir = output_dir(oracle_opts);
      const auto report = rdv::cmd_oracle(config);
      rdv::write_csv_atomic(dir / "oracle.csv", report.table);
      std::cout << report.summary << "wrote " << (dir / "oracle.csv").string() << "\n";
    }
  } catch (const rdv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
