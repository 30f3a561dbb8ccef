#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rdv/engine.h"
#include "rdv/environment.h"
#include "rdv/policy.h"

namespace rdv {

// One channel ensemble of an experiment grid. `rho_label` and
// `omega_label` are the CSV renderings: the common value for homogeneous
// ensembles, otherwise the per-channel values joined with ';'.
struct Setting {
  Environment env;
  std::string rho_label;
  std::string omega_label;
};

// A policy as written in a config. The Exp3 limit point depends on N and
// gamma, so policies are resolved per setting.
struct PolicyEntry {
  std::string name;
  std::optional<PolicySpec> spec;  // empty for the Exp3 limit policy

  ProbabilityVector resolve(std::size_t n, double gamma) const;
};

struct ExperimentConfig {
  std::vector<Setting> settings;
  std::vector<PolicyEntry> policies;
  double gamma = kDefaultGamma;
  std::uint64_t horizon = 0;
  std::uint64_t runs = 1000;
  std::uint64_t seed = 1;
  std::vector<std::uint64_t> checkpoints;
  // Exact ETTRs are reported when the lumped joint state space has at most
  // 2^oracle_limit states (N <= oracle_limit for distinct channels).
  unsigned oracle_limit = 10;
  std::uint64_t max_slots = kDefaultMaxSlots;
  std::uint64_t eval_runs = 1000;
  unsigned workers = 0;

  std::size_t exact_state_limit() const;
};

// Parses a JSON experiment description. Throws ConfigError naming the line
// (for syntax errors) or the offending field.
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

// JSON text of a built-in experiment: "table1", "fig1", "fig2" or "fig3".
std::optional<std::string> preset_json(std::string_view name);
std::vector<std::string_view> preset_names();

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_string() const;
};

// Shortest round-trip decimal rendering (17 significant digits at most);
// "inf" for infinity.
std::string format_number(double x);

// Writes to a sibling temporary file and renames it into place so readers
// never see a truncated file.
void write_csv_atomic(const std::filesystem::path& path, const CsvTable& table);

struct EttrReport {
  // policy,rho,omega,ettr_mean,ettr_stderr,censored,exact_ettr
  CsvTable table;
  std::string summary;
};

// Monte Carlo ETTR of every (setting, policy) cell. Cell (s, k) uses seed
// stream_seed(config.seed, s, k).
EttrReport cmd_ettr(const ExperimentConfig& config);

struct LearnSettingReport {
  CsvTable trajectory;    // run,t,channel,p
  CsvTable ettr_vs_time;  // t,mean_ettr,stderr
  std::vector<double> mean_sorted_final;      // descending
  std::vector<std::uint64_t> argmax_counts;   // per channel, over runs
  double mean_top_probability = 0.0;
};

struct LearnReport {
  CsvTable settings;  // setting,rho,omega
  std::vector<LearnSettingReport> per_setting;
  std::string summary;
};

// Learning study per setting. Setting s uses seed stream_seed(config.seed, s).
LearnReport cmd_learn(const ExperimentConfig& config);

struct OracleReport {
  // policy,rho,omega,iid,frozen,markov_exact,note
  CsvTable table;
  std::string summary;
};

OracleReport cmd_oracle(const ExperimentConfig& config);

}  // namespace rdv
