#include "rdv/experiment.h"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <system_error>

#include "rdv/error.h"
#include "rdv/random.h"

namespace rdv {
namespace {

using nlohmann::json;

constexpr std::string_view kTable1 = R"({
  "environment": {"n": 16, "rho": [0.1, 0.5, 0.9], "omega": [0.1, 0.5, 0.9]},
  "profile": {"r0": 0.001, "r1": 1.0},
  "policies": [
    "single",
    "uniform",
    "harmonic",
    {"kind": "one-plus-eps", "eps": 0.2},
    "square",
    "sqrt",
    {"kind": "exp3-limit", "name": "exp3"}
  ],
  "gamma": 0.02,
  "runs": 10000,
  "seed": 2021
})";

constexpr std::string_view kFig1 = R"({
  "environment": {"n": 16, "rho": [0.1, 0.5, 0.9], "omega": 0.5},
  "profile": {"r0": 0.001, "r1": 1.0},
  "gamma": 0.02,
  "horizon": 800000,
  "checkpoints": [0, 20000, 40000, 60000, 80000, 100000, 150000, 200000,
                  250000, 300000, 350000, 400000, 500000, 600000, 700000,
                  800000],
  "runs": 10,
  "eval_runs": 500,
  "seed": 2021
})";

constexpr std::string_view kFig2 = R"({
  "environment": {"n": 16, "rho": [0.1, 0.5, 0.9], "omega": [0.1, 0.5, 0.9]},
  "profile": {"r0": 0.001, "r1": 1.0},
  "gamma": 0.02,
  "horizon": 800000,
  "checkpoints": [0, 25000, 50000, 100000, 200000, 400000, 800000],
  "runs": 50,
  "eval_runs": 1000,
  "seed": 2021
})";

constexpr std::string_view kFig3 = R"({
  "environment": [
    {"channels": [{"rho": 0.0, "omega": 0.1}, {"rho": 0.1, "omega": 0.1},
                  {"rho": 0.2, "omega": 0.1}, {"rho": 0.3, "omega": 0.1},
                  {"rho": 0.4, "omega": 0.1}, {"rho": 0.5, "omega": 0.1},
                  {"rho": 0.6, "omega": 0.1}, {"rho": 0.7, "omega": 0.1},
                  {"rho": 0.8, "omega": 0.1}, {"rho": 0.9, "omega": 0.1}]},
    {"channels": [{"rho": 0.0, "omega": 0.5}, {"rho": 0.1, "omega": 0.5},
                  {"rho": 0.2, "omega": 0.5}, {"rho": 0.3, "omega": 0.5},
                  {"rho": 0.4, "omega": 0.5}, {"rho": 0.5, "omega": 0.5},
                  {"rho": 0.6, "omega": 0.5}, {"rho": 0.7, "omega": 0.5},
                  {"rho": 0.8, "omega": 0.5}, {"rho": 0.9, "omega": 0.5}]},
    {"channels": [{"rho": 0.0, "omega": 0.9}, {"rho": 0.1, "omega": 0.9},
                  {"rho": 0.2, "omega": 0.9}, {"rho": 0.3, "omega": 0.9},
                  {"rho": 0.4, "omega": 0.9}, {"rho": 0.5, "omega": 0.9},
                  {"rho": 0.6, "omega": 0.9}, {"rho": 0.7, "omega": 0.9},
                  {"rho": 0.8, "omega": 0.9}, {"rho": 0.9, "omega": 0.9}]}
  ],
  "profile": {"r0": 0.001, "r1": 1.0},
  "gamma": 0.02,
  "horizon": 50000,
  "checkpoints": [0, 2500, 5000, 7500, 10000, 15000, 20000, 30000, 40000,
                  50000],
  "runs": 50,
  "eval_runs": 500,
  "seed": 2021
})";

const std::map<std::string_view, std::string_view>& presets() {
  static const std::map<std::string_view, std::string_view> table{
      {"fig1", kFig1}, {"fig2", kFig2}, {"fig3", kFig3}, {"table1", kTable1}};
  return table;
}

// Typed accessors that report the JSON path of bad values.
double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path, "expected a number");
  return j.get<double>();
}

std::uint64_t get_count(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (v >= 0.0 && v == std::floor(v) && v < 1.8e19) {
      return static_cast<std::uint64_t>(v);
    }
  }
  throw ConfigError(path, "expected a nonnegative integer");
}

std::vector<double> get_number_list(const json& j, const std::string& path) {
  if (j.is_number()) return {j.get<double>()};
  if (!j.is_array() || j.empty()) {
    throw ConfigError(path, "expected a number or a nonempty array");
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(get_number(j[i], path + "/" + std::to_string(i)));
  }
  return out;
}

void reject_unknown_keys(const json& j, const std::string& path,
                         std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError(path + "/" + key, "unknown field");
    }
  }
}

template <typename F>
auto with_path(const std::string& path, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(path, e.what());
  }
}

std::string join_labels(const std::vector<ChannelParams>& channels,
                        double (ChannelParams::*field)() const) {
  const double first = (channels.front().*field)();
  const bool uniform =
      std::all_of(channels.begin(), channels.end(),
                  [&](const ChannelParams& c) { return (c.*field)() == first; });
  if (uniform) return format_number(first);
  std::string out;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (i) out += ';';
    out += format_number((channels[i].*field)());
  }
  return out;
}

Setting make_setting(std::vector<ChannelParams> channels,
                     const RendezvousProfile& profile) {
  std::string rho = join_labels(channels, &ChannelParams::rho);
  std::string omega = join_labels(channels, &ChannelParams::omega);
  return Setting{Environment(std::move(channels), profile), std::move(rho),
                 std::move(omega)};
}

void parse_environment(const json& j, const std::string& path,
                       const RendezvousProfile& profile,
                       std::vector<Setting>& out) {
  if (!j.is_object()) throw ConfigError(path, "expected an object");
  if (j.contains("channels")) {
    reject_unknown_keys(j, path, {"channels"});
    const json& list = j["channels"];
    if (!list.is_array()) throw ConfigError(path + "/channels", "expected an array");
    std::vector<ChannelParams> channels;
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string at = path + "/channels/" + std::to_string(i);
      if (!list[i].is_object()) throw ConfigError(at, "expected an object");
      reject_unknown_keys(list[i], at, {"rho", "omega"});
      if (!list[i].contains("rho")) throw ConfigError(at + "/rho", "missing");
      const double rho = get_number(list[i]["rho"], at + "/rho");
      const double omega =
          list[i].contains("omega") ? get_number(list[i]["omega"], at + "/omega")
                                    : 0.0;
      channels.push_back(with_path(at, [&] { return ChannelParams(rho, omega); }));
    }
    out.push_back(
        with_path(path + "/channels", [&] { return make_setting(channels, profile); }));
    return;
  }

  reject_unknown_keys(j, path, {"n", "rho", "omega"});
  for (const char* key : {"n", "rho", "omega"}) {
    if (!j.contains(key)) throw ConfigError(path + "/" + key, "missing");
  }
  const std::uint64_t n = get_count(j["n"], path + "/n");
  const auto rhos = get_number_list(j["rho"], path + "/rho");
  const auto omegas = get_number_list(j["omega"], path + "/omega");
  for (double rho : rhos) {
    for (double omega : omegas) {
      const ChannelParams params =
          with_path(path, [&] { return ChannelParams(rho, omega); });
      out.push_back(with_path(path + "/n", [&] {
        return make_setting(std::vector<ChannelParams>(n, params), profile);
      }));
    }
  }
}

PolicyEntry parse_policy(const json& j, const std::string& path) {
  std::string kind;
  std::string name;
  if (j.is_string()) {
    kind = j.get<std::string>();
  } else if (j.is_object()) {
    reject_unknown_keys(j, path, {"kind", "name", "eps", "p"});
    if (!j.contains("kind") || !j["kind"].is_string()) {
      throw ConfigError(path + "/kind", "expected a policy kind string");
    }
    kind = j["kind"].get<std::string>();
    if (j.contains("name")) {
      if (!j["name"].is_string()) throw ConfigError(path + "/name", "expected a string");
      name = j["name"].get<std::string>();
    }
  } else {
    throw ConfigError(path, "expected a policy name or object");
  }
  if (name.empty()) name = kind;

  if (kind == "exp3-limit") return PolicyEntry{name, std::nullopt};

  const auto parsed = parse_policy_kind(kind);
  if (!parsed) throw ConfigError(path, "unknown policy kind '" + kind + "'");
  switch (*parsed) {
    case PolicyKind::kOnePlusEps: {
      if (!j.is_object() || !j.contains("eps")) {
        throw ConfigError(path + "/eps", "one-plus-eps requires eps");
      }
      const double eps = get_number(j["eps"], path + "/eps");
      return PolicyEntry{name, with_path(path + "/eps", [&] {
                           return PolicySpec::one_plus_eps(eps);
                         })};
    }
    case PolicyKind::kExplicit: {
      if (!j.is_object() || !j.contains("p")) {
        throw ConfigError(path + "/p", "explicit policy requires p");
      }
      auto p = get_number_list(j["p"], path + "/p");
      return PolicyEntry{name, with_path(path + "/p", [&] {
                           return PolicySpec::explicit_policy(
                               ProbabilityVector(std::move(p)));
                         })};
    }
    default:
      if (j.is_object() && (j.contains("eps") || j.contains("p"))) {
        throw ConfigError(path, kind + " takes no parameters");
      }
      return PolicyEntry{name, PolicySpec::simple(*parsed)};
  }
}

std::size_t line_of_offset(std::string_view text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(
                 std::count(text.begin(), text.begin() + offset, '\n'));
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

ProbabilityVector PolicyEntry::resolve(std::size_t n, double gamma) const {
  if (!spec) return exp3_limit_policy(gamma, n);
  return build_policy(*spec, n);
}

std::size_t ExperimentConfig::exact_state_limit() const {
  return oracle_limit >= 63 ? std::numeric_limits<std::size_t>::max()
                            : std::size_t{1} << oracle_limit;
}

ExperimentConfig parse_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError("", "JSON syntax error at line " +
                              std::to_string(line_of_offset(json_text, e.byte)) +
                              ": " + e.what());
  }
  if (!root.is_object()) throw ConfigError("", "top level must be an object");
  reject_unknown_keys(root, "",
                      {"environment", "profile", "policies", "gamma", "horizon",
                       "runs", "seed", "checkpoints", "oracle_limit",
                       "max_slots", "eval_runs", "workers"});

  ExperimentConfig config;

  double r0 = 0.001;
  double r1 = 1.0;
  if (root.contains("profile")) {
    const json& p = root["profile"];
    if (!p.is_object()) throw ConfigError("/profile", "expected an object");
    reject_unknown_keys(p, "/profile", {"r0", "r1"});
    if (p.contains("r0")) r0 = get_number(p["r0"], "/profile/r0");
    if (p.contains("r1")) r1 = get_number(p["r1"], "/profile/r1");
  }
  const RendezvousProfile profile =
      with_path("/profile", [&] { return RendezvousProfile(r0, r1); });

  if (!root.contains("environment")) {
    throw ConfigError("/environment", "missing");
  }
  const json& env = root["environment"];
  if (env.is_array()) {
    for (std::size_t i = 0; i < env.size(); ++i) {
      parse_environment(env[i], "/environment/" + std::to_string(i), profile,
                        config.settings);
    }
  } else {
    parse_environment(env, "/environment", profile, config.settings);
  }

  if (root.contains("policies")) {
    const json& list = root["policies"];
    if (!list.is_array()) throw ConfigError("/policies", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      config.policies.push_back(
          parse_policy(list[i], "/policies/" + std::to_string(i)));
    }
  }

  if (root.contains("gamma")) {
    config.gamma = get_number(root["gamma"], "/gamma");
    if (!(config.gamma > 0.0 && config.gamma <= 1.0)) {
      throw ConfigError("/gamma", "must lie in (0, 1]");
    }
  }
  if (root.contains("horizon")) config.horizon = get_count(root["horizon"], "/horizon");
  if (root.contains("runs")) {
    config.runs = get_count(root["runs"], "/runs");
    if (config.runs == 0) throw ConfigError("/runs", "must be positive");
  }
  if (root.contains("seed")) config.seed = get_count(root["seed"], "/seed");
  if (root.contains("checkpoints")) {
    const json& list = root["checkpoints"];
    if (!list.is_array()) throw ConfigError("/checkpoints", "expected an array");
    for (std::size_t i = 0; i < list.size(); ++i) {
      config.checkpoints.push_back(
          get_count(list[i], "/checkpoints/" + std::to_string(i)));
      if (i > 0 && config.checkpoints[i] <= config.checkpoints[i - 1]) {
        throw ConfigError("/checkpoints/" + std::to_string(i),
                          "checkpoints must be strictly ascending");
      }
    }
  }
  if (root.contains("oracle_limit")) {
    config.oracle_limit = static_cast<unsigned>(
        std::min<std::uint64_t>(get_count(root["oracle_limit"], "/oracle_limit"), 63));
  }
  if (root.contains("max_slots")) {
    config.max_slots = get_count(root["max_slots"], "/max_slots");
    if (config.max_slots == 0) throw ConfigError("/max_slots", "must be positive");
  }
  if (root.contains("eval_runs")) {
    config.eval_runs = get_count(root["eval_runs"], "/eval_runs");
    if (config.eval_runs == 0) throw ConfigError("/eval_runs", "must be positive");
  }
  if (root.contains("workers")) {
    config.workers = static_cast<unsigned>(get_count(root["workers"], "/workers"));
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::optional<std::string> preset_json(std::string_view name) {
  const auto it = presets().find(name);
  if (it == presets().end()) return std::nullopt;
  return std::string(it->second);
}

std::vector<std::string_view> preset_names() {
  std::vector<std::string_view> names;
  for (const auto& [name, text] : presets()) names.push_back(name);
  return names;
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, result.ptr);
}

std::string CsvTable::to_string() const {
  std::string out;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(row[i]);
    }
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out;
}

void write_csv_atomic(const std::filesystem::path& path, const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << table.to_string();
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

EttrReport cmd_ettr(const ExperimentConfig& config) {
  EttrReport report;
  report.table.header = {"policy",      "rho",      "omega",      "ettr_mean",
                         "ettr_stderr", "censored", "exact_ettr"};
  std::ostringstream summary;
  for (std::size_t s = 0; s < config.settings.size(); ++s) {
    const Setting& setting = config.settings[s];
    summary << "setting " << s << " (N=" << setting.env.size()
            << ", rho=" << setting.rho_label << ", omega=" << setting.omega_label
            << ")\n";
    for (std::size_t k = 0; k < config.policies.size(); ++k) {
      const PolicyEntry& entry = config.policies[k];
      const ProbabilityVector policy =
          entry.resolve(setting.env.size(), config.gamma);

      TrialConfig trial;
      trial.runs = config.runs;
      trial.seed = stream_seed(config.seed, s, k);
      trial.max_slots = config.max_slots;
      trial.workers = config.workers;
      const EttrEstimate est = estimate_ettr(policy, setting.env, trial);

      std::string exact;
      if (lumped_state_count(policy, setting.env) <= config.exact_state_limit()) {
        exact = format_number(
            ettr_markov_exact(policy, setting.env, config.exact_state_limit()).value);
      }
      report.table.rows.push_back({entry.name, setting.rho_label,
                                   setting.omega_label, format_number(est.mean),
                                   format_number(est.std_error),
                                   std::to_string(est.censored), exact});
      summary << "  " << entry.name << ": " << format_number(est.mean) << " +- "
              << format_number(est.std_error);
      if (est.censored) summary << " (" << est.censored << " censored)";
      if (!exact.empty()) summary << "  exact " << exact;
      summary << "\n";
    }
  }
  report.summary = summary.str();
  return report;
}

LearnReport cmd_learn(const ExperimentConfig& config) {
  if (config.horizon == 0) {
    throw ConfigError("/horizon", "learning needs a positive horizon");
  }
  std::vector<std::uint64_t> checkpoints = config.checkpoints;
  if (checkpoints.empty()) {
    for (std::uint64_t i = 0; i <= 10; ++i) checkpoints.push_back(config.horizon * i / 10);
    checkpoints.erase(std::unique(checkpoints.begin(), checkpoints.end()),
                      checkpoints.end());
  }
  if (checkpoints.back() > config.horizon) {
    throw ConfigError("/checkpoints", "checkpoint beyond the horizon");
  }

  LearnReport report;
  report.settings.header = {"setting", "rho", "omega"};
  std::ostringstream summary;

  for (std::size_t s = 0; s < config.settings.size(); ++s) {
    const Setting& setting = config.settings[s];
    const std::size_t n = setting.env.size();
    report.settings.rows.push_back(
        {std::to_string(s), setting.rho_label, setting.omega_label});

    TrialConfig trial;
    trial.runs = config.runs;
    trial.horizon = config.horizon;
    trial.seed = stream_seed(config.seed, s);
    trial.checkpoints = checkpoints;
    trial.max_slots = config.max_slots;
    trial.workers = config.workers;
    SnapshotEvaluation evaluation;
    evaluation.exact_state_limit = config.exact_state_limit();
    evaluation.monte_carlo_runs = config.eval_runs;

    const LearningStudy study = ettr_vs_time(config.gamma, setting.env, trial, evaluation);

    LearnSettingReport out;
    out.trajectory.header = {"run", "t", "channel", "p"};
    out.ettr_vs_time.header = {"t", "mean_ettr", "stderr"};
    out.mean_sorted_final.assign(n, 0.0);
    out.argmax_counts.assign(n, 0);
    for (std::size_t r = 0; r < study.traces.size(); ++r) {
      const LearningTrace& trace = study.traces[r];
      for (std::size_t c = 0; c < trace.checkpoints.size(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
          out.trajectory.rows.push_back({std::to_string(r),
                                         std::to_string(trace.checkpoints[c]),
                                         std::to_string(i + 1),
                                         format_number(trace.first_user[c][i])});
        }
      }
      const ProbabilityVector final_p =
          Exp3Learner(config.gamma, trace.final_weights).distribution();
      std::vector<double> sorted = final_p.vector();
      const auto argmax = static_cast<std::size_t>(
          std::max_element(sorted.begin(), sorted.end()) - sorted.begin());
      ++out.argmax_counts[argmax];
      std::sort(sorted.rbegin(), sorted.rend());
      for (std::size_t i = 0; i < n; ++i) {
        out.mean_sorted_final[i] += sorted[i] / static_cast<double>(study.traces.size());
      }
    }
    out.mean_top_probability = out.mean_sorted_final.front();
    for (const EttrPoint& point : study.ettr) {
      out.ettr_vs_time.rows.push_back({std::to_string(point.t),
                                       format_number(point.mean),
                                       format_number(point.std_error)});
    }

    summary << "setting " << s << " (N=" << n << ", rho=" << setting.rho_label
            << ", omega=" << setting.omega_label << ")\n  mean sorted final p: [";
    for (std::size_t i = 0; i < n; ++i) {
      summary << (i ? ", " : "") << format_number(out.mean_sorted_final[i]);
    }
    summary << "]\n  argmax channel over " << study.traces.size() << " runs:";
    for (std::size_t i = 0; i < n; ++i) {
      if (out.argmax_counts[i]) summary << " ch" << (i + 1) << "=" << out.argmax_counts[i];
    }
    summary << "\n  ETTR: t=" << study.ettr.front().t << " "
            << format_number(study.ettr.front().mean) << " -> t="
            << study.ettr.back().t << " " << format_number(study.ettr.back().mean)
            << "\n";
    report.per_setting.push_back(std::move(out));
  }
  report.summary = summary.str();
  return report;
}

OracleReport cmd_oracle(const ExperimentConfig& config) {
  OracleReport report;
  report.table.header = {"policy", "rho",          "omega", "iid",
                         "frozen", "markov_exact", "note"};
  std::ostringstream summary;
  for (const Setting& setting : config.settings) {
    for (const PolicyEntry& entry : config.policies) {
      const ProbabilityVector policy =
          entry.resolve(setting.env.size(), config.gamma);
      std::vector<std::string> notes;
      const std::string iid = format_number(ettr_iid(policy, setting.env).value);
      std::string frozen;
      std::string markov;
      try {
        frozen = format_number(ettr_frozen(policy, setting.env).value);
      } catch (const DimensionTooLarge& e) {
        notes.push_back(std::string("frozen: ") + e.what());
      }
      try {
        markov = format_number(
            ettr_markov_exact(policy, setting.env, config.exact_state_limit()).value);
      } catch (const DimensionTooLarge& e) {
        notes.push_back(std::string("markov_exact: ") + e.what());
      }
      std::string note;
      for (const auto& n : notes) note += (note.empty() ? "" : "; ") + n;
      summary << entry.name << " rho=" << setting.rho_label
              << " omega=" << setting.omega_label << ": iid " << iid << ", frozen "
              << (frozen.empty() ? "-" : frozen) << ", markov "
              << (markov.empty() ? "-" : markov) << "\n";
      report.table.rows.push_back({entry.name, setting.rho_label,
                                   setting.omega_label, iid, frozen, markov, note});
    }
  }
  report.summary = summary.str();
  return report;
}

}  // namespace rdv
