#include "commands.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>

#include <CLI11.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "actionraid/reports.hpp"
#include "actionraid/training.hpp"
#include "actionraid/weights_io.hpp"
#include "run_config.hpp"

namespace actionraid::cli {

namespace fs = std::filesystem;

namespace {

struct CommonOptions {
  std::string config;
  std::string out;
  int jobs = 0;
  std::optional<std::uint64_t> seed;
};

void setup_logging(std::ostream& err) {
  auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
  auto logger = std::make_shared<spdlog::logger>("actionraid", sink);
  logger->set_pattern("[%l] %v");
  auto level = spdlog::level::warn;
  if (const char* env = std::getenv("ACTIONRAID_LOG"); env != nullptr && *env != '\0') {
    level = spdlog::level::from_str(env);
    if (level == spdlog::level::off && std::string_view(env) != "off") {
      logger->warn("ACTIONRAID_LOG='{}' is not a log level; using warn", env);
      level = spdlog::level::warn;
    }
  }
  logger->set_level(level);
  spdlog::set_default_logger(logger);
}

RunConfig load_with_overrides(const CommonOptions& opts) {
  RunConfig cfg = load_run_config(opts.config);
  if (!opts.out.empty()) cfg.out = fs::path(opts.out);
  if (opts.jobs > 0) cfg.jobs = opts.jobs;
  return cfg;
}

fs::path output_dir(const RunConfig& cfg) {
  if (!cfg.out) throw ConfigError("no output directory: set \"out\" in the config or pass --out");
  fs::create_directories(*cfg.out);
  return *cfg.out;
}

std::unique_ptr<Agent> load_agent(const RunConfig& cfg, const Environment& env) {
  if (!cfg.has_agent || !cfg.agent.weights) throw ConfigError("config needs agent.weights");
  const fs::path& path = *cfg.agent.weights;
  if (!fs::is_regular_file(path)) throw ConfigError("weight file '" + path.string() + "' not found");
  auto agent = load_weights(path);
  if (agent->kind() != cfg.agent.kind) {
    throw ConfigError("weight file holds a '" + std::string(to_string(agent->kind())) +
                      "' agent, config says '" + std::string(to_string(cfg.agent.kind)) + "'");
  }
  if (agent->state_dim() != env.state_dim() || agent->action_dim() != env.action_dim()) {
    throw ConfigError("weight file does not fit environment '" + cfg.env + "'");
  }
  return agent;
}

/// Runs `cells` and writes manifest.json, episodes.csv and steps.csv.
SweepResult run_and_write(const RunConfig& cfg, const Environment& env, const Agent& agent,
                          const std::vector<AttackConfig>& cells, const fs::path& dir) {
  const std::string agent_id = cfg.agent.weights->filename().string();
  StepsCsvWriter steps(dir / "steps.csv", env.action_dim());
  std::size_t done = 0;
  const std::size_t total = cells.size() * static_cast<std::size_t>(cfg.n_episodes);
  auto sink = [&](std::size_t cell, std::size_t index, const EpisodeRecord& record) {
    steps.write(episode_id(cell, index, cfg.n_episodes), record);
    if (++done % static_cast<std::size_t>(cfg.n_episodes) == 0) {
      spdlog::info("{}/{} episodes", done, total);
    }
  };
  SweepResult result =
      run_cells(env, agent, agent_id, cells, cfg.n_episodes, cfg.base_seed, cfg.jobs, sink);
  write_sweep_raw(dir, result);
  return result;
}

int cmd_train(const CommonOptions& opts, std::ostream& out) {
  RunConfig cfg = load_with_overrides(opts);
  TrainConfig tc = cfg.train;
  if (opts.seed) tc.seed = *opts.seed;
  tc.jobs = cfg.jobs;
  const fs::path dir = output_dir(cfg);
  const auto env = make_environment(cfg.env);
  const auto initial = make_agent(cfg.agent.kind, *env);

  auto write_log = [&](const TrainingLog& log) {
    std::ofstream f(dir / "train_log.csv", std::ios::binary | std::ios::trunc);
    log.write_csv(f);
  };
  spdlog::info("training {} agent on {} for {} iterations", to_string(cfg.agent.kind), cfg.env,
               tc.iterations);
  try {
    TrainResult result = train(*initial, *env, tc);
    write_log(result.log);
    save_weights(*result.agent, dir / "agent.bin");
    out << "weights: " << (dir / "agent.bin").string() << "\n";
    if (tc.iterations > 0) {
      out << "holdout mean " << result.log.holdout_mean << " std " << result.log.holdout_std << "\n";
    }
  } catch (const TrainingFailedError& e) {
    write_log(e.log());
    throw;
  }
  return kExitOk;
}

int cmd_attack(const CommonOptions& opts, std::ostream& out) {
  RunConfig cfg = load_with_overrides(opts);
  if (opts.seed) cfg.base_seed = *opts.seed;
  if (!cfg.attack) throw ConfigError("attack needs an \"attack\" section");
  const auto env = make_environment(cfg.env);
  const auto agent = load_agent(cfg, *env);
  const fs::path dir = output_dir(cfg);
  const SweepResult result = run_and_write(cfg, *env, *agent, {*cfg.attack}, dir);
  const CellStats st = result.cells.front().stats();
  out << result.cells.front().id << ": mean " << st.mean << " std " << st.std << "\n";
  return kExitOk;
}

int cmd_sweep(const CommonOptions& opts, bool with_report, std::ostream& out) {
  RunConfig cfg = load_with_overrides(opts);
  if (opts.seed) cfg.base_seed = *opts.seed;
  const auto env = make_environment(cfg.env);
  const auto agent = load_agent(cfg, *env);
  const fs::path dir = output_dir(cfg);
  const auto cells = expand_grid(cfg.sweep, env->action_bounds());
  spdlog::info("sweep over {} cells x {} episodes", cells.size(), cfg.n_episodes);
  run_and_write(cfg, *env, *agent, cells, dir);
  if (with_report) write_report(dir, load_sweep_result(dir));
  out << "results: " << dir.string() << "\n";
  return kExitOk;
}

int cmd_report(const std::string& results, const std::string& out_dir, std::ostream& out) {
  const fs::path dir = results;
  if (!fs::is_directory(dir)) throw InvalidInputError("'" + results + "' is not a directory");
  const SweepResult sweep = load_sweep_result(dir);
  const fs::path target = out_dir.empty() ? dir : fs::path(out_dir);
  write_report(target, sweep);
  out << "report: " << target.string() << "\n";
  return kExitOk;
}

void add_common(CLI::App* cmd, CommonOptions& opts, bool needs_config) {
  auto* config = cmd->add_option("--config", opts.config, "JSON run config");
  if (needs_config) config->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", opts.out, "output directory (overrides the config)");
  cmd->add_option("--jobs", opts.jobs, "parallel episodes")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", opts.seed, "base seed (overrides the config)");
}

int report_error(std::ostream& err, std::string_view error_class, const std::string& message,
                 int code) {
  std::string flat = message;
  std::replace(flat.begin(), flat.end(), '\n', ' ');
  err << "actionraid: error-class=" << error_class << ": " << flat << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  setup_logging(err);

  CLI::App app{"Action-space adversarial attacks on continuous-control agents", "actionraid"};
  app.require_subcommand(1);
  CommonOptions opts;
  bool with_report = false;
  std::string results_dir;

  auto* train = app.add_subcommand("train", "train an agent; writes agent.bin and train_log.csv");
  add_common(train, opts, true);
  auto* attack = app.add_subcommand("attack", "run one attack cell; writes episodes/steps CSVs");
  add_common(attack, opts, true);
  auto* sweep = app.add_subcommand("sweep", "run the attack grid; writes raw results");
  add_common(sweep, opts, true);
  sweep->add_flag("--report", with_report, "also write the report tables");
  auto* report = app.add_subcommand("report", "derive tables from a results directory");
  report->add_option("results", results_dir, "results directory")->required();
  report->add_option("--out", opts.out, "where to write the tables (default: results dir)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      app.exit(e, out, err);
      return kExitOk;
    }
    return report_error(err, "usage", e.what(), kExitConfig);
  }

  try {
    if (*train) return cmd_train(opts, out);
    if (*attack) return cmd_attack(opts, out);
    if (*sweep) return cmd_sweep(opts, with_report, out);
    return cmd_report(results_dir, opts.out, out);
  } catch (const ConfigError& e) {
    return report_error(err, e.error_class(), e.what(), kExitConfig);
  } catch (const InvalidInputError& e) {
    return report_error(err, e.error_class(), e.what(), kExitConfig);
  } catch (const FormatError& e) {
    return report_error(err, e.error_class(), e.what(), kExitConfig);
  } catch (const Error& e) {
    return report_error(err, e.error_class(), e.what(), kExitRuntime);
  } catch (const fs::filesystem_error& e) {
    return report_error(err, "io", e.what(), kExitRuntime);
  } catch (const std::exception& e) {
    return report_error(err, "runtime", e.what(), kExitRuntime);
  }
}

}  // namespace actionraid::cli
