// Acceptance suite. Prints one PASS/FAIL line per criterion; exit status is
// nonzero when any selected criterion fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "actionraid/attacks.hpp"
#include "actionraid/harness.hpp"
#include "actionraid/projections.hpp"
#include "actionraid/reports.hpp"
#include "actionraid/stats.hpp"
#include "actionraid/training.hpp"
#include "actionraid/weights_io.hpp"
#include "commands.hpp"
#include "support/oracles.hpp"

using namespace actionraid;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 4) {
  std::ostringstream ss;
  ss.precision(precision);
  ss << v;
  return ss.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

fs::path source_dir() { return ACTIONRAID_SOURCE_DIR; }

std::unique_ptr<Agent> reference_agent() {
  return load_weights(source_dir() / "data/lander_lite/agent.bin");
}

std::unique_ptr<Agent> initialized(AgentKind kind, const Environment& env, std::uint64_t seed) {
  auto agent = make_agent(kind, env);
  Rng rng(seed);
  if (auto* g = dynamic_cast<GaussianPolicyAgent*>(agent.get())) g->initialize(rng);
  if (auto* q = dynamic_cast<QuadraticQAgent*>(agent.get())) q->initialize(rng);
  return agent;
}

double spatial_norm(const Eigen::VectorXd& v, NormOrder p) {
  return p == NormOrder::L1 ? v.cwiseAbs().sum() : std::sqrt(v.squaredNorm());
}

int cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != 0) std::cerr << "  actionraid " << args.front() << ": " << err.str();
  return code;
}

// ---------------------------------------------------------------------------
// 1. projections against brute-force oracles

struct ProjectionOp {
  std::string name;
  bool sequence;
  NormOrder p, q;
};

const std::vector<ProjectionOp>& projection_ops() {
  static const std::vector<ProjectionOp> ops{
      {"l2_ball", false, NormOrder::L2, NormOrder::L2},
      {"l1_ball", false, NormOrder::L1, NormOrder::L1},
      {"seq_l2_l2", true, NormOrder::L2, NormOrder::L2},
      {"seq_l2_l1", true, NormOrder::L2, NormOrder::L1},
      {"seq_l1_l1", true, NormOrder::L1, NormOrder::L1},
      {"seq_l1_l2", true, NormOrder::L1, NormOrder::L2},
  };
  return ops;
}

Eigen::MatrixXd apply(const ProjectionOp& op, const Eigen::MatrixXd& x, double r) {
  if (!op.sequence) return op.p == NormOrder::L2 ? project_l2_ball(x.col(0), Radius(r))
                                                 : project_l1_ball(x.col(0), Radius(r));
  return project_sequence(PerturbationMatrix(x), op.p, op.q, Radius(r)).matrix();
}

double constraint_norm(const ProjectionOp& op, const Eigen::MatrixXd& x) {
  if (!op.sequence) return spatial_norm(x.col(0), op.p);
  Eigen::VectorXd n(x.cols());
  for (Eigen::Index k = 0; k < x.cols(); ++k) n[k] = spatial_norm(x.col(k), op.p);
  return spatial_norm(n, op.q);
}

Eigen::MatrixXd brute_force(const ProjectionOp& op, const Eigen::MatrixXd& x, double r) {
  if (!op.sequence) return op.p == NormOrder::L2 ? oracle::l2_ball(x.col(0), r)
                                                 : oracle::l1_ball(x.col(0), r);
  if (op.p == NormOrder::L2 && op.q == NormOrder::L2) {
    return oracle::unflatten(oracle::l2_ball(oracle::flatten(x), r), x.rows(), x.cols());
  }
  if (op.p == NormOrder::L2 && op.q == NormOrder::L1) return oracle::group_l2_l1_ball(x, r);
  return oracle::two_stage(x, op.p == NormOrder::L1, op.q == NormOrder::L1, r);
}

Verdict criterion_projections() {
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> entry(-10.0, 10.0);
  std::uniform_int_distribution<int> pick_op(0, 5);
  auto random_matrix = [&](Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = entry(rng);
    return m;
  };
  auto random_shape = [&](bool sequence, int max_total, int max_side) {
    std::uniform_int_distribution<int> side(1, max_side);
    while (true) {
      const int rows = side(rng);
      const int cols = sequence ? side(rng) : 1;
      if (rows * cols <= max_total) return std::make_pair(rows, cols);
    }
  };
  auto radius_for = [&](const ProjectionOp& op, const Eigen::MatrixXd& x) {
    return std::uniform_real_distribution<double>(0.0, 1.2)(rng) * constraint_norm(op, x);
  };

  // Oracle equivalence, total dimension <= 4.
  double worst_oracle = 0.0;
  double l1l1_vs_flat = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto& op = projection_ops()[static_cast<std::size_t>(i % 6)];
    const auto [rows, cols] = random_shape(op.sequence, 4, 4);
    const Eigen::MatrixXd x = random_matrix(rows, cols);
    const double r = radius_for(op, x);
    worst_oracle = std::max(worst_oracle, (apply(op, x, r) - brute_force(op, x, r)).norm());
    if (op.sequence && op.p == NormOrder::L1 && op.q == NormOrder::L1) {
      const Eigen::MatrixXd flat =
          oracle::unflatten(oracle::l1_ball(oracle::flatten(x), r), x.rows(), x.cols());
      l1l1_vs_flat = std::max(l1l1_vs_flat, (apply(op, x, r) - flat).norm());
    }
  }

  // Invariants on 10^4 inputs up to 8x8.
  int infeasible = 0, not_idempotent = 0, expansive = 0, pairs = 0;
  int two_stage_expansive = 0, two_stage_pairs = 0;
  for (int i = 0; i < 10000; ++i) {
    const auto& op = projection_ops()[static_cast<std::size_t>(pick_op(rng))];
    const auto [rows, cols] = random_shape(op.sequence, 64, 8);
    const Eigen::MatrixXd x = random_matrix(rows, cols);
    const Eigen::MatrixXd y = random_matrix(rows, cols);
    const double r = radius_for(op, x);
    const Eigen::MatrixXd px = apply(op, x, r);
    if (constraint_norm(op, px) > r * (1.0 + 1e-9)) ++infeasible;
    if ((apply(op, px, r) - px).cwiseAbs().maxCoeff() > 1e-12) ++not_idempotent;
    const bool violates = (px - apply(op, y, r)).norm() > (x - y).norm() + 1e-9;
    // Only l2-spatial sequence projections and the vector balls are Euclidean
    // projections; the l1-spatial two-stage scheme is tallied separately.
    if (op.sequence && op.p == NormOrder::L1) {
      ++two_stage_pairs;
      two_stage_expansive += violates;
    } else {
      ++pairs;
      expansive += violates;
    }
  }

  Verdict v;
  v.pass = worst_oracle <= 1e-3 && infeasible == 0 && not_idempotent == 0 && expansive == 0;
  v.detail = "max oracle distance " + fmt(worst_oracle) + " over 1000 cases; infeasible " +
             std::to_string(infeasible) + ", non-idempotent " + std::to_string(not_idempotent) +
             ", expansive " + std::to_string(expansive) + "/" + std::to_string(pairs) +
             " of 10000 inputs; info: l1-spatial two-stage expansive " +
             std::to_string(two_stage_expansive) + "/" + std::to_string(two_stage_pairs) +
             ", max distance of (l1,l1) to flattened l1 projection " + fmt(l1l1_vs_flat);
  return v;
}

// ---------------------------------------------------------------------------
// 2. analytic surrogate gradients against central differences

Verdict criterion_gradients() {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> xi(0.0, 1.0);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::map<std::string, double> worst;
  bool pass = true;
  for (AgentKind kind : {AgentKind::GaussianPolicy, AgentKind::QuadraticQ}) {
    for (const auto& name : environment_names()) {
      const auto env = make_environment(name);
      const auto agent = initialized(kind, *env, 11);
      const Eigen::VectorXd scale = env->observation_scale();
      double max_rel = 0.0;
      for (int i = 0; i < 100; ++i) {
        StateVector s(scale.size());
        for (Eigen::Index k = 0; k < s.size(); ++k) s[k] = scale[k] * xi(rng);
        ActionVector a(static_cast<Eigen::Index>(env->action_dim()));
        for (Eigen::Index k = 0; k < a.size(); ++k) a[k] = u(rng);
        const auto analytic = agent->surrogate_gradient(s, a);
        const auto numeric = oracle::central_difference(
            [&](const Eigen::VectorXd& x) { return agent->surrogate_reward(s, x); }, a, 1e-5);
        max_rel = std::max(max_rel, (analytic - numeric).norm() / std::max(numeric.norm(), 1e-8));
      }
      worst[std::string(to_string(kind)) + "/" + name] = max_rel;
      pass = pass && max_rel < 1e-4;
    }
  }
  Verdict v{pass, "max relative error"};
  for (const auto& [k, e] : worst) v.detail += " " + k + "=" + fmt(e, 3);
  return v;
}

// ---------------------------------------------------------------------------
// 3. LAS with H=1 and B=b reproduces MAS

Verdict criterion_horizon_one() {
  int compared = 0, mismatched = 0;
  for (const auto& name : environment_names()) {
    const auto env = make_environment(name);
    std::vector<std::unique_ptr<Agent>> agents;
    if (name == "lander_lite") agents.push_back(reference_agent());
    agents.push_back(initialized(AgentKind::GaussianPolicy, *env, 5));
    agents.push_back(initialized(AgentKind::QuadraticQ, *env, 5));
    for (const auto& agent : agents) {
      for (NormOrder p : {NormOrder::L1, NormOrder::L2}) {
        auto mas = AttackConfig::defaults_for(AttackKind::Mas, env->action_bounds());
        mas.p_spatial = p;
        mas.b = 0.2 * env->action_bounds().mean_range();
        auto las = mas;
        las.kind = AttackKind::Las;
        las.B = mas.b;
        las.H = 1;
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
          const auto a = run_episode(*env, *agent, mas, 1000 + seed);
          const auto b = run_episode(*env, *agent, las, 1000 + seed);
          bool same = a.length() == b.length();
          for (std::size_t t = 0; same && t < a.length(); ++t) {
            same = a.steps[t].state_digest == b.steps[t].state_digest &&
                   a.steps[t].delta == b.steps[t].delta && a.steps[t].reward == b.steps[t].reward;
          }
          ++compared;
          mismatched += !same;
        }
      }
    }
  }
  return {mismatched == 0, std::to_string(compared - mismatched) + "/" + std::to_string(compared) +
                               " paired episodes identical (both envs, l1/l2, 10 seeds each)"};
}

// ---------------------------------------------------------------------------
// 4. budget accounting over a 30-episode sweep

Verdict criterion_budgets() {
  const auto env = make_environment("lander_lite");
  const auto agent = reference_agent();
  SweepGrid grid;
  grid.base = AttackConfig::defaults_for(AttackKind::None, env->action_bounds());
  std::size_t windows = 0, steps = 0, window_violations = 0, step_violations = 0;
  double worst_window_slack = -std::numeric_limits<double>::infinity();
  auto sink = [&](std::size_t, std::size_t, const EpisodeRecord& r) {
    const auto& cfg = r.attack;
    if (cfg.kind == AttackKind::Las) {
      for (std::size_t start = 0; start < r.length(); start += static_cast<std::size_t>(cfg.H)) {
        double spent = 0.0;
        const std::size_t end = std::min(r.length(), start + static_cast<std::size_t>(cfg.H));
        for (std::size_t t = start; t < end; ++t) spent += spatial_norm(r.steps[t].delta, cfg.p_spatial);
        ++windows;
        worst_window_slack = std::max(worst_window_slack, spent - cfg.B);
        if (spent > cfg.B + 1e-9) ++window_violations;
      }
    } else if (cfg.kind == AttackKind::Mas || cfg.kind == AttackKind::Random) {
      for (const auto& s : r.steps) {
        ++steps;
        if (spatial_norm(s.delta, cfg.p_spatial) > cfg.b + 1e-9) ++step_violations;
      }
    }
  };
  run_sweep(*env, *agent, "agent.bin", grid, 30, 1000, 1, sink);
  return {window_violations == 0 && step_violations == 0 && windows > 0,
          std::to_string(window_violations) + " of " + std::to_string(windows) +
              " LAS windows over B (max spent-B " + fmt(worst_window_slack, 3) + "), " +
              std::to_string(step_violations) + " of " + std::to_string(steps) +
              " per-step attack steps over b"};
}

// ---------------------------------------------------------------------------
// 5-7. trends on a freshly trained LanderLite agent

struct TrendRun {
  std::unique_ptr<Agent> agent;
  bool matches_shipped = false;
  SweepResult sweep;
};

TrendRun& trend_run() {
  static std::optional<TrendRun> run;
  if (run) return *run;
  run.emplace();
  const auto env = make_environment("lander_lite");
  TrainConfig tc;  // the settings of configs/lander_lite_train.json
  tc.seed = 1;
  tc.reward_threshold = 0.0;
  const auto initial = make_agent(AgentKind::GaussianPolicy, *env);
  run->agent = train(*initial, *env, tc).agent;
  run->matches_shipped = encode_weights(*run->agent) == encode_weights(*reference_agent());

  SweepGrid grid;
  grid.horizons = {5};
  grid.spatial = {NormOrder::L2};
  grid.base = AttackConfig::defaults_for(AttackKind::None, env->action_bounds());
  run->sweep = run_sweep(*env, *run->agent, "trained", grid, 30, 1000);
  return *run;
}

const SweepCell& cell(const SweepResult& sweep, const std::string& id) {
  const SweepCell* c = sweep.find(id);
  if (c == nullptr) throw std::runtime_error("missing cell " + id);
  return *c;
}

Verdict criterion_ordering() {
  const auto& run = trend_run();
  const auto& nominal = cell(run.sweep, "nominal");
  const auto& mas = cell(run.sweep, "mas_l2_b0.4");
  const auto& las = cell(run.sweep, "las_l2_l2_B2_H5");
  const auto& rnd = cell(run.sweep, "random_l2_b0.4");
  const auto n = nominal.stats(), m = mas.stats(), l = las.stats(), r = rnd.stats();
  const auto las_vs_mas = stats::mann_whitney_less(las.rewards(), mas.rewards());
  const auto mas_vs_nom = stats::mann_whitney_less(mas.rewards(), nominal.rewards());

  const bool trained = n.mean > 0.0;
  const bool order = l.mean < m.mean && m.mean < n.mean;
  const bool significant = las_vs_mas.p_value < 0.05 && mas_vs_nom.p_value < 0.05;
  const bool beats_random = m.mean <= r.mean + n.std;
  return {trained && order && significant && beats_random,
          "nominal " + fmt(n.mean) + " (std " + fmt(n.std) + ", agent identical to shipped: " +
              (run.matches_shipped ? "yes" : "no") + "), MAS " + fmt(m.mean) + ", LAS l2/l2 " +
              fmt(l.mean) + ", random " + fmt(r.mean) + "; p(LAS<MAS)=" +
              fmt(las_vs_mas.p_value, 3) + ", p(MAS<nominal)=" + fmt(mas_vs_nom.p_value, 3) +
              "; ordering " + (order ? "holds" : "violated") + ", MAS<=random+std " +
              (beats_random ? "holds" : "violated")};
}

Verdict criterion_monotone() {
  const auto& run = trend_run();
  const double slack = 0.25 * cell(run.sweep, "nominal").stats().std;
  const std::vector<std::string> ids{"las_l2_l2_B0.5_H5", "las_l2_l2_B1_H5", "las_l2_l2_B2_H5"};
  std::vector<double> means;
  for (const auto& id : ids) means.push_back(cell(run.sweep, id).stats().mean);
  bool pass = true;
  for (std::size_t i = 1; i < means.size(); ++i) pass = pass && means[i] <= means[i - 1] + slack;
  return {pass, "LAS l2/l2 means at B=0.5,1,2 (H=5): " + fmt(means[0]) + ", " + fmt(means[1]) +
                    ", " + fmt(means[2]) + " (slack " + fmt(slack) + ")"};
}

Verdict criterion_concentration() {
  const auto& run = trend_run();
  const auto env = make_environment("lander_lite");
  auto base = AttackConfig::defaults_for(AttackKind::Las, env->action_bounds());
  base.B = 1.0;
  base.H = 5;
  auto l1 = base;
  l1.q_temporal = NormOrder::L1;
  auto l2 = base;
  l2.q_temporal = NormOrder::L2;
  const auto sweep = run_cells(*env, *run.agent, "trained", {l1, l2}, 10, 1000);
  const double g1 = median_trace_gini(sweep.cells[0].episodes);
  const double g2 = median_trace_gini(sweep.cells[1].episodes);
  return {g1 > g2, "median trace Gini over 10 episodes (l2 spatial, B=1, H=5): temporal-l1 " +
                       fmt(g1) + ", temporal-l2 " + fmt(g2)};
}

// ---------------------------------------------------------------------------
// 8. dimension report of the reference sweep

Verdict criterion_dimensions(const fs::path& work) {
  const fs::path dir = work / "reference_sweep";
  if (cli({"sweep", "--config", (source_dir() / "configs/lander_lite_sweep.json").string(), "--out",
           dir.string(), "--report"}) != 0) {
    return {false, "reference sweep failed"};
  }

  // Recompute per-episode mass from steps.csv.
  std::ifstream steps(dir / "steps.csv");
  std::string line;
  std::getline(steps, line);
  const auto header = split(line);
  const std::size_t m = header.size() - 4;
  std::map<std::size_t, Eigen::VectorXd> mass;
  std::map<std::size_t, double> l1_mass;
  while (std::getline(steps, line)) {
    const auto f = split(line);
    const std::size_t id = std::stoul(f[0]);
    auto& acc = mass.try_emplace(id, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m))).first->second;
    double step_l1 = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = std::abs(std::stod(f[2 + i]));
      acc[static_cast<Eigen::Index>(i)] += d;
      step_l1 += d;
    }
    l1_mass[id] += step_l1;
  }

  std::ifstream dims(dir / "dims.csv");
  std::getline(dims, line);
  std::size_t rows = 0, bad_sum = 0, bad_recompute = 0;
  while (std::getline(dims, line)) {
    const auto f = split(line);
    const std::size_t id = std::stoul(f[0]);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double d = std::stod(f[3 + i]);
      sum += d;
      if (std::abs(d - mass.at(id)[static_cast<Eigen::Index>(i)]) > 1e-9 * std::max(1.0, d)) {
        ++bad_recompute;
      }
    }
    const double total = std::stod(f[3 + m]);
    if (std::abs(sum - total) > 1e-12 * std::max(1.0, total)) ++bad_sum;
    if (std::abs(total - l1_mass.at(id)) > 1e-9 * std::max(1.0, total)) ++bad_recompute;
    ++rows;
  }
  const SweepResult sweep = load_sweep_result(dir);
  std::size_t expected_rows = 0;
  for (const auto& c : sweep.cells) {
    if (c.attack.kind != AttackKind::None) expected_rows += c.episodes.size();
  }
  return {rows == expected_rows && bad_sum == 0 && bad_recompute == 0,
          std::to_string(rows) + " dims.csv rows (expected " + std::to_string(expected_rows) +
              "), " + std::to_string(bad_sum) + " with columns not summing to total, " +
              std::to_string(bad_recompute) + " disagreeing with steps.csv; report in " +
              dir.string()};
}

// ---------------------------------------------------------------------------
// 9. byte-identical reruns of every command

Verdict criterion_determinism(const fs::path& work) {
  const fs::path dir = work / "determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string weights = (source_dir() / "data/lander_lite/agent.bin").string();
  auto write = [&](const std::string& name, const nlohmann::json& j) {
    std::ofstream(dir / name) << j.dump(2);
    return (dir / name).string();
  };
  const auto train_cfg = write(
      "train.json", {{"schema_version", 1},
                     {"env", "lander_lite"},
                     {"agent", {{"kind", "gaussian"}}},
                     {"train", {{"iterations", 5}, {"holdout_episodes", 5}, {"reward_threshold", -1e9}}}});
  nlohmann::json attack = {{"schema_version", 1},
                           {"env", "lander_lite"},
                           {"agent", {{"kind", "gaussian"}, {"weights", weights}}},
                           {"n_episodes", 10},
                           {"base_seed", 1000},
                           {"attack", {{"kind", "las"}, {"p", "l2"}, {"q", "l1"}, {"B", 1.0}, {"H", 5}}}};
  const auto attack_cfg = write("attack.json", attack);
  attack.erase("attack");
  attack["n_episodes"] = 5;
  attack["sweep"] = nlohmann::json::object();
  const auto sweep_cfg = write("sweep.json", attack);

  struct Command {
    std::string name;
    std::vector<std::string> args;
  };
  const std::vector<Command> commands{
      {"train", {"train", "--config", train_cfg}},
      {"attack", {"attack", "--config", attack_cfg}},
      {"sweep", {"sweep", "--config", sweep_cfg, "--report"}},
  };
  std::size_t files = 0, differing = 0;
  std::string failures;
  auto compare_dirs = [&](const fs::path& a, const fs::path& b, const std::string& label) {
    for (const auto& entry : fs::directory_iterator(a)) {
      ++files;
      const auto other = b / entry.path().filename();
      if (!fs::exists(other) || slurp(entry.path()) != slurp(other)) {
        ++differing;
        failures += " " + label + "/" + entry.path().filename().string();
      }
    }
  };
  for (const auto& c : commands) {
    std::vector<fs::path> outs;
    for (const auto& [suffix, jobs] : {std::pair{"run1", "1"}, {"run2", "1"}, {"jobs4", "4"}}) {
      const fs::path out = dir / (c.name + "_" + suffix);
      auto args = c.args;
      args.insert(args.end(), {"--out", out.string(), "--jobs", jobs});
      if (cli(args) != 0) return {false, c.name + " failed"};
      outs.push_back(out);
    }
    compare_dirs(outs[0], outs[1], c.name + " rerun");
    compare_dirs(outs[0], outs[2], c.name + " --jobs 4");
  }
  // report regenerated in place and into a fresh directory
  const fs::path sweep_dir = dir / "sweep_run1";
  const fs::path report_dir = dir / "report_only";
  if (cli({"report", sweep_dir.string()}) != 0 ||
      cli({"report", sweep_dir.string(), "--out", report_dir.string()}) != 0) {
    return {false, "report failed"};
  }
  compare_dirs(report_dir, sweep_dir, "report");
  compare_dirs(sweep_dir, dir / "sweep_run2", "report rerun");
  return {differing == 0, std::to_string(files - differing) + "/" + std::to_string(files) +
                              " output files byte-identical across reruns and --jobs 4" +
                              (failures.empty() ? "" : "; differing:" + failures)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app("actionraid acceptance suite");
  std::vector<int> only;
  std::string work = ACTIONRAID_ACCEPTANCE_WORK_DIR;
  app.add_option("--only", only, "criteria to run (default: all)")->check(CLI::Range(1, 9));
  app.add_option("--work", work, "scratch directory for CLI outputs");
  CLI11_PARSE(app, argc, argv);
  fs::create_directories(work);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"projection oracle equivalence", criterion_projections},
      {"gradient checks", criterion_gradients},
      {"MAS equals LAS at H=1", criterion_horizon_one},
      {"budget accounting", criterion_budgets},
      {"attack ordering at the largest budget", criterion_ordering},
      {"LAS budget monotonicity", criterion_monotone},
      {"temporal-norm concentration", criterion_concentration},
      {"dimension decomposition report", [&] { return criterion_dimensions(work); }},
      {"determinism", [&] { return criterion_determinism(work); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), number) == only.end()) continue;
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << number << " (" << criteria[i].first
              << ", " << fmt(secs, 3) << "s): " << v.detail << std::endl;
    failed += !v.pass;
  }
  return failed == 0 ? 0 : 1;
}
