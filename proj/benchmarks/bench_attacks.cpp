#include <filesystem>

#include <benchmark/benchmark.h>

#include "actionraid/attacks.hpp"
#include "actionraid/harness.hpp"
#include "actionraid/weights_io.hpp"

using namespace actionraid;

namespace {

struct Fixture {
  std::unique_ptr<Environment> env = make_environment("lander_lite");
  std::unique_ptr<Agent> agent =
      load_weights(std::filesystem::path(ACTIONRAID_SOURCE_DIR) / "data/lander_lite/agent.bin");

  Fixture() {
    env->reset(1000);
    for (int t = 0; t < 20; ++t) env->step(agent->nominal_action(env->observe()));
  }

  AttackConfig attack(AttackKind kind) const {
    auto cfg = AttackConfig::defaults_for(kind, env->action_bounds());
    cfg.b = 0.4;
    cfg.B = 2.0;
    cfg.H = 5;
    return cfg;
  }
};

void BM_MasStep(benchmark::State& state) {
  Fixture f;
  const auto cfg = f.attack(AttackKind::Mas);
  const StateVector s = f.env->observe();
  Rng rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(mas_attack_step(*f.agent, s, cfg, rng));
}
BENCHMARK(BM_MasStep);

void BM_LasPlan(benchmark::State& state) {
  Fixture f;
  auto cfg = f.attack(AttackKind::Las);
  const int horizon = static_cast<int>(state.range(0));
  auto adversary = f.env->clone();
  const EnvSnapshot snap = f.env->snapshot();
  Rng rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(las_plan(*f.agent, *adversary, snap, 2.0, horizon, cfg, rng));
  }
}
BENCHMARK(BM_LasPlan)->Arg(1)->Arg(5)->Arg(10);

void BM_Episode(benchmark::State& state) {
  Fixture f;
  const auto cfg = f.attack(static_cast<AttackKind>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_episode(*f.env, *f.agent, cfg, 1000));
  state.SetLabel(std::string(to_string(cfg.kind)));
}
BENCHMARK(BM_Episode)
    ->Arg(static_cast<int>(AttackKind::None))
    ->Arg(static_cast<int>(AttackKind::Mas))
    ->Arg(static_cast<int>(AttackKind::Las))
    ->Unit(benchmark::kMillisecond);

}  // namespace
