#include <random>

#include <benchmark/benchmark.h>

#include "actionraid/projections.hpp"

using namespace actionraid;

namespace {

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = u(rng);
  return m;
}

void BM_ProjectL1Ball(benchmark::State& state) {
  const Eigen::VectorXd v = random_matrix(state.range(0), 1).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(project_l1_ball(v, Radius(1.0)));
}
BENCHMARK(BM_ProjectL1Ball)->Arg(2)->Arg(4)->Arg(16)->Arg(256);

void BM_ProjectL2Ball(benchmark::State& state) {
  const Eigen::VectorXd v = random_matrix(state.range(0), 1).col(0);
  for (auto _ : state) benchmark::DoNotOptimize(project_l2_ball(v, Radius(1.0)));
}
BENCHMARK(BM_ProjectL2Ball)->Arg(2)->Arg(16)->Arg(256);

void BM_ProjectSequence(benchmark::State& state) {
  const PerturbationMatrix m(random_matrix(4, state.range(0)));
  const auto p = static_cast<NormOrder>(state.range(1));
  const auto q = static_cast<NormOrder>(state.range(2));
  for (auto _ : state) benchmark::DoNotOptimize(project_sequence(m, p, q, Radius(2.0)));
}
BENCHMARK(BM_ProjectSequence)
    ->ArgsProduct({{5, 10, 50},
                   {static_cast<int>(NormOrder::L1), static_cast<int>(NormOrder::L2)},
                   {static_cast<int>(NormOrder::L1), static_cast<int>(NormOrder::L2)}});

}  // namespace
