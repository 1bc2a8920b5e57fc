// Serial reference kernels against their OpenMP versions.

#include <random>

#include <benchmark/benchmark.h>

#include "rscsaga/kernels.hpp"

namespace {

using rscsaga::Matrix;
using rscsaga::Vector;
namespace k = rscsaga::kernels;

struct Problem {
  Matrix X;
  Vector y;
  Vector theta;
};

Problem make(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  const auto p = static_cast<Eigen::Index>(state.range(1));
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  Problem pr{Matrix(n, p), Vector(n), Vector(p)};
  for (Eigen::Index i = 0; i < pr.X.size(); ++i) pr.X.data()[i] = normal(rng);
  for (Eigen::Index i = 0; i < n; ++i) pr.y[i] = normal(rng);
  for (Eigen::Index j = 0; j < p; ++j) pr.theta[j] = normal(rng);
  return pr;
}

void BM_SerialGradient(benchmark::State& state) {
  Problem pr = make(state);
  Vector g;
  for (auto _ : state) {
    k::serial::mean_gradient(pr.X, pr.y, pr.theta, k::Glm::Squared, g);
    benchmark::DoNotOptimize(g.data());
  }
}

void BM_OmpGradient(benchmark::State& state) {
  Problem pr = make(state);
  Vector g;
  for (auto _ : state) {
    k::omp::mean_gradient(pr.X, pr.y, pr.theta, k::Glm::Squared, g);
    benchmark::DoNotOptimize(g.data());
  }
}

void BM_SerialLoss(benchmark::State& state) {
  Problem pr = make(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::serial::mean_loss(pr.X, pr.y, pr.theta, k::Glm::Logistic));
}

void BM_OmpLoss(benchmark::State& state) {
  Problem pr = make(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::omp::mean_loss(pr.X, pr.y, pr.theta, k::Glm::Logistic));
}

}  // namespace

BENCHMARK(BM_SerialGradient)->Args({500, 1000})->Args({2500, 5000});
BENCHMARK(BM_OmpGradient)->Args({500, 1000})->Args({2500, 5000});
BENCHMARK(BM_SerialLoss)->Args({500, 1000})->Args({2500, 5000});
BENCHMARK(BM_OmpLoss)->Args({500, 1000})->Args({2500, 5000});

BENCHMARK_MAIN();
