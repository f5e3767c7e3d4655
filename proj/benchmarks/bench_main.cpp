// Microbenchmarks for the per-step hot paths: extractor forward/backward,
// the two head losses, inference probabilities, and the ranking metrics.
// Sizes bracket the shipped defaults (batch 64, 2-32-32 extractor, 4 classes).

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "oodlab/heads.hpp"
#include "oodlab/metrics.hpp"
#include "oodlab/network.hpp"

using namespace oodlab;

namespace {

Tensor random_batch(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  Tensor t({rows, cols});
  for (std::size_t i = 0; i < t.size(); ++i) t(i) = dist(rng);
  return t;
}

std::vector<int> random_targets(std::size_t n, int classes, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> dist(0, classes - 1);
  std::vector<int> targets(n);
  for (int& t : targets) t = dist(rng);
  return targets;
}

void extractor_forward(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  std::mt19937_64 rng(1);
  FeatureExtractor net = make_mlp(2, {32, 32}, rng);
  const Tensor inputs = random_batch(batch, 2, 2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(inputs));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

void extractor_forward_backward(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  std::mt19937_64 rng(1);
  FeatureExtractor net = make_mlp(2, {32, 32}, rng);
  const Tensor inputs = random_batch(batch, 2, 2);
  const Tensor grad = random_batch(batch, 32, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(net.forward(inputs));
    benchmark::DoNotOptimize(net.backward(grad));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

void affine_head_loss(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  std::mt19937_64 rng(4);
  const SoftMaxHead head = make_softmax_head(4, 32, rng);
  const Tensor features = random_batch(batch, 32, 5);
  const std::vector<int> targets = random_targets(batch, 4, 6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(softmax_loss(head, features, targets));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

void distance_head_loss(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  const IsoMaxHead head{random_batch(4, 32, 7), 10.0};
  const Tensor features = random_batch(batch, 32, 8);
  const std::vector<int> targets = random_targets(batch, 4, 9);
  for (auto _ : state) {
    benchmark::DoNotOptimize(isomax_loss(head, features, targets));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

void distance_head_inference(benchmark::State& state) {
  const std::size_t batch = state.range(0);
  const IsoMaxHead head{random_batch(4, 32, 7), 10.0};
  const Tensor features = random_batch(batch, 32, 8);
  for (auto _ : state) {
    benchmark::DoNotOptimize(isomax_probabilities(head, features));
  }
  state.SetItemsProcessed(state.iterations() * batch);
}

std::vector<ScoredSample> random_samples(std::size_t n) {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> score(-3.0, 3.0);
  std::bernoulli_distribution fair(0.5);
  std::vector<ScoredSample> samples(n);
  for (auto& s : samples) {
    s.score = score(rng);
    s.is_in_distribution = fair(rng);
  }
  samples.front().is_in_distribution = true;
  samples.back().is_in_distribution = false;
  return samples;
}

void ranking_auroc(benchmark::State& state) {
  const auto samples = random_samples(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(auroc(samples));
  }
  state.SetItemsProcessed(state.iterations() * samples.size());
}

void ranking_full_report(benchmark::State& state) {
  const auto samples = random_samples(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(detection_report(samples));
  }
  state.SetItemsProcessed(state.iterations() * samples.size());
}

}  // namespace

BENCHMARK(extractor_forward)->Arg(1)->Arg(64)->Arg(1000);
BENCHMARK(extractor_forward_backward)->Arg(1)->Arg(64)->Arg(1000);
BENCHMARK(affine_head_loss)->Arg(64)->Arg(1000);
BENCHMARK(distance_head_loss)->Arg(64)->Arg(1000);
BENCHMARK(distance_head_inference)->Arg(64)->Arg(1000);
BENCHMARK(ranking_auroc)->Arg(100)->Arg(2000)->Arg(20000);
BENCHMARK(ranking_full_report)->Arg(100)->Arg(2000)->Arg(20000);

BENCHMARK_MAIN();
