#include <benchmark/benchmark.h>

#include "siamix/checkpoint.hpp"
#include "siamix/losses.hpp"
#include "siamix/optim.hpp"

using namespace siamix;

namespace {

TensorF random_image(int64_t hw, uint64_t seed) {
  Rng rng(seed);
  TensorF t = TensorF::zeros({1, 3, hw, hw});
  for (float& v : t.mutable_data()) v = static_cast<float>(rng.uniform(0.0, 1.0));
  return t;
}

void BM_NanoForward(benchmark::State& state) {
  const int64_t hw = state.range(0);
  Model<float> m = build<float>("nano", 2, 1);
  TensorF t1 = random_image(hw, 2);
  TensorF t2 = random_image(hw, 3);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(t1, t2));
}
BENCHMARK(BM_NanoForward)->Arg(64)->Arg(128);

void BM_NanoTrainStep(benchmark::State& state) {
  const int64_t hw = state.range(0);
  Model<float> m = build<float>("nano", 2, 1);
  auto params = collect_params(m);
  OptimState<float> optim;
  optim.init(params);
  TensorF t1 = random_image(hw, 2);
  TensorF t2 = random_image(hw, 3);
  Rng rng(4);
  LabelMap labels = LabelMap::zeros({1, hw, hw});
  for (auto& v : labels.values) v = rng.bernoulli(0.3) ? 1 : 0;
  const LossSpec spec = LossSpec::parse("dice:1+focal:1");

  for (auto _ : state) {
    for (auto& [n, p] : params) p.zero_grad();
    Graph<float> g;
    {
      GraphScope<float> scope(g);
      TensorF logits = m.forward(t1, t2);
      TensorF loss = composite_loss(spec, upsample_logits(logits, hw, hw), labels);
      g.backward(loss);
    }
    adamw_step(params, optim, 6e-5);
  }
}
BENCHMARK(BM_NanoTrainStep)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_Siamix0Forward256(benchmark::State& state) {
  Model<float> m = build<float>("siamix-0", 2, 1);
  TensorF t1 = random_image(256, 2);
  TensorF t2 = random_image(256, 3);
  for (auto _ : state) benchmark::DoNotOptimize(m.forward(t1, t2));
}
BENCHMARK(BM_Siamix0Forward256)->Unit(benchmark::kSecond)->Iterations(1);

}  // namespace

BENCHMARK_MAIN();
