#include <benchmark/benchmark.h>

#include "siamix/encoder.hpp"
#include "siamix/ops.hpp"

using namespace siamix;

namespace {

TensorF random_tensor(Shape shape, uint64_t seed) {
  Rng rng(seed);
  TensorF t = TensorF::zeros(std::move(shape));
  for (float& v : t.mutable_data()) v = static_cast<float>(rng.uniform(-1.0, 1.0));
  return t;
}

void BM_Matmul(benchmark::State& state) {
  const int64_t n = state.range(0);
  TensorF a = random_tensor({n, n}, 1);
  TensorF b = random_tensor({n, n}, 2);
  for (auto _ : state) benchmark::DoNotOptimize(ops::matmul(a, b));
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_Matmul)->Arg(64)->Arg(128)->Arg(256);

void BM_Conv2dPatchEmbed(benchmark::State& state) {
  // stage-1 patch embedding geometry at the given input size
  const int64_t hw = state.range(0);
  TensorF x = random_tensor({1, 3, hw, hw}, 3);
  TensorF w = random_tensor({32, 3, 7, 7}, 4);
  for (auto _ : state) benchmark::DoNotOptimize(ops::conv2d(x, w, TensorF(), 4, 3, 1));
}
BENCHMARK(BM_Conv2dPatchEmbed)->Arg(64)->Arg(128)->Arg(256);

void BM_DepthwiseConv(benchmark::State& state) {
  const int64_t c = state.range(0);
  TensorF x = random_tensor({1, c, 16, 16}, 5);
  TensorF w = random_tensor({c, 1, 3, 3}, 6);
  for (auto _ : state) benchmark::DoNotOptimize(ops::conv2d(x, w, TensorF(), 1, 1, static_cast<int>(c)));
}
BENCHMARK(BM_DepthwiseConv)->Arg(32)->Arg(128)->Arg(512);

void BM_AttentionCore(benchmark::State& state) {
  // stage-1 geometry, varying the K/V reduction
  const int64_t reduction = state.range(0);
  const int64_t n = 1024, c = 32;
  TensorF q = random_tensor({1, n, c}, 7);
  TensorF kv = random_tensor({1, n / reduction, c}, 8);
  for (auto _ : state) benchmark::DoNotOptimize(multi_head_attention(q, kv, kv, 1));
}
BENCHMARK(BM_AttentionCore)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_Softmax(benchmark::State& state) {
  TensorF x = random_tensor({1, 8, 1024, state.range(0)}, 9);
  for (auto _ : state) benchmark::DoNotOptimize(ops::softmax(x, -1));
}
BENCHMARK(BM_Softmax)->Arg(128)->Arg(512);

void BM_BilinearUpsample(benchmark::State& state) {
  TensorF x = random_tensor({1, 64, 16, 16}, 10);
  for (auto _ : state) benchmark::DoNotOptimize(ops::bilinear_resize(x, state.range(0), state.range(0)));
}
BENCHMARK(BM_BilinearUpsample)->Arg(64)->Arg(128);

}  // namespace
