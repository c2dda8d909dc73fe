#include "siamix/audit.hpp"
#include "siamix/decoder.hpp"
#include "siamix/fusion.hpp"
#include "siamix/metrics.hpp"
#include "test_helpers.hpp"

using namespace siamix;

namespace {

template <typename T>
TemporalTransformerParams<T> make_tt(int channels, int heads, int reduction, uint64_t seed) {
  Rng rng(seed);
  StageConfig cfg;
  cfg.channels = channels;
  cfg.heads = heads;
  cfg.reduction = reduction;
  return make_temporal_transformer<T>(cfg, 1, rng);
}

template <typename T>
StageOutput<T> stage_of(Tensor<T> tokens, int64_t h, int64_t w) {
  return {std::move(tokens), h, w};
}

}  // namespace

TEST_SUITE("fusion.temporal_transformer") {
  TEST_CASE("output shape equals the T1 stream shape") {
    Rng rng(1);
    auto tt = make_tt<float>(16, 2, 4, 2);
    auto y1 = stage_of(th::rand_tensor<float>({2, 16, 16}, rng), 4, 4);
    auto y2 = stage_of(th::rand_tensor<float>({2, 16, 16}, rng), 4, 4);
    CHECK(temporal_transformer(y1, y2, tt).shape() == y1.tokens.shape());
  }

  TEST_CASE("stream shape mismatch names the stage") {
    Rng rng(2);
    auto tt = make_tt<float>(8, 1, 1, 3);
    auto y1 = stage_of(th::rand_tensor<float>({1, 4, 8}, rng), 2, 2);
    auto y2 = stage_of(th::rand_tensor<float>({1, 8, 8}, rng), 4, 2);
    CHECK_THROWS_WITH_AS(temporal_transformer(y1, y2, tt), doctest::Contains("stage 1"), ContractError);
  }

  TEST_CASE("zeroed attention and MLP projections make fusion the identity on y1") {
    Rng rng(3);
    auto tt = make_tt<float>(8, 2, 2, 4);
    th::fill_zero(tt.attn.out.weight);
    th::fill_zero(tt.attn.out.bias);
    th::fill_zero(tt.fc2.weight);
    th::fill_zero(tt.fc2.bias);
    auto y1 = stage_of(th::rand_tensor<float>({1, 8, 8}, rng), 2, 4);
    auto y2 = stage_of(th::rand_tensor<float>({1, 8, 8}, rng), 2, 4);
    CHECK(th::exactly_equal(temporal_transformer(y1, y2, tt), y1.tokens));
  }

  TEST_CASE("fusion is directional: swapping streams changes the output") {
    for (uint64_t trial = 0; trial < 5; ++trial) {
      Rng rng(100 + trial);
      auto tt = make_tt<float>(16, 2, 2, 200 + trial);
      auto y1 = stage_of(th::rand_tensor<float>({1, 8, 16}, rng), 2, 4);
      auto y2 = stage_of(th::rand_tensor<float>({1, 8, 16}, rng), 2, 4);
      TensorF fwd = temporal_transformer(y1, y2, tt);
      TensorF rev = temporal_transformer(y2, y1, tt);
      CHECK(th::max_abs_diff(fwd, rev) > 1e-3);
    }
  }

  TEST_CASE("cross-attention rows sum to 1") {
    Rng rng(5);
    auto tt = make_tt<float>(8, 2, 2, 6);
    auto y1 = stage_of(th::rand_tensor<float>({1, 8, 8}, rng), 2, 4);
    auto y2 = stage_of(th::rand_tensor<float>({1, 8, 8}, rng), 2, 4);
    TensorF trace;
    temporal_transformer(y1, y2, tt, &trace);
    CHECK(trace.shape() == Shape{1, 2, 8, 4});
    for (int64_t h = 0; h < 2; ++h)
      for (int64_t i = 0; i < 8; ++i) {
        double s = 0;
        for (int64_t j = 0; j < 4; ++j) s += trace.at({0, h, i, j});
        CHECK(s == doctest::Approx(1.0).epsilon(1e-6));
      }
  }

  TEST_CASE("gradients reach both streams' upstream parameters") {
    Rng rng(7);
    auto tt = make_tt<float>(8, 1, 2, 8);
    // upstream projections standing in for the two encoder branches
    LinearLayer<float> pre1 = make_linear<float>(8, 8, rng);
    LinearLayer<float> pre2 = make_linear<float>(8, 8, rng);
    TensorF x1 = th::rand_tensor<float>({1, 8, 8}, rng);
    TensorF x2 = th::rand_tensor<float>({1, 8, 8}, rng);
    Graph<float> g;
    {
      GraphScope<float> scope(g);
      auto y1 = stage_of(pre1.forward(x1), 2, 4);
      auto y2 = stage_of(pre2.forward(x2), 2, 4);
      g.backward(ops::sum(temporal_transformer(y1, y2, tt)));
    }
    auto nonzero = [](TensorF& t) {
      if (!t.has_grad()) return false;
      for (float v : t.grad_view())
        if (v != 0.0f) return true;
      return false;
    };
    CHECK(nonzero(pre1.weight));
    CHECK(nonzero(pre2.weight));
  }
}

namespace {

template <typename T>
std::array<StageOutput<T>, 4> random_fused(Rng& rng, const VariantSpec& spec, int64_t input) {
  const auto shapes = expected_stage_shapes(spec, input, input);
  std::array<StageOutput<T>, 4> out;
  for (int i = 0; i < 4; ++i) {
    const auto& s = shapes[static_cast<size_t>(i)];
    out[static_cast<size_t>(i)] = {th::rand_tensor<T>({1, s.n, s.c}, rng), s.h, s.w};
  }
  return out;
}

template <typename T>
DecoderParams<T> decoder_for(const VariantSpec& spec, int num_classes, uint64_t seed) {
  Rng rng(seed);
  DecoderConfig dc;
  dc.unify_channels = spec.decoder_channels;
  dc.num_classes = num_classes;
  for (int i = 0; i < 4; ++i) dc.in_channels[static_cast<size_t>(i)] = spec.stages[static_cast<size_t>(i)].channels;
  return make_decoder<T>(dc, rng);
}

}  // namespace

TEST_SUITE("decoder.decode") {
  TEST_CASE("nano at 64x64 yields 2-class logits on the H/4 grid") {
    Rng rng(11);
    const VariantSpec spec = variant_spec("nano");
    auto fused = random_fused<float>(rng, spec, 64);
    auto dec = decoder_for<float>(spec, 2, 12);
    TensorF logits = decode(fused, dec);
    CHECK(logits.shape() == Shape{1, 2, 16, 16});
  }

  TEST_CASE("all-zero features with zero biases give all-zero logits") {
    const VariantSpec spec = variant_spec("nano");
    const auto shapes = expected_stage_shapes(spec, 64, 64);
    std::array<StageOutput<float>, 4> fused;
    for (int i = 0; i < 4; ++i) {
      const auto& s = shapes[static_cast<size_t>(i)];
      fused[static_cast<size_t>(i)] = {TensorF::zeros({1, s.n, s.c}), s.h, s.w};
    }
    auto dec = decoder_for<float>(spec, 2, 13);
    TensorF logits = decode(fused, dec);
    for (float v : logits.data()) CHECK(v == 0.0f);
  }

  TEST_CASE("inconsistent stage shapes are a contract error") {
    Rng rng(14);
    const VariantSpec spec = variant_spec("nano");
    auto fused = random_fused<float>(rng, spec, 64);
    fused[2].h = 3;  // break the pyramid relation
    auto dec = decoder_for<float>(spec, 2, 15);
    CHECK_THROWS_AS(decode(fused, dec), ContractError);
  }

  TEST_CASE("every stage slot influences the output (wiring guard)") {
    // stage channel widths are strictly increasing, so the four inputs cannot
    // be literally permuted; the wiring guard is that re-sourcing any single
    // slot moves the logits
    Rng rng(16);
    const VariantSpec spec = variant_spec("nano");
    auto fused = random_fused<float>(rng, spec, 64);
    auto dec = decoder_for<float>(spec, 2, 17);
    TensorF base = decode(fused, dec);

    Rng rng2(18);
    for (int k = 0; k < 4; ++k) {
      auto moved = fused;
      const auto& t = fused[static_cast<size_t>(k)].tokens;
      moved[static_cast<size_t>(k)].tokens = th::rand_tensor<float>({1, t.dim(1), t.dim(2)}, rng2);
      CHECK(th::max_abs_diff(base, decode(moved, dec)) > 1e-3);
    }
  }

  TEST_CASE("gradient check on a tiny decoder") {
    Rng rng(19);
    VariantSpec spec = variant_spec("nano");
    auto dec = decoder_for<double>(spec, 2, 20);
    const auto shapes = expected_stage_shapes(spec, 32, 32);
    std::vector<TensorD> in;
    for (int i = 0; i < 4; ++i) {
      const auto& s = shapes[static_cast<size_t>(i)];
      in.push_back(th::rand_tensor<double>({1, s.n, s.c}, rng));
    }
    auto fn = [&](std::vector<TensorD>& v) {
      std::array<StageOutput<double>, 4> fused;
      for (int i = 0; i < 4; ++i) {
        const auto& s = shapes[static_cast<size_t>(i)];
        fused[static_cast<size_t>(i)] = {v[static_cast<size_t>(i)], s.h, s.w};
      }
      return ops::sum(ops::gelu(decode(fused, dec)));
    };
    CHECK(grad_check<double>(fn, in, 1e-5) < 1e-5);
  }
}

TEST_SUITE("decoder.upsample_logits") {
  TEST_CASE("4x upsample and argmax classes") {
    Rng rng(21);
    TensorF logits = th::rand_tensor<float>({1, 2, 16, 16}, rng);
    TensorF full = upsample_logits(logits, 64, 64);
    CHECK(full.shape() == Shape{1, 2, 64, 64});
    LabelMap m = argmax_map(full);
    for (int32_t v : m.values) {
      CHECK(v >= 0);
      CHECK(v <= 1);
    }
  }

  TEST_CASE("constant channels upsample to constants") {
    TensorF logits = TensorF::zeros({1, 2, 4, 4});
    for (int64_t i = 0; i < 16; ++i) logits.mutable_data()[static_cast<size_t>(i)] = 0.25f;
    for (int64_t i = 16; i < 32; ++i) logits.mutable_data()[static_cast<size_t>(i)] = 0.75f;
    TensorF full = upsample_logits(logits, 16, 16);
    for (int64_t i = 0; i < 256; ++i) CHECK(full.data()[static_cast<size_t>(i)] == doctest::Approx(0.25f));
    for (int64_t i = 256; i < 512; ++i) CHECK(full.data()[static_cast<size_t>(i)] == doctest::Approx(0.75f));
  }

  TEST_CASE("non-4x target is a contract error") {
    TensorF logits = TensorF::zeros({1, 2, 16, 16});
    CHECK_THROWS_AS(upsample_logits(logits, 63, 64), ContractError);
    CHECK_THROWS_AS(upsample_logits(logits, 32, 32), ContractError);
  }
}
