#include "siamix/erf.hpp"
#include "test_helpers.hpp"

using namespace siamix;

TEST_SUITE("erf") {
  TEST_CASE("conv baseline support is confined to the theoretical 5x5 field") {
    Rng rng(1);
    ConvBaseline<float> net = make_conv_baseline<float>(3, 4, rng);
    TensorF t1 = th::rand_tensor<float>({1, 3, 33, 33}, rng, 0.0, 1.0);
    const int64_t cy = 16, cx = 16;
    TensorF heat = conv_baseline_probe(net, t1, cy, cx);
    CHECK(heat.shape() == Shape{33, 33});
    // receptive-field arithmetic: two 3x3 convolutions reach radius 2
    for (int64_t y = 0; y < 33; ++y)
      for (int64_t x = 0; x < 33; ++x) {
        const bool inside = std::abs(y - cy) <= 2 && std::abs(x - cx) <= 2;
        if (!inside) CHECK(heat.at({y, x}) == 0.0f);
      }
    // and the field is actually exercised
    double inside_mass = 0;
    for (int64_t y = cy - 2; y <= cy + 2; ++y)
      for (int64_t x = cx - 2; x <= cx + 2; ++x) inside_mass += heat.at({y, x});
    CHECK(inside_mass > 0.0);
  }

  TEST_CASE("heatmaps are normalized to [0,1] with max exactly 1") {
    Rng rng(2);
    Model<float> m = build<float>("nano", 2, 3);
    TensorF t1 = th::rand_tensor<float>({1, 3, 32, 32}, rng, 0.0, 1.0);
    TensorF t2 = th::rand_tensor<float>({1, 3, 32, 32}, rng, 0.0, 1.0);
    TensorF heat = erf_probe(m, t1, t2, ErfTarget::stage2, 2, 2);
    CHECK(heat.shape() == Shape{32, 32});
    float mx = 0;
    for (float v : heat.data()) {
      CHECK(v >= 0.0f);
      CHECK(v <= 1.0f);
      mx = std::max(mx, v);
    }
    CHECK(mx == 1.0f);
  }

  TEST_CASE("stage-4 has gradient mass outside a 7x7 center window") {
    Rng rng(4);
    Model<float> m = build<float>("nano", 2, 5);
    TensorF t1 = th::rand_tensor<float>({1, 3, 64, 64}, rng, 0.0, 1.0);
    TensorF t2 = th::rand_tensor<float>({1, 3, 64, 64}, rng, 0.0, 1.0);
    TensorF heat = erf_probe(m, t1, t2, ErfTarget::stage4, 1, 1);
    double outside = 0, total = 0;
    for (int64_t y = 0; y < 64; ++y)
      for (int64_t x = 0; x < 64; ++x) {
        const double v = heat.at({y, x});
        total += v;
        if (std::abs(y - 32) > 3 || std::abs(x - 32) > 3) outside += v;
      }
    CHECK(total > 0.0);
    CHECK(outside > 1e-6 * total);
  }

  TEST_CASE("probing the logits target works and validates bounds") {
    Rng rng(6);
    Model<float> m = build<float>("nano", 2, 7);
    TensorF t1 = th::rand_tensor<float>({1, 3, 32, 32}, rng, 0.0, 1.0);
    TensorF t2 = th::rand_tensor<float>({1, 3, 32, 32}, rng, 0.0, 1.0);
    TensorF heat = erf_probe(m, t1, t2, ErfTarget::logits, 4, 4);
    CHECK(heat.shape() == Shape{32, 32});
    CHECK_THROWS_AS(erf_probe(m, t1, t2, ErfTarget::logits, 100, 4), ContractError);
    CHECK_THROWS_AS(erf_probe(m, t1, t2, ErfTarget::stage4, 5, 0), ContractError);
  }

  TEST_CASE("target names parse") {
    CHECK(parse_erf_target("stage1") == ErfTarget::stage1);
    CHECK(parse_erf_target("logits") == ErfTarget::logits);
    CHECK_THROWS_AS(parse_erf_target("stage9"), ConfigError);
  }
}
