#include <filesystem>
#include <fstream>

#include "siamix/audit.hpp"
#include "siamix/checkpoint.hpp"
#include "siamix/optim.hpp"
#include "test_helpers.hpp"

using namespace siamix;
namespace fs = std::filesystem;

TEST_SUITE("optim.poly_lr") {
  TEST_CASE("endpoints and midpoint") {
    CHECK(poly_lr(6e-5, 0, 500, 1.0) == 6e-5);
    CHECK(poly_lr(6e-5, 500, 500, 1.0) == 0.0);
    CHECK(poly_lr(6e-5, 250, 500, 1.0) == doctest::Approx(3e-5).epsilon(1e-12));
  }

  TEST_CASE("t beyond T is a contract error") {
    CHECK_THROWS_AS(poly_lr(6e-5, 501, 500, 1.0), ContractError);
    CHECK_THROWS_AS(poly_lr(6e-5, -1, 500, 1.0), ContractError);
  }
}

TEST_SUITE("optim.adamw") {
  TEST_CASE("one hand-computed scalar step") {
    std::vector<std::pair<std::string, TensorF>> params;
    TensorF theta = TensorF::scalar(1.0f);
    theta.set_requires_grad(true);
    theta.grad()[0] = 1.0f;
    params.emplace_back("theta", theta);
    OptimState<float> state;
    state.cfg.weight_decay = 0.0;
    state.init(params);
    adamw_step(params, state, 0.1);
    // bias-corrected first step moves by ~lr
    CHECK(theta.item() == doctest::Approx(0.9f).epsilon(1e-5));
  }

  TEST_CASE("zero grads with weight decay is an exact geometric scaling") {
    std::vector<std::pair<std::string, TensorF>> params;
    TensorF theta = TensorF::from_data({3}, {1.0f, -2.0f, 0.5f});
    theta.set_requires_grad(true);
    theta.grad();  // materialize zeros
    params.emplace_back("theta", theta);
    OptimState<float> state;
    state.cfg.weight_decay = 0.01;
    state.init(params);
    adamw_step(params, state, 0.1);
    CHECK(theta.data()[0] == 1.0f * (1.0f - 0.001f));
    CHECK(theta.data()[1] == -2.0f * (1.0f - 0.001f));
    CHECK(theta.data()[2] == 0.5f * (1.0f - 0.001f));
    // decay compounds exactly
    adamw_step(params, state, 0.1);
    CHECK(theta.data()[0] == doctest::Approx(1.0f * (1.0f - 0.001f) * (1.0f - 0.001f)).epsilon(1e-12));
  }

  TEST_CASE("NaN gradient halts with the parameter named") {
    std::vector<std::pair<std::string, TensorF>> params;
    TensorF theta = TensorF::scalar(1.0f);
    theta.set_requires_grad(true);
    theta.grad()[0] = std::numeric_limits<float>::quiet_NaN();
    params.emplace_back("enc.w", theta);
    OptimState<float> state;
    state.init(params);
    CHECK_THROWS_WITH_AS(adamw_step(params, state, 0.1), doctest::Contains("enc.w"), NumericError);
  }
}

TEST_SUITE("checkpoint") {
  TEST_CASE("save/load round trip is bitwise and forward-identical") {
    const std::string dir = (fs::temp_directory_path() / "siamix_ckpt_test").string();
    fs::create_directories(dir);
    const std::string path = dir + "/nano.bin";

    Model<float> m = build<float>("nano", 2, 77);
    auto params = collect_params(m);
    OptimState<float> optim;
    optim.init(params);
    // make the state nontrivial
    Rng rng(78);
    TensorF t1 = th::rand_tensor<float>({1, 3, 32, 32}, rng, 0.0, 1.0);
    TensorF t2 = th::rand_tensor<float>({1, 3, 32, 32}, rng, 0.0, 1.0);
    {
      Graph<float> g;
      GraphScope<float> scope(g);
      g.backward(ops::sum(m.forward(t1, t2)));
    }
    adamw_step(params, optim, 1e-4);

    CheckpointMeta meta;
    meta.variant = "nano";
    meta.num_classes = 2;
    meta.seed = 77;
    meta.iteration = 123;
    meta.config_hash = fnv1a_hex("cfg");
    const TensorF before = m.forward(t1, t2);
    save_checkpoint(m, &optim, meta, path);

    CheckpointMeta got;
    OptimState<float> optim2;
    Model<float> loaded = load_checkpoint(path, &optim2, &got);
    CHECK(got.iteration == 123);
    CHECK(got.variant == "nano");
    CHECK(optim2.step == 123);

    auto pa = collect_params(m);
    auto pb = collect_params(loaded);
    REQUIRE(pa.size() == pb.size());
    for (size_t i = 0; i < pa.size(); ++i) {
      CHECK(th::exactly_equal(pa[i].second, pb[i].second));
      CHECK(optim.m[i] == optim2.m[i]);
      CHECK(optim.v[i] == optim2.v[i]);
    }
    CHECK(th::exactly_equal(loaded.forward(t1, t2), before));
  }

  TEST_CASE("loading into the wrong variant is an error") {
    const std::string dir = (fs::temp_directory_path() / "siamix_ckpt_test2").string();
    fs::create_directories(dir);
    const std::string path = dir + "/nano.bin";
    Model<float> m = build<float>("nano", 2, 1);
    CheckpointMeta meta;
    meta.variant = "nano";
    meta.num_classes = 2;
    save_checkpoint(m, nullptr, meta, path);

    Model<float> other = build<float>("mono-baseline", 2, 1);
    CHECK_THROWS_AS(load_checkpoint_into(other, path), ContractError);
  }

  TEST_CASE("corrupted files are data errors") {
    const std::string dir = (fs::temp_directory_path() / "siamix_ckpt_test3").string();
    fs::create_directories(dir);
    const std::string path = dir + "/junk.bin";
    {
      std::ofstream os(path, std::ios::binary);
      os << "not a checkpoint";
    }
    CHECK_THROWS_AS(peek_checkpoint(path), DataError);
    CHECK_THROWS_AS(load_checkpoint(dir + "/absent.bin"), DataError);
  }
}
