#include <filesystem>
#include <fstream>

#include "siamix/trainer.hpp"
#include "test_helpers.hpp"

using namespace siamix;
namespace fs = std::filesystem;

namespace {

std::string run_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("siamix_train_" + tag);
  fs::remove_all(p);
  return p.string();
}

std::vector<SamplePair> synth_set(int pairs, uint64_t seed, Task task, int64_t size = 32) {
  SceneSpec spec;
  spec.width = size;
  spec.height = size;
  return synth_dataset(seed, pairs, task, spec);
}

TrainConfig tiny_config(uint64_t seed, int64_t iters) {
  TrainConfig cfg;
  cfg.variant = "nano";
  cfg.iterations = iters;
  cfg.eval_interval = iters;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_SUITE("trainer.loop") {
  TEST_CASE("first-iteration CE is close to ln 2 at random init") {
    auto ds = synth_set(4, 5, Task::detection);
    TrainConfig cfg = tiny_config(6, 1);
    cfg.loss = LossSpec::parse("wce:1");
    cfg.loss.class_weights = {1.0, 1.0};
    const TrainReport rep = train(cfg, ds, {}, run_dir("ln2"));
    REQUIRE(rep.loss_curve.size() == 1);
    CHECK(rep.loss_curve[0] == doctest::Approx(std::log(2.0)).epsilon(0.3));
    CHECK(std::abs(rep.loss_curve[0] - std::log(2.0)) < 0.2);
  }

  TEST_CASE("eval interval produces exactly the expected snapshots") {
    auto ds = synth_set(2, 7, Task::detection);
    TrainConfig cfg = tiny_config(8, 10);
    cfg.eval_interval = 2;
    const TrainReport rep = train(cfg, ds, {}, run_dir("snaps"));
    // train split only: one snapshot per eval point
    CHECK(rep.snapshots.size() == 5);
    CHECK(rep.loss_curve.size() == 10);
    CHECK(rep.end_iteration == 10);
  }

  TEST_CASE("validation split adds snapshots and logs both splits") {
    auto ds = synth_set(2, 9, Task::detection);
    auto val = synth_set(1, 10, Task::detection);
    TrainConfig cfg = tiny_config(11, 4);
    cfg.eval_interval = 2;
    const TrainReport rep = train(cfg, ds, val, run_dir("val"));
    CHECK(rep.snapshots.size() == 4);  // 2 points x 2 splits
    CHECK(rep.last_snapshot("val") != nullptr);
    std::ifstream log(rep.metrics_log_path);
    std::string text((std::istreambuf_iterator<char>(log)), std::istreambuf_iterator<char>());
    CHECK(text.find(",val,") != std::string::npos);
    CHECK(text.find(",train,") != std::string::npos);
  }

  TEST_CASE("identical config and seed reproduce the loss curve bitwise") {
    auto ds = synth_set(3, 12, Task::detection);
    TrainConfig cfg = tiny_config(13, 6);
    const TrainReport a = train(cfg, ds, {}, run_dir("det_a"));
    const TrainReport b = train(cfg, ds, {}, run_dir("det_b"));
    REQUIRE(a.loss_curve.size() == b.loss_curve.size());
    for (size_t i = 0; i < a.loss_curve.size(); ++i) CHECK(a.loss_curve[i] == b.loss_curve[i]);
  }

  TEST_CASE("augmentation keeps the loop running with batch-1 crops") {
    auto ds = synth_set(2, 14, Task::detection, 64);
    TrainConfig cfg = tiny_config(15, 3);
    cfg.augment.hflip = true;
    cfg.augment.random_resize = true;
    cfg.augment.crop = 32;
    const TrainReport rep = train(cfg, ds, {}, run_dir("aug"));
    CHECK(rep.loss_curve.size() == 3);
    for (double v : rep.loss_curve) CHECK(std::isfinite(v));
  }

  TEST_CASE("resume continues the schedule from the stored iteration") {
    auto ds = synth_set(2, 16, Task::detection);
    TrainConfig cfg = tiny_config(17, 8);
    cfg.eval_interval = 4;
    const std::string dir1 = run_dir("resume_a");
    TrainConfig first = cfg;
    first.iterations = 8;
    // train only half of the schedule by stopping the process at 4: emulate by
    // training a 4-iteration run with the same total written into the config
    TrainConfig half = cfg;
    half.iterations = 8;
    half.eval_interval = 4;
    // run the full reference
    const TrainReport full = train(cfg, ds, {}, run_dir("resume_ref"));

    // run 8 iterations in two 4-step legs through a checkpoint
    TrainConfig leg1 = cfg;
    leg1.iterations = 4;  // schedule T differs; use explicit two-leg equivalence below instead
    const TrainReport r1 = train(leg1, ds, {}, dir1);
    CHECK(r1.end_iteration == 4);

    TrainConfig leg2 = cfg;  // T = 8
    leg2.resume_from = r1.checkpoint_path;
    // resuming with T=8 from iteration 4 must use poly_lr(4..7, T=8)
    const TrainReport r2 = train(leg2, ds, {}, run_dir("resume_b"));
    CHECK(r2.start_iteration == 4);
    CHECK(r2.end_iteration == 8);
    CHECK(r2.loss_curve.size() == 4);

    // schedule continuity: the first resumed step used lr = poly_lr(4, 8) — check
    // it against the logged lr column
    std::ifstream log(r2.train_log_path);
    std::string header, row;
    std::getline(log, header);
    std::getline(log, row);
    const double lr_logged = std::stod(row.substr(row.find(',') + 1));
    CHECK(lr_logged == doctest::Approx(poly_lr(cfg.base_lr, 4, 8, 1.0)).epsilon(1e-12));
    (void)full;
  }

  TEST_CASE("non-finite loss halts training, retaining the last good checkpoint") {
    auto ds = synth_set(1, 30, Task::detection);
    // poison one parameter through a checkpoint, then resume from it
    Model<float> m = build<float>("nano", 2, 31);
    auto params = collect_params(m);
    params[0].second.mutable_data()[0] = std::numeric_limits<float>::infinity();
    CheckpointMeta meta;
    meta.variant = "nano";
    meta.num_classes = 2;
    meta.seed = 31;
    meta.iteration = 2;
    const std::string dir = run_dir("nan_halt");
    fs::create_directories(dir);
    const std::string poisoned = dir + "/poisoned.bin";
    save_checkpoint(m, nullptr, meta, poisoned);

    TrainConfig cfg = tiny_config(31, 8);
    cfg.resume_from = poisoned;
    const TrainReport rep = train(cfg, ds, {}, dir + "/run");
    CHECK(rep.halted_nan);
    CHECK(rep.end_iteration == 2);
    CHECK(rep.loss_curve.empty());
    // the poisoned checkpoint is untouched; no new checkpoint overwrote it
    CHECK(fs::exists(poisoned));
  }

  TEST_CASE("empty dataset and bad batch size are rejected") {
    TrainConfig cfg = tiny_config(18, 2);
    CHECK_THROWS_AS(train(cfg, {}, {}, run_dir("empty")), ContractError);
    auto ds = synth_set(1, 19, Task::detection);
    cfg.batch_size = 2;
    CHECK_THROWS_AS(train(cfg, ds, {}, run_dir("batch2")), ConfigError);
  }
}

TEST_SUITE("trainer.evaluate") {
  TEST_CASE("empty dataset is a contract error") {
    Model<float> m = build<float>("nano", 2, 20);
    CHECK_THROWS_AS(evaluate(m, {}, Task::detection), ContractError);
  }

  TEST_CASE("untrained model on synthetic data lands in the random-baseline band") {
    // fixed seeds; a typical random init scores mid-band (rare degenerate inits
    // can collapse to all-background, which is why the seeds are pinned)
    Model<float> m = build<float>("nano", 2, 21);
    auto ds = synth_set(4, 22, Task::detection);
    const MetricsReport rep = evaluate(m, ds, Task::detection);
    CHECK(rep.building_f1 >= 0.2);
    CHECK(rep.building_f1 <= 0.8);
  }

  TEST_CASE("aggregated report equals recomputation from per-sample counts") {
    Model<float> m = build<float>("nano", 2, 23);
    auto ds = synth_set(3, 24, Task::detection);
    const MetricsReport rep = evaluate(m, ds, Task::detection);

    std::vector<ConfusionCounts> agg(2);
    for (const auto& s : ds) {
      const LabelMap pred = predict_mask(m, s);
      const LabelMap truth = sample_label_batch(s);
      for (int c = 0; c < 2; ++c) agg[static_cast<size_t>(c)] += confusion_counts(pred, truth, c);
    }
    const MetricsReport want = report_from_counts(agg);
    CHECK(rep.building_f1 == want.building_f1);
    CHECK(rep.mean_iou == want.mean_iou);
    CHECK(rep.per_class[1].counts.tp == want.per_class[1].counts.tp);
  }

  TEST_CASE("prediction masks are full resolution with valid classes") {
    Model<float> m = build<float>("nano", 2, 25);
    auto ds = synth_set(1, 26, Task::detection);
    const LabelMap mask = predict_mask(m, ds[0]);
    CHECK(mask.shape == Shape{1, 32, 32});
    for (int32_t v : mask.values) CHECK((v == 0 || v == 1));
  }
}
