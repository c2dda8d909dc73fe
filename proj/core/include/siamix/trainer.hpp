#pragma once

#include "siamix/checkpoint.hpp"
#include "siamix/data.hpp"
#include "siamix/losses.hpp"
#include "siamix/metrics.hpp"

namespace siamix {

struct TrainConfig {
  std::string variant = "nano";
  Task task = Task::detection;
  LossSpec loss = LossSpec{{{LossKind::dice, 1.0}, {LossKind::focal, 1.0}}, {}, 2.0};
  int64_t iterations = 500;  // total schedule length T
  double base_lr = 6e-5;
  double poly_power = 1.0;
  int64_t batch_size = 1;  // only 1 is implemented
  uint64_t seed = 42;
  int64_t eval_interval = 100;
  int num_classes = 2;
  AugmentPolicy augment;
  AdamWConfig adamw;
  std::string resume_from;        // checkpoint path; continues the lr schedule
  double stop_at_train_f1 = 0.0;  // >0: stop once the train-split headline F1 reaches it

  std::string canonical_str() const;
  std::string config_hash() const;
};

struct MetricSnapshot {
  int64_t iteration = 0;
  std::string split;
  MetricsReport report;
};

struct TrainReport {
  std::vector<double> loss_curve;  // one value per completed iteration
  std::vector<MetricSnapshot> snapshots;
  std::string checkpoint_path;
  std::string train_log_path;
  std::string metrics_log_path;
  bool halted_nan = false;
  int64_t start_iteration = 0;
  int64_t end_iteration = 0;

  const MetricSnapshot* last_snapshot(const std::string& split) const;
};

// sample -> augment -> forward -> composite loss on full-resolution logits ->
// backward -> AdamW with the poly schedule; evaluates every eval_interval and
// checkpoints the last good state. Deterministic given config + seed.
TrainReport train(const TrainConfig& cfg, const std::vector<SamplePair>& train_set,
                  const std::vector<SamplePair>& val_set, const std::string& out_dir);

// aggregate confusion counts over the dataset, then per-class F1/IoU
MetricsReport evaluate(const Model<float>& model, const std::vector<SamplePair>& dataset, Task task);

// single-sample full-resolution prediction
LabelMap predict_mask(const Model<float>& model, const SamplePair& sample);

}  // namespace siamix
