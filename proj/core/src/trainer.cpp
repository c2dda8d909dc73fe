#include "siamix/trainer.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace siamix {

std::string TrainConfig::canonical_str() const {
  std::ostringstream os;
  os << "variant=" << variant << ";task=" << task_name(task) << ";loss=" << loss.str()
     << ";iters=" << iterations << ";lr=" << base_lr << ";power=" << poly_power
     << ";batch=" << batch_size << ";seed=" << seed << ";eval=" << eval_interval
     << ";ncls=" << num_classes << ";hflip=" << augment.hflip << ";resize=" << augment.random_resize
     << ";crop=" << augment.crop << ";wd=" << adamw.weight_decay;
  return os.str();
}

std::string TrainConfig::config_hash() const { return fnv1a_hex(canonical_str()); }

const MetricSnapshot* TrainReport::last_snapshot(const std::string& split) const {
  for (auto it = snapshots.rbegin(); it != snapshots.rend(); ++it)
    if (it->split == split) return &*it;
  return nullptr;
}

MetricsReport evaluate(const Model<float>& model, const std::vector<SamplePair>& dataset, Task task) {
  if (dataset.empty()) throw ContractError("evaluate: dataset is empty");
  std::vector<ConfusionCounts> counts(static_cast<size_t>(model.num_classes));
  for (const SamplePair& s : dataset) {
    const LabelMap pred = predict_mask(model, s);
    const LabelMap truth = sample_label_batch(s);
    for (int c = 0; c < model.num_classes; ++c)
      counts[static_cast<size_t>(c)] += confusion_counts(pred, truth, c);
  }
  (void)task;
  return report_from_counts(counts);
}

LabelMap predict_mask(const Model<float>& model, const SamplePair& sample) {
  const TensorF t1 = sample_t1_tensor(sample);
  const TensorF t2 = sample_t2_tensor(sample);
  const TensorF logits = model.forward(t1, t2);
  const TensorF full = upsample_logits(logits, sample.t1.height, sample.t1.width);
  return argmax_map(full);
}

namespace {

void append_metric_rows(std::ofstream& os, int64_t iter, const std::string& split,
                        const MetricsReport& rep) {
  os << iter << "," << split << "," << rep.building_f1 << "," << rep.building_iou << ","
     << rep.mean_f1 << "," << rep.mean_iou << "\n";
  os.flush();
}

}  // namespace

TrainReport train(const TrainConfig& cfg, const std::vector<SamplePair>& train_set,
                  const std::vector<SamplePair>& val_set, const std::string& out_dir) {
  if (train_set.empty()) throw ContractError("train: dataset is empty");
  if (cfg.batch_size != 1) throw ConfigError("train: only batch size 1 is implemented");
  if (cfg.iterations < 1) throw ConfigError("train: iterations must be >= 1");
  if (cfg.augment.random_resize && cfg.augment.crop == 0)
    throw ConfigError("train: random resize requires a crop size (model inputs must stay divisible by 32)");
  cfg.loss.validate();

  std::filesystem::create_directories(out_dir);
  TrainReport report;
  report.checkpoint_path = out_dir + "/checkpoint.bin";
  report.train_log_path = out_dir + "/train_log.csv";
  report.metrics_log_path = out_dir + "/metrics_log.csv";

  Model<float> model = build<float>(cfg.variant, cfg.num_classes, cfg.seed);
  auto params = collect_params(model);
  OptimState<float> optim;
  optim.cfg = cfg.adamw;
  optim.init(params);
  int64_t start_iter = 0;
  if (!cfg.resume_from.empty()) {
    CheckpointMeta meta;
    load_checkpoint_into(model, cfg.resume_from, &optim, &meta);
    start_iter = meta.iteration;
    optim.step = meta.iteration;
  }
  report.start_iteration = start_iter;
  if (start_iter >= cfg.iterations)
    throw ConfigError("train: resume iteration " + std::to_string(start_iter) +
                      " already at schedule end " + std::to_string(cfg.iterations));

  // fill in inverse-frequency class weights when wce is used without explicit ones
  LossSpec loss = cfg.loss;
  bool uses_wce = false;
  for (const auto& c : loss.components) uses_wce |= c.kind == LossKind::wce;
  if (uses_wce && loss.class_weights.empty()) {
    std::vector<const LabelMap*> labels;
    for (const auto& s : train_set) labels.push_back(&s.label);
    loss.class_weights = inverse_frequency_weights(labels, cfg.num_classes);
  }

  std::ofstream train_log(report.train_log_path);
  train_log << "iter,lr,loss";
  for (const auto& c : loss.components) {
    switch (c.kind) {
      case LossKind::wce: train_log << ",wce"; break;
      case LossKind::focal: train_log << ",focal"; break;
      case LossKind::dice: train_log << ",dice"; break;
    }
  }
  train_log << "\n";
  std::ofstream metrics_log(report.metrics_log_path);
  metrics_log << "iter,split,building_f1,building_iou,mean_f1,mean_iou\n";

  CheckpointMeta meta;
  meta.variant = cfg.variant;
  meta.num_classes = cfg.num_classes;
  meta.seed = cfg.seed;
  meta.config_hash = cfg.config_hash();

  auto save = [&](int64_t iter) {
    meta.iteration = iter;
    save_checkpoint(model, &optim, meta, report.checkpoint_path);
  };

  bool stop_early = false;
  int64_t iter = start_iter;
  for (iter = start_iter + 1; iter <= cfg.iterations && !stop_early; ++iter) {
    const double lr = poly_lr(cfg.base_lr, iter - 1, cfg.iterations, cfg.poly_power);

    Rng iter_rng = sample_rng(cfg.seed, static_cast<uint64_t>(iter));
    const size_t idx = static_cast<size_t>(iter_rng.uniform_int(0, static_cast<int64_t>(train_set.size()) - 1));
    SamplePair sample = cfg.augment.any() ? augment(train_set[idx], iter_rng, cfg.augment)
                                          : train_set[idx];

    for (auto& [name, p] : params) p.zero_grad();

    Graph<float> graph;
    double loss_value;
    std::vector<std::pair<std::string, double>> components;
    {
      GraphScope<float> scope(graph);
      const TensorF t1 = sample_t1_tensor(sample);
      const TensorF t2 = sample_t2_tensor(sample);
      const TensorF logits = model.forward(t1, t2);
      const TensorF full = upsample_logits(logits, sample.t1.height, sample.t1.width);
      LabelMap labels;
      labels.shape = {1, sample.label.shape[0], sample.label.shape[1]};
      labels.values = sample.label.values;
      TensorF loss_t = composite_loss(loss, full, labels, &components);
      loss_value = static_cast<double>(loss_t.item());
      if (!std::isfinite(loss_value)) {
        // halt; the checkpoint from the previous eval point is retained
        report.halted_nan = true;
        report.end_iteration = iter - 1;
        return report;
      }
      graph.backward(loss_t);
    }
    adamw_step(params, optim, lr);

    report.loss_curve.push_back(loss_value);
    train_log << iter << "," << lr << "," << loss_value;
    for (const auto& [n, v] : components) train_log << "," << v;
    train_log << "\n";

    if (cfg.eval_interval > 0 && iter % cfg.eval_interval == 0) {
      MetricsReport train_rep = evaluate(model, train_set, cfg.task);
      report.snapshots.push_back({iter, "train", train_rep});
      append_metric_rows(metrics_log, iter, "train", train_rep);
      if (!val_set.empty()) {
        MetricsReport val_rep = evaluate(model, val_set, cfg.task);
        report.snapshots.push_back({iter, "val", val_rep});
        append_metric_rows(metrics_log, iter, "val", val_rep);
      }
      save(iter);
      if (cfg.stop_at_train_f1 > 0 && train_rep.headline_f1(cfg.task) >= cfg.stop_at_train_f1)
        stop_early = true;
    }
  }
  report.end_iteration = stop_early ? iter - 1 : cfg.iterations;
  save(report.end_iteration);
  return report;
}

}  // namespace siamix
