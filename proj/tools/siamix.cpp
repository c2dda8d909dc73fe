// siamix command-line tool: synthetic data generation, training, evaluation,
// prediction, architecture audits and the ERF probe. Every command writes a
// run manifest into its output directory, success or failure.

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "siamix/audit.hpp"
#include "siamix/erf.hpp"
#include "siamix/trainer.hpp"

#ifndef SIAMIX_VERSION
#define SIAMIX_VERSION "v0.1.0"
#endif

namespace fs = std::filesystem;
using namespace siamix;

namespace {

std::string now_string() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[64];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%S", std::localtime(&t));
  return buf;
}

struct RunManifest {
  std::string command;
  std::string out_dir;
  std::string config_text;
  uint64_t seed = 0;
  std::string start_time = now_string();
  std::vector<std::string> outputs;
  std::string status = "incomplete";

  void add_output(const std::string& path) { outputs.push_back(path); }

  void write() const {
    if (out_dir.empty()) return;
    fs::create_directories(out_dir);
    std::ofstream os(fs::path(out_dir) / "run_manifest.txt");
    os << "command: " << command << "\n";
    os << "version: " << SIAMIX_VERSION << "\n";
    os << "seed: " << seed << "\n";
    os << "start_time: " << start_time << "\n";
    os << "end_time: " << now_string() << "\n";
    os << "status: " << status << "\n";
    os << "outputs:\n";
    for (const auto& o : outputs) os << "  - " << o << "\n";
    os << "config:\n";
    std::istringstream cfg(config_text);
    std::string line;
    while (std::getline(cfg, line)) os << "  " << line << "\n";
  }
};

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return 1;
  if (dynamic_cast<const DataError*>(&e)) return 2;
  if (dynamic_cast<const ShapeError*>(&e)) return 2;
  if (dynamic_cast<const ContractError*>(&e)) return 2;
  if (dynamic_cast<const NumericError*>(&e)) return 3;
  return 3;
}

std::vector<SamplePair> load_split(const std::string& manifest, Task task, int threshold) {
  return load_dataset(manifest, task, true, threshold, 2);
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string out = "runs/synth";
  int pairs = 8;
  int val_pairs = 0;
  int test_pairs = 0;
  uint64_t seed = 7;
  int64_t size = 64;
  SceneSpec scene;
};

int cmd_synth(const SynthArgs& a, RunManifest& manifest) {
  SceneSpec spec = a.scene;
  spec.width = a.size;
  spec.height = a.size;
  const SynthManifests train = materialize_synth_dataset(a.out, "train", a.pairs, a.seed, spec);
  manifest.add_output(train.detection);
  manifest.add_output(train.change);
  if (a.val_pairs > 0) {
    const SynthManifests val = materialize_synth_dataset(a.out, "val", a.val_pairs, a.seed + 1, spec);
    manifest.add_output(val.detection);
    manifest.add_output(val.change);
  }
  if (a.test_pairs > 0) {
    const SynthManifests test = materialize_synth_dataset(a.out, "test", a.test_pairs, a.seed + 2, spec);
    manifest.add_output(test.detection);
    manifest.add_output(test.change);
  }
  std::cout << "synth: wrote " << a.pairs << " train pair(s) under " << a.out << "\n";
  return 0;
}

struct TrainArgs {
  std::string manifest;
  std::string val_manifest;
  std::string out = "runs/train";
  TrainConfig cfg;
  std::string task = "detection";
  std::string loss = "dice:1+focal:1";
  bool aug_hflip = false;
  bool aug_resize = false;
  int64_t aug_crop = 0;
};

int cmd_train(const TrainArgs& a, RunManifest& manifest) {
  TrainConfig cfg = a.cfg;
  cfg.task = parse_task(a.task);
  cfg.loss = LossSpec::parse(a.loss);
  cfg.augment.hflip = a.aug_hflip;
  cfg.augment.random_resize = a.aug_resize;
  cfg.augment.crop = a.aug_crop;

  const auto train_set = load_split(a.manifest, cfg.task, 0);
  std::vector<SamplePair> val_set;
  if (!a.val_manifest.empty()) val_set = load_split(a.val_manifest, cfg.task, 0);

  const TrainReport rep = train(cfg, train_set, val_set, a.out);
  manifest.add_output(rep.checkpoint_path);
  manifest.add_output(rep.train_log_path);
  manifest.add_output(rep.metrics_log_path);

  if (rep.halted_nan) {
    std::cerr << "train: halted on non-finite loss at iteration " << rep.end_iteration + 1
              << "; last good checkpoint retained\n";
    return 3;
  }
  const MetricSnapshot* last = rep.last_snapshot("train");
  std::cout << "train: finished at iteration " << rep.end_iteration;
  if (last)
    std::cout << ", train F1=" << last->report.headline_f1(cfg.task)
              << " IoU=" << last->report.headline_iou(cfg.task);
  std::cout << "\ncheckpoint: " << rep.checkpoint_path << "\n";
  return 0;
}

struct EvalArgs {
  std::string checkpoint;
  std::string manifest;
  std::string task = "detection";
  std::string out = "runs/eval";
};

int cmd_eval(const EvalArgs& a, RunManifest& manifest) {
  const Task task = parse_task(a.task);
  Model<float> model = load_checkpoint(a.checkpoint);
  const auto ds = load_split(a.manifest, task, 0);
  const MetricsReport rep = evaluate(model, ds, task);

  fs::create_directories(a.out);
  const std::string csv_path = (fs::path(a.out) / "metrics.csv").string();
  std::ofstream csv(csv_path);
  csv << metrics_csv(rep);
  manifest.add_output(csv_path);

  std::cout << metrics_csv(rep);
  std::cout << "headline (" << a.task << "): F1=" << rep.headline_f1(task)
            << " IoU=" << rep.headline_iou(task) << "\n";
  return 0;
}

struct PredictArgs {
  std::string checkpoint;
  std::string manifest;
  std::string out = "runs/predict";
};

int cmd_predict(const PredictArgs& a, RunManifest& manifest) {
  Model<float> model = load_checkpoint(a.checkpoint);
  const auto ds = load_split(a.manifest, Task::detection, 0);
  fs::create_directories(a.out);
  int index = 0;
  for (const auto& s : ds) {
    const LabelMap pred = predict_mask(model, s);
    LabelMap flat;
    flat.shape = {pred.shape[1], pred.shape[2]};
    flat.values = pred.values;
    char name[64];
    std::snprintf(name, sizeof(name), "mask_%04d.png", index++);
    const std::string path = (fs::path(a.out) / name).string();
    write_png(path, label_to_u8(flat, model.num_classes));
    manifest.add_output(path);
  }
  std::cout << "predict: wrote " << index << " mask(s) under " << a.out << "\n";
  return 0;
}

struct ParamsArgs {
  std::string variant = "siamix-0";
  bool all = false;
  std::string out;
};

int report_params(const std::string& name) {
  Model<float> model = build<float>(name, 2, 1);
  const int64_t count = count_params(model);
  const double count_m = static_cast<double>(count) / 1e6;
  std::cout << name << ": " << count << " params (" << count_m << "M)";
  if (auto target = published_params_m(name)) {
    const double dev = (count_m - *target) / *target;
    const bool ok = std::abs(dev) <= 0.10;
    std::cout << "  published " << *target << "M  dev " << dev * 100.0 << "%  "
              << (ok ? "PASS" : "FAIL");
    std::cout << "\n";
    return ok ? 0 : 3;
  }
  std::cout << "  (no published reference)\n";
  return 0;
}

int cmd_params(const ParamsArgs& a, RunManifest&) {
  int rc = 0;
  if (a.all) {
    for (const auto& name : {"siamix-0", "siamix-1", "siamix-2", "siamix-3", "siamix-4", "siamix-5"})
      rc |= report_params(name);
  } else {
    rc = report_params(a.variant);
  }
  return rc;
}

struct FlopsArgs {
  std::string variant = "siamix-0";
  int64_t size = 256;
};

int cmd_flops(const FlopsArgs& a, RunManifest&) {
  Model<float> model = build<float>(a.variant, 2, 1);
  const FlopCount fc = count_flops(model, a.size, a.size);
  const double g = static_cast<double>(fc.param_macs) / 1e9;
  std::cout << a.variant << " @ " << a.size << "x" << a.size << ":\n"
            << "  parameterized-layer MACs: " << fc.param_macs << " (" << g << "G)\n"
            << "  attention QK^T/AV MACs:   " << fc.attention_macs << " ("
            << static_cast<double>(fc.attention_macs) / 1e9 << "G)\n"
            << "  total:                    " << fc.total() << "\n";
  if (auto target = published_flops_g(a.variant, a.size)) {
    const double dev = (g - *target) / *target;
    const bool ok = std::abs(dev) <= 0.15;
    std::cout << "  published " << *target << "G  dev " << dev * 100.0 << "%  "
              << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? 0 : 3;
  }
  return 0;
}

struct ErfArgs {
  std::string checkpoint;
  std::string variant = "nano";
  std::string target = "all";
  std::string out = "runs/erf";
  uint64_t seed = 7;
  int64_t size = 64;
};

int cmd_erf(const ErfArgs& a, RunManifest& manifest) {
  Model<float> model = a.checkpoint.empty() ? build<float>(a.variant, 2, a.seed)
                                            : load_checkpoint(a.checkpoint);
  Rng rng(a.seed);
  SceneSpec spec;
  spec.width = a.size;
  spec.height = a.size;
  const SynthScene sc = synth_scene(rng, spec);
  const TensorF t1 = image_to_tensor(sc.t1);
  const TensorF t2 = image_to_tensor(sc.t2);

  fs::create_directories(a.out);
  const auto stage_shapes = expected_stage_shapes(model.spec, a.size, a.size);
  auto write_heat = [&](const std::string& name, const TensorF& heat) {
    const std::string path = (fs::path(a.out) / (name + ".png")).string();
    write_png(path, heatmap_to_u8(heat));
    manifest.add_output(path);
    std::cout << "erf: wrote " << path << "\n";
  };

  std::vector<std::string> targets;
  if (a.target == "all")
    targets = {"stage1", "stage2", "stage3", "stage4", "logits"};
  else
    targets = {a.target};
  for (const auto& t : targets) {
    const ErfTarget target = parse_erf_target(t);
    int64_t cy, cx;
    if (target == ErfTarget::logits) {
      cy = a.size / 8;
      cx = a.size / 8;
    } else {
      const auto& s = stage_shapes[static_cast<size_t>(static_cast<int>(target) - 1)];
      cy = s.h / 2;
      cx = s.w / 2;
    }
    write_heat("erf_" + t, erf_probe(model, t1, t2, target, cy, cx));
  }

  // locality reference
  ConvBaseline<float> baseline = make_conv_baseline<float>(3, 8, rng);
  write_heat("erf_conv_baseline", conv_baseline_probe(baseline, t1, a.size / 2, a.size / 2));
  return 0;
}

struct PrepArgs {
  std::string in;
  std::string out = "runs/prep-cdd";
  int threshold = 0;
  int kernel = 3;
  int erode = 1;
  int dilate = 1;
};

int cmd_prep_cdd(const PrepArgs& a, RunManifest& manifest) {
  std::vector<fs::path> files;
  if (fs::is_directory(a.in)) {
    for (const auto& entry : fs::directory_iterator(a.in))
      if (entry.path().extension() == ".png") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
  } else if (fs::exists(a.in)) {
    files.push_back(a.in);
  } else {
    throw DataError("prep-cdd: no such input: " + a.in);
  }
  if (files.empty()) throw DataError("prep-cdd: no .png files under " + a.in);

  fs::create_directories(a.out);
  for (const auto& f : files) {
    const ImageU8 raw = read_png(f.string());
    LabelMap mask = binarize_label(raw, a.threshold);
    mask = morph_denoise(mask, a.kernel, a.erode, a.dilate);
    const std::string path = (fs::path(a.out) / f.filename()).string();
    write_png(path, label_to_u8(mask, 2));
    manifest.add_output(path);
  }
  std::cout << "prep-cdd: cleaned " << files.size() << " label file(s) into " << a.out << "\n";
  return 0;
}

struct TileArgs {
  std::string t1, t2, label;
  int64_t size = 256;
  int64_t overlap = 0;
  bool pad = false;
  std::string out = "runs/tile";
};

int cmd_tile(const TileArgs& a, RunManifest& manifest) {
  const SamplePair pair = load_pair(a.t1, a.t2, a.label, Task::detection);
  const auto tiles = tile(pair, a.size, a.overlap, a.pad);
  for (const char* sub : {"t1", "t2", "labels"}) fs::create_directories(fs::path(a.out) / sub);
  std::vector<ManifestEntry> entries;
  int index = 0;
  for (const auto& t : tiles) {
    char name[64];
    std::snprintf(name, sizeof(name), "tile_%04d.png", index++);
    ManifestEntry e;
    e.t1 = (fs::path(a.out) / "t1" / name).string();
    e.t2 = (fs::path(a.out) / "t2" / name).string();
    e.label = (fs::path(a.out) / "labels" / name).string();
    write_png(e.t1, to_u8(t.t1));
    write_png(e.t2, to_u8(t.t2));
    write_png(e.label, label_to_u8(t.label, 2));
    entries.push_back(e);
  }
  const std::string manifest_path = (fs::path(a.out) / "tiles.txt").string();
  write_manifest(manifest_path, entries);
  manifest.add_output(manifest_path);
  std::cout << "tile: wrote " << tiles.size() << " tile(s), manifest " << manifest_path << "\n";
  return 0;
}

struct AblateArgs {
  std::string manifest;  // detection manifest; empty -> generate synthetic
  int pairs = 8;
  uint64_t seed = 7;
  int64_t iters = 300;
  int64_t size = 64;
  std::string out = "runs/ablate";
};

int cmd_ablate(const AblateArgs& a, RunManifest& manifest) {
  std::string det_manifest = a.manifest;
  if (det_manifest.empty()) {
    SceneSpec spec;
    spec.width = a.size;
    spec.height = a.size;
    det_manifest = materialize_synth_dataset((fs::path(a.out) / "data").string(), "train", a.pairs,
                                             a.seed, spec)
                       .detection;
  }
  const auto ds = load_split(det_manifest, Task::detection, 0);

  struct Row {
    const char* model;
    double f1;
    double iou;
  };
  std::vector<Row> rows;
  for (const char* variant : {"mono-baseline", "concat-fusion-baseline", "nano"}) {
    TrainConfig cfg;
    cfg.variant = variant;
    cfg.task = Task::detection;
    cfg.iterations = a.iters;
    cfg.eval_interval = a.iters;
    cfg.seed = a.seed;
    const TrainReport rep = train(cfg, ds, {}, (fs::path(a.out) / variant).string());
    const MetricSnapshot* last = rep.last_snapshot("train");
    rows.push_back({variant, last ? last->report.building_f1 : 0.0,
                    last ? last->report.building_iou : 0.0});
  }

  const std::string csv_path = (fs::path(a.out) / "ablate.csv").string();
  std::ofstream csv(csv_path);
  csv << "model,f1_b,iou_b,delta_f1_vs_mono\n";
  std::cout << "model,f1_b,iou_b,delta_f1_vs_mono\n";
  for (const Row& r : rows) {
    const double delta = r.f1 - rows[0].f1;
    csv << r.model << "," << r.f1 << "," << r.iou << "," << delta << "\n";
    std::cout << r.model << "," << r.f1 << "," << r.iou << "," << delta << "\n";
  }
  manifest.add_output(csv_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SiamixFormer bi-temporal segmentation toolkit"};
  app.set_version_flag("--version", SIAMIX_VERSION);
  app.set_config("--config", "", "structured config file; command-line flags win");
  app.require_subcommand(1);

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic bi-temporal dataset");
  synth->add_option("--out", synth_args.out, "output directory");
  synth->add_option("--pairs", synth_args.pairs, "number of training pairs")->check(CLI::PositiveNumber);
  synth->add_option("--val-pairs", synth_args.val_pairs, "validation pairs");
  synth->add_option("--test-pairs", synth_args.test_pairs, "test pairs");
  synth->add_option("--seed", synth_args.seed, "rng seed");
  synth->add_option("--size", synth_args.size, "canvas size (divisible by 32)");
  synth->add_option("--min-buildings", synth_args.scene.min_buildings, "free-placement mode");
  synth->add_option("--max-buildings", synth_args.scene.max_buildings, "free-placement mode");
  synth->add_option("--min-size", synth_args.scene.min_size);
  synth->add_option("--max-size", synth_args.scene.max_size);
  synth->add_option("--site-grid", synth_args.scene.site_grid, "n x n block sites; 0 = free placement");
  synth->add_option("--p-occupied", synth_args.scene.p_site_occupied, "site occupancy in T1");
  synth->add_option("--change-remove", synth_args.scene.p_remove);
  synth->add_option("--change-add", synth_args.scene.p_add);
  synth->add_option("--change-alter", synth_args.scene.p_alter, "free-placement mode");
  synth->add_option("--jitter", synth_args.scene.photometric_jitter, "T2 photometric jitter");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("--manifest", train_args.manifest, "training manifest")->required();
  train_cmd->add_option("--val-manifest", train_args.val_manifest, "validation manifest");
  train_cmd->add_option("--out", train_args.out, "run directory");
  train_cmd->add_option("--variant", train_args.cfg.variant, "model variant");
  train_cmd->add_option("--task", train_args.task, "detection|change");
  train_cmd->add_option("--iters", train_args.cfg.iterations, "schedule length T");
  train_cmd->add_option("--lr", train_args.cfg.base_lr, "initial learning rate");
  train_cmd->add_option("--power", train_args.cfg.poly_power, "poly schedule power");
  train_cmd->add_option("--seed", train_args.cfg.seed, "rng seed");
  train_cmd->add_option("--eval-interval", train_args.cfg.eval_interval, "evaluate every N iters");
  train_cmd->add_option("--loss", train_args.loss, "e.g. dice:1+focal:1, wce");
  train_cmd->add_option("--resume", train_args.cfg.resume_from, "checkpoint to resume");
  train_cmd->add_option("--stop-at-f1", train_args.cfg.stop_at_train_f1, "early-stop threshold");
  train_cmd->add_flag("--hflip", train_args.aug_hflip, "random horizontal flip");
  train_cmd->add_flag("--random-resize", train_args.aug_resize, "random resize 0.5-2.0");
  train_cmd->add_option("--crop", train_args.aug_crop, "random crop size");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint)->required();
  eval_cmd->add_option("--manifest", eval_args.manifest)->required();
  eval_cmd->add_option("--task", eval_args.task);
  eval_cmd->add_option("--out", eval_args.out);

  PredictArgs predict_args;
  auto* predict_cmd = app.add_subcommand("predict", "emit mask PNGs for a manifest");
  predict_cmd->add_option("--checkpoint", predict_args.checkpoint)->required();
  predict_cmd->add_option("--manifest", predict_args.manifest)->required();
  predict_cmd->add_option("--out", predict_args.out);

  ParamsArgs params_args;
  auto* params_cmd = app.add_subcommand("params", "parameter-count audit vs the published table");
  params_cmd->add_option("--variant", params_args.variant);
  params_cmd->add_flag("--all", params_args.all, "audit all six published variants");

  FlopsArgs flops_args;
  auto* flops_cmd = app.add_subcommand("flops", "forward MAC audit");
  flops_cmd->add_option("--variant", flops_args.variant);
  flops_cmd->add_option("--size", flops_args.size, "input resolution");

  ErfArgs erf_args;
  auto* erf_cmd = app.add_subcommand("erf", "effective-receptive-field heatmaps");
  erf_cmd->add_option("--checkpoint", erf_args.checkpoint, "optional trained checkpoint");
  erf_cmd->add_option("--variant", erf_args.variant, "variant when no checkpoint given");
  erf_cmd->add_option("--target", erf_args.target, "stage1..stage4|logits|all");
  erf_cmd->add_option("--out", erf_args.out);
  erf_cmd->add_option("--seed", erf_args.seed);
  erf_cmd->add_option("--size", erf_args.size);

  PrepArgs prep_args;
  auto* prep_cmd = app.add_subcommand("prep-cdd", "binarize + denoise raw grayscale labels");
  prep_cmd->add_option("--in", prep_args.in, "label file or directory")->required();
  prep_cmd->add_option("--out", prep_args.out);
  prep_cmd->add_option("--threshold", prep_args.threshold);
  prep_cmd->add_option("--kernel", prep_args.kernel);
  prep_cmd->add_option("--erode", prep_args.erode);
  prep_cmd->add_option("--dilate", prep_args.dilate);

  TileArgs tile_args;
  auto* tile_cmd = app.add_subcommand("tile", "split a pair into tiles");
  tile_cmd->add_option("--t1", tile_args.t1)->required();
  tile_cmd->add_option("--t2", tile_args.t2)->required();
  tile_cmd->add_option("--label", tile_args.label)->required();
  tile_cmd->add_option("--size", tile_args.size);
  tile_cmd->add_option("--overlap", tile_args.overlap);
  tile_cmd->add_flag("--pad", tile_args.pad);
  tile_cmd->add_option("--out", tile_args.out);

  AblateArgs ablate_args;
  auto* ablate_cmd = app.add_subcommand("ablate", "mono vs bi-temporal comparison at synthetic scale");
  ablate_cmd->add_option("--manifest", ablate_args.manifest, "detection manifest (omit for synthetic)");
  ablate_cmd->add_option("--pairs", ablate_args.pairs);
  ablate_cmd->add_option("--seed", ablate_args.seed);
  ablate_cmd->add_option("--iters", ablate_args.iters);
  ablate_cmd->add_option("--size", ablate_args.size);
  ablate_cmd->add_option("--out", ablate_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;  // usage errors exit 1; --help/--version exit 0
  }

  RunManifest manifest;
  manifest.config_text = app.config_to_str(true, false);
  try {
    int rc = 0;
    if (synth->parsed()) {
      manifest.command = "synth";
      manifest.out_dir = synth_args.out;
      manifest.seed = synth_args.seed;
      rc = cmd_synth(synth_args, manifest);
    } else if (train_cmd->parsed()) {
      manifest.command = "train";
      manifest.out_dir = train_args.out;
      manifest.seed = train_args.cfg.seed;
      rc = cmd_train(train_args, manifest);
    } else if (eval_cmd->parsed()) {
      manifest.command = "eval";
      manifest.out_dir = eval_args.out;
      rc = cmd_eval(eval_args, manifest);
    } else if (predict_cmd->parsed()) {
      manifest.command = "predict";
      manifest.out_dir = predict_args.out;
      rc = cmd_predict(predict_args, manifest);
    } else if (params_cmd->parsed()) {
      manifest.command = "params";
      rc = cmd_params(params_args, manifest);
    } else if (flops_cmd->parsed()) {
      manifest.command = "flops";
      rc = cmd_flops(flops_args, manifest);
    } else if (erf_cmd->parsed()) {
      manifest.command = "erf";
      manifest.out_dir = erf_args.out;
      manifest.seed = erf_args.seed;
      rc = cmd_erf(erf_args, manifest);
    } else if (prep_cmd->parsed()) {
      manifest.command = "prep-cdd";
      manifest.out_dir = prep_args.out;
      rc = cmd_prep_cdd(prep_args, manifest);
    } else if (tile_cmd->parsed()) {
      manifest.command = "tile";
      manifest.out_dir = tile_args.out;
      rc = cmd_tile(tile_args, manifest);
    } else if (ablate_cmd->parsed()) {
      manifest.command = "ablate";
      manifest.out_dir = ablate_args.out;
      manifest.seed = ablate_args.seed;
      rc = cmd_ablate(ablate_args, manifest);
    }
    manifest.status = rc == 0 ? "ok" : "failed";
    manifest.write();
    return rc;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    manifest.status = std::string("error: ") + e.what();
    manifest.write();
    return exit_code_for(e);
  }
}
