#pragma once

#include <string>
#include <vector>

#include "siamix/image.hpp"
#include "siamix/rng.hpp"
#include "siamix/types.hpp"

namespace siamix {

struct SamplePair {
  Image t1, t2;     // RGB, shared H x W
  LabelMap label;   // [H, W]
  Task task = Task::detection;
  std::string source_id;
  int64_t tile_x = 0, tile_y = 0;
};

// Reads an RGB pair plus a grayscale label; pixel values scaled to [0,1].
// With binarize set, label values > threshold become class 1 (the CDD rule).
SamplePair load_pair(const std::string& t1_path, const std::string& t2_path,
                     const std::string& label_path, Task task, bool binarize = true,
                     int threshold = 0, int num_classes = 2);

// mask[p] = 1 iff raw[p] > threshold (strict)
LabelMap binarize_label(const ImageU8& gray, int threshold = 0);

// opening: `erode_iters` erosions then `dilate_iters` dilations with a square
// element; out-of-border pixels count as background
LabelMap morph_denoise(const LabelMap& mask, int kernel, int erode_iters, int dilate_iters);

// Row-major tiles with stride = size - overlap. Without `pad`, the stack must
// tile exactly; with it, the bottom/right remainder is zero-padded.
std::vector<SamplePair> tile(const SamplePair& sample, int64_t size, int64_t overlap, bool pad = false);

struct AugmentPolicy {
  bool hflip = false;            // applied with probability 1/2
  bool random_resize = false;    // ratio drawn uniformly from [resize_lo, resize_hi]
  double resize_lo = 0.5;
  double resize_hi = 2.0;
  int64_t crop = 0;              // 0 disables; otherwise random crop to crop x crop
  bool pad_to_crop = true;       // pad when the (resized) image is smaller than crop

  bool any() const { return hflip || random_resize || crop > 0; }
};

// identical geometric transform on t1, t2 and label; label resampled nearest
SamplePair augment(const SamplePair& sample, Rng& rng, const AugmentPolicy& policy);

// deterministic pieces used by augment (and directly testable)
SamplePair hflip_pair(const SamplePair& sample);
SamplePair resize_pair(const SamplePair& sample, double ratio);
SamplePair crop_pair(const SamplePair& sample, int64_t y0, int64_t x0, int64_t size, bool pad);

// ---------------------------------------------------------------------------
// synthetic scenes: textured background plus axis-aligned rectangular
// "buildings"; T2 applies per-building add/remove/alter edits and a global
// photometric jitter. Stands in for the real datasets at desk scale.
// ---------------------------------------------------------------------------

struct SceneSpec {
  int64_t width = 64, height = 64;
  int min_buildings = 2, max_buildings = 3;  // free-placement mode only
  int min_size = 20, max_size = 28;
  // snap rectangle corners/sizes to this grid; 0 disables. 4 aligns building
  // edges with the decoder's H/4 logit grid so boundary-exact masks exist.
  int grid_snap = 4;
  double p_remove = 0.5;
  double p_add = 0.5;
  double p_alter = 0.1;  // free-placement mode only
  double photometric_jitter = 0.02;
  // when > 0, buildings sit on an n x n grid of block sites (one building at
  // most per site, jittered within it); placement is then free of overlap and
  // change regions are whole blocks. 0 switches to fully random placement.
  int site_grid = 2;
  double p_site_occupied = 0.65;  // site has a building in T1 (site mode only)
  // fraction of scenes where nothing changes (T2 footprints == T1, photometric
  // jitter still applied); teaches change models the no-change case. Dataset
  // builders stratify this exactly over the pair index.
  double p_scene_unchanged = 0.25;
  // force the unchanged/changed outcome for a single scene (-1 = draw/stratify)
  int force_unchanged = -1;

  void validate() const;
  // exact stratification: pair i of a dataset is an unchanged scene iff
  // floor((i+1)*p) > floor(i*p)
  bool stratified_unchanged(int64_t index) const;
};

struct SynthScene {
  Image t1, t2;
  LabelMap detection_label;  // T1 building footprints
  LabelMap change_label;     // symmetric difference of footprints
  LabelMap t1_mask, t2_mask; // generator-internal footprint masks
};

SynthScene synth_scene(Rng& rng, const SceneSpec& spec);

// scene `index` of a dataset: rng derived from (seed, index), unchanged flag
// stratified exactly by spec.p_scene_unchanged
SynthScene synth_scene_at(uint64_t seed, int64_t index, const SceneSpec& spec);

// in-memory counterpart of materialize_synth_dataset
std::vector<SamplePair> synth_dataset(uint64_t seed, int pairs, Task task, const SceneSpec& spec);

// ---------------------------------------------------------------------------
// manifests: line-delimited "t1_path<TAB>t2_path<TAB>label_path"
// ---------------------------------------------------------------------------

struct ManifestEntry {
  std::string t1, t2, label;
};

std::vector<ManifestEntry> read_manifest(const std::string& path);
void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries);

// Writes `pairs` synthetic scenes as PNGs under out_dir (t1/, t2/,
// labels_detection/, labels_change/) plus one manifest per task named
// <split>_detection.txt and <split>_change.txt. Deterministic in (seed, spec).
struct SynthManifests {
  std::string detection;
  std::string change;
};
SynthManifests materialize_synth_dataset(const std::string& out_dir, const std::string& split,
                                         int pairs, uint64_t seed, const SceneSpec& spec);
std::vector<SamplePair> load_dataset(const std::string& manifest_path, Task task,
                                     bool binarize = true, int threshold = 0, int num_classes = 2);

// batch-1 views for the model: [1,3,H,W] inputs and a [1,H,W] label map
TensorF sample_t1_tensor(const SamplePair& sample);
TensorF sample_t2_tensor(const SamplePair& sample);
LabelMap sample_label_batch(const SamplePair& sample);

}  // namespace siamix
