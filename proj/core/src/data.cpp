#include "siamix/data.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "siamix/ops.hpp"

namespace siamix {

namespace {

Image gray_to_rgb(const Image& im) {
  if (im.channels == 3) return im;
  Image out = Image::zeros(3, im.height, im.width);
  for (int64_t c = 0; c < 3; ++c)
    for (int64_t y = 0; y < im.height; ++y)
      for (int64_t x = 0; x < im.width; ++x) out.at(c, y, x) = im.at(0, y, x);
  return out;
}

}  // namespace

SamplePair load_pair(const std::string& t1_path, const std::string& t2_path,
                     const std::string& label_path, Task task, bool binarize,
                     int threshold, int num_classes) {
  const ImageU8 u1 = read_png(t1_path);
  const ImageU8 u2 = read_png(t2_path);
  const ImageU8 ul = read_png(label_path);
  if (u1.width != u2.width || u1.height != u2.height)
    throw DataError("size mismatch: " + t1_path + " is " + std::to_string(u1.width) + "x" +
                    std::to_string(u1.height) + " but " + t2_path + " is " + std::to_string(u2.width) +
                    "x" + std::to_string(u2.height));
  if (ul.width != u1.width || ul.height != u1.height)
    throw DataError("size mismatch: label " + label_path + " is " + std::to_string(ul.width) + "x" +
                    std::to_string(ul.height) + " but images are " + std::to_string(u1.width) + "x" +
                    std::to_string(u1.height));

  SamplePair s;
  s.task = task;
  s.source_id = t1_path;
  s.t1 = gray_to_rgb(to_float(u1));
  s.t2 = gray_to_rgb(to_float(u2));
  if (binarize) {
    s.label = binarize_label(ul, threshold);
  } else {
    s.label = LabelMap::zeros({ul.height, ul.width});
    for (int64_t y = 0; y < ul.height; ++y)
      for (int64_t x = 0; x < ul.width; ++x) {
        const int32_t v = ul.at(y, x, 0);
        if (v >= num_classes)
          throw DataError("label value " + std::to_string(v) + " out of range in " + label_path);
        s.label.values[static_cast<size_t>(y * ul.width + x)] = v;
      }
  }
  return s;
}

LabelMap binarize_label(const ImageU8& gray, int threshold) {
  LabelMap m = LabelMap::zeros({gray.height, gray.width});
  for (int64_t y = 0; y < gray.height; ++y)
    for (int64_t x = 0; x < gray.width; ++x)
      m.values[static_cast<size_t>(y * gray.width + x)] = gray.at(y, x, 0) > threshold ? 1 : 0;
  return m;
}

namespace {

LabelMap morph_pass(const LabelMap& mask, int kernel, bool erode) {
  const int64_t H = mask.shape[0], W = mask.shape[1];
  const int r = kernel / 2;
  LabelMap out = LabelMap::zeros({H, W});
  for (int64_t y = 0; y < H; ++y) {
    for (int64_t x = 0; x < W; ++x) {
      bool value = erode;  // erosion: all must be 1; dilation: any is 1
      for (int dy = -r; dy <= r && (erode ? value : !value); ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
          const int64_t yy = y + dy, xx = x + dx;
          const bool v = yy >= 0 && yy < H && xx >= 0 && xx < W &&
                         mask.values[static_cast<size_t>(yy * W + xx)] != 0;
          if (erode && !v) {
            value = false;
            break;
          }
          if (!erode && v) {
            value = true;
            break;
          }
        }
      }
      out.values[static_cast<size_t>(y * W + x)] = value ? 1 : 0;
    }
  }
  return out;
}

}  // namespace

LabelMap morph_denoise(const LabelMap& mask, int kernel, int erode_iters, int dilate_iters) {
  if (mask.shape.size() != 2) throw ShapeError("morph_denoise expects [H,W], got " + shape_str(mask.shape));
  if (kernel < 3 || kernel % 2 == 0) throw ContractError("morph_denoise: kernel must be odd and >= 3");
  LabelMap m = mask;
  for (int i = 0; i < erode_iters; ++i) m = morph_pass(m, kernel, true);
  for (int i = 0; i < dilate_iters; ++i) m = morph_pass(m, kernel, false);
  return m;
}

std::vector<SamplePair> tile(const SamplePair& sample, int64_t size, int64_t overlap, bool pad) {
  const int64_t H = sample.t1.height, W = sample.t1.width;
  if (size < 1 || overlap < 0 || overlap >= size) throw ContractError("tile: need 0 <= overlap < size");
  if (size > H || size > W)
    throw DataError("tile: size " + std::to_string(size) + " exceeds image " + std::to_string(W) + "x" +
                    std::to_string(H));
  const int64_t stride = size - overlap;
  auto exact = [&](int64_t extent) { return (extent - size) % stride == 0; };
  if (!pad && (!exact(H) || !exact(W)))
    throw DataError("tile: " + std::to_string(W) + "x" + std::to_string(H) + " does not tile exactly with size " +
                    std::to_string(size) + ", overlap " + std::to_string(overlap) + " (pass pad to allow)");
  const int64_t ny = (H - size + stride - 1) / stride + 1;
  const int64_t nx = (W - size + stride - 1) / stride + 1;

  std::vector<SamplePair> tiles;
  tiles.reserve(static_cast<size_t>(ny * nx));
  for (int64_t ty = 0; ty < ny; ++ty) {
    for (int64_t tx = 0; tx < nx; ++tx) {
      const int64_t y0 = ty * stride;
      const int64_t x0 = tx * stride;
      SamplePair t = crop_pair(sample, y0, x0, size, pad);
      t.tile_x = x0;
      t.tile_y = y0;
      t.source_id = sample.source_id;
      tiles.push_back(std::move(t));
    }
  }
  return tiles;
}

namespace {

Image resize_image(const Image& im, int64_t out_h, int64_t out_w) {
  TensorF t = TensorF::from_data({1, im.channels, im.height, im.width},
                                 std::vector<float>(im.pixels.begin(), im.pixels.end()));
  TensorF r = ops::bilinear_resize(t, out_h, out_w);
  Image out = Image::zeros(im.channels, out_h, out_w);
  auto rv = r.data();
  std::copy(rv.begin(), rv.end(), out.pixels.begin());
  return out;
}

LabelMap resize_label_nearest(const LabelMap& label, int64_t out_h, int64_t out_w) {
  const int64_t H = label.shape[0], W = label.shape[1];
  LabelMap out = LabelMap::zeros({out_h, out_w});
  for (int64_t y = 0; y < out_h; ++y) {
    const int64_t sy = std::min<int64_t>(
        static_cast<int64_t>((static_cast<double>(y) + 0.5) * static_cast<double>(H) / static_cast<double>(out_h)),
        H - 1);
    for (int64_t x = 0; x < out_w; ++x) {
      const int64_t sx = std::min<int64_t>(
          static_cast<int64_t>((static_cast<double>(x) + 0.5) * static_cast<double>(W) / static_cast<double>(out_w)),
          W - 1);
      out.values[static_cast<size_t>(y * out_w + x)] = label.values[static_cast<size_t>(sy * W + sx)];
    }
  }
  return out;
}

}  // namespace

SamplePair hflip_pair(const SamplePair& sample) {
  SamplePair out = sample;
  const int64_t H = sample.t1.height, W = sample.t1.width;
  for (int64_t c = 0; c < sample.t1.channels; ++c)
    for (int64_t y = 0; y < H; ++y)
      for (int64_t x = 0; x < W; ++x) {
        out.t1.at(c, y, x) = sample.t1.at(c, y, W - 1 - x);
        out.t2.at(c, y, x) = sample.t2.at(c, y, W - 1 - x);
      }
  for (int64_t y = 0; y < H; ++y)
    for (int64_t x = 0; x < W; ++x)
      out.label.values[static_cast<size_t>(y * W + x)] =
          sample.label.values[static_cast<size_t>(y * W + (W - 1 - x))];
  return out;
}

SamplePair resize_pair(const SamplePair& sample, double ratio) {
  if (ratio <= 0) throw ContractError("resize_pair: ratio must be positive");
  const int64_t out_h = std::max<int64_t>(1, static_cast<int64_t>(std::lround(sample.t1.height * ratio)));
  const int64_t out_w = std::max<int64_t>(1, static_cast<int64_t>(std::lround(sample.t1.width * ratio)));
  SamplePair out = sample;
  out.t1 = resize_image(sample.t1, out_h, out_w);
  out.t2 = resize_image(sample.t2, out_h, out_w);
  out.label = resize_label_nearest(sample.label, out_h, out_w);
  return out;
}

SamplePair crop_pair(const SamplePair& sample, int64_t y0, int64_t x0, int64_t size, bool pad) {
  const int64_t H = sample.t1.height, W = sample.t1.width;
  if (!pad && (y0 < 0 || x0 < 0 || y0 + size > H || x0 + size > W))
    throw DataError("crop_pair: window exceeds image and padding is disabled");
  SamplePair out = sample;
  out.t1 = Image::zeros(sample.t1.channels, size, size);
  out.t2 = Image::zeros(sample.t2.channels, size, size);
  out.label = LabelMap::zeros({size, size});
  for (int64_t y = 0; y < size; ++y) {
    const int64_t sy = y0 + y;
    if (sy < 0 || sy >= H) continue;
    for (int64_t x = 0; x < size; ++x) {
      const int64_t sx = x0 + x;
      if (sx < 0 || sx >= W) continue;
      for (int64_t c = 0; c < sample.t1.channels; ++c) {
        out.t1.at(c, y, x) = sample.t1.at(c, sy, sx);
        out.t2.at(c, y, x) = sample.t2.at(c, sy, sx);
      }
      out.label.values[static_cast<size_t>(y * size + x)] =
          sample.label.values[static_cast<size_t>(sy * W + sx)];
    }
  }
  return out;
}

SamplePair augment(const SamplePair& sample, Rng& rng, const AugmentPolicy& policy) {
  SamplePair s = sample;
  if (policy.random_resize) {
    const double ratio = rng.uniform(policy.resize_lo, policy.resize_hi);
    s = resize_pair(s, ratio);
  }
  if (policy.hflip && rng.bernoulli(0.5)) s = hflip_pair(s);
  if (policy.crop > 0) {
    const int64_t H = s.t1.height, W = s.t1.width;
    if ((H < policy.crop || W < policy.crop) && !policy.pad_to_crop)
      throw DataError("augment: image smaller than crop and pad_to_crop is disabled");
    const int64_t maxy = std::max<int64_t>(0, H - policy.crop);
    const int64_t maxx = std::max<int64_t>(0, W - policy.crop);
    const int64_t y0 = maxy > 0 ? rng.uniform_int(0, maxy) : 0;
    const int64_t x0 = maxx > 0 ? rng.uniform_int(0, maxx) : 0;
    s = crop_pair(s, y0, x0, policy.crop, true);
  }
  return s;
}

// ---------------------------------------------------------------------------
// synthetic scenes
// ---------------------------------------------------------------------------

void SceneSpec::validate() const {
  if (width < 16 || height < 16) throw ConfigError("scene: canvas too small");
  if (min_buildings < 0 || max_buildings < min_buildings) throw ConfigError("scene: bad building count range");
  if (min_size < 2 || max_size < min_size) throw ConfigError("scene: bad building size range");
  for (double p : {p_remove, p_add, p_alter, p_site_occupied, p_scene_unchanged}) {
    if (p < 0.0 || p > 1.0) throw ConfigError("scene: probabilities must be in [0,1]");
  }
  if (site_grid < 0 || (site_grid > 0 && (width % site_grid != 0 || height % site_grid != 0)))
    throw ConfigError("scene: site grid must divide the canvas");
}

bool SceneSpec::stratified_unchanged(int64_t index) const {
  const double lo = std::floor(static_cast<double>(index) * p_scene_unchanged);
  const double hi = std::floor(static_cast<double>(index + 1) * p_scene_unchanged);
  return hi > lo;
}

namespace {

struct Building {
  int64_t x0, y0, w, h;
  float color[3];
};

// consistent chroma signatures: "roof" tones for buildings, dark green-ish
// ground. Chromatic contrast survives the encoder's per-token normalization,
// where a pure brightness offset would not.
constexpr float kGroundBase[3] = {0.10f, 0.22f, 0.12f};
constexpr float kRoofBase[3] = {0.85f, 0.72f, 0.58f};

Image make_background(Rng& rng, int64_t height, int64_t width) {
  // coarse value noise: random grid, bilinear interpolation
  const int64_t step = 8;
  const int64_t gh = height / step + 2, gw = width / step + 2;
  std::vector<float> grid(static_cast<size_t>(3 * gh * gw));
  for (int64_t c = 0; c < 3; ++c)
    for (int64_t i = 0; i < gh * gw; ++i)
      grid[static_cast<size_t>(c * gh * gw + i)] =
          kGroundBase[c] + static_cast<float>(rng.uniform(-0.05, 0.08));
  Image bg = Image::zeros(3, height, width);
  for (int64_t c = 0; c < 3; ++c) {
    const float* g = grid.data() + c * gh * gw;
    for (int64_t y = 0; y < height; ++y) {
      const double fy = static_cast<double>(y) / step;
      const int64_t y0 = static_cast<int64_t>(fy);
      const double wy = fy - static_cast<double>(y0);
      for (int64_t x = 0; x < width; ++x) {
        const double fx = static_cast<double>(x) / step;
        const int64_t x0 = static_cast<int64_t>(fx);
        const double wx = fx - static_cast<double>(x0);
        const double v00 = g[y0 * gw + x0], v01 = g[y0 * gw + x0 + 1];
        const double v10 = g[(y0 + 1) * gw + x0], v11 = g[(y0 + 1) * gw + x0 + 1];
        const double top = v00 + (v01 - v00) * wx;
        const double bot = v10 + (v11 - v10) * wx;
        bg.at(c, y, x) = static_cast<float>(top + (bot - top) * wy);
      }
    }
  }
  return bg;
}

int64_t snapped(int64_t v, int snap) {
  if (snap <= 1) return v;
  return (v / snap) * snap;
}

Building random_building(Rng& rng, const SceneSpec& spec) {
  Building b;
  b.w = std::max<int64_t>(spec.grid_snap > 1 ? spec.grid_snap : 2,
                          snapped(rng.uniform_int(spec.min_size, spec.max_size), spec.grid_snap));
  b.h = std::max<int64_t>(spec.grid_snap > 1 ? spec.grid_snap : 2,
                          snapped(rng.uniform_int(spec.min_size, spec.max_size), spec.grid_snap));
  b.x0 = snapped(rng.uniform_int(0, std::max<int64_t>(0, spec.width - b.w)), spec.grid_snap);
  b.y0 = snapped(rng.uniform_int(0, std::max<int64_t>(0, spec.height - b.h)), spec.grid_snap);
  for (int c = 0; c < 3; ++c)
    b.color[c] = kRoofBase[c] + static_cast<float>(rng.uniform(-0.07, 0.07));
  return b;
}

void render_buildings(Image& im, const std::vector<Building>& buildings, Rng& rng) {
  for (const Building& b : buildings) {
    for (int64_t y = b.y0; y < std::min(b.y0 + b.h, im.height); ++y)
      for (int64_t x = b.x0; x < std::min(b.x0 + b.w, im.width); ++x) {
        const float n = static_cast<float>(rng.uniform(-0.015, 0.015));
        for (int64_t c = 0; c < 3; ++c)
          im.at(c, y, x) = std::clamp(b.color[c] + n, 0.0f, 1.0f);
      }
  }
}

LabelMap footprint_mask(const std::vector<Building>& buildings, int64_t height, int64_t width) {
  LabelMap m = LabelMap::zeros({height, width});
  for (const Building& b : buildings)
    for (int64_t y = b.y0; y < std::min(b.y0 + b.h, height); ++y)
      for (int64_t x = b.x0; x < std::min(b.x0 + b.w, width); ++x)
        m.values[static_cast<size_t>(y * width + x)] = 1;
  return m;
}

}  // namespace

namespace {

// free placement: 2..N buildings anywhere, T2 edited per building
void place_free(Rng& rng, const SceneSpec& spec, std::vector<Building>& list1,
                std::vector<Building>& list2) {
  const int64_t count = rng.uniform_int(spec.min_buildings, spec.max_buildings);
  for (int64_t i = 0; i < count; ++i) list1.push_back(random_building(rng, spec));

  for (const Building& b : list1) {
    if (rng.bernoulli(spec.p_remove)) continue;
    Building nb = b;
    if (rng.bernoulli(spec.p_alter)) {
      const int64_t snap = std::max(1, spec.grid_snap);
      nb.x0 = std::clamp<int64_t>(b.x0 + snap * rng.uniform_int(-2, 2), 0, spec.width - snap);
      nb.y0 = std::clamp<int64_t>(b.y0 + snap * rng.uniform_int(-2, 2), 0, spec.height - snap);
      nb.w = std::clamp<int64_t>(snapped(static_cast<int64_t>(std::lround(b.w * rng.uniform(0.7, 1.3))),
                                         spec.grid_snap),
                                 snap, spec.width - nb.x0);
      nb.h = std::clamp<int64_t>(snapped(static_cast<int64_t>(std::lround(b.h * rng.uniform(0.7, 1.3))),
                                         spec.grid_snap),
                                 snap, spec.height - nb.y0);
    }
    list2.push_back(nb);
  }
  for (int64_t i = 0; i < static_cast<int64_t>(list1.size()); ++i) {
    if (rng.bernoulli(spec.p_add)) list2.push_back(random_building(rng, spec));
  }
}

// block-site placement: at most one building per site of an n x n grid
void place_sites(Rng& rng, const SceneSpec& spec, std::vector<Building>& list1,
                 std::vector<Building>& list2) {
  const int n = spec.site_grid;
  const int64_t site_w = spec.width / n, site_h = spec.height / n;
  for (int sy = 0; sy < n; ++sy) {
    for (int sx = 0; sx < n; ++sx) {
      Building b;
      const int64_t margin = std::max<int64_t>(spec.grid_snap, 4);
      b.w = std::clamp<int64_t>(snapped(rng.uniform_int(spec.min_size, spec.max_size), spec.grid_snap),
                                margin, site_w - margin);
      b.h = std::clamp<int64_t>(snapped(rng.uniform_int(spec.min_size, spec.max_size), spec.grid_snap),
                                margin, site_h - margin);
      b.x0 = sx * site_w + snapped(rng.uniform_int(0, site_w - b.w), spec.grid_snap);
      b.y0 = sy * site_h + snapped(rng.uniform_int(0, site_h - b.h), spec.grid_snap);
      for (int c = 0; c < 3; ++c)
        b.color[c] = kRoofBase[c] + static_cast<float>(rng.uniform(-0.07, 0.07));

      const bool in_t1 = rng.bernoulli(spec.p_site_occupied);
      bool in_t2;
      if (in_t1) {
        in_t2 = !rng.bernoulli(spec.p_remove);
      } else {
        in_t2 = rng.bernoulli(spec.p_add);
      }
      if (in_t1) list1.push_back(b);
      if (in_t2) list2.push_back(b);
    }
  }
}

}  // namespace

SynthScene synth_scene(Rng& rng, const SceneSpec& spec) {
  spec.validate();
  SynthScene sc;
  const Image bg = make_background(rng, spec.height, spec.width);

  std::vector<Building> list1, list2;
  const bool scene_unchanged =
      spec.force_unchanged >= 0 ? spec.force_unchanged != 0 : rng.bernoulli(spec.p_scene_unchanged);
  if (spec.site_grid > 0) {
    place_sites(rng, spec, list1, list2);
  } else {
    place_free(rng, spec, list1, list2);
  }
  if (scene_unchanged) list2 = list1;

  sc.t1 = bg;
  render_buildings(sc.t1, list1, rng);
  sc.t2 = bg;
  render_buildings(sc.t2, list2, rng);

  // global photometric jitter plus light sensor noise on T2
  float shift[3];
  for (int c = 0; c < 3; ++c)
    shift[c] = static_cast<float>(rng.uniform(-spec.photometric_jitter, spec.photometric_jitter));
  for (int64_t c = 0; c < 3; ++c)
    for (int64_t y = 0; y < spec.height; ++y)
      for (int64_t x = 0; x < spec.width; ++x) {
        const float n = static_cast<float>(rng.uniform(-0.01, 0.01));
        sc.t2.at(c, y, x) = std::clamp(sc.t2.at(c, y, x) + shift[c] + n, 0.0f, 1.0f);
      }

  sc.t1_mask = footprint_mask(list1, spec.height, spec.width);
  sc.t2_mask = footprint_mask(list2, spec.height, spec.width);
  sc.detection_label = sc.t1_mask;
  sc.change_label = LabelMap::zeros({spec.height, spec.width});
  for (size_t i = 0; i < sc.change_label.values.size(); ++i)
    sc.change_label.values[i] = sc.t1_mask.values[i] != sc.t2_mask.values[i] ? 1 : 0;
  return sc;
}

SynthScene synth_scene_at(uint64_t seed, int64_t index, const SceneSpec& spec) {
  Rng rng = sample_rng(seed, static_cast<uint64_t>(index));
  SceneSpec scene_spec = spec;
  if (scene_spec.force_unchanged < 0)
    scene_spec.force_unchanged = spec.stratified_unchanged(index) ? 1 : 0;
  return synth_scene(rng, scene_spec);
}

std::vector<SamplePair> synth_dataset(uint64_t seed, int pairs, Task task, const SceneSpec& spec) {
  std::vector<SamplePair> out;
  out.reserve(static_cast<size_t>(pairs));
  for (int i = 0; i < pairs; ++i) {
    SynthScene sc = synth_scene_at(seed, i, spec);
    SamplePair s;
    s.t1 = std::move(sc.t1);
    s.t2 = std::move(sc.t2);
    s.label = task == Task::detection ? std::move(sc.detection_label) : std::move(sc.change_label);
    s.task = task;
    s.source_id = "synth:" + std::to_string(seed) + ":" + std::to_string(i);
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// manifests
// ---------------------------------------------------------------------------

std::vector<ManifestEntry> read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  std::vector<ManifestEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab1 = line.find('\t');
    const auto tab2 = line.find('\t', tab1 + 1);
    if (tab1 == std::string::npos || tab2 == std::string::npos)
      throw DataError("manifest row must be t1<TAB>t2<TAB>label: '" + line + "'");
    entries.push_back({line.substr(0, tab1), line.substr(tab1 + 1, tab2 - tab1 - 1), line.substr(tab2 + 1)});
  }
  return entries;
}

void write_manifest(const std::string& path, const std::vector<ManifestEntry>& entries) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write manifest: " + path);
  for (const auto& e : entries) out << e.t1 << '\t' << e.t2 << '\t' << e.label << '\n';
}

SynthManifests materialize_synth_dataset(const std::string& out_dir, const std::string& split,
                                         int pairs, uint64_t seed, const SceneSpec& spec) {
  namespace fs = std::filesystem;
  for (const char* sub : {"t1", "t2", "labels_detection", "labels_change"})
    fs::create_directories(fs::path(out_dir) / sub);

  std::vector<ManifestEntry> det, chg;
  for (int i = 0; i < pairs; ++i) {
    const SynthScene sc = synth_scene_at(seed, i, spec);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%04d.png", split.c_str(), i);
    const std::string t1 = (fs::path(out_dir) / "t1" / name).string();
    const std::string t2 = (fs::path(out_dir) / "t2" / name).string();
    const std::string ld = (fs::path(out_dir) / "labels_detection" / name).string();
    const std::string lc = (fs::path(out_dir) / "labels_change" / name).string();
    write_png(t1, to_u8(sc.t1));
    write_png(t2, to_u8(sc.t2));
    write_png(ld, label_to_u8(sc.detection_label, 2));
    write_png(lc, label_to_u8(sc.change_label, 2));
    det.push_back({t1, t2, ld});
    chg.push_back({t1, t2, lc});
  }
  SynthManifests m;
  m.detection = (fs::path(out_dir) / (split + "_detection.txt")).string();
  m.change = (fs::path(out_dir) / (split + "_change.txt")).string();
  write_manifest(m.detection, det);
  write_manifest(m.change, chg);
  return m;
}

std::vector<SamplePair> load_dataset(const std::string& manifest_path, Task task,
                                     bool binarize, int threshold, int num_classes) {
  std::vector<SamplePair> out;
  for (const auto& e : read_manifest(manifest_path))
    out.push_back(load_pair(e.t1, e.t2, e.label, task, binarize, threshold, num_classes));
  return out;
}

TensorF sample_t1_tensor(const SamplePair& sample) { return image_to_tensor(sample.t1); }
TensorF sample_t2_tensor(const SamplePair& sample) { return image_to_tensor(sample.t2); }

LabelMap sample_label_batch(const SamplePair& sample) {
  LabelMap m;
  m.shape = {1, sample.label.shape[0], sample.label.shape[1]};
  m.values = sample.label.values;
  return m;
}

}  // namespace siamix
