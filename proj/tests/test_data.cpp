#include <filesystem>

#include "siamix/data.hpp"
#include "test_helpers.hpp"

using namespace siamix;
namespace fs = std::filesystem;

namespace {

std::string temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("siamix_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

LabelMap random_mask(int64_t h, int64_t w, double density, Rng& rng) {
  LabelMap m = LabelMap::zeros({h, w});
  for (auto& v : m.values) v = rng.bernoulli(density) ? 1 : 0;
  return m;
}

// independent morphology oracle: plain min/max over the window
LabelMap morph_oracle(const LabelMap& mask, int kernel, bool erode) {
  const int64_t H = mask.shape[0], W = mask.shape[1];
  const int r = kernel / 2;
  LabelMap out = LabelMap::zeros({H, W});
  for (int64_t y = 0; y < H; ++y)
    for (int64_t x = 0; x < W; ++x) {
      int32_t acc = erode ? 1 : 0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx) {
          const int64_t yy = y + dy, xx = x + dx;
          const int32_t v = (yy >= 0 && yy < H && xx >= 0 && xx < W)
                                ? mask.values[static_cast<size_t>(yy * W + xx)]
                                : 0;
          acc = erode ? std::min(acc, v) : std::max(acc, v);
        }
      out.values[static_cast<size_t>(y * W + x)] = acc;
    }
  return out;
}

SamplePair synth_sample(uint64_t seed, int64_t size = 32) {
  Rng rng(seed);
  SceneSpec spec;
  spec.width = size;
  spec.height = size;
  const SynthScene sc = synth_scene(rng, spec);
  SamplePair s;
  s.t1 = sc.t1;
  s.t2 = sc.t2;
  s.label = sc.detection_label;
  s.task = Task::detection;
  return s;
}

int64_t label_sum(const LabelMap& m) {
  int64_t s = 0;
  for (int32_t v : m.values) s += v;
  return s;
}

}  // namespace

TEST_SUITE("data.binarize") {
  TEST_CASE("threshold-0 rule: any positive value is class 1") {
    ImageU8 gray;
    gray.width = 3;
    gray.height = 1;
    gray.channels = 1;
    gray.pixels = {0, 5, 255};
    const LabelMap m = binarize_label(gray, 0);
    CHECK(m.values == std::vector<int32_t>{0, 1, 1});
  }

  TEST_CASE("all-zero map stays all zero") {
    ImageU8 gray;
    gray.width = 4;
    gray.height = 4;
    gray.channels = 1;
    gray.pixels.assign(16, 0);
    CHECK(label_sum(binarize_label(gray, 0)) == 0);
  }

  TEST_CASE("strict inequality at the threshold") {
    ImageU8 gray;
    gray.width = 2;
    gray.height = 1;
    gray.channels = 1;
    gray.pixels = {127, 128};
    const LabelMap m = binarize_label(gray, 127);
    CHECK(m.values == std::vector<int32_t>{0, 1});
  }

  TEST_CASE("idempotent on its own output at threshold 0") {
    Rng rng(1);
    ImageU8 gray;
    gray.width = 8;
    gray.height = 8;
    gray.channels = 1;
    gray.pixels.resize(64);
    for (auto& v : gray.pixels) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
    const LabelMap once = binarize_label(gray, 0);
    ImageU8 again;
    again.width = 8;
    again.height = 8;
    again.channels = 1;
    again.pixels.resize(64);
    for (size_t i = 0; i < 64; ++i) again.pixels[i] = static_cast<uint8_t>(once.values[i]);
    CHECK(binarize_label(again, 0).values == once.values);
  }
}

TEST_SUITE("data.morphology") {
  TEST_CASE("isolated pixel is removed by opening") {
    LabelMap m = LabelMap::zeros({9, 9});
    m.values[static_cast<size_t>(4 * 9 + 4)] = 1;
    const LabelMap opened = morph_denoise(m, 3, 1, 1);
    CHECK(label_sum(opened) == 0);
  }

  TEST_CASE("solid block survives opening with area >= 64") {
    LabelMap m = LabelMap::zeros({16, 16});
    for (int64_t y = 3; y < 13; ++y)
      for (int64_t x = 3; x < 13; ++x) m.values[static_cast<size_t>(y * 16 + x)] = 1;
    const LabelMap opened = morph_denoise(m, 3, 1, 1);
    CHECK(label_sum(opened) >= 64);
  }

  TEST_CASE("all-zero mask unchanged; parameter validation") {
    LabelMap m = LabelMap::zeros({8, 8});
    CHECK(label_sum(morph_denoise(m, 3, 1, 1)) == 0);
    CHECK_THROWS_AS(morph_denoise(m, 4, 1, 1), ContractError);
    CHECK_THROWS_AS(morph_denoise(m, 1, 1, 1), ContractError);
  }

  TEST_CASE("equals the brute-force min/max oracle on 50 random 32x32 masks") {
    Rng rng(2);
    for (int trial = 0; trial < 50; ++trial) {
      const LabelMap m = random_mask(32, 32, 0.4, rng);
      const LabelMap got = morph_denoise(m, 3, 1, 1);
      const LabelMap want = morph_oracle(morph_oracle(m, 3, true), 3, false);
      CHECK(got.values == want.values);
    }
  }
}

TEST_SUITE("data.tile") {
  TEST_CASE("512 -> 4 tiles and 1024 -> 16 tiles at size 256, overlap 0") {
    SamplePair big = synth_sample(3, 512);
    CHECK(tile(big, 256, 0).size() == 4);
    SamplePair bigger = synth_sample(4, 1024);
    CHECK(tile(bigger, 256, 0).size() == 16);
  }

  TEST_CASE("indivisible size without pad is a data error; pad flag allows it") {
    SamplePair s = synth_sample(5, 48);
    CHECK_THROWS_AS(tile(s, 32, 0), DataError);
    const auto padded = tile(s, 32, 0, true);
    CHECK(padded.size() == 4);
    CHECK_THROWS_AS(tile(s, 64, 0), DataError);  // tile larger than image
  }

  TEST_CASE("tiling at overlap 0 is a partition: reassembly is bitwise") {
    SamplePair s = synth_sample(6, 64);
    const auto tiles = tile(s, 32, 0);
    REQUIRE(tiles.size() == 4);
    Image re = Image::zeros(3, 64, 64);
    LabelMap rl = LabelMap::zeros({64, 64});
    for (const auto& t : tiles) {
      for (int64_t c = 0; c < 3; ++c)
        for (int64_t y = 0; y < 32; ++y)
          for (int64_t x = 0; x < 32; ++x)
            re.at(c, t.tile_y + y, t.tile_x + x) = t.t1.at(c, y, x);
      for (int64_t y = 0; y < 32; ++y)
        for (int64_t x = 0; x < 32; ++x)
          rl.values[static_cast<size_t>((t.tile_y + y) * 64 + t.tile_x + x)] =
              t.label.values[static_cast<size_t>(y * 32 + x)];
    }
    CHECK(re.pixels == s.t1.pixels);
    CHECK(rl.values == s.label.values);
  }
}

TEST_SUITE("data.augment") {
  TEST_CASE("hflip is an involution, bitwise, including the label") {
    SamplePair s = synth_sample(7);
    const SamplePair back = hflip_pair(hflip_pair(s));
    CHECK(back.t1.pixels == s.t1.pixels);
    CHECK(back.t2.pixels == s.t2.pixels);
    CHECK(back.label.values == s.label.values);
  }

  TEST_CASE("flip preserves the building pixel count exactly") {
    SamplePair s = synth_sample(8);
    CHECK(label_sum(hflip_pair(s).label) == label_sum(s.label));
  }

  TEST_CASE("resize ratios stay within [0.5, 2.0] over 1000 draws") {
    Rng rng(9);
    double lo = 10, hi = -10;
    for (int i = 0; i < 1000; ++i) {
      const double r = rng.uniform(0.5, 2.0);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      CHECK(r >= 0.5);
      CHECK(r <= 2.0);
    }
    CHECK(lo < 0.7);
    CHECK(hi > 1.7);
  }

  TEST_CASE("augment pipeline: resize keeps labels integral, crop pads when allowed") {
    SamplePair s = synth_sample(10, 48);
    AugmentPolicy policy;
    policy.random_resize = true;
    policy.hflip = true;
    policy.crop = 32;
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
      const SamplePair out = augment(s, rng, policy);
      CHECK(out.t1.height == 32);
      CHECK(out.t1.width == 32);
      CHECK(out.label.shape == Shape{32, 32});
      for (int32_t v : out.label.values) CHECK((v == 0 || v == 1));
    }

    AugmentPolicy no_pad = policy;
    no_pad.random_resize = false;
    no_pad.pad_to_crop = false;
    no_pad.crop = 128;
    CHECK_THROWS_AS(augment(s, rng, no_pad), DataError);
  }

  TEST_CASE("resized label loses pixels only through resampling") {
    SamplePair s = synth_sample(12, 32);
    const SamplePair doubled = resize_pair(s, 2.0);
    CHECK(doubled.t1.height == 64);
    // nearest-neighbor at exact 2x replicates each label pixel 4 times
    CHECK(label_sum(doubled.label) == 4 * label_sum(s.label));
  }
}

TEST_SUITE("data.synth") {
  TEST_CASE("same seed gives bitwise-identical scenes") {
    SceneSpec spec;
    Rng a(42), b(42);
    const SynthScene s1 = synth_scene(a, spec);
    const SynthScene s2 = synth_scene(b, spec);
    CHECK(s1.t1.pixels == s2.t1.pixels);
    CHECK(s1.t2.pixels == s2.t2.pixels);
    CHECK(s1.change_label.values == s2.change_label.values);
  }

  TEST_CASE("zero change probabilities give an empty change label") {
    SceneSpec spec;
    spec.p_remove = 0;
    spec.p_add = 0;
    spec.p_alter = 0;
    Rng rng(13);
    const SynthScene sc = synth_scene(rng, spec);
    CHECK(label_sum(sc.change_label) == 0);
  }

  TEST_CASE("change label equals XOR of the footprint masks, pixel-exact") {
    Rng rng(14);
    SceneSpec spec;
    for (int trial = 0; trial < 5; ++trial) {
      const SynthScene sc = synth_scene(rng, spec);
      for (size_t i = 0; i < sc.change_label.values.size(); ++i) {
        const int32_t want = sc.t1_mask.values[i] != sc.t2_mask.values[i] ? 1 : 0;
        CHECK(sc.change_label.values[i] == want);
      }
    }
  }

  TEST_CASE("detection label is the T1 footprint and scenes have buildings") {
    Rng rng(15);
    SceneSpec spec;
    const SynthScene sc = synth_scene(rng, spec);
    CHECK(sc.detection_label.values == sc.t1_mask.values);
    CHECK(label_sum(sc.detection_label) > 0);
  }
}

TEST_SUITE("data.io") {
  TEST_CASE("png round trip preserves pixels") {
    const std::string dir = temp_dir("png");
    Rng rng(16);
    ImageU8 im;
    im.width = 20;
    im.height = 10;
    im.channels = 3;
    im.pixels.resize(600);
    for (auto& v : im.pixels) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
    write_png(dir + "/x.png", im);
    const ImageU8 back = read_png(dir + "/x.png");
    CHECK(back.width == 20);
    CHECK(back.height == 10);
    CHECK(back.channels == 3);
    CHECK(back.pixels == im.pixels);
  }

  TEST_CASE("load_pair validates existence and sizes") {
    const std::string dir = temp_dir("pairs");
    SamplePair s = synth_sample(17, 32);
    write_png(dir + "/t1.png", to_u8(s.t1));
    write_png(dir + "/t2.png", to_u8(s.t2));
    write_png(dir + "/label.png", label_to_u8(s.label, 2));
    const SamplePair loaded = load_pair(dir + "/t1.png", dir + "/t2.png", dir + "/label.png", Task::detection);
    CHECK(loaded.t1.width == 32);
    CHECK(loaded.label.values == s.label.values);  // {0,255} binarized back to {0,1}

    CHECK_THROWS_AS(load_pair(dir + "/missing.png", dir + "/t2.png", dir + "/label.png", Task::detection),
                    DataError);
    SamplePair small = synth_sample(18, 64);
    write_png(dir + "/t2_big.png", to_u8(small.t2));
    CHECK_THROWS_AS(load_pair(dir + "/t1.png", dir + "/t2_big.png", dir + "/label.png", Task::detection),
                    DataError);
  }

  TEST_CASE("manifest round trip and dataset materialization") {
    const std::string dir = temp_dir("synth_ds");
    SceneSpec spec;
    spec.width = 32;
    spec.height = 32;
    const SynthManifests m = materialize_synth_dataset(dir, "train", 3, 99, spec);
    const auto det = read_manifest(m.detection);
    CHECK(det.size() == 3);
    const auto ds = load_dataset(m.detection, Task::detection);
    CHECK(ds.size() == 3);
    CHECK(ds[0].t1.height == 32);

    // determinism through the filesystem
    const std::string dir2 = temp_dir("synth_ds2");
    const SynthManifests m2 = materialize_synth_dataset(dir2, "train", 3, 99, spec);
    const auto ds2 = load_dataset(m2.detection, Task::detection);
    CHECK(ds2[0].t1.pixels == ds[0].t1.pixels);
    CHECK(ds2[2].label.values == ds[2].label.values);
  }
}
