#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "siamix/data.hpp"
#include "siamix/metrics.hpp"

using namespace siamix;
namespace fs = std::filesystem;

namespace {

const std::string kCli = SIAMIX_CLI_PATH;

std::string work_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("siamix_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p.string();
}

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("usage errors exit 1; help exits 0") {
    CHECK(run("definitely-not-a-command") == 1);
    CHECK(run("train") == 1);  // missing required --manifest
    CHECK(run("--help") == 0);
    CHECK(run("params --variant no-such-variant") == 1);
  }

  TEST_CASE("synth then a short train run writes manifest, logs and checkpoint") {
    const std::string dir = work_dir("train");
    REQUIRE(run("synth --out " + dir + "/data --pairs 2 --seed 7 --size 32") == 0);
    CHECK(fs::exists(dir + "/data/train_detection.txt"));
    CHECK(fs::exists(dir + "/data/run_manifest.txt"));

    REQUIRE(run("train --manifest " + dir + "/data/train_detection.txt --variant nano "
                "--task detection --iters 3 --eval-interval 3 --out " + dir + "/run") == 0);
    CHECK(fs::exists(dir + "/run/checkpoint.bin"));
    CHECK(fs::exists(dir + "/run/train_log.csv"));
    CHECK(fs::exists(dir + "/run/metrics_log.csv"));
    const std::string manifest = slurp(dir + "/run/run_manifest.txt");
    CHECK(manifest.find("command: train") != std::string::npos);
    CHECK(manifest.find("status: ok") != std::string::npos);

    SUBCASE("eval recomputes to the printed CSV") {
      REQUIRE(run("eval --checkpoint " + dir + "/run/checkpoint.bin --manifest " +
                  dir + "/data/train_detection.txt --out " + dir + "/eval") == 0);
      const MetricsReport rep = parse_metrics_csv(slurp(dir + "/eval/metrics.csv"));
      CHECK(rep.per_class.size() == 2);
      CHECK(rep.per_class[0].counts.total() + 0 > 0);
    }

    SUBCASE("predict emits one full-size mask per pair") {
      REQUIRE(run("predict --checkpoint " + dir + "/run/checkpoint.bin --manifest " +
                  dir + "/data/train_detection.txt --out " + dir + "/pred") == 0);
      CHECK(fs::exists(dir + "/pred/mask_0000.png"));
      CHECK(fs::exists(dir + "/pred/mask_0001.png"));
      const ImageU8 mask = read_png(dir + "/pred/mask_0000.png");
      CHECK(mask.width == 32);
      CHECK(mask.height == 32);
      CHECK(mask.channels == 1);
    }
  }

  TEST_CASE("params audit prints PASS for the smallest variant") {
    const std::string dir = work_dir("params");
    const std::string out = dir + "/params.txt";
    const int rc = std::system((kCli + " params --variant siamix-0 > " + out + " 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("10.04") != std::string::npos);
  }

  TEST_CASE("flops audit prints the split accounting") {
    const std::string dir = work_dir("flops");
    const std::string out = dir + "/flops.txt";
    const int rc = std::system((kCli + " flops --variant siamix-0 --size 256 > " + out + " 2>&1").c_str());
    CHECK(WEXITSTATUS(rc) == 0);
    const std::string text = slurp(out);
    CHECK(text.find("PASS") != std::string::npos);
    CHECK(text.find("attention") != std::string::npos);
  }

  TEST_CASE("tile splits a 64x64 pair into four 32x32 tiles") {
    const std::string dir = work_dir("tile");
    // make a 64x64 pair on disk
    Rng rng(3);
    SceneSpec spec;
    spec.width = 64;
    spec.height = 64;
    const SynthScene sc = synth_scene(rng, spec);
    write_png(dir + "/t1.png", to_u8(sc.t1));
    write_png(dir + "/t2.png", to_u8(sc.t2));
    write_png(dir + "/label.png", label_to_u8(sc.detection_label, 2));

    REQUIRE(run("tile --t1 " + dir + "/t1.png --t2 " + dir + "/t2.png --label " + dir +
                "/label.png --size 32 --out " + dir + "/tiles") == 0);
    const auto entries = read_manifest(dir + "/tiles/tiles.txt");
    CHECK(entries.size() == 4);
    const ImageU8 t = read_png(entries[0].t1);
    CHECK(t.width == 32);

    // indivisible size without --pad is a data error (exit 2), and the run
    // manifest is still written with the failure recorded
    CHECK(run("tile --t1 " + dir + "/t1.png --t2 " + dir + "/t2.png --label " + dir +
              "/label.png --size 48 --out " + dir + "/tiles2") == 2);
    const std::string failed_manifest = slurp(dir + "/tiles2/run_manifest.txt");
    CHECK(failed_manifest.find("status: error") != std::string::npos);
  }

  TEST_CASE("prep-cdd binarizes and denoises a raw label") {
    const std::string dir = work_dir("prep");
    ImageU8 raw;
    raw.width = 16;
    raw.height = 16;
    raw.channels = 1;
    raw.pixels.assign(256, 0);
    raw.pixels[5 * 16 + 5] = 3;  // isolated speck, should vanish
    for (int64_t y = 8; y < 14; ++y)
      for (int64_t x = 8; x < 14; ++x) raw.pixels[static_cast<size_t>(y * 16 + x)] = 200;
    write_png(dir + "/label.png", raw);

    REQUIRE(run("prep-cdd --in " + dir + "/label.png --out " + dir + "/clean") == 0);
    const ImageU8 cleaned = read_png(dir + "/clean/label.png");
    CHECK(cleaned.pixels[5 * 16 + 5] == 0);       // speck removed
    CHECK(cleaned.pixels[10 * 16 + 10] == 255);   // block survives
    CHECK(run("prep-cdd --in " + dir + "/nothing --out " + dir + "/x") == 2);
  }

  TEST_CASE("erf writes grayscale heatmaps for all targets") {
    const std::string dir = work_dir("erf");
    REQUIRE(run("erf --variant nano --size 32 --out " + dir + "/erf --target stage4") == 0);
    CHECK(fs::exists(dir + "/erf/erf_stage4.png"));
    CHECK(fs::exists(dir + "/erf/erf_conv_baseline.png"));
    const ImageU8 heat = read_png(dir + "/erf/erf_stage4.png");
    CHECK(heat.channels == 1);
    CHECK(heat.width == 32);
  }

  TEST_CASE("ablate produces a comparison csv over the three fusion modes") {
    const std::string dir = work_dir("ablate");
    REQUIRE(run("ablate --pairs 2 --iters 2 --size 32 --seed 5 --out " + dir + "/ab") == 0);
    const std::string csv = slurp(dir + "/ab/ablate.csv");
    CHECK(csv.find("mono-baseline") != std::string::npos);
    CHECK(csv.find("concat-fusion-baseline") != std::string::npos);
    CHECK(csv.find("nano") != std::string::npos);
  }
}
