#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "siamix/tensor.hpp"

namespace siamix {

// 8-bit image as stored on disk, HWC row-major, 1 (gray) or 3 (RGB) channels
struct ImageU8 {
  int64_t width = 0, height = 0, channels = 0;
  std::vector<uint8_t> pixels;

  uint8_t at(int64_t y, int64_t x, int64_t c) const {
    return pixels[static_cast<size_t>((y * width + x) * channels + c)];
  }
};

// working image, float in [0,1], CHW row-major
struct Image {
  int64_t width = 0, height = 0, channels = 0;
  std::vector<float> pixels;

  float at(int64_t c, int64_t y, int64_t x) const {
    return pixels[static_cast<size_t>((c * height + y) * width + x)];
  }
  float& at(int64_t c, int64_t y, int64_t x) {
    return pixels[static_cast<size_t>((c * height + y) * width + x)];
  }
  static Image zeros(int64_t channels, int64_t height, int64_t width) {
    Image im;
    im.width = width;
    im.height = height;
    im.channels = channels;
    im.pixels.assign(static_cast<size_t>(channels * height * width), 0.0f);
    return im;
  }
};

ImageU8 read_png(const std::string& path);
void write_png(const std::string& path, const ImageU8& image);

Image to_float(const ImageU8& u8);   // /255, HWC -> CHW
ImageU8 to_u8(const Image& image);   // clamp to [0,1], *255, CHW -> HWC

// label mask [H,W] -> grayscale u8, class index scaled to the 0..255 range
ImageU8 label_to_u8(const LabelMap& label, int num_classes);

// [H,W] float heatmap in [0,1] -> 8-bit grayscale
ImageU8 heatmap_to_u8(const Tensor<float>& heatmap);

TensorF image_to_tensor(const Image& image);  // [1,C,H,W]

}  // namespace siamix
