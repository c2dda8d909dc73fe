#include "siamix/image.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <memory>

namespace siamix {

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

}  // namespace

ImageU8 read_png(const std::string& path) {
  FilePtr fp(std::fopen(path.c_str(), "rb"));
  if (!fp) throw DataError("cannot open image file: " + path);

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("libpng init failed for " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw DataError("libpng info init failed for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw DataError("failed to decode PNG: " + path);
  }
  png_init_io(png, fp.get());
  png_read_info(png, info);

  const png_uint_32 w = png_get_image_width(png, info);
  const png_uint_32 h = png_get_image_height(png, info);
  const png_byte color = png_get_color_type(png, info);
  const png_byte depth = png_get_bit_depth(png, info);

  if (depth == 16) png_set_strip_16(png);
  if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color == PNG_COLOR_TYPE_GRAY && depth < 8) png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  if (color & PNG_COLOR_MASK_ALPHA) png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const png_byte updated = png_get_color_type(png, info);
  const int64_t channels = (updated == PNG_COLOR_TYPE_GRAY) ? 1 : 3;

  ImageU8 out;
  out.width = static_cast<int64_t>(w);
  out.height = static_cast<int64_t>(h);
  out.channels = channels;
  out.pixels.resize(static_cast<size_t>(out.width * out.height * channels));

  std::vector<png_bytep> rows(h);
  for (png_uint_32 y = 0; y < h; ++y)
    rows[y] = out.pixels.data() + static_cast<size_t>(y) * static_cast<size_t>(w) * static_cast<size_t>(channels);
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return out;
}

void write_png(const std::string& path, const ImageU8& image) {
  if (image.channels != 1 && image.channels != 3)
    throw DataError("write_png: only gray or RGB supported, got " + std::to_string(image.channels) + " channels");
  FilePtr fp(std::fopen(path.c_str(), "wb"));
  if (!fp) throw DataError("cannot write image file: " + path);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
  if (!png) throw DataError("libpng init failed for " + path);
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw DataError("libpng info init failed for " + path);
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw DataError("failed to encode PNG: " + path);
  }
  png_init_io(png, fp.get());
  png_set_IHDR(png, info, static_cast<png_uint_32>(image.width), static_cast<png_uint_32>(image.height),
               8, image.channels == 1 ? PNG_COLOR_TYPE_GRAY : PNG_COLOR_TYPE_RGB,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  png_write_info(png, info);
  std::vector<png_bytep> rows(static_cast<size_t>(image.height));
  for (int64_t y = 0; y < image.height; ++y)
    rows[static_cast<size_t>(y)] = const_cast<png_bytep>(
        image.pixels.data() + static_cast<size_t>(y * image.width * image.channels));
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
}

Image to_float(const ImageU8& u8) {
  Image out = Image::zeros(u8.channels, u8.height, u8.width);
  for (int64_t y = 0; y < u8.height; ++y)
    for (int64_t x = 0; x < u8.width; ++x)
      for (int64_t c = 0; c < u8.channels; ++c)
        out.at(c, y, x) = static_cast<float>(u8.at(y, x, c)) / 255.0f;
  return out;
}

ImageU8 to_u8(const Image& image) {
  ImageU8 out;
  out.width = image.width;
  out.height = image.height;
  out.channels = image.channels;
  out.pixels.resize(static_cast<size_t>(image.width * image.height * image.channels));
  for (int64_t y = 0; y < image.height; ++y)
    for (int64_t x = 0; x < image.width; ++x)
      for (int64_t c = 0; c < image.channels; ++c) {
        const float v = std::clamp(image.at(c, y, x), 0.0f, 1.0f);
        out.pixels[static_cast<size_t>((y * image.width + x) * image.channels + c)] =
            static_cast<uint8_t>(v * 255.0f + 0.5f);
      }
  return out;
}

ImageU8 label_to_u8(const LabelMap& label, int num_classes) {
  if (label.shape.size() != 2) throw ShapeError("label_to_u8 expects [H,W], got " + shape_str(label.shape));
  ImageU8 out;
  out.height = label.shape[0];
  out.width = label.shape[1];
  out.channels = 1;
  out.pixels.resize(static_cast<size_t>(out.width * out.height));
  const int denom = std::max(num_classes - 1, 1);
  for (size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = static_cast<uint8_t>(label.values[i] * 255 / denom);
  return out;
}

ImageU8 heatmap_to_u8(const Tensor<float>& heatmap) {
  if (heatmap.rank() != 2) throw ShapeError("heatmap_to_u8 expects [H,W], got " + shape_str(heatmap.shape()));
  ImageU8 out;
  out.height = heatmap.dim(0);
  out.width = heatmap.dim(1);
  out.channels = 1;
  out.pixels.resize(static_cast<size_t>(out.width * out.height));
  auto v = heatmap.data();
  for (size_t i = 0; i < out.pixels.size(); ++i)
    out.pixels[i] = static_cast<uint8_t>(std::clamp(v[i], 0.0f, 1.0f) * 255.0f + 0.5f);
  return out;
}

TensorF image_to_tensor(const Image& image) {
  return TensorF::from_data({1, image.channels, image.height, image.width},
                            std::vector<float>(image.pixels.begin(), image.pixels.end()));
}

}  // namespace siamix
