#pragma once

#include <array>

#include "siamix/encoder.hpp"

namespace siamix {

struct DecoderConfig {
  int unify_channels = 256;            // C in the decoder formulas
  int num_classes = 2;                 // N_cls >= 2
  std::array<int, 4> in_channels{};    // per-stage C_i
};

template <typename T>
struct DecoderParams {
  DecoderConfig cfg;
  std::array<LinearLayer<T>, 4> proj;  // C_i -> C per stage
  LinearLayer<T> fuse;                 // 4C -> C
  LinearLayer<T> classify;             // C -> N_cls

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    for (int i = 0; i < 4; ++i) proj[static_cast<size_t>(i)].visit(prefix + ".proj" + std::to_string(i + 1), fn);
    fuse.visit(prefix + ".fuse", fn);
    classify.visit(prefix + ".classify", fn);
  }
};

template <typename T>
DecoderParams<T> make_decoder(const DecoderConfig& cfg, Rng& rng);

// Per-stage linear to C channels, upsample everything to the stage-1 grid
// (H/4 x W/4), concatenate, fuse, classify. Output [B, N_cls, H/4, W/4].
template <typename T>
Tensor<T> decode(const std::array<StageOutput<T>, 4>& fused, const DecoderParams<T>& params);

// Bilinear x4 to full resolution; target must be exactly 4x the logit grid.
template <typename T>
Tensor<T> upsample_logits(const Tensor<T>& logits, int64_t out_h, int64_t out_w);

}  // namespace siamix
