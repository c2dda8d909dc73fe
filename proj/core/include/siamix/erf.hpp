#pragma once

#include "siamix/model.hpp"

namespace siamix {

enum class ErfTarget { stage1 = 1, stage2 = 2, stage3 = 3, stage4 = 4, logits = 0 };

ErfTarget parse_erf_target(const std::string& s);

// Effective-receptive-field probe: |d(center activation)/d(t1)| summed over
// input channels, normalized to [0,1]. The center activation is the
// channel-sum of the target feature map at (cy, cx) in the target grid.
// Returns an [H, W] heatmap over the t1 input.
template <typename T>
Tensor<T> erf_probe(const Model<T>& model, const Tensor<T>& t1, const Tensor<T>& t2,
                    ErfTarget target, int64_t cy, int64_t cx);

// Two stacked 3x3 convolutions (stride 1, pad 1); theoretical receptive field
// is 5x5. Shipped as the locality reference for the ERF comparison.
template <typename T>
struct ConvBaseline {
  ConvLayer<T> conv1, conv2;
};

template <typename T>
ConvBaseline<T> make_conv_baseline(int in_channels, int hidden, Rng& rng);

template <typename T>
Tensor<T> conv_baseline_probe(const ConvBaseline<T>& net, const Tensor<T>& t1, int64_t cy, int64_t cx);

}  // namespace siamix
