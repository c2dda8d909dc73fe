#pragma once

#include <map>
#include <optional>

#include "siamix/model.hpp"

namespace siamix {

// exact count of scalar parameters (walks the real tensors)
template <typename T>
int64_t count_params(Model<T>& model);

// per top-level group (encoder1 / encoder2 / fusion / decoder)
template <typename T>
std::map<std::string, int64_t> count_params_by_group(Model<T>& model);

// Analytic forward-pass multiply-accumulate accounting, batch 1.
// `param_macs` covers every parameterized layer (convolutions, linear and
// attention projections) — the figure comparable with published FLOPs(G)
// columns. `attention_macs` covers the data-data products QK^T and attn*V,
// which scale as N^2/R. The runtime MAC counter reproduces total() exactly.
struct FlopCount {
  uint64_t param_macs = 0;
  uint64_t attention_macs = 0;
  uint64_t total() const { return param_macs + attention_macs; }
};

template <typename T>
FlopCount count_flops(const Model<T>& model, int64_t height, int64_t width);

struct StageShape {
  int64_t h = 0, w = 0, n = 0, c = 0;
};

// Stage grid arithmetic from the variant's patch-embed chain; shares
// conv2d_out_size with the convolution op itself.
std::array<StageShape, 4> expected_stage_shapes(const VariantSpec& spec, int64_t height, int64_t width);

// published reference points (Params(M) from Table 2; FLOPs(G) for siamix-0)
std::optional<double> published_params_m(const std::string& variant);
std::optional<double> published_flops_g(const std::string& variant, int64_t input_size);

}  // namespace siamix
