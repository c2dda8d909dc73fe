#pragma once

#include <optional>
#include <string>
#include <vector>

#include "siamix/decoder.hpp"
#include "siamix/fusion.hpp"

namespace siamix {

enum class FusionKind { temporal, concat, none };

struct VariantSpec {
  std::string name;
  std::array<StageConfig, 4> stages;
  int decoder_channels = 256;
  FusionKind fusion = FusionKind::temporal;
  bool bi_temporal = true;  // false: single encoder, t2 ignored
};

// known names: siamix-0..siamix-5, nano, mono-baseline, concat-fusion-baseline
VariantSpec variant_spec(const std::string& name);
std::vector<std::string> variant_names();

template <typename T>
struct Model {
  VariantSpec spec;
  int num_classes = 2;
  uint64_t seed = 0;
  bool shared_encoders = false;

  Encoder<T> encoder1;
  Encoder<T> encoder2;  // unused when !spec.bi_temporal; aliases encoder1 when shared
  std::vector<TemporalTransformerParams<T>> fusion;   // 4, when FusionKind::temporal
  std::vector<LinearLayer<T>> concat_fusion;          // 4, when FusionKind::concat
  DecoderParams<T> decoder;

  void visit_params(const ParamVisitor<T>& fn);

  // fused per-stage features (the decoder inputs) for probes/inspection
  std::array<StageOutput<T>, 4> forward_stages(const Tensor<T>& t1, const Tensor<T>& t2) const;
  Tensor<T> forward(const Tensor<T>& t1, const Tensor<T>& t2) const;
};

// Deterministic construction: truncated-normal(0.02) projections, unit-gamma
// norms, zero biases, all drawn from a stream derived from `seed`.
template <typename T>
Model<T> build(const std::string& variant, int num_classes, uint64_t seed,
               bool share_encoders = false);

extern template struct Model<float>;
extern template struct Model<double>;

}  // namespace siamix
