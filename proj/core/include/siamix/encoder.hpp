#pragma once

#include <array>
#include <vector>

#include "siamix/layers.hpp"

namespace siamix {

// Per-stage hyperparameters. The four-stage defaults mirror the published
// settings table: R = [8,4,2,1], first patch embed 7/4/3, later ones 3/2/1.
struct StageConfig {
  int heads = 1;
  int layers = 1;
  int channels = 8;
  int reduction = 1;
  int patch_kernel = 3;
  int patch_stride = 2;
  int patch_padding = 1;
};

void validate_stage_configs(const std::array<StageConfig, 4>& stages);

template <typename T>
struct StageOutput {
  Tensor<T> tokens;  // [B, N, C] with N = h*w
  int64_t h = 0;
  int64_t w = 0;
};

// Eq-style sequence reduction: reshape [B,N,C] -> [B,N/R,C*R], then a linear
// projection back to C. R=1 degenerates to a plain linear map over C.
template <typename T>
struct ReduceParams {
  LinearLayer<T> proj;  // [C, C*R]
  int reduction = 1;

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) { proj.visit(prefix, fn); }
};

template <typename T>
struct AttentionParams {
  LinearLayer<T> q, k, v, out;
  ReduceParams<T> reduce_k, reduce_v;
  int heads = 1;

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    q.visit(prefix + ".q", fn);
    k.visit(prefix + ".k", fn);
    v.visit(prefix + ".v", fn);
    reduce_k.visit(prefix + ".reduce_k", fn);
    reduce_v.visit(prefix + ".reduce_v", fn);
    out.visit(prefix + ".out", fn);
  }
};

template <typename T>
struct MixFfnParams {
  LinearLayer<T> fc1;
  ConvLayer<T> dw;  // depthwise 3x3, groups == hidden width
  LinearLayer<T> fc2;

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    fc1.visit(prefix + ".fc1", fn);
    dw.visit(prefix + ".dw", fn);
    fc2.visit(prefix + ".fc2", fn);
  }
};

template <typename T>
struct BlockParams {
  NormLayer<T> norm1;
  AttentionParams<T> attn;
  NormLayer<T> norm2;
  MixFfnParams<T> ffn;

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    norm1.visit(prefix + ".norm1", fn);
    attn.visit(prefix + ".attn", fn);
    norm2.visit(prefix + ".norm2", fn);
    ffn.visit(prefix + ".ffn", fn);
  }
};

template <typename T>
struct StageParams {
  StageConfig cfg;
  int stage_index = 1;  // 1-based, for error messages
  ConvLayer<T> patch_conv;
  NormLayer<T> patch_norm;
  std::vector<BlockParams<T>> blocks;
  NormLayer<T> norm_out;

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    patch_conv.visit(prefix + ".patch_conv", fn);
    patch_norm.visit(prefix + ".patch_norm", fn);
    for (size_t i = 0; i < blocks.size(); ++i)
      blocks[i].visit(prefix + ".block" + std::to_string(i + 1), fn);
    norm_out.visit(prefix + ".norm", fn);
  }
};

template <typename T>
struct Encoder {
  std::array<StageParams<T>, 4> stages;

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    for (int i = 0; i < 4; ++i) stages[static_cast<size_t>(i)].visit(prefix + ".stage" + std::to_string(i + 1), fn);
  }
};

constexpr int kFfnExpansion = 4;

template <typename T>
Encoder<T> make_encoder(const std::array<StageConfig, 4>& stages, int in_channels, Rng& rng);

// strided conv patch embedding, flattened to tokens and layer-normalized
template <typename T>
StageOutput<T> overlap_patch_embed(const Tensor<T>& x, const StageParams<T>& stage);

template <typename T>
Tensor<T> reduce_sequence(const Tensor<T>& x, const ReduceParams<T>& params);

// Q at full length from x; K and V projected then reduced to N/R. Score count
// per head is N*(N/R).
template <typename T>
Tensor<T> efficient_self_attention(const Tensor<T>& x, const AttentionParams<T>& params,
                                   Tensor<T>* attn_trace = nullptr);

template <typename T>
Tensor<T> mix_ffn(const Tensor<T>& x, int64_t h, int64_t w, const MixFfnParams<T>& params);

// pre-norm attention + residual, then pre-norm mix-FFN + residual
template <typename T>
StageOutput<T> transformer_block(const StageOutput<T>& x, const BlockParams<T>& params);

template <typename T>
std::array<StageOutput<T>, 4> encode(const Tensor<T>& image, const Encoder<T>& encoder);

}  // namespace siamix
