#pragma once

#include "siamix/encoder.hpp"

namespace siamix {

// Temporal transformer fusing one encoder stage across time: query from the
// T1 stream, key/value from the T2 stream, residual onto T1, then an MLP with
// residual. The T1 stream is the carrier.
template <typename T>
struct TemporalTransformerParams {
  NormLayer<T> norm_q;
  NormLayer<T> norm_kv;
  AttentionParams<T> attn;
  NormLayer<T> norm_mlp;
  LinearLayer<T> fc1;
  LinearLayer<T> fc2;
  int stage_index = 1;

  void visit(const std::string& prefix, const ParamVisitor<T>& fn) {
    norm_q.visit(prefix + ".norm_q", fn);
    norm_kv.visit(prefix + ".norm_kv", fn);
    attn.visit(prefix + ".attn", fn);
    norm_mlp.visit(prefix + ".norm_mlp", fn);
    fc1.visit(prefix + ".fc1", fn);
    fc2.visit(prefix + ".fc2", fn);
  }
};

// expansion of the fusion MLP hidden layer
constexpr int kFusionMlpExpansion = 8;

template <typename T>
TemporalTransformerParams<T> make_temporal_transformer(const StageConfig& cfg, int stage_index, Rng& rng);

template <typename T>
Tensor<T> temporal_transformer(const StageOutput<T>& y1, const StageOutput<T>& y2,
                               const TemporalTransformerParams<T>& params,
                               Tensor<T>* attn_trace = nullptr);

}  // namespace siamix
