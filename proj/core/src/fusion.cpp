#include "siamix/fusion.hpp"

namespace siamix {

template <typename T>
TemporalTransformerParams<T> make_temporal_transformer(const StageConfig& cfg, int stage_index, Rng& rng) {
  TemporalTransformerParams<T> p;
  const int c = cfg.channels;
  p.stage_index = stage_index;
  p.norm_q = make_norm<T>(c);
  p.norm_kv = make_norm<T>(c);
  p.attn.heads = cfg.heads;
  p.attn.q = make_linear<T>(c, c, rng);
  p.attn.k = make_linear<T>(c, c, rng);
  p.attn.v = make_linear<T>(c, c, rng);
  p.attn.reduce_k.reduction = cfg.reduction;
  p.attn.reduce_k.proj = make_linear<T>(static_cast<int64_t>(c) * cfg.reduction, c, rng);
  p.attn.reduce_v.reduction = cfg.reduction;
  p.attn.reduce_v.proj = make_linear<T>(static_cast<int64_t>(c) * cfg.reduction, c, rng);
  p.attn.out = make_linear<T>(c, c, rng);
  p.norm_mlp = make_norm<T>(c);
  const int hidden = c * kFusionMlpExpansion;
  p.fc1 = make_linear<T>(c, hidden, rng);
  p.fc2 = make_linear<T>(hidden, c, rng);
  return p;
}

template <typename T>
Tensor<T> temporal_transformer(const StageOutput<T>& y1, const StageOutput<T>& y2,
                               const TemporalTransformerParams<T>& params,
                               Tensor<T>* attn_trace) {
  if (!same_shape(y1.tokens.shape(), y2.tokens.shape()) || y1.h != y2.h || y1.w != y2.w) {
    throw ContractError("temporal_transformer stage " + std::to_string(params.stage_index) +
                        ": stream shapes differ, " + shape_str(y1.tokens.shape()) + " vs " +
                        shape_str(y2.tokens.shape()));
  }
  Tensor<T> q = params.attn.q.forward(params.norm_q.forward(y1.tokens));
  Tensor<T> kv_in = params.norm_kv.forward(y2.tokens);
  Tensor<T> k = reduce_sequence(params.attn.k.forward(kv_in), params.attn.reduce_k);
  Tensor<T> v = reduce_sequence(params.attn.v.forward(kv_in), params.attn.reduce_v);
  Tensor<T> ctx = multi_head_attention(q, k, v, params.attn.heads, attn_trace);
  Tensor<T> z = ops::add(y1.tokens, params.attn.out.forward(ctx));

  Tensor<T> m = params.norm_mlp.forward(z);
  m = params.fc2.forward(ops::gelu(params.fc1.forward(m)));
  return ops::add(z, m);
}

template TemporalTransformerParams<float> make_temporal_transformer(const StageConfig&, int, Rng&);
template TemporalTransformerParams<double> make_temporal_transformer(const StageConfig&, int, Rng&);
template Tensor<float> temporal_transformer(const StageOutput<float>&, const StageOutput<float>&,
                                            const TemporalTransformerParams<float>&, Tensor<float>*);
template Tensor<double> temporal_transformer(const StageOutput<double>&, const StageOutput<double>&,
                                             const TemporalTransformerParams<double>&, Tensor<double>*);

}  // namespace siamix
