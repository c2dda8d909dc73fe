#include "siamix/encoder.hpp"

namespace siamix {

void validate_stage_configs(const std::array<StageConfig, 4>& stages) {
  for (int i = 0; i < 4; ++i) {
    const StageConfig& c = stages[static_cast<size_t>(i)];
    if (c.channels <= 0 || c.heads <= 0 || c.layers <= 0 || c.reduction <= 0)
      throw ConfigError("stage " + std::to_string(i + 1) + ": non-positive setting");
    if (c.channels % c.heads != 0)
      throw ConfigError("stage " + std::to_string(i + 1) + ": channels " + std::to_string(c.channels) +
                        " not divisible by heads " + std::to_string(c.heads));
    if (i > 0 && stages[static_cast<size_t>(i)].channels <= stages[static_cast<size_t>(i - 1)].channels)
      throw ConfigError("stage channels must be strictly increasing");
  }
}

namespace {

template <typename T>
ReduceParams<T> make_reduce(int channels, int reduction, Rng& rng) {
  ReduceParams<T> r;
  r.reduction = reduction;
  r.proj = make_linear<T>(static_cast<int64_t>(channels) * reduction, channels, rng);
  return r;
}

template <typename T>
AttentionParams<T> make_attention(int channels, int heads, int reduction, Rng& rng) {
  AttentionParams<T> a;
  a.heads = heads;
  a.q = make_linear<T>(channels, channels, rng);
  a.k = make_linear<T>(channels, channels, rng);
  a.v = make_linear<T>(channels, channels, rng);
  a.reduce_k = make_reduce<T>(channels, reduction, rng);
  a.reduce_v = make_reduce<T>(channels, reduction, rng);
  a.out = make_linear<T>(channels, channels, rng);
  return a;
}

template <typename T>
MixFfnParams<T> make_mix_ffn(int channels, Rng& rng) {
  MixFfnParams<T> f;
  const int hidden = channels * kFfnExpansion;
  f.fc1 = make_linear<T>(channels, hidden, rng);
  f.dw = make_conv<T>(hidden, hidden, 3, 1, 1, hidden, rng);
  f.fc2 = make_linear<T>(hidden, channels, rng);
  return f;
}

}  // namespace

template <typename T>
Encoder<T> make_encoder(const std::array<StageConfig, 4>& stages, int in_channels, Rng& rng) {
  validate_stage_configs(stages);
  Encoder<T> enc;
  int cin = in_channels;
  for (int i = 0; i < 4; ++i) {
    const StageConfig& cfg = stages[static_cast<size_t>(i)];
    StageParams<T>& s = enc.stages[static_cast<size_t>(i)];
    s.cfg = cfg;
    s.stage_index = i + 1;
    s.patch_conv = make_conv<T>(cin, cfg.channels, cfg.patch_kernel, cfg.patch_stride,
                                cfg.patch_padding, 1, rng);
    s.patch_norm = make_norm<T>(cfg.channels);
    s.blocks.resize(static_cast<size_t>(cfg.layers));
    for (auto& b : s.blocks) {
      b.norm1 = make_norm<T>(cfg.channels);
      b.attn = make_attention<T>(cfg.channels, cfg.heads, cfg.reduction, rng);
      b.norm2 = make_norm<T>(cfg.channels);
      b.ffn = make_mix_ffn<T>(cfg.channels, rng);
    }
    s.norm_out = make_norm<T>(cfg.channels);
    cin = cfg.channels;
  }
  return enc;
}

template <typename T>
StageOutput<T> overlap_patch_embed(const Tensor<T>& x, const StageParams<T>& stage) {
  if (x.rank() != 4) throw ShapeError("overlap_patch_embed expects [B,C,H,W], got " + shape_str(x.shape()));
  const int64_t h = x.dim(2), w = x.dim(3);
  const int s = stage.cfg.patch_stride;
  if (h % s != 0 || w % s != 0) {
    throw ShapeError("stage " + std::to_string(stage.stage_index) + " patch embed: input " +
                     std::to_string(h) + "x" + std::to_string(w) + " not divisible by stride " +
                     std::to_string(s));
  }
  Tensor<T> y = stage.patch_conv.forward(x);
  StageOutput<T> out;
  out.h = y.dim(2);
  out.w = y.dim(3);
  out.tokens = stage.patch_norm.forward(image_to_tokens(y));
  return out;
}

template <typename T>
Tensor<T> reduce_sequence(const Tensor<T>& x, const ReduceParams<T>& params) {
  if (x.rank() != 3) throw ShapeError("reduce_sequence expects [B,N,C], got " + shape_str(x.shape()));
  const int64_t B = x.dim(0), N = x.dim(1), C = x.dim(2);
  const int R = params.reduction;
  if (R == 1) return params.proj.forward(x);
  if (N % R != 0)
    throw ShapeError("reduce_sequence: N=" + std::to_string(N) + " not divisible by R=" + std::to_string(R));
  Tensor<T> grouped = ops::reshape(x, {B, N / R, C * R});
  return params.proj.forward(grouped);
}

template <typename T>
Tensor<T> efficient_self_attention(const Tensor<T>& x, const AttentionParams<T>& params,
                                   Tensor<T>* attn_trace) {
  Tensor<T> q = params.q.forward(x);
  Tensor<T> k = reduce_sequence(params.k.forward(x), params.reduce_k);
  Tensor<T> v = reduce_sequence(params.v.forward(x), params.reduce_v);
  Tensor<T> ctx = multi_head_attention(q, k, v, params.heads, attn_trace);
  return params.out.forward(ctx);
}

template <typename T>
Tensor<T> mix_ffn(const Tensor<T>& x, int64_t h, int64_t w, const MixFfnParams<T>& params) {
  if (x.rank() != 3) throw ShapeError("mix_ffn expects [B,N,C], got " + shape_str(x.shape()));
  if (x.dim(1) != h * w)
    throw ShapeError("mix_ffn: N=" + std::to_string(x.dim(1)) + " != " + std::to_string(h) + "x" +
                     std::to_string(w));
  Tensor<T> t = params.fc1.forward(x);
  t = tokens_to_image(t, h, w);
  t = params.dw.forward(t);
  t = image_to_tokens(t);
  t = ops::gelu(t);
  return params.fc2.forward(t);
}

template <typename T>
StageOutput<T> transformer_block(const StageOutput<T>& x, const BlockParams<T>& params) {
  Tensor<T> t = x.tokens;
  t = ops::add(t, efficient_self_attention(params.norm1.forward(t), params.attn));
  t = ops::add(t, mix_ffn(params.norm2.forward(t), x.h, x.w, params.ffn));
  return {t, x.h, x.w};
}

template <typename T>
std::array<StageOutput<T>, 4> encode(const Tensor<T>& image, const Encoder<T>& encoder) {
  if (image.rank() != 4) throw ShapeError("encode expects [B,C,H,W], got " + shape_str(image.shape()));
  if (image.dim(2) % 32 != 0 || image.dim(3) % 32 != 0)
    throw ShapeError("encode: input " + std::to_string(image.dim(2)) + "x" + std::to_string(image.dim(3)) +
                     " must be divisible by 32");
  std::array<StageOutput<T>, 4> outs;
  Tensor<T> x = image;
  for (int i = 0; i < 4; ++i) {
    const StageParams<T>& stage = encoder.stages[static_cast<size_t>(i)];
    StageOutput<T> so = overlap_patch_embed(x, stage);
    for (const auto& block : stage.blocks) so = transformer_block(so, block);
    so.tokens = stage.norm_out.forward(so.tokens);
    outs[static_cast<size_t>(i)] = so;
    if (i < 3) x = tokens_to_image(so.tokens, so.h, so.w);
  }
  return outs;
}

#define SIAMIX_INSTANTIATE_ENCODER(T)                                                      \
  template Encoder<T> make_encoder(const std::array<StageConfig, 4>&, int, Rng&);          \
  template StageOutput<T> overlap_patch_embed(const Tensor<T>&, const StageParams<T>&);    \
  template Tensor<T> reduce_sequence(const Tensor<T>&, const ReduceParams<T>&);            \
  template Tensor<T> efficient_self_attention(const Tensor<T>&, const AttentionParams<T>&, \
                                              Tensor<T>*);                                 \
  template Tensor<T> mix_ffn(const Tensor<T>&, int64_t, int64_t, const MixFfnParams<T>&);  \
  template StageOutput<T> transformer_block(const StageOutput<T>&, const BlockParams<T>&); \
  template std::array<StageOutput<T>, 4> encode(const Tensor<T>&, const Encoder<T>&);

SIAMIX_INSTANTIATE_ENCODER(float)
SIAMIX_INSTANTIATE_ENCODER(double)

#undef SIAMIX_INSTANTIATE_ENCODER

}  // namespace siamix
