#include "siamix/decoder.hpp"

namespace siamix {

template <typename T>
DecoderParams<T> make_decoder(const DecoderConfig& cfg, Rng& rng) {
  if (cfg.num_classes < 2) throw ConfigError("decoder: num_classes must be >= 2");
  if (cfg.unify_channels <= 0) throw ConfigError("decoder: unify_channels must be positive");
  DecoderParams<T> d;
  d.cfg = cfg;
  for (int i = 0; i < 4; ++i)
    d.proj[static_cast<size_t>(i)] = make_linear<T>(cfg.in_channels[static_cast<size_t>(i)], cfg.unify_channels, rng);
  d.fuse = make_linear<T>(4 * static_cast<int64_t>(cfg.unify_channels), cfg.unify_channels, rng);
  d.classify = make_linear<T>(cfg.unify_channels, cfg.num_classes, rng);
  return d;
}

template <typename T>
Tensor<T> decode(const std::array<StageOutput<T>, 4>& fused, const DecoderParams<T>& params) {
  const int64_t h0 = fused[0].h, w0 = fused[0].w;
  const int64_t B = fused[0].tokens.dim(0);
  for (int i = 0; i < 4; ++i) {
    const auto& s = fused[static_cast<size_t>(i)];
    if (s.tokens.dim(0) != B || s.tokens.dim(2) != params.cfg.in_channels[static_cast<size_t>(i)] ||
        s.h != (h0 >> i) || s.w != (w0 >> i)) {
      throw ContractError("decode: stage " + std::to_string(i + 1) + " shape " +
                          shape_str(s.tokens.shape()) + " inconsistent with stage 1 grid " +
                          std::to_string(h0) + "x" + std::to_string(w0));
    }
  }
  std::vector<Tensor<T>> maps;
  maps.reserve(4);
  for (int i = 0; i < 4; ++i) {
    const auto& s = fused[static_cast<size_t>(i)];
    Tensor<T> t = params.proj[static_cast<size_t>(i)].forward(s.tokens);  // [B,N_i,C]
    Tensor<T> img = tokens_to_image(t, s.h, s.w);
    if (s.h != h0 || s.w != w0) img = ops::bilinear_resize(img, h0, w0);
    maps.push_back(img);
  }
  Tensor<T> cat = ops::concat(maps, 1);  // [B,4C,h0,w0]
  Tensor<T> tokens = image_to_tokens(cat);
  Tensor<T> f = params.fuse.forward(tokens);
  Tensor<T> logits = params.classify.forward(f);  // [B,N,ncls]
  return tokens_to_image(logits, h0, w0);
}

template <typename T>
Tensor<T> upsample_logits(const Tensor<T>& logits, int64_t out_h, int64_t out_w) {
  if (logits.rank() != 4) throw ShapeError("upsample_logits expects [B,C,h,w], got " + shape_str(logits.shape()));
  if (out_h != logits.dim(2) * 4 || out_w != logits.dim(3) * 4) {
    throw ContractError("upsample_logits: target " + std::to_string(out_h) + "x" + std::to_string(out_w) +
                        " is not 4x the logit grid " + std::to_string(logits.dim(2)) + "x" +
                        std::to_string(logits.dim(3)));
  }
  return ops::bilinear_resize(logits, out_h, out_w);
}

template DecoderParams<float> make_decoder(const DecoderConfig&, Rng&);
template DecoderParams<double> make_decoder(const DecoderConfig&, Rng&);
template Tensor<float> decode(const std::array<StageOutput<float>, 4>&, const DecoderParams<float>&);
template Tensor<double> decode(const std::array<StageOutput<double>, 4>&, const DecoderParams<double>&);
template Tensor<float> upsample_logits(const Tensor<float>&, int64_t, int64_t);
template Tensor<double> upsample_logits(const Tensor<double>&, int64_t, int64_t);

}  // namespace siamix
