#include "siamix/model.hpp"

namespace siamix {

namespace {

std::array<StageConfig, 4> make_stages(std::array<int, 4> heads, std::array<int, 4> layers,
                                       std::array<int, 4> channels) {
  const std::array<int, 4> reduction{8, 4, 2, 1};
  const std::array<int, 4> kernel{7, 3, 3, 3};
  const std::array<int, 4> stride{4, 2, 2, 2};
  const std::array<int, 4> padding{3, 1, 1, 1};
  std::array<StageConfig, 4> s;
  for (int i = 0; i < 4; ++i) {
    auto& c = s[static_cast<size_t>(i)];
    c.heads = heads[static_cast<size_t>(i)];
    c.layers = layers[static_cast<size_t>(i)];
    c.channels = channels[static_cast<size_t>(i)];
    c.reduction = reduction[static_cast<size_t>(i)];
    c.patch_kernel = kernel[static_cast<size_t>(i)];
    c.patch_stride = stride[static_cast<size_t>(i)];
    c.patch_padding = padding[static_cast<size_t>(i)];
  }
  return s;
}

std::array<StageConfig, 4> nano_stages() {
  return make_stages({1, 2, 5, 8}, {1, 1, 1, 1}, {32, 64, 160, 256});
}

}  // namespace

VariantSpec variant_spec(const std::string& name) {
  VariantSpec v;
  v.name = name;
  const std::array<int, 4> paper_heads{1, 2, 5, 8};
  if (name == "siamix-0") {
    v.stages = make_stages(paper_heads, {2, 2, 2, 2}, {32, 64, 160, 256});
    v.decoder_channels = 256;
  } else if (name == "siamix-1") {
    v.stages = make_stages(paper_heads, {2, 2, 2, 2}, {64, 128, 320, 512});
    v.decoder_channels = 256;
  } else if (name == "siamix-2") {
    v.stages = make_stages(paper_heads, {3, 3, 6, 3}, {64, 128, 320, 512});
    v.decoder_channels = 768;
  } else if (name == "siamix-3") {
    v.stages = make_stages(paper_heads, {3, 3, 18, 3}, {64, 128, 320, 512});
    v.decoder_channels = 768;
  } else if (name == "siamix-4") {
    v.stages = make_stages(paper_heads, {3, 8, 27, 3}, {64, 128, 320, 512});
    v.decoder_channels = 768;
  } else if (name == "siamix-5") {
    v.stages = make_stages(paper_heads, {3, 6, 40, 3}, {64, 128, 320, 512});
    v.decoder_channels = 768;
  } else if (name == "nano") {
    // desk-scale variant for CPU tests; not a published configuration
    v.stages = nano_stages();
    v.decoder_channels = 256;
  } else if (name == "mono-baseline") {
    v.stages = nano_stages();
    v.decoder_channels = 256;
    v.fusion = FusionKind::none;
    v.bi_temporal = false;
  } else if (name == "concat-fusion-baseline") {
    v.stages = nano_stages();
    v.decoder_channels = 256;
    v.fusion = FusionKind::concat;
  } else {
    throw ConfigError("unknown variant '" + name + "'");
  }
  return v;
}

std::vector<std::string> variant_names() {
  return {"siamix-0", "siamix-1", "siamix-2", "siamix-3", "siamix-4",
          "siamix-5", "nano",     "mono-baseline", "concat-fusion-baseline"};
}

template <typename T>
Model<T> build(const std::string& variant, int num_classes, uint64_t seed, bool share_encoders) {
  Model<T> m;
  m.spec = variant_spec(variant);
  m.num_classes = num_classes;
  m.seed = seed;
  m.shared_encoders = share_encoders;
  Rng rng = Rng(seed).fork(0x5149);

  m.encoder1 = make_encoder<T>(m.spec.stages, 3, rng);
  if (m.spec.bi_temporal) {
    if (share_encoders) {
      m.encoder2 = m.encoder1;  // handle copies: same parameter payloads
    } else {
      m.encoder2 = make_encoder<T>(m.spec.stages, 3, rng);
    }
  }
  if (m.spec.fusion == FusionKind::temporal) {
    for (int i = 0; i < 4; ++i)
      m.fusion.push_back(make_temporal_transformer<T>(m.spec.stages[static_cast<size_t>(i)], i + 1, rng));
  } else if (m.spec.fusion == FusionKind::concat) {
    for (int i = 0; i < 4; ++i) {
      const int c = m.spec.stages[static_cast<size_t>(i)].channels;
      m.concat_fusion.push_back(make_linear<T>(2 * static_cast<int64_t>(c), c, rng));
    }
  }
  DecoderConfig dc;
  dc.unify_channels = m.spec.decoder_channels;
  dc.num_classes = num_classes;
  for (int i = 0; i < 4; ++i) dc.in_channels[static_cast<size_t>(i)] = m.spec.stages[static_cast<size_t>(i)].channels;
  m.decoder = make_decoder<T>(dc, rng);
  return m;
}

template <typename T>
void Model<T>::visit_params(const ParamVisitor<T>& fn) {
  encoder1.visit("encoder1", fn);
  if (spec.bi_temporal && !shared_encoders) encoder2.visit("encoder2", fn);
  for (size_t i = 0; i < fusion.size(); ++i) fusion[i].visit("fusion.stage" + std::to_string(i + 1), fn);
  for (size_t i = 0; i < concat_fusion.size(); ++i)
    concat_fusion[i].visit("fusion.stage" + std::to_string(i + 1) + ".proj", fn);
  decoder.visit("decoder", fn);
}

template <typename T>
std::array<StageOutput<T>, 4> Model<T>::forward_stages(const Tensor<T>& t1, const Tensor<T>& t2) const {
  if (spec.bi_temporal) {
    if (!same_shape(t1.shape(), t2.shape()))
      throw ContractError("forward: t1 " + shape_str(t1.shape()) + " vs t2 " + shape_str(t2.shape()));
  }
  std::array<StageOutput<T>, 4> y1 = encode(t1, encoder1);
  if (!spec.bi_temporal) return y1;

  std::array<StageOutput<T>, 4> y2 = encode(t2, encoder2);
  std::array<StageOutput<T>, 4> fused;
  for (int i = 0; i < 4; ++i) {
    const auto& a = y1[static_cast<size_t>(i)];
    const auto& b = y2[static_cast<size_t>(i)];
    StageOutput<T> f;
    f.h = a.h;
    f.w = a.w;
    if (spec.fusion == FusionKind::temporal) {
      f.tokens = temporal_transformer(a, b, fusion[static_cast<size_t>(i)]);
    } else {
      Tensor<T> cat = ops::concat(std::vector<Tensor<T>>{a.tokens, b.tokens}, 2);
      f.tokens = concat_fusion[static_cast<size_t>(i)].forward(cat);
    }
    fused[static_cast<size_t>(i)] = f;
  }
  return fused;
}

template <typename T>
Tensor<T> Model<T>::forward(const Tensor<T>& t1, const Tensor<T>& t2) const {
  return decode(forward_stages(t1, t2), decoder);
}

template struct Model<float>;
template struct Model<double>;
template Model<float> build(const std::string&, int, uint64_t, bool);
template Model<double> build(const std::string&, int, uint64_t, bool);

}  // namespace siamix
