#include "siamix/audit.hpp"

namespace siamix {

template <typename T>
int64_t count_params(Model<T>& model) {
  int64_t total = 0;
  model.visit_params([&](const std::string&, Tensor<T>& t) { total += t.numel(); });
  return total;
}

template <typename T>
std::map<std::string, int64_t> count_params_by_group(Model<T>& model) {
  std::map<std::string, int64_t> groups;
  model.visit_params([&](const std::string& name, Tensor<T>& t) {
    groups[name.substr(0, name.find('.'))] += t.numel();
  });
  return groups;
}

std::array<StageShape, 4> expected_stage_shapes(const VariantSpec& spec, int64_t height, int64_t width) {
  std::array<StageShape, 4> out;
  int64_t h = height, w = width;
  for (int i = 0; i < 4; ++i) {
    const StageConfig& c = spec.stages[static_cast<size_t>(i)];
    h = ops::conv2d_out_size(h, c.patch_kernel, c.patch_stride, c.patch_padding);
    w = ops::conv2d_out_size(w, c.patch_kernel, c.patch_stride, c.patch_padding);
    out[static_cast<size_t>(i)] = {h, w, h * w, c.channels};
  }
  return out;
}

namespace {

struct StageFlopTally {
  uint64_t param_macs = 0;
  uint64_t attention_macs = 0;
};

// one self- or cross-attention layer at N tokens, channels C, reduction R;
// q/k/v projections run at full length, the two reduce projections cost
// (N/R)*(C*R)*C == N*C*C each
StageFlopTally attention_flops(int64_t n, int64_t c, int64_t r) {
  StageFlopTally t;
  const uint64_t ncc = static_cast<uint64_t>(n) * static_cast<uint64_t>(c) * static_cast<uint64_t>(c);
  t.param_macs += ncc;        // q
  t.param_macs += 2 * ncc;    // k, v
  t.param_macs += 2 * ncc;    // reduce_k, reduce_v
  t.param_macs += ncc;        // out
  t.attention_macs += 2ull * static_cast<uint64_t>(n) * static_cast<uint64_t>(n / r) * static_cast<uint64_t>(c);
  return t;
}

}  // namespace

template <typename T>
FlopCount count_flops(const Model<T>& model, int64_t height, int64_t width) {
  if (height % 32 != 0 || width % 32 != 0)
    throw ContractError("count_flops: input size must be divisible by 32");
  const VariantSpec& spec = model.spec;
  const auto shapes = expected_stage_shapes(spec, height, width);
  FlopCount fc;

  const int encoders = spec.bi_temporal ? 2 : 1;
  int64_t cin = 3;
  int64_t ph = height, pw = width;
  for (int i = 0; i < 4; ++i) {
    const StageConfig& c = spec.stages[static_cast<size_t>(i)];
    const StageShape& s = shapes[static_cast<size_t>(i)];
    // patch embed conv
    fc.param_macs += static_cast<uint64_t>(encoders) * static_cast<uint64_t>(s.h * s.w) *
                     static_cast<uint64_t>(c.channels) * static_cast<uint64_t>(cin) *
                     static_cast<uint64_t>(c.patch_kernel) * static_cast<uint64_t>(c.patch_kernel);
    const int64_t e = static_cast<int64_t>(c.channels) * kFfnExpansion;
    for (int l = 0; l < c.layers; ++l) {
      const StageFlopTally a = attention_flops(s.n, c.channels, c.reduction);
      fc.param_macs += static_cast<uint64_t>(encoders) * a.param_macs;
      fc.attention_macs += static_cast<uint64_t>(encoders) * a.attention_macs;
      // mix-FFN: fc1, depthwise 3x3, fc2
      fc.param_macs += static_cast<uint64_t>(encoders) *
                       (static_cast<uint64_t>(s.n) * static_cast<uint64_t>(c.channels) * static_cast<uint64_t>(e) +
                        static_cast<uint64_t>(s.n) * static_cast<uint64_t>(e) * 9ull +
                        static_cast<uint64_t>(s.n) * static_cast<uint64_t>(e) * static_cast<uint64_t>(c.channels));
    }
    cin = c.channels;
    ph = s.h;
    pw = s.w;
  }
  (void)ph;
  (void)pw;

  if (spec.fusion == FusionKind::temporal) {
    for (int i = 0; i < 4; ++i) {
      const StageConfig& c = spec.stages[static_cast<size_t>(i)];
      const StageShape& s = shapes[static_cast<size_t>(i)];
      const StageFlopTally a = attention_flops(s.n, c.channels, c.reduction);
      fc.param_macs += a.param_macs;
      fc.attention_macs += a.attention_macs;
      const int64_t e = static_cast<int64_t>(c.channels) * kFusionMlpExpansion;
      fc.param_macs += static_cast<uint64_t>(s.n) * static_cast<uint64_t>(c.channels) * static_cast<uint64_t>(e) * 2ull;
    }
  } else if (spec.fusion == FusionKind::concat) {
    for (int i = 0; i < 4; ++i) {
      const StageConfig& c = spec.stages[static_cast<size_t>(i)];
      const StageShape& s = shapes[static_cast<size_t>(i)];
      fc.param_macs += static_cast<uint64_t>(s.n) * 2ull * static_cast<uint64_t>(c.channels) *
                       static_cast<uint64_t>(c.channels);
    }
  }

  const int64_t cd = spec.decoder_channels;
  const StageShape& s1 = shapes[0];
  for (int i = 0; i < 4; ++i) {
    const StageShape& s = shapes[static_cast<size_t>(i)];
    fc.param_macs += static_cast<uint64_t>(s.n) * static_cast<uint64_t>(s.c) * static_cast<uint64_t>(cd);
  }
  fc.param_macs += static_cast<uint64_t>(s1.n) * 4ull * static_cast<uint64_t>(cd) * static_cast<uint64_t>(cd);
  fc.param_macs += static_cast<uint64_t>(s1.n) * static_cast<uint64_t>(cd) * static_cast<uint64_t>(model.num_classes);
  return fc;
}

std::optional<double> published_params_m(const std::string& variant) {
  if (variant == "siamix-0") return 10.04;
  if (variant == "siamix-1") return 38.57;
  if (variant == "siamix-2") return 60.65;
  if (variant == "siamix-3") return 100.41;
  if (variant == "siamix-4") return 133.95;
  if (variant == "siamix-5") return 175.15;
  return std::nullopt;
}

std::optional<double> published_flops_g(const std::string& variant, int64_t input_size) {
  if (variant == "siamix-0" && input_size == 256) return 2.62;
  if (variant == "siamix-0" && input_size == 512) return 10.53;
  return std::nullopt;
}

template int64_t count_params(Model<float>&);
template int64_t count_params(Model<double>&);
template std::map<std::string, int64_t> count_params_by_group(Model<float>&);
template std::map<std::string, int64_t> count_params_by_group(Model<double>&);
template FlopCount count_flops(const Model<float>&, int64_t, int64_t);
template FlopCount count_flops(const Model<double>&, int64_t, int64_t);

}  // namespace siamix
