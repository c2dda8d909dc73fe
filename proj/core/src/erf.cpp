#include "siamix/erf.hpp"

#include <cmath>

namespace siamix {

ErfTarget parse_erf_target(const std::string& s) {
  if (s == "stage1") return ErfTarget::stage1;
  if (s == "stage2") return ErfTarget::stage2;
  if (s == "stage3") return ErfTarget::stage3;
  if (s == "stage4") return ErfTarget::stage4;
  if (s == "logits") return ErfTarget::logits;
  throw ConfigError("unknown erf target '" + s + "' (expected stage1..stage4|logits)");
}

namespace {

// heatmap from the accumulated input gradient: sum |grad| over channels, then
// scale so the max is 1
template <typename T>
Tensor<T> heatmap_from_grad(Tensor<T>& input) {
  const int64_t C = input.dim(1), H = input.dim(2), W = input.dim(3);
  auto g = input.grad();
  Tensor<T> heat = Tensor<T>::zeros({H, W});
  auto hv = heat.mutable_data();
  for (int64_t c = 0; c < C; ++c)
    for (int64_t i = 0; i < H * W; ++i) hv[i] += std::abs(g[static_cast<size_t>(c * H * W + i)]);
  T mx = T(0);
  for (T v : hv) mx = std::max(mx, v);
  if (mx > T(0)) {
    for (T& v : hv) v /= mx;
  }
  return heat;
}

// scalar = channel-sum of `tokens` at one token index, via a constant one-hot mask
template <typename T>
Tensor<T> pick_token(const Tensor<T>& tokens, int64_t token_index) {
  Tensor<T> mask = Tensor<T>::zeros(tokens.shape());
  auto mv = mask.mutable_data();
  const int64_t C = tokens.dim(2);
  for (int64_t c = 0; c < C; ++c) mv[static_cast<size_t>(token_index * C + c)] = T(1);
  return ops::sum(ops::mul(tokens, mask));
}

}  // namespace

template <typename T>
Tensor<T> erf_probe(const Model<T>& model, const Tensor<T>& t1, const Tensor<T>& t2,
                    ErfTarget target, int64_t cy, int64_t cx) {
  // fresh leaf so gradients accumulate on a private copy of t1
  Tensor<T> x1 = Tensor<T>::from_data(t1.shape(), {t1.data().begin(), t1.data().end()});
  x1.set_requires_grad(true);

  Graph<T> g;
  GraphScope<T> scope(g);
  Tensor<T> scalar;
  if (target == ErfTarget::logits) {
    Tensor<T> logits = model.forward(x1, t2);
    const int64_t h = logits.dim(2), w = logits.dim(3);
    if (cy < 0 || cy >= h || cx < 0 || cx >= w)
      throw ContractError("erf_probe: position out of bounds for logits grid");
    Tensor<T> tokens = image_to_tokens(logits);
    scalar = pick_token(tokens, cy * w + cx);
  } else {
    const auto stages = model.forward_stages(x1, t2);
    const auto& s = stages[static_cast<size_t>(static_cast<int>(target) - 1)];
    if (cy < 0 || cy >= s.h || cx < 0 || cx >= s.w)
      throw ContractError("erf_probe: position out of bounds for stage grid");
    scalar = pick_token(s.tokens, cy * s.w + cx);
  }
  g.backward(scalar);
  return heatmap_from_grad(x1);
}

template <typename T>
ConvBaseline<T> make_conv_baseline(int in_channels, int hidden, Rng& rng) {
  ConvBaseline<T> net;
  net.conv1 = make_conv<T>(in_channels, hidden, 3, 1, 1, 1, rng);
  net.conv2 = make_conv<T>(hidden, hidden, 3, 1, 1, 1, rng);
  return net;
}

template <typename T>
Tensor<T> conv_baseline_probe(const ConvBaseline<T>& net, const Tensor<T>& t1, int64_t cy, int64_t cx) {
  Tensor<T> x = Tensor<T>::from_data(t1.shape(), {t1.data().begin(), t1.data().end()});
  x.set_requires_grad(true);
  Graph<T> g;
  GraphScope<T> scope(g);
  Tensor<T> y = net.conv2.forward(ops::gelu(net.conv1.forward(x)));
  const int64_t h = y.dim(2), w = y.dim(3);
  if (cy < 0 || cy >= h || cx < 0 || cx >= w)
    throw ContractError("conv_baseline_probe: position out of bounds");
  Tensor<T> scalar = pick_token(image_to_tokens(y), cy * w + cx);
  g.backward(scalar);
  return heatmap_from_grad(x);
}

template Tensor<float> erf_probe(const Model<float>&, const Tensor<float>&, const Tensor<float>&,
                                 ErfTarget, int64_t, int64_t);
template Tensor<double> erf_probe(const Model<double>&, const Tensor<double>&, const Tensor<double>&,
                                  ErfTarget, int64_t, int64_t);
template ConvBaseline<float> make_conv_baseline(int, int, Rng&);
template ConvBaseline<double> make_conv_baseline(int, int, Rng&);
template Tensor<float> conv_baseline_probe(const ConvBaseline<float>&, const Tensor<float>&, int64_t, int64_t);
template Tensor<double> conv_baseline_probe(const ConvBaseline<double>&, const Tensor<double>&, int64_t, int64_t);

}  // namespace siamix
