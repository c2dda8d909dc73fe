#include "siamix/losses.hpp"

#include <sstream>

namespace siamix {

void LossSpec::validate() const {
  if (components.empty()) throw ConfigError("loss spec: at least one component required");
  bool any_positive = false;
  for (const auto& c : components) {
    if (c.weight < 0) throw ConfigError("loss spec: component weights must be >= 0");
    if (c.weight > 0) any_positive = true;
  }
  if (!any_positive) throw ConfigError("loss spec: all component weights are zero");
  if (gamma < 0) throw ConfigError("loss spec: gamma must be >= 0");
}

LossSpec LossSpec::parse(const std::string& text) {
  LossSpec spec;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, '+')) {
    if (part.empty()) continue;
    const auto colon = part.find(':');
    const std::string name = part.substr(0, colon);
    double weight = 1.0;
    if (colon != std::string::npos) weight = std::stod(part.substr(colon + 1));
    LossKind kind;
    if (name == "wce" || name == "ce")
      kind = LossKind::wce;
    else if (name == "focal")
      kind = LossKind::focal;
    else if (name == "dice")
      kind = LossKind::dice;
    else
      throw ConfigError("loss spec: unknown component '" + name + "'");
    spec.components.push_back({kind, weight});
  }
  spec.validate();
  return spec;
}

std::string LossSpec::str() const {
  std::ostringstream os;
  for (size_t i = 0; i < components.size(); ++i) {
    if (i) os << "+";
    switch (components[i].kind) {
      case LossKind::wce: os << "wce"; break;
      case LossKind::focal: os << "focal"; break;
      case LossKind::dice: os << "dice"; break;
    }
    os << ":" << components[i].weight;
  }
  return os.str();
}

namespace {

template <typename T>
void check_loss_inputs(const Tensor<T>& logits, const LabelMap& labels) {
  if (logits.rank() != 4)
    throw ShapeError("loss: logits must be [B,C,H,W], got " + shape_str(logits.shape()));
  const Shape expect{logits.dim(0), logits.dim(2), logits.dim(3)};
  if (labels.shape != expect)
    throw ShapeError("loss: labels " + shape_str(labels.shape) + " vs logits " + shape_str(logits.shape()));
}

}  // namespace

template <typename T>
Tensor<T> weighted_cross_entropy(const Tensor<T>& logits, const LabelMap& labels,
                                 const std::vector<double>& class_weights) {
  check_loss_inputs(logits, labels);
  const int64_t ncls = logits.dim(1);
  std::vector<double> w = class_weights;
  if (w.empty()) w.assign(static_cast<size_t>(ncls), 1.0);
  if (static_cast<int64_t>(w.size()) != ncls)
    throw ContractError("weighted_cross_entropy: expected " + std::to_string(ncls) + " class weights");
  for (double v : w)
    if (!(v > 0)) throw ContractError("weighted_cross_entropy: class weights must be > 0");

  Tensor<T> logp = ops::log_softmax(logits, 1);
  Tensor<T> picked = ops::gather_class(logp, labels);  // [B,H,W], validates label range

  Tensor<T> wmap = Tensor<T>::zeros(picked.shape());
  auto wv = wmap.mutable_data();
  for (size_t i = 0; i < wv.size(); ++i) wv[i] = static_cast<T>(w[static_cast<size_t>(labels.values[i])]);

  const T inv_n = T(1) / static_cast<T>(picked.numel());
  return ops::affine(ops::sum(ops::mul(picked, wmap)), -inv_n, T(0));
}

template <typename T>
Tensor<T> focal_loss(const Tensor<T>& logits, const LabelMap& labels, double gamma) {
  check_loss_inputs(logits, labels);
  if (gamma < 0) throw ContractError("focal_loss: gamma must be >= 0");
  Tensor<T> logp = ops::log_softmax(logits, 1);
  Tensor<T> picked = ops::gather_class(logp, labels);          // log p_t
  Tensor<T> one_minus = ops::affine(ops::exp(picked), T(-1), T(1));  // 1 - p_t
  Tensor<T> mod = ops::pow_scalar(one_minus, static_cast<T>(gamma));
  const T inv_n = T(1) / static_cast<T>(picked.numel());
  return ops::affine(ops::sum(ops::mul(mod, picked)), -inv_n, T(0));
}

template <typename T>
Tensor<T> dice_loss(const Tensor<T>& logits, const LabelMap& labels, double smooth) {
  check_loss_inputs(logits, labels);
  const int64_t ncls = logits.dim(1);
  Tensor<T> probs = ops::softmax(logits, 1);
  Tensor<T> acc;
  for (int64_t c = 1; c < ncls; ++c) {
    Tensor<T> pc = ops::select_channel(probs, c);  // [B,H,W]
    Tensor<T> ymask = Tensor<T>::zeros(pc.shape());
    auto yv = ymask.mutable_data();
    double ysum = 0.0;
    for (size_t i = 0; i < yv.size(); ++i) {
      if (labels.values[i] == c) {
        yv[i] = T(1);
        ysum += 1.0;
      }
    }
    Tensor<T> inter = ops::sum(ops::mul(pc, ymask));
    Tensor<T> psum = ops::sum(pc);
    Tensor<T> num = ops::affine(inter, T(2), static_cast<T>(smooth));
    Tensor<T> den = ops::affine(psum, T(1), static_cast<T>(ysum + smooth));
    Tensor<T> dice_c = ops::affine(ops::div(num, den), T(-1), T(1));
    acc = acc.defined() ? ops::add(acc, dice_c) : dice_c;
  }
  return ops::scale(acc, T(1) / static_cast<T>(ncls - 1));
}

template <typename T>
Tensor<T> composite_loss(const LossSpec& spec, const Tensor<T>& logits, const LabelMap& labels,
                         std::vector<std::pair<std::string, double>>* component_values) {
  spec.validate();
  Tensor<T> total;
  for (const auto& comp : spec.components) {
    Tensor<T> value;
    std::string name;
    switch (comp.kind) {
      case LossKind::wce:
        value = weighted_cross_entropy(logits, labels, spec.class_weights);
        name = "wce";
        break;
      case LossKind::focal:
        value = focal_loss(logits, labels, spec.gamma);
        name = "focal";
        break;
      case LossKind::dice:
        value = dice_loss(logits, labels);
        name = "dice";
        break;
    }
    if (component_values) component_values->emplace_back(name, static_cast<double>(value.item()));
    Tensor<T> weighted = comp.weight == 1.0 ? value : ops::scale(value, static_cast<T>(comp.weight));
    total = total.defined() ? ops::add(total, weighted) : weighted;
  }
  return total;
}

std::vector<double> inverse_frequency_weights(const std::vector<const LabelMap*>& labels, int num_classes) {
  std::vector<int64_t> counts(static_cast<size_t>(num_classes), 0);
  int64_t total = 0;
  for (const LabelMap* m : labels) {
    for (int32_t v : m->values) {
      if (v >= 0 && v < num_classes) {
        counts[static_cast<size_t>(v)]++;
        total++;
      }
    }
  }
  std::vector<double> w(static_cast<size_t>(num_classes), 1.0);
  if (total == 0) return w;
  for (int c = 0; c < num_classes; ++c) {
    const double freq = static_cast<double>(counts[static_cast<size_t>(c)]) / static_cast<double>(total);
    w[static_cast<size_t>(c)] = 1.0 / std::max(freq, 1e-6);
  }
  double mean = 0.0;
  for (double v : w) mean += v;
  mean /= static_cast<double>(num_classes);
  for (double& v : w) v /= mean;
  return w;
}

#define SIAMIX_INSTANTIATE_LOSSES(T)                                                          \
  template Tensor<T> weighted_cross_entropy(const Tensor<T>&, const LabelMap&,               \
                                            const std::vector<double>&);                      \
  template Tensor<T> focal_loss(const Tensor<T>&, const LabelMap&, double);                   \
  template Tensor<T> dice_loss(const Tensor<T>&, const LabelMap&, double);                    \
  template Tensor<T> composite_loss(const LossSpec&, const Tensor<T>&, const LabelMap&,       \
                                    std::vector<std::pair<std::string, double>>*);

SIAMIX_INSTANTIATE_LOSSES(float)
SIAMIX_INSTANTIATE_LOSSES(double)

#undef SIAMIX_INSTANTIATE_LOSSES

}  // namespace siamix
