#pragma once

#include <utility>
#include <vector>

#include "siamix/ops.hpp"

namespace siamix {

enum class LossKind { wce, focal, dice };

struct LossComponent {
  LossKind kind;
  double weight = 1.0;
};

struct LossSpec {
  std::vector<LossComponent> components;
  std::vector<double> class_weights;  // wce only; empty means uniform
  double gamma = 2.0;                 // focal modulation

  void validate() const;
  // e.g. "dice:1+focal:1", "wce", "wce:0.5+dice:2"
  static LossSpec parse(const std::string& text);
  std::string str() const;
};

// mean over pixels of w[label] * (-log softmax probability of the label)
template <typename T>
Tensor<T> weighted_cross_entropy(const Tensor<T>& logits, const LabelMap& labels,
                                 const std::vector<double>& class_weights);

// mean over pixels of (1 - p_t)^gamma * (-log p_t)
template <typename T>
Tensor<T> focal_loss(const Tensor<T>& logits, const LabelMap& labels, double gamma);

// global soft dice over the foreground class(es): 1 - (2*sum(y*p)+s)/(sum y + sum p + s),
// averaged over classes 1..N_cls-1
template <typename T>
Tensor<T> dice_loss(const Tensor<T>& logits, const LabelMap& labels, double smooth = 1.0);

template <typename T>
Tensor<T> composite_loss(const LossSpec& spec, const Tensor<T>& logits, const LabelMap& labels,
                         std::vector<std::pair<std::string, double>>* component_values = nullptr);

// inverse class frequency over a label collection, normalized to mean 1
std::vector<double> inverse_frequency_weights(const std::vector<const LabelMap*>& labels, int num_classes);

}  // namespace siamix
