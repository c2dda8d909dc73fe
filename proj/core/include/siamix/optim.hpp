#pragma once

#include <string>
#include <utility>
#include <vector>

#include "siamix/tensor.hpp"

namespace siamix {

// lr0 * (1 - t/T)^power; contract: 0 <= t <= T
double poly_lr(double lr0, int64_t t, int64_t total, double power);

struct AdamWConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

// First/second moment buffers aligned with a fixed parameter list.
template <typename T>
struct OptimState {
  AdamWConfig cfg;
  int64_t step = 0;
  std::vector<std::vector<T>> m;
  std::vector<std::vector<T>> v;

  void init(const std::vector<std::pair<std::string, Tensor<T>>>& params) {
    m.clear();
    v.clear();
    for (const auto& [name, t] : params) {
      m.emplace_back(static_cast<size_t>(t.numel()), T(0));
      v.emplace_back(static_cast<size_t>(t.numel()), T(0));
    }
  }
};

// One AdamW update from the parameters' accumulated grads: decoupled weight
// decay (theta -= lr*wd*theta) plus the bias-corrected Adam term. Throws
// NumericError on a NaN gradient, naming the parameter.
template <typename T>
void adamw_step(std::vector<std::pair<std::string, Tensor<T>>>& params, OptimState<T>& state, double lr);

extern template void adamw_step(std::vector<std::pair<std::string, Tensor<float>>>&, OptimState<float>&, double);
extern template void adamw_step(std::vector<std::pair<std::string, Tensor<double>>>&, OptimState<double>&, double);

}  // namespace siamix
