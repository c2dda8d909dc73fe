#pragma once

#include <functional>
#include <vector>

#include "siamix/ops.hpp"

namespace siamix {

// Central-difference gradient verification. f must be a pure scalar-valued
// function of the input values. Returns the max over elements of
// |analytic - numeric| / max(|numeric|, 1e-8). Throws NumericError if either
// gradient contains a NaN. Run in double for tight tolerances.
template <typename T>
double grad_check(const std::function<Tensor<T>(std::vector<Tensor<T>>&)>& f,
                  std::vector<Tensor<T>> inputs, T eps);

extern template double grad_check(const std::function<Tensor<float>(std::vector<Tensor<float>>&)>&,
                                  std::vector<Tensor<float>>, float);
extern template double grad_check(const std::function<Tensor<double>(std::vector<Tensor<double>>&)>&,
                                  std::vector<Tensor<double>>, double);

}  // namespace siamix
