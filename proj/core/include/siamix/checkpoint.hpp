#pragma once

#include "siamix/model.hpp"
#include "siamix/optim.hpp"

namespace siamix {

struct CheckpointMeta {
  std::string variant;
  int num_classes = 2;
  uint64_t seed = 0;
  bool shared_encoders = false;
  int64_t iteration = 0;
  std::string config_hash;
};

// Flat archive: magic, JSON text header, then named entries of
// (dtype, shape, little-endian scalar payload). Round-trips are bitwise.
void save_checkpoint(Model<float>& model, const OptimState<float>* optim,
                     const CheckpointMeta& meta, const std::string& path);

CheckpointMeta peek_checkpoint(const std::string& path);

// builds the stored variant and restores every parameter (and moment buffers
// when present)
Model<float> load_checkpoint(const std::string& path, OptimState<float>* optim_out = nullptr,
                             CheckpointMeta* meta_out = nullptr);

// restores into an existing model; the stored variant name must match
void load_checkpoint_into(Model<float>& model, const std::string& path,
                          OptimState<float>* optim_out = nullptr, CheckpointMeta* meta_out = nullptr);

// FNV-1a hex digest used for config fingerprints in checkpoints and manifests
std::string fnv1a_hex(const std::string& text);

// named parameter list in fixed visitation order
template <typename T>
std::vector<std::pair<std::string, Tensor<T>>> collect_params(Model<T>& model);

extern template std::vector<std::pair<std::string, Tensor<float>>> collect_params(Model<float>&);
extern template std::vector<std::pair<std::string, Tensor<double>>> collect_params(Model<double>&);

}  // namespace siamix
