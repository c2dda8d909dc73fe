#include "siamix/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace siamix {

namespace {

constexpr char kMagic[] = "SIAMIXCKPT1\n";

void write_u32(std::ostream& os, uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void write_i64(std::ostream& os, int64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

uint32_t read_u32(std::istream& is) {
  uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}
int64_t read_i64(std::istream& is) {
  int64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

void write_entry(std::ostream& os, const std::string& name, const Shape& shape,
                 const float* data, int64_t count) {
  write_u32(os, static_cast<uint32_t>(name.size()));
  os.write(name.data(), static_cast<std::streamsize>(name.size()));
  os.put(static_cast<char>(0));  // dtype 0 = f32
  write_u32(os, static_cast<uint32_t>(shape.size()));
  for (int64_t d : shape) write_i64(os, d);
  os.write(reinterpret_cast<const char*>(data), count * 4);
}

struct Entry {
  std::string name;
  Shape shape;
  std::vector<float> data;
};

Entry read_entry(std::istream& is) {
  Entry e;
  const uint32_t name_len = read_u32(is);
  e.name.resize(name_len);
  is.read(e.name.data(), name_len);
  const int dtype = is.get();
  if (dtype != 0) throw DataError("checkpoint: unsupported dtype " + std::to_string(dtype));
  const uint32_t rank = read_u32(is);
  e.shape.resize(rank);
  for (uint32_t i = 0; i < rank; ++i) e.shape[i] = read_i64(is);
  e.data.resize(static_cast<size_t>(shape_numel(e.shape)));
  is.read(reinterpret_cast<char*>(e.data.data()), static_cast<std::streamsize>(e.data.size() * 4));
  if (!is) throw DataError("checkpoint: truncated entry '" + e.name + "'");
  return e;
}

nlohmann::json meta_to_json(const CheckpointMeta& meta) {
  return {{"format", 1},
          {"variant", meta.variant},
          {"num_classes", meta.num_classes},
          {"seed", meta.seed},
          {"shared_encoders", meta.shared_encoders},
          {"iteration", meta.iteration},
          {"config_hash", meta.config_hash}};
}

CheckpointMeta meta_from_json(const nlohmann::json& j) {
  CheckpointMeta m;
  m.variant = j.at("variant").get<std::string>();
  m.num_classes = j.at("num_classes").get<int>();
  m.seed = j.at("seed").get<uint64_t>();
  m.shared_encoders = j.value("shared_encoders", false);
  m.iteration = j.at("iteration").get<int64_t>();
  m.config_hash = j.value("config_hash", "");
  return m;
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

template <typename T>
std::vector<std::pair<std::string, Tensor<T>>> collect_params(Model<T>& model) {
  std::vector<std::pair<std::string, Tensor<T>>> out;
  model.visit_params([&](const std::string& name, Tensor<T>& t) { out.emplace_back(name, t); });
  return out;
}

void save_checkpoint(Model<float>& model, const OptimState<float>* optim,
                     const CheckpointMeta& meta, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot write checkpoint: " + path);
  os.write(kMagic, sizeof(kMagic) - 1);
  const std::string meta_text = meta_to_json(meta).dump();
  write_u32(os, static_cast<uint32_t>(meta_text.size()));
  os.write(meta_text.data(), static_cast<std::streamsize>(meta_text.size()));

  auto params = collect_params(model);
  uint32_t count = static_cast<uint32_t>(params.size());
  if (optim) count += static_cast<uint32_t>(2 * params.size());
  write_u32(os, count);
  for (auto& [name, t] : params)
    write_entry(os, name, t.shape(), t.data().data(), t.numel());
  if (optim) {
    if (optim->m.size() != params.size())
      throw ContractError("save_checkpoint: optimizer state does not match parameter list");
    for (size_t i = 0; i < params.size(); ++i) {
      const Shape& s = params[i].second.shape();
      write_entry(os, "optim.m." + params[i].first, s, optim->m[i].data(),
                  static_cast<int64_t>(optim->m[i].size()));
      write_entry(os, "optim.v." + params[i].first, s, optim->v[i].data(),
                  static_cast<int64_t>(optim->v[i].size()));
    }
  }
  if (!os) throw DataError("checkpoint write failed: " + path);
}

namespace {

CheckpointMeta read_header(std::istream& is, const std::string& path) {
  char magic[sizeof(kMagic) - 1];
  is.read(magic, sizeof(magic));
  if (!is || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw DataError("not a checkpoint file: " + path);
  const uint32_t meta_len = read_u32(is);
  std::string meta_text(meta_len, '\0');
  is.read(meta_text.data(), meta_len);
  return meta_from_json(nlohmann::json::parse(meta_text));
}

}  // namespace

CheckpointMeta peek_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint: " + path);
  return read_header(is, path);
}

void load_checkpoint_into(Model<float>& model, const std::string& path,
                          OptimState<float>* optim_out, CheckpointMeta* meta_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint: " + path);
  const CheckpointMeta meta = read_header(is, path);
  if (meta.variant != model.spec.name)
    throw ContractError("checkpoint variant '" + meta.variant + "' does not match model '" +
                        model.spec.name + "'");
  if (meta.num_classes != model.num_classes)
    throw ContractError("checkpoint num_classes " + std::to_string(meta.num_classes) +
                        " does not match model " + std::to_string(model.num_classes));

  auto params = collect_params(model);
  if (optim_out) {
    optim_out->init(params);
    optim_out->step = meta.iteration;
  }

  const uint32_t count = read_u32(is);
  size_t loaded = 0;
  for (uint32_t i = 0; i < count; ++i) {
    Entry e = read_entry(is);
    const bool is_m = e.name.rfind("optim.m.", 0) == 0;
    const bool is_v = e.name.rfind("optim.v.", 0) == 0;
    if (is_m || is_v) {
      if (!optim_out) continue;
      const std::string pname = e.name.substr(8);
      bool found = false;
      for (size_t pi = 0; pi < params.size(); ++pi) {
        if (params[pi].first == pname) {
          auto& buf = is_m ? optim_out->m[pi] : optim_out->v[pi];
          if (buf.size() != e.data.size()) throw DataError("checkpoint: size mismatch for " + e.name);
          buf = std::move(e.data);
          found = true;
          break;
        }
      }
      if (!found) throw DataError("checkpoint: unknown optimizer entry " + e.name);
      continue;
    }
    bool found = false;
    for (auto& [name, t] : params) {
      if (name == e.name) {
        if (!same_shape(t.shape(), e.shape))
          throw DataError("checkpoint: shape mismatch for " + e.name + ": " + shape_str(e.shape) +
                          " vs " + shape_str(t.shape()));
        auto dst = t.mutable_data();
        std::copy(e.data.begin(), e.data.end(), dst.begin());
        found = true;
        loaded++;
        break;
      }
    }
    if (!found) throw DataError("checkpoint: unknown parameter entry " + e.name);
  }
  if (loaded != params.size())
    throw DataError("checkpoint: " + std::to_string(params.size() - loaded) + " parameters missing");
  if (meta_out) *meta_out = meta;
}

Model<float> load_checkpoint(const std::string& path, OptimState<float>* optim_out,
                             CheckpointMeta* meta_out) {
  const CheckpointMeta meta = peek_checkpoint(path);
  Model<float> model = build<float>(meta.variant, meta.num_classes, meta.seed, meta.shared_encoders);
  load_checkpoint_into(model, path, optim_out, meta_out);
  return model;
}

template std::vector<std::pair<std::string, Tensor<float>>> collect_params(Model<float>&);
template std::vector<std::pair<std::string, Tensor<double>>> collect_params(Model<double>&);

}  // namespace siamix
