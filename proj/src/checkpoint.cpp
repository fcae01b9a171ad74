#include "helmpinn/checkpoint.hpp"

#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace helmpinn {

namespace {

template <typename T>
void put(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <typename T>
void get(std::ifstream& in, T& v) {
  in.read(reinterpret_cast<char*>(&v), sizeof v);
}

} // namespace

void save_checkpoint(const std::string& path, const ParameterVector& params,
                     const NetworkSpec& spec) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const char magic[4] = {'H', 'P', 'C', 'K'};
  out.write(magic, 4);
  put(out, std::uint32_t{1});
  put(out, spec.architecture_hash());
  put(out, spec.init_seed);
  put(out, static_cast<std::uint32_t>(params.layout.layers.size()));
  for (const LayerExtent& ext : params.layout.layers) {
    put(out, static_cast<std::uint32_t>(ext.in));
    put(out, static_cast<std::uint32_t>(ext.out));
  }
  put(out, static_cast<std::uint64_t>(params.values.size()));
  out.write(reinterpret_cast<const char*>(params.values.data()),
            static_cast<std::streamsize>(params.values.size() *
                                         sizeof(double)));
  out.write(reinterpret_cast<const char*>(params.trainable.data()),
            static_cast<std::streamsize>(params.trainable.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

ParameterVector load_checkpoint(const std::string& path,
                                const NetworkSpec& expected_spec) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::string(magic, 4) != "HPCK")
    throw std::runtime_error("not a checkpoint file: " + path);
  std::uint32_t version = 0;
  get(in, version);
  if (version != 1)
    throw std::runtime_error("unsupported checkpoint version " +
                             std::to_string(version));
  std::uint64_t hash = 0, init_seed = 0;
  get(in, hash);
  get(in, init_seed);
  if (hash != expected_spec.architecture_hash())
    throw std::runtime_error(
        "checkpoint architecture does not match the configured network");

  ParameterVector params;
  params.layout = ParameterLayout::from_spec(expected_spec);
  std::uint32_t layer_count = 0;
  get(in, layer_count);
  if (layer_count != params.layout.layers.size())
    throw std::runtime_error("checkpoint layer table mismatch");
  for (const LayerExtent& ext : params.layout.layers) {
    std::uint32_t lin = 0, lout = 0;
    get(in, lin);
    get(in, lout);
    if (lin != static_cast<std::uint32_t>(ext.in) ||
        lout != static_cast<std::uint32_t>(ext.out))
      throw std::runtime_error("checkpoint layer table mismatch");
  }
  std::uint64_t total = 0;
  get(in, total);
  if (total != static_cast<std::uint64_t>(params.layout.total))
    throw std::runtime_error("checkpoint parameter count mismatch");
  params.values.resize(static_cast<Eigen::Index>(total));
  params.trainable.resize(total);
  in.read(reinterpret_cast<char*>(params.values.data()),
          static_cast<std::streamsize>(total * sizeof(double)));
  in.read(reinterpret_cast<char*>(params.trainable.data()),
          static_cast<std::streamsize>(total));
  if (!in) throw std::runtime_error("truncated checkpoint: " + path);
  return params;
}

} // namespace helmpinn
