/*
   Copyright 2026 The SpikeForge Authors
   SPDX-License-Identifier: Apache-2.0

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "spikeforge/container.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace spikeforge {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

static_assert(sizeof(float) == 4);

void append_f32(std::vector<char>& blob, double v) {
  const auto bits = std::bit_cast<std::uint32_t>(static_cast<float>(v));
  for (int i = 0; i < 4; ++i) blob.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

void append_f64(std::vector<char>& blob, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) blob.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

double read_f32(const std::vector<char>& blob, std::size_t byte_offset) {
  std::uint32_t bits = 0;
  for (int i = 0; i < 4; ++i) {
    bits |= static_cast<std::uint32_t>(static_cast<unsigned char>(blob[byte_offset + i])) << (8 * i);
  }
  return static_cast<double>(std::bit_cast<float>(bits));
}

double read_f64(const std::vector<char>& blob, std::size_t byte_offset) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) {
    bits |= static_cast<std::uint64_t>(static_cast<unsigned char>(blob[byte_offset + i])) << (8 * i);
  }
  return std::bit_cast<double>(bits);
}

std::size_t width_of(TensorDType dtype) { return dtype == TensorDType::F64 ? 8 : 4; }

const char* dtype_name(TensorDType dtype) { return dtype == TensorDType::F64 ? "f64" : "f32"; }

TensorDType dtype_from_name(const std::string& name) {
  if (name == "f32") return TensorDType::F32;
  if (name == "f64") return TensorDType::F64;
  throw ContainerError("unsupported tensor dtype '" + name + "'");
}

json put_values(std::vector<char>& blob, std::span<const double> values,
                TensorDType dtype = TensorDType::F32) {
  json ref = {{"offset", blob.size()}, {"count", values.size()}};
  for (double v : values) {
    if (dtype == TensorDType::F64) {
      append_f64(blob, v);
    } else {
      append_f32(blob, v);
    }
  }
  return ref;
}

std::vector<double> get_values(const json& ref, const std::vector<char>& blob, std::size_t expected,
                               const std::string& what, TensorDType dtype = TensorDType::F32) {
  const std::size_t width = width_of(dtype);
  const auto offset = ref.at("offset").get<std::uint64_t>();
  const auto count = ref.at("count").get<std::uint64_t>();
  if (count != expected) {
    throw ContainerError(what + ": blob count " + std::to_string(count) + " != expected " +
                         std::to_string(expected));
  }
  if (offset % width != 0 || offset > blob.size() || count > (blob.size() - offset) / width) {
    throw ContainerError(what + ": blob range [" + std::to_string(offset) + ", +" +
                         std::to_string(count * width) + ") outside blob of " +
                         std::to_string(blob.size()) + " bytes");
  }
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = dtype == TensorDType::F64 ? read_f64(blob, offset + 8 * i)
                                       : read_f32(blob, offset + 4 * i);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw ContainerError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw ContainerError("failed writing " + path.string());
}

void write_blob(const fs::path& path, const std::vector<char>& blob) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ContainerError("cannot open " + path.string() + " for writing");
  out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
  if (!out) throw ContainerError("failed writing " + path.string());
}

std::vector<char> read_blob(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContainerError("cannot open blob " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

json read_manifest(const fs::path& path, const char* format) {
  std::ifstream in(path);
  if (!in) throw ContainerError("cannot open manifest " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ContainerError("malformed manifest " + path.string() + ": " + e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != format) {
    throw ContainerError(path.string() + " is not a " + format + " manifest");
  }
  const std::string version = doc.value("version", "");
  if (version.empty()) throw ContainerError(path.string() + ": missing manifest version");
  if (version.substr(0, version.find('.')) != "1") {
    throw ContainerError(path.string() + ": unsupported manifest version " + version);
  }
  return doc;
}

fs::path blob_path_for(const fs::path& manifest) {
  fs::path blob = manifest;
  blob.replace_extension(".bin");
  return blob;
}

std::string shape_json_dims(const Shape& s) { return json(s.dims()).dump(); }

}  // namespace

void write_network(const fs::path& manifest, const NetworkSpec& net) {
  net.validate();
  std::vector<char> blob;
  json layers = json::array();
  for (const LayerSpec& layer : net.layers) {
    const LayerGeometry& g = layer.geometry;
    json entry = {{"kind", std::string(to_string(g.kind))},
                  {"in_channels", g.in_channels},
                  {"out_channels", g.out_channels},
                  {"kernel", g.kernel},
                  {"stride", g.stride},
                  {"padding", g.padding}};
    if (g.kind != LayerKind::AvgPool) entry["weights"] = put_values(blob, layer.weights.data());
    entry["bias"] = put_values(blob, layer.bias);
    if (g.kind == LayerKind::AvgPool) entry["pool_scale"] = layer.pool_scale;
    if (layer.bn) {
      entry["bn"] = {{"gamma", layer.bn->gamma},
                     {"beta", layer.bn->beta},
                     {"mean", layer.bn->mean},
                     {"variance", layer.bn->variance}};
    }
    if (layer.thresholds) entry["thresholds"] = *layer.thresholds;
    if (layer.step_constant) entry["step_constant"] = *layer.step_constant;
    layers.push_back(std::move(entry));
  }
  const fs::path blob_path = blob_path_for(manifest);
  json doc = {{"format", "spikeforge-network"},
              {"version", kManifestVersion},
              {"mode", std::string(to_string(net.mode))},
              {"cfg", {{"t_q", net.cfg.t_q()}, {"t_min", net.cfg.t_min()}, {"t_max", net.cfg.t_max()}}},
              {"blob", blob_path.filename().string()},
              {"blob_bytes", blob.size()},
              {"layers", std::move(layers)}};
  write_blob(blob_path, blob);
  write_text(manifest, doc.dump(2) + "\n");
}

NetworkSpec read_network(const fs::path& manifest) {
  const json doc = read_manifest(manifest, "spikeforge-network");
  try {
    const std::vector<char> blob = read_blob(manifest.parent_path() / doc.at("blob").get<std::string>());
    if (doc.contains("blob_bytes") && doc["blob_bytes"].get<std::uint64_t>() != blob.size()) {
      throw ContainerError("blob size " + std::to_string(blob.size()) + " != manifest blob_bytes");
    }
    const json& cfg = doc.at("cfg");
    NetworkSpec net;
    net.cfg = VRConfig(cfg.at("t_q").get<int>(), cfg.at("t_min").get<int>(), cfg.at("t_max").get<int>());
    net.mode = network_mode_from_string(doc.at("mode").get<std::string>());
    std::size_t index = 0;
    for (const json& entry : doc.at("layers")) {
      const std::string where = "layer " + std::to_string(index++);
      LayerSpec layer;
      LayerGeometry& g = layer.geometry;
      g.kind = layer_kind_from_string(entry.at("kind").get<std::string>());
      g.in_channels = entry.at("in_channels").get<std::size_t>();
      g.out_channels = entry.at("out_channels").get<std::size_t>();
      g.kernel = entry.at("kernel").get<std::size_t>();
      g.stride = entry.at("stride").get<std::size_t>();
      g.padding = entry.at("padding").get<std::size_t>();
      g.validate();
      if (g.kind != LayerKind::AvgPool) {
        const Shape ws = g.weight_shape();
        layer.weights = Tensor(ws, get_values(entry.at("weights"), blob, ws.size(), where + " weights"));
      }
      layer.bias = get_values(entry.at("bias"), blob, g.out_channels, where + " bias");
      if (entry.contains("pool_scale")) layer.pool_scale = entry["pool_scale"].get<double>();
      if (entry.contains("bn")) {
        const json& bn = entry["bn"];
        layer.bn = BatchNormParams{bn.at("gamma").get<std::vector<double>>(),
                                   bn.at("beta").get<std::vector<double>>(),
                                   bn.at("mean").get<std::vector<double>>(),
                                   bn.at("variance").get<std::vector<double>>()};
      }
      if (entry.contains("thresholds")) {
        layer.thresholds = entry["thresholds"].get<std::vector<double>>();
      }
      if (entry.contains("step_constant")) {
        layer.step_constant = entry["step_constant"].get<std::vector<double>>();
      }
      net.layers.push_back(std::move(layer));
    }
    net.validate();
    return net;
  } catch (const ContainerError&) {
    throw;
  } catch (const json::exception& e) {
    throw ContainerError(manifest.string() + ": " + e.what());
  } catch (const std::exception& e) {
    throw ContainerError(manifest.string() + ": " + e.what());
  }
}

void write_tensor(const fs::path& manifest, const Tensor& tensor, TensorDType dtype) {
  std::vector<char> blob;
  json ref = put_values(blob, tensor.data(), dtype);
  const fs::path blob_path = blob_path_for(manifest);
  json doc = {{"format", "spikeforge-tensor"},
              {"version", kManifestVersion},
              {"shape", tensor.shape().dims()},
              {"dtype", dtype_name(dtype)},
              {"blob", blob_path.filename().string()},
              {"data", std::move(ref)}};
  write_blob(blob_path, blob);
  write_text(manifest, doc.dump(2) + "\n");
}

Tensor read_tensor(const fs::path& manifest) {
  const json doc = read_manifest(manifest, "spikeforge-tensor");
  try {
    const auto dims = doc.at("shape").get<std::vector<std::size_t>>();
    if (dims.size() != 4) throw ContainerError("tensor shape must have 4 extents, got " +
                                               json(dims).dump());
    const Shape shape{dims[0], dims[1], dims[2], dims[3]};
    const TensorDType dtype =
        doc.contains("dtype") ? dtype_from_name(doc["dtype"].get<std::string>()) : TensorDType::F32;
    const std::vector<char> blob = read_blob(manifest.parent_path() / doc.at("blob").get<std::string>());
    return Tensor(shape, get_values(doc.at("data"), blob, shape.size(),
                                    "tensor " + shape_json_dims(shape), dtype));
  } catch (const ContainerError&) {
    throw;
  } catch (const std::exception& e) {
    throw ContainerError(manifest.string() + ": " + e.what());
  }
}

std::vector<int> read_labels(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ContainerError("cannot open labels " + path.string());
  std::vector<int> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r,");
    if (first == std::string::npos) continue;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) {
      const auto b = field.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto e = field.find_last_not_of(" \t\r");
      try {
        std::size_t used = 0;
        const std::string token = field.substr(b, e - b + 1);
        const int v = std::stoi(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        labels.push_back(v);
      } catch (const std::exception&) {
        throw ContainerError(path.string() + ":" + std::to_string(lineno) + ": bad label '" + field + "'");
      }
    }
  }
  return labels;
}

void write_labels(const fs::path& path, const std::vector<int>& labels) {
  std::ostringstream out;
  for (int l : labels) out << l << '\n';
  write_text(path, out.str());
}

}  // namespace spikeforge
