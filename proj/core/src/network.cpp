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

#include "spikeforge/network.hpp"

#include <string>

namespace spikeforge {

std::string_view to_string(NetworkMode mode) { return mode == NetworkMode::Ann ? "ann" : "snn"; }

NetworkMode network_mode_from_string(std::string_view name) {
  if (name == "ann") return NetworkMode::Ann;
  if (name == "snn") return NetworkMode::Snn;
  throw std::invalid_argument("unknown network mode '" + std::string(name) + "'");
}

namespace {

void check_length(std::size_t got, std::size_t want, std::size_t layer, const char* what) {
  if (got != want) {
    throw ShapeError("layer " + std::to_string(layer) + ": " + what + " length " +
                     std::to_string(got) + " != out_channels " + std::to_string(want));
  }
}

}  // namespace

void NetworkSpec::validate() const {
  if (layers.empty()) throw std::invalid_argument("network has no layers");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const LayerSpec& l = layers[i];
    l.geometry.validate();
    const std::size_t out = l.geometry.out_channels;
    if (l.geometry.kind != LayerKind::AvgPool && l.weights.shape() != l.geometry.weight_shape()) {
      throw ShapeError("layer " + std::to_string(i) + ": weight shape " + l.weights.shape().str() +
                       " != expected " + l.geometry.weight_shape().str());
    }
    check_length(l.bias.size(), out, i, "bias");
    if (l.bn) {
      if (l.geometry.kind == LayerKind::AvgPool) {
        throw std::invalid_argument("layer " + std::to_string(i) +
                                    ": batch norm after avgpool is not supported");
      }
      l.bn->validate(out);
    }
    if (l.thresholds) {
      check_length(l.thresholds->size(), out, i, "thresholds");
      for (double t : *l.thresholds) {
        if (!(t > 0.0)) {
          throw std::invalid_argument("layer " + std::to_string(i) +
                                      ": thresholds must be strictly positive");
        }
      }
    }
    if (l.step_constant) check_length(l.step_constant->size(), out, i, "step_constant");
    if (mode == NetworkMode::Snn && !is_classifier(i) && (!l.thresholds || !l.step_constant)) {
      throw std::invalid_argument("layer " + std::to_string(i) +
                                  ": SNN spiking layer lacks thresholds or step constants");
    }
  }
}

Tensor linear_forward(const LayerSpec& layer, const Tensor& input, std::span<const double> bias) {
  switch (layer.geometry.kind) {
    case LayerKind::Conv2d: return conv2d_forward(input, layer.weights, bias, layer.geometry);
    case LayerKind::Dense: return dense_forward(input, layer.weights, bias);
    case LayerKind::AvgPool: {
      layer.geometry.output_shape(input.shape());
      Tensor out = avgpool_forward(input, layer.geometry.kernel, layer.geometry.stride);
      if (bias.size() != out.shape().c) {
        throw ShapeError("avgpool bias length " + std::to_string(bias.size()) +
                         " != channels " + std::to_string(out.shape().c));
      }
      const Shape& s = out.shape();
      auto d = out.mutable_data();
      for (std::size_t n = 0; n < s.n; ++n) {
        for (std::size_t c = 0; c < s.c; ++c) {
          double* p = d.data() + s.offset(n, c, 0, 0);
          for (std::size_t i = 0; i < s.spatial(); ++i) p[i] = layer.pool_scale * p[i] + bias[c];
        }
      }
      out.require_finite("avgpool layer");
      return out;
    }
  }
  throw std::invalid_argument("unsupported layer kind");
}

Tensor linear_forward(const LayerSpec& layer, const Tensor& input) {
  return linear_forward(layer, input, layer.bias);
}

std::vector<Shape> layer_shapes(const NetworkSpec& net, const Shape& input) {
  std::vector<Shape> shapes;
  Shape s = input;
  for (const LayerSpec& l : net.layers) {
    s = l.geometry.output_shape(s);
    shapes.push_back(s);
  }
  return shapes;
}

}  // namespace spikeforge
