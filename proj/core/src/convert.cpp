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

#include "spikeforge/convert.hpp"

#include <string>

namespace spikeforge {

Tensor convert_weights(const Tensor& w, const VRConfig& cfg) {
  const double scale = layer_threshold(cfg);
  Tensor out = w;
  for (double& v : out.mutable_data()) v *= scale;
  return out;
}

std::vector<double> convert_bias(std::span<const double> b, const Tensor& w, const VRConfig& cfg) {
  const std::size_t out_channels = w.shape().n;
  if (b.size() != out_channels) {
    throw ShapeError("bias length " + std::to_string(b.size()) + " != weight out-channels " +
                     std::to_string(out_channels));
  }
  const double offset = cfg.lower_rail();
  const std::size_t per_channel = w.shape().per_item();
  const auto wd = w.data();
  std::vector<double> out(b.begin(), b.end());
  for (std::size_t c = 0; c < out_channels; ++c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < per_channel; ++i) sum += wd[c * per_channel + i];
    out[c] += offset * sum;
  }
  return out;
}

double layer_threshold(const VRConfig& cfg) { return cfg.theta(); }

std::vector<double> step_constant(std::span<const double> b_hat, const VRConfig& cfg) {
  const double offset = cfg.lower_rail();
  std::vector<double> out(b_hat.begin(), b_hat.end());
  for (double& v : out) v -= offset;
  return out;
}

NetworkSpec convert_network(const NetworkSpec& ann) {
  if (ann.mode != NetworkMode::Ann) throw std::invalid_argument("convert_network expects an ANN-mode network");
  ann.validate();
  const VRConfig& cfg = ann.cfg;
  const double theta = layer_threshold(cfg);

  NetworkSpec snn;
  snn.cfg = cfg;
  snn.mode = NetworkMode::Snn;
  snn.layers.reserve(ann.layers.size());
  for (std::size_t i = 0; i < ann.layers.size(); ++i) {
    const LayerSpec& src = ann.layers[i];
    if (src.bn) {
      throw std::invalid_argument("layer " + std::to_string(i) +
                                  ": fold batch norm before conversion");
    }
    LayerSpec dst;
    dst.geometry = src.geometry;
    switch (src.geometry.kind) {
      case LayerKind::Conv2d:
      case LayerKind::Dense:
        dst.weights = convert_weights(src.weights, cfg);
        dst.bias = convert_bias(src.bias, src.weights, cfg);
        break;
      case LayerKind::AvgPool:
        // Each output reads one input channel through weights summing to pool_scale.
        dst.pool_scale = src.pool_scale * theta;
        dst.bias = src.bias;
        for (double& b : dst.bias) b += cfg.lower_rail() * src.pool_scale;
        break;
    }
    dst.step_constant = step_constant(dst.bias, cfg);
    if (!ann.is_classifier(i)) {
      dst.thresholds = std::vector<double>(dst.geometry.out_channels, theta);
    }
    snn.layers.push_back(std::move(dst));
  }
  return snn;
}

}  // namespace spikeforge
