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

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "spikeforge/annq.hpp"
#include "spikeforge/kernels.hpp"
#include "spikeforge/tensor.hpp"

namespace spikeforge {

enum class NetworkMode { Ann, Snn };

std::string_view to_string(NetworkMode mode);
NetworkMode network_mode_from_string(std::string_view name);

/// One layer of a network.
///
/// AvgPool layers carry no weight tensor; their linear map is
/// `pool_scale * mean(window) + bias`. `pool_scale` is 1 in ANN mode and
/// T/T_q after conversion.
struct LayerSpec {
  LayerGeometry geometry;
  Tensor weights;
  std::vector<double> bias;
  std::optional<BatchNormParams> bn;
  std::optional<std::vector<double>> thresholds;
  std::optional<std::vector<double>> step_constant;
  double pool_scale = 1.0;

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct NetworkSpec {
  std::vector<LayerSpec> layers;
  VRConfig cfg{1, 0, 1};
  NetworkMode mode = NetworkMode::Ann;

  /// The last layer accumulates instead of spiking.
  std::size_t classifier_index() const { return layers.size() - 1; }
  bool is_classifier(std::size_t index) const { return index + 1 == layers.size(); }

  /// Checks layer shapes and the SNN-mode population invariants.
  void validate() const;

  friend bool operator==(const NetworkSpec&, const NetworkSpec&) = default;
};

/// Affine part of a layer (no activation), dispatching on its kind.
Tensor linear_forward(const LayerSpec& layer, const Tensor& input);

/// Same map with the bias replaced by `bias`.
Tensor linear_forward(const LayerSpec& layer, const Tensor& input, std::span<const double> bias);

/// Per-layer output shapes for an input shape.
std::vector<Shape> layer_shapes(const NetworkSpec& net, const Shape& input);

}  // namespace spikeforge
