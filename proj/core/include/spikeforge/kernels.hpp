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

#include <span>
#include <string_view>

#include "spikeforge/tensor.hpp"

namespace spikeforge {

enum class LayerKind { Conv2d, Dense, AvgPool };

std::string_view to_string(LayerKind kind);
LayerKind layer_kind_from_string(std::string_view name);

/// Static description of one layer's connectivity.
///
/// For Dense layers `kernel` is 1 and `in_channels` is the flattened input
/// length. For AvgPool layers in/out channels are equal and `kernel` is the
/// pooling window.
struct LayerGeometry {
  LayerKind kind = LayerKind::Conv2d;
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;

  /// Throws std::invalid_argument when an extent is out of range.
  void validate() const;

  /// Expected weight tensor shape; zero-sized for AvgPool.
  Shape weight_shape() const;

  /// Output shape for a given input shape, throwing ShapeError on mismatch.
  Shape output_shape(const Shape& input) const;

  friend bool operator==(const LayerGeometry&, const LayerGeometry&) = default;
};

/// Zero-padded 2-D convolution; weights are (out, in, k, k).
Tensor conv2d_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias,
                      const LayerGeometry& geometry);

/// Fully connected layer over the flattened (C, H, W) item; weights are
/// (out, in, 1, 1) and the result is (N, out, 1, 1).
Tensor dense_forward(const Tensor& input, const Tensor& weights, std::span<const double> bias);

/// Mean over each `window` x `window` patch, per channel.
Tensor avgpool_forward(const Tensor& input, std::size_t window, std::size_t stride);

}  // namespace spikeforge
