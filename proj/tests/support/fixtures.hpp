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

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "spikeforge/network.hpp"
#include "spikeforge/tensor.hpp"

namespace spikeforge::testing {

struct FixtureOptions {
  std::size_t min_layers = 2;
  std::size_t max_layers = 4;
  std::size_t max_channels = 16;
  std::size_t input_channels = 2;
  std::size_t input_size = 8;
  std::size_t classes = 10;
  bool batch_norm = false;
  /// Multiplier on the uniform(+-1/sqrt(fan_in)) weight draw.
  double weight_gain = 0.5;
};

/// Seeded random ANN-mode network of conv / dense / avgpool layers ending in
/// a dense classifier. Every parameter is float32-representable.
NetworkSpec random_network(std::uint64_t seed, const VRConfig& cfg, const FixtureOptions& options);

/// Fixed four-layer VGG-style net: conv3x3 -> avgpool2 -> conv3x3 -> dense.
NetworkSpec vgg_tiny(std::uint64_t seed, const VRConfig& cfg, bool batch_norm);

/// Random batch on the VR grid of `cfg`.
Tensor random_grid_input(std::mt19937_64& rng, const Shape& shape, const VRConfig& cfg);

/// Random batch in [0, 1].
Tensor random_unit_input(std::mt19937_64& rng, const Shape& shape);

Tensor random_tensor(std::mt19937_64& rng, const Shape& shape, double lo, double hi);

/// Naive reference kernels, written independently of the library loops.
Tensor naive_conv2d(const Tensor& input, const Tensor& weights, const std::vector<double>& bias,
                    std::size_t stride, std::size_t padding);
Tensor naive_dense(const Tensor& input, const Tensor& weights, const std::vector<double>& bias);
Tensor naive_avgpool(const Tensor& input, std::size_t window, std::size_t stride);

double max_abs_diff(const Tensor& a, const Tensor& b);

/// Directory holding the committed fixture files.
std::string fixture_dir();

}  // namespace spikeforge::testing
