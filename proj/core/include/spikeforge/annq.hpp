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
#include <span>
#include <stdexcept>
#include <vector>

#include "spikeforge/tensor.hpp"

namespace spikeforge {

struct NetworkSpec;

/// Raised for a quantization triple violating 0 <= T_min < T_max <= T_q.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Value-range quantization triple.
///
/// Activations live on the grid {T_min/T_q, ..., T_max/T_q}; a grid value
/// with level L is carried in the SNN by L - T_min spikes over a window of
/// T = T_max - T_min steps, fired at threshold T / T_q.
class VRConfig {
 public:
  VRConfig(int t_q, int t_min, int t_max);

  int t_q() const { return t_q_; }
  int t_min() const { return t_min_; }
  int t_max() const { return t_max_; }
  int window() const { return t_max_ - t_min_; }
  double theta() const { return static_cast<double>(window()) / t_q_; }

  double lower_rail() const { return static_cast<double>(t_min_) / t_q_; }
  double upper_rail() const { return static_cast<double>(t_max_) / t_q_; }

  /// Grid value carried by `count` spikes: (count + T_min) / T_q.
  double decode(int count) const { return static_cast<double>(count + t_min_) / t_q_; }

  /// Spike count of a grid value; nullopt if `x` is off-grid beyond the snap
  /// tolerance or outside the rails.
  std::optional<int> count_of(double x) const;

  friend bool operator==(const VRConfig&, const VRConfig&) = default;

 private:
  int t_q_;
  int t_min_;
  int t_max_;
};

inline constexpr double kBatchNormEpsilon = 1e-5;

struct BatchNormParams {
  std::vector<double> gamma;
  std::vector<double> beta;
  std::vector<double> mean;
  std::vector<double> variance;

  std::size_t channels() const { return gamma.size(); }
  void validate(std::size_t channels) const;

  /// Inference-time BN applied to a (N, C, H, W) tensor.
  Tensor apply(const Tensor& x) const;

  friend bool operator==(const BatchNormParams&, const BatchNormParams&) = default;
};

/// Clamp every element into [T_min/T_q, T_max/T_q].
Tensor clamp(const Tensor& x, const VRConfig& cfg);

/// floor(x * T_q) / T_q with near-integer snapping.
Tensor quantize(const Tensor& x, const VRConfig& cfg);

struct FoldedLayer {
  Tensor weights;
  std::vector<double> bias;
};

/// Merge inference BN into the preceding linear layer. Weights are scaled
/// per out-channel (the leading axis).
FoldedLayer fold_batchnorm(const Tensor& weights, std::span<const double> bias,
                           const BatchNormParams& bn);

/// Fold every layer's BN and clear it.
NetworkSpec fold_network(const NetworkSpec& net);

/// Activations of a quantized-ANN pass: one entry per hidden layer (clamped
/// and quantized) followed by the raw classifier output.
struct AnnTrace {
  std::vector<Tensor> hidden;
  Tensor logits;
};

/// Quantized-ANN forward pass: linear -> clamp -> quantize on every layer
/// but the last, whose output is returned raw.
Tensor ann_forward(const NetworkSpec& net, const Tensor& input, const VRConfig& cfg);
AnnTrace ann_forward_trace(const NetworkSpec& net, const Tensor& input, const VRConfig& cfg);

/// True if every element lies on the VR grid.
bool on_grid(const Tensor& x, const VRConfig& cfg);

}  // namespace spikeforge
