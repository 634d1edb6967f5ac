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
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "spikeforge/network.hpp"
#include "spikeforge/tensor.hpp"

namespace spikeforge {

/// Raised when threshold training is given no calibration data.
class EmptyCalibrationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr double kMinThreshold = 1e-6;

struct CttConfig {
  /// Learning rate per spatial site; ctt_train divides it by
  /// (calibration items x spatial size) because losses are summed.
  double lr = 1e-3;
  int epochs = 50;
  /// Overrides every spiking layer's starting threshold when set.
  std::optional<double> init_theta;

  void validate() const;
};

/// Per spiking layer (classifier excluded), per out-channel thresholds.
using ThresholdMap = std::vector<std::vector<double>>;

/// Per-channel difference of window spike totals, ASG at T/T_q minus IF at
/// `theta_if`, summed over batch and spatial sites.
std::vector<double> ctt_loss(const SpikeTrain& layer_input, const LayerSpec& layer,
                             std::span<const double> theta_if, const VRConfig& cfg);

/// theta' = max(kMinThreshold, theta - lr * loss), element-wise.
std::vector<double> ctt_update(std::span<const double> theta, std::span<const double> loss,
                               double lr);

/// Per-layer CTT losses of `net` as deployed: each spiking layer is fed by
/// the causal IF pass through the layers before it.
std::vector<std::vector<double>> ctt_layer_losses(const NetworkSpec& net,
                                                  std::span<const Tensor> calib);

/// Mean of |L| over every channel of every spiking layer.
double mean_abs_loss(const std::vector<std::vector<double>>& losses);

struct CttResult {
  ThresholdMap thresholds;
  double initial_mean_abs_loss = 0.0;
  double final_mean_abs_loss = 0.0;
  /// Epochs actually run per layer (early exit when every |L| hits zero).
  std::vector<int> epochs_run;
};

/// Greedy front-to-back threshold training. Layer i sees spike trains from
/// the IF pass through already-trained layers; its thresholds get one batch
/// update per epoch. Trained thresholds are written into `net`.
CttResult ctt_train(NetworkSpec& net, std::span<const Tensor> calib, const CttConfig& cfg);

}  // namespace spikeforge
