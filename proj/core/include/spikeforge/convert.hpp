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
#include <vector>

#include "spikeforge/annq.hpp"
#include "spikeforge/network.hpp"

namespace spikeforge {

/// ANN weights rescaled for the spiking twin: w * T / T_q.
Tensor convert_weights(const Tensor& w, const VRConfig& cfg);

/// Bias corrected for the T_min offset of the layer's inputs:
/// b_c + (T_min / T_q) * sum of the original weights feeding out-channel c.
std::vector<double> convert_bias(std::span<const double> b, const Tensor& w, const VRConfig& cfg);

/// Uniform firing threshold T / T_q.
double layer_threshold(const VRConfig& cfg);

/// Constant added to the membrane once per time step: b_hat - T_min / T_q.
std::vector<double> step_constant(std::span<const double> b_hat, const VRConfig& cfg);

/// ANN -> SNN transform. Expects ANN mode with batch norm folded.
NetworkSpec convert_network(const NetworkSpec& ann);

}  // namespace spikeforge
